//! Correlation structure of bipartite states.

use std::f64::consts::PI;

use crate::dephasing::{DephasingModel, Stepping};
use crate::error::{Error, Result};
use crate::matrixcore::{eig_hermitian, kron, partial_transpose, pauli, ComplexMatrix, C64};
use crate::qstate::{trace_distance, trace_distance_matrices, DensityMatrix, TAU_PSD};

/// Residual below which a state is declared zero-discord.
pub const TAU_DISCORD: f64 = 1e-7;
const TAU_COMMUTATOR: f64 = 1e-10;
/// Eigenvalues of a density matrix below this are rounding noise.
const SPECTRAL_FLOOR: f64 = 1e-14;

fn require_dims(rho: &DensityMatrix, allowed: &[&[usize]]) -> Result<()> {
    if allowed.iter().any(|d| rho.dims == *d) {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "factor dimensions {:?} not in {allowed:?}",
            rho.dims
        )))
    }
}

/// Wootters concurrence of a two-qubit state.
///
/// The `λ_i` are the singular values of `√ρ √ρ̃`, read off as the positive
/// eigenvalues of the Hermitian dilation `[[0, A], [A†, 0]]`; this keeps
/// them accurate to machine precision instead of square roots of rounding
/// noise.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_dims(rho, &[&[2, 2]])?;
    let m = rho.matrix.hermitian_part();
    let yy = kron(&pauli::y(), &pauli::y());
    let sqrt_rho = eig_hermitian(&m)?
        .apply(|l| C64::new(if l > SPECTRAL_FLOOR { l.sqrt() } else { 0.0 }, 0.0));
    let sqrt_flipped = &(&yy * &sqrt_rho.conj()) * &yy;
    let a = &sqrt_rho * &sqrt_flipped;
    let mut dilation = ComplexMatrix::zeros(8, 8);
    for r in 0..4 {
        for c in 0..4 {
            dilation[(r, c + 4)] = a[(r, c)];
            dilation[(c + 4, r)] = a[(r, c)].conj();
        }
    }
    let ev = eig_hermitian(&dilation)?.eigenvalues;
    let l: Vec<f64> = ev[4..].iter().rev().copied().collect();
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Smallest eigenvalue of the partial transpose on the second factor.
pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims.len() != 2 {
        return Err(Error::DimensionMismatch(
            "expected a bipartite state".into(),
        ));
    }
    let pt = partial_transpose(&rho.matrix.hermitian_part(), &rho.dims, 1)?;
    Ok(eig_hermitian(&pt.hermitian_part())?.eigenvalues[0])
}

/// Peres–Horodecki test, exact for qubit–qubit and qubit–qutrit states.
pub fn ppt_is_entangled(rho: &DensityMatrix) -> Result<bool> {
    require_dims(rho, &[&[2, 2], &[2, 3], &[3, 2]])?;
    Ok(min_partial_transpose_eigenvalue(rho)? < -TAU_PSD)
}

/// `D(ρ_SE, ρ_S ⊗ ρ_E)`.
pub fn total_correlations(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims.len() != 2 {
        return Err(Error::DimensionMismatch(
            "expected a bipartite state".into(),
        ));
    }
    trace_distance(rho, &rho.product_of_marginals()?)
}

/// Direction search settings for [`zero_discord_test`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordSearch {
    /// Coarse directions on the upper hemisphere.
    pub coarse_directions: usize,
    /// Coarse candidates that get locally refined.
    pub refine_candidates: usize,
    /// Final angular step of the pattern search.
    pub min_step: f64,
    pub threshold: f64,
}

impl Default for DiscordSearch {
    fn default() -> Self {
        DiscordSearch {
            coarse_directions: 1000,
            refine_candidates: 4,
            min_step: 1e-12,
            threshold: TAU_DISCORD,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ZeroDiscordResult {
    pub is_zero_discord: bool,
    /// Minimal `D(ρ, Σ_k Π_k ρ Π_k)` found.
    pub residual: f64,
    /// Bloch direction `n` of the optimal projectors `(1 ± n·σ)/2`.
    pub direction: [f64; 3],
    /// Columns are the optimal measurement basis on the measured qubit.
    pub best_basis: ComplexMatrix,
}

fn direction(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

struct Pincher<'a> {
    rho: &'a DensityMatrix,
    factor: usize,
    other_dim: usize,
}

impl Pincher<'_> {
    fn embed(&self, p: &ComplexMatrix) -> ComplexMatrix {
        let id = ComplexMatrix::identity(self.other_dim);
        if self.factor == 0 {
            kron(p, &id)
        } else {
            kron(&id, p)
        }
    }

    fn pinched(&self, n: [f64; 3]) -> ComplexMatrix {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let ns = pauli::dot(n).scale_real(0.5);
        let plus = self.embed(&(&half + &ns));
        let minus = self.embed(&(&half - &ns));
        let m = &self.rho.matrix;
        &(&(&plus * m) * &plus) + &(&(&minus * m) * &minus)
    }

    fn residual(&self, theta: f64, phi: f64) -> Result<f64> {
        let p = self.pinched(direction(theta, phi));
        trace_distance_matrices(&self.rho.matrix, &p)
    }
}

/// Searches projective measurements on `measured_factor` (a qubit) for one
/// that leaves `rho` invariant.
pub fn zero_discord_test(
    rho: &DensityMatrix,
    measured_factor: usize,
    search: &DiscordSearch,
) -> Result<ZeroDiscordResult> {
    if rho.dims.len() != 2 || measured_factor > 1 {
        return Err(Error::UnsupportedDimension(format!(
            "need a bipartite state and factor 0 or 1, got dims {:?}, factor {measured_factor}",
            rho.dims
        )));
    }
    if rho.dims[measured_factor] != 2 {
        return Err(Error::UnsupportedDimension(format!(
            "measured factor has dimension {}, expected a qubit",
            rho.dims[measured_factor]
        )));
    }
    let pincher = Pincher {
        rho,
        factor: measured_factor,
        other_dim: rho.dims[1 - measured_factor],
    };

    // Fibonacci lattice on the upper hemisphere plus the coordinate axes.
    let n = search.coarse_directions.max(1);
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut candidates: Vec<(f64, f64, f64)> = Vec::with_capacity(n + 3);
    let mut push = |theta: f64, phi: f64| -> Result<()> {
        candidates.push((pincher.residual(theta, phi)?, theta, phi));
        Ok(())
    };
    push(0.0, 0.0)?;
    push(0.5 * PI, 0.0)?;
    push(0.5 * PI, 0.5 * PI)?;
    for i in 0..n {
        let z = 1.0 - (i as f64 + 0.5) / n as f64;
        push(z.acos(), (golden * i as f64).rem_euclid(2.0 * PI))?;
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));

    let coarse_step = (2.0 * PI / n as f64).sqrt();
    let mut best = candidates[0];
    for &(res, theta, phi) in candidates.iter().take(search.refine_candidates.max(1)) {
        let (mut cur, mut th, mut ph) = (res, theta, phi);
        let mut step = coarse_step;
        while step > search.min_step && cur > 0.0 {
            let mut improved = false;
            for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let r = pincher.residual(th + dt, ph + dp)?;
                if r < cur {
                    (cur, th, ph) = (r, th + dt, ph + dp);
                    improved = true;
                    break;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if cur < best.0 {
            best = (cur, th, ph);
        }
    }

    let dir = direction(best.1, best.2);
    let basis = eig_hermitian(&pauli::dot(dir))?.eigenvectors;
    Ok(ZeroDiscordResult {
        is_zero_discord: best.0 <= search.threshold,
        residual: best.0,
        direction: dir,
        best_basis: basis,
    })
}

/// Whether the pure-dephasing evolution of a qubit entangles it with the
/// environment at time `t`: true iff `ρ_E(0)` does not commute with the
/// relative propagator `V_0†(t) V_1(t)`.
pub fn entanglement_generation_criterion(model: &DephasingModel, t: f64) -> Result<bool> {
    if model.system_dim() != 2 || !model.is_commuting() {
        return Err(Error::UnsupportedModel(
            "criterion needs a qubit system and [H_E, B_n] = 0".into(),
        ));
    }
    let v = model.propagators(t, Stepping::Auto)?;
    let relative = &v[0].adjoint() * &v[1];
    let comm = model.env_state().matrix.commutator(&relative);
    Ok(comm.frobenius_norm() > TAU_COMMUTATOR)
}
