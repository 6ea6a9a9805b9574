//! Generalized pure-dephasing models `H_I = Σ_n |n><n| ⊗ B_n`.
//!
//! Everything is computed in the interaction picture with respect to
//! `H_S + H_E`. `H_S` is never stored: it drops out of every quantity
//! reported here, and [`to_schrodinger_picture`] restores it for export.

use crate::error::{Error, Result};
use crate::matrixcore::{
    eig_hermitian, expm_hermitian, kron, kron_vec, pauli, time_ordered_propagator, ComplexMatrix,
    C64, ONE, ZERO,
};
use crate::qstate::{
    from_bloch, spectral_decompose, BlochVector, DensityMatrix, SpectralComponent, DEFAULT_RANK_TOL,
};

const TAU_HERM: f64 = 1e-10;
/// RK4 steps per unit time when `[H_E, B_n] ≠ 0`.
pub const STEPS_PER_UNIT_TIME: f64 = 2000.0;

/// How many integration steps to take for a propagator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Stepping {
    /// One exact exponential for commuting models, otherwise
    /// [`STEPS_PER_UNIT_TIME`] steps per unit time.
    #[default]
    Auto,
    Fixed(usize),
}

impl Stepping {
    fn resolve(self, t: f64) -> usize {
        match self {
            Stepping::Fixed(n) => n.max(1),
            Stepping::Auto => ((STEPS_PER_UNIT_TIME * t.abs()).ceil() as usize).max(1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DephasingModel {
    env_hamiltonian: ComplexMatrix,
    couplings: Vec<ComplexMatrix>,
    env_state: DensityMatrix,
    commuting: bool,
}

impl DephasingModel {
    /// `couplings[n]` is the environment operator `B_n` attached to the
    /// system pointer state `|n>`.
    pub fn new(
        env_hamiltonian: ComplexMatrix,
        couplings: Vec<ComplexMatrix>,
        env_state: DensityMatrix,
    ) -> Result<Self> {
        if couplings.len() < 2 {
            return Err(Error::DimensionMismatch(
                "a dephasing model needs at least two pointer states".into(),
            ));
        }
        let d_env = env_state.dim();
        if env_state.dims.len() != 1 {
            return Err(Error::DimensionMismatch(
                "environment state must be a single factor".into(),
            ));
        }
        env_state.validate()?;
        for op in couplings.iter().chain(std::iter::once(&env_hamiltonian)) {
            if !op.is_square() || op.rows() != d_env {
                return Err(Error::DimensionMismatch(format!(
                    "operator of size {}x{} on a {d_env}-dimensional environment",
                    op.rows(),
                    op.cols()
                )));
            }
            let defect = op.hermiticity_defect();
            if !(defect <= TAU_HERM) {
                return Err(Error::NotHermitian(defect));
            }
        }
        let commuting = couplings
            .iter()
            .all(|b| env_hamiltonian.commutator(b).frobenius_norm() <= TAU_HERM);
        Ok(DephasingModel {
            env_hamiltonian,
            couplings,
            env_state,
            commuting,
        })
    }

    pub fn system_dim(&self) -> usize {
        self.couplings.len()
    }

    pub fn env_dim(&self) -> usize {
        self.env_state.dim()
    }

    pub fn env_hamiltonian(&self) -> &ComplexMatrix {
        &self.env_hamiltonian
    }

    pub fn couplings(&self) -> &[ComplexMatrix] {
        &self.couplings
    }

    pub fn env_state(&self) -> &DensityMatrix {
        &self.env_state
    }

    /// True when every `B_n` commutes with `H_E`.
    pub fn is_commuting(&self) -> bool {
        self.commuting
    }

    /// `V_n(t) = T exp(−i ∫ B_n(s) ds)` for every pointer state.
    pub fn propagators(&self, t: f64, stepping: Stepping) -> Result<Vec<ComplexMatrix>> {
        if !(t >= 0.0) {
            return Err(Error::OutOfDomain(format!("negative time {t}")));
        }
        if self.commuting {
            return self
                .couplings
                .iter()
                .map(|b| expm_hermitian(b, t))
                .collect();
        }
        let frame = InteractionFrame::new(self)?;
        let steps = stepping.resolve(t);
        frame
            .tilde
            .iter()
            .map(|b| Ok(frame.to_env_basis(&frame.segment(b, 0.0, t, steps)?)))
            .collect()
    }

    /// Propagators at every time of an ascending grid. With automatic
    /// stepping a non-commuting model is integrated segment by segment, so
    /// the whole grid costs about as much as its last time.
    pub fn propagator_trajectory(
        &self,
        times: &[f64],
        stepping: Stepping,
    ) -> Result<Vec<Vec<ComplexMatrix>>> {
        let ascending = times.windows(2).all(|w| w[1] >= w[0]);
        if self.commuting || stepping != Stepping::Auto || !ascending {
            return times
                .iter()
                .map(|&t| self.propagators(t, stepping))
                .collect();
        }
        if let Some(&t) = times.first().filter(|t| !(**t >= 0.0)) {
            return Err(Error::OutOfDomain(format!("negative time {t}")));
        }
        let frame = InteractionFrame::new(self)?;
        let d = self.env_dim();
        let mut current = vec![ComplexMatrix::identity(d); self.couplings.len()];
        let mut last = 0.0;
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            if t > last {
                let steps = stepping.resolve(t - last);
                for (v, b) in current.iter_mut().zip(&frame.tilde) {
                    *v = &frame.segment(b, last, t - last, steps)? * &*v;
                }
                last = t;
            }
            out.push(current.iter().map(|v| frame.to_env_basis(v)).collect());
        }
        Ok(out)
    }

    /// [`evolve`](Self::evolve) on every time of a grid; see
    /// [`propagator_trajectory`](Self::propagator_trajectory).
    pub fn evolve_many(&self, times: &[f64], stepping: Stepping) -> Result<Vec<Evolution<'_>>> {
        let spectrum = spectral_decompose(&self.env_state, DEFAULT_RANK_TOL)?;
        Ok(self
            .propagator_trajectory(times, stepping)?
            .into_iter()
            .map(|propagators| Evolution {
                model: self,
                propagators,
                spectrum: spectrum.clone(),
            })
            .collect())
    }

    /// Propagators and the environment spectrum at time `t`, shared by the
    /// state builders below.
    pub fn evolve(&self, t: f64, stepping: Stepping) -> Result<Evolution<'_>> {
        Ok(Evolution {
            model: self,
            propagators: self.propagators(t, stepping)?,
            spectrum: spectral_decompose(&self.env_state, DEFAULT_RANK_TOL)?,
        })
    }

    pub fn dephasing_functions(&self, t: f64, stepping: Stepping) -> Result<DephasingFunctions> {
        Ok(self.evolve(t, stepping)?.dephasing_functions())
    }

    pub fn reduced_state(
        &self,
        rho_s0: &DensityMatrix,
        t: f64,
        stepping: Stepping,
    ) -> Result<DensityMatrix> {
        self.evolve(t, stepping)?.reduced_state(rho_s0)
    }

    pub fn global_state(
        &self,
        rho_s0: &DensityMatrix,
        t: f64,
        stepping: Stepping,
    ) -> Result<DensityMatrix> {
        self.evolve(t, stepping)?.global_state(rho_s0)
    }
}

/// Couplings in the eigenbasis of `H_E`, where the interaction-picture
/// generator `B(s)` is `B̃` with entries rotated by `e^{i(λ_j − λ_k)s}`.
struct InteractionFrame {
    basis: ComplexMatrix,
    energies: Vec<f64>,
    tilde: Vec<ComplexMatrix>,
}

impl InteractionFrame {
    fn new(model: &DephasingModel) -> Result<Self> {
        let env = eig_hermitian(&model.env_hamiltonian)?;
        let q = env.eigenvectors;
        let tilde = model
            .couplings
            .iter()
            .map(|b| (&(&q.adjoint() * b) * &q).hermitian_part())
            .collect();
        Ok(InteractionFrame {
            basis: q,
            energies: env.eigenvalues,
            tilde,
        })
    }

    /// Propagator from `start` to `start + dt`, in the energy basis.
    fn segment(
        &self,
        b: &ComplexMatrix,
        start: f64,
        dt: f64,
        steps: usize,
    ) -> Result<ComplexMatrix> {
        let lambda = &self.energies;
        let generator = |s: f64| {
            let mut m = b.clone();
            for j in 0..lambda.len() {
                for k in 0..lambda.len() {
                    m[(j, k)] *= C64::from_polar(1.0, (lambda[j] - lambda[k]) * (start + s));
                }
            }
            m
        };
        time_ordered_propagator(generator, dt, steps)
    }

    fn to_env_basis(&self, v: &ComplexMatrix) -> ComplexMatrix {
        &(&self.basis * v) * &self.basis.adjoint()
    }
}

/// A model advanced to a fixed time.
#[derive(Debug, Clone)]
pub struct Evolution<'a> {
    model: &'a DephasingModel,
    propagators: Vec<ComplexMatrix>,
    spectrum: Vec<SpectralComponent>,
}

impl Evolution<'_> {
    pub fn propagators(&self) -> &[ComplexMatrix] {
        &self.propagators
    }

    /// `F_{α,n,m} = <φ_α| V_m† V_n |φ_α>`.
    pub fn dephasing_functions(&self) -> DephasingFunctions {
        let d = self.propagators.len();
        let mut values = Vec::with_capacity(self.spectrum.len() * d * d);
        for comp in &self.spectrum {
            let images: Vec<Vec<C64>> = self
                .propagators
                .iter()
                .map(|v| v.mul_vec(&comp.vector))
                .collect();
            for n in 0..d {
                for m in 0..d {
                    let f = if n == m {
                        ONE
                    } else {
                        images[m]
                            .iter()
                            .zip(&images[n])
                            .map(|(a, b)| a.conj() * b)
                            .sum()
                    };
                    values.push(f);
                }
            }
        }
        DephasingFunctions {
            system_dim: d,
            weights: self.spectrum.iter().map(|c| c.weight).collect(),
            values,
        }
    }

    fn check_system(&self, rho_s0: &DensityMatrix) -> Result<()> {
        if rho_s0.dim() != self.model.system_dim() || rho_s0.dims.len() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "system state of dimension {} for a model with {} pointer states",
                rho_s0.dim(),
                self.model.system_dim()
            )));
        }
        Ok(())
    }

    /// `ρ_S(t)_{nm} = c_{nm} Σ_α λ_α F_{α,n,m}(t)`.
    pub fn reduced_state(&self, rho_s0: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_system(rho_s0)?;
        let factors = self.dephasing_functions();
        let d = factors.system_dim;
        let mut out = ComplexMatrix::zeros(d, d);
        for n in 0..d {
            for m in 0..d {
                out[(n, m)] = rho_s0.matrix[(n, m)] * factors.averaged(n, m);
            }
        }
        Ok(DensityMatrix::single(out))
    }

    /// `Σ_{n,m,α} c_{nm} λ_α V_n|n φ_α><m φ_α|V_m†`.
    pub fn global_state(&self, rho_s0: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_system(rho_s0)?;
        let d_s = self.model.system_dim();
        let d_e = self.model.env_dim();
        let mut out = ComplexMatrix::zeros(d_s * d_e, d_s * d_e);
        for comp in &self.spectrum {
            let images: Vec<Vec<C64>> = self
                .propagators
                .iter()
                .enumerate()
                .map(|(n, v)| {
                    let mut basis = vec![ZERO; d_s];
                    basis[n] = ONE;
                    kron_vec(&basis, &v.mul_vec(&comp.vector))
                })
                .collect();
            for n in 0..d_s {
                for m in 0..d_s {
                    let c = rho_s0.matrix[(n, m)] * comp.weight;
                    if c == ZERO {
                        continue;
                    }
                    let block = ComplexMatrix::outer(&images[n], &images[m]).scale(c);
                    out = &out + &block;
                }
            }
        }
        DensityMatrix::new(out, vec![d_s, d_e])
    }
}

/// `F_{α,n,m}(t)` at one time, with the spectral weights `λ_α`.
#[derive(Debug, Clone)]
pub struct DephasingFunctions {
    system_dim: usize,
    weights: Vec<f64>,
    values: Vec<C64>,
}

impl DephasingFunctions {
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, alpha: usize, n: usize, m: usize) -> C64 {
        let d = self.system_dim;
        self.values[alpha * d * d + n * d + m]
    }

    /// `Σ_α λ_α F_{α,n,m}`, the factor multiplying the coherence `|n><m|`.
    pub fn averaged(&self, n: usize, m: usize) -> C64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(a, &w)| self.get(a, n, m) * w)
            .sum()
    }
}

/// Bloch-vector description of a qubit system coupled to a qubit environment
/// through `B = g σ·η` with initial environment `(1 + α·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitModelParams {
    pub alpha: BlochVector,
    pub eta: BlochVector,
    pub g: f64,
}

impl QubitModelParams {
    pub fn new(alpha: [f64; 3], eta: [f64; 3], g: f64) -> Self {
        QubitModelParams {
            alpha: BlochVector(alpha),
            eta: BlochVector(eta),
            g,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.eta.norm();
        if !((n - 1.0).abs() <= 1e-12) {
            return Err(Error::BadUnitVector(n));
        }
        if !self.g.is_finite() {
            return Err(Error::OutOfDomain(format!("coupling g = {}", self.g)));
        }
        from_bloch(self.alpha).map(|_| ())
    }

    /// `B = g σ·η`.
    pub fn coupling(&self) -> ComplexMatrix {
        pauli::dot(self.eta.0).scale_real(self.g)
    }
}

/// `B_0 = −B`, `B_1 = +B`, `H_E = 0`, so that `H_I = σ_z ⊗ B`.
pub fn qubit_model(params: &QubitModelParams) -> Result<DephasingModel> {
    params.validate()?;
    let b = params.coupling();
    DephasingModel::new(
        ComplexMatrix::zeros(2, 2),
        vec![b.scale_real(-1.0), b],
        from_bloch(params.alpha)?,
    )
}

fn check_closed_form(c: f64, rho_s0: &DensityMatrix) -> Result<()> {
    if !(c.abs() < 1.0) {
        return Err(Error::OutOfDomain(format!(
            "|c| = {} must be below 1",
            c.abs()
        )));
    }
    if rho_s0.dim() != 2 {
        return Err(Error::DimensionMismatch(
            "closed forms need a qubit system".into(),
        ));
    }
    Ok(())
}

/// Places a 2×2 block given in the `{|1>, |0>}` order into `|0>`-first order.
fn from_one_zero_order(b11: C64, b10: C64, b01: C64, b00: C64) -> ComplexMatrix {
    ComplexMatrix::from_vec(2, 2, vec![b00, b01, b10, b11])
}

/// Global state of the model `α = (0,0,c)`, `η = (0,0,1)`:
///
/// `(1+c)/2 · ρ_S(−2gt) ⊗ |1><1| + (1−c)/2 · ρ_S(+2gt) ⊗ |0><0|`, where
/// `ρ_S(φ)` carries the coherence `c_{10} e^{iφ}`.
pub fn closed_form_zero_discord(
    c: f64,
    g: f64,
    rho_s0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    check_closed_form(c, rho_s0)?;
    let m = &rho_s0.matrix;
    let (c11, c10, c01, c00) = (m[(1, 1)], m[(1, 0)], m[(0, 1)], m[(0, 0)]);
    let rot = C64::from_polar(1.0, -2.0 * g * t);
    let sys_up = from_one_zero_order(c11, c10 * rot, c01 * rot.conj(), c00);
    let sys_down = from_one_zero_order(c11, c10 * rot.conj(), c01 * rot, c00);
    let proj_up = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
    let proj_down = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
    let out = &kron(&sys_up, &proj_up).scale_real(0.5 * (1.0 + c))
        + &kron(&sys_down, &proj_down).scale_real(0.5 * (1.0 - c));
    DensityMatrix::new(out, vec![2, 2])
}

/// `ℓ_t = cos(gt) + i c sin(gt)`, `κ_t = i √(1−c²) sin(gt)`.
pub fn entangled_amplitudes(c: f64, g: f64, t: f64) -> (C64, C64) {
    let (s, co) = (g * t).sin_cos();
    (C64::new(co, c * s), C64::new(0.0, (1.0 - c * c).sqrt() * s))
}

/// Global state of the model `α = (0,0,1)`, `η = (√(1−c²), 0, c)`, assembled
/// from the four system blocks `|n><m| ⊗ E_{nm}` written in `ℓ_t, κ_t`.
pub fn closed_form_entangled(
    c: f64,
    g: f64,
    rho_s0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    check_closed_form(c, rho_s0)?;
    let (l, k) = entangled_amplitudes(c, g, t);
    let m = &rho_s0.matrix;
    let (c11, c10, c00) = (m[(1, 1)], m[(1, 0)], m[(0, 0)]);
    let l2 = C64::new(l.norm_sqr(), 0.0);
    let k2 = C64::new(k.norm_sqr(), 0.0);
    let e11 = from_one_zero_order(l2, l.conj() * k, l * k.conj(), k2);
    let e00 = from_one_zero_order(l2, -l * k, -l.conj() * k.conj(), k2);
    let e10 = from_one_zero_order(l.conj() * l.conj(), -l.conj() * k, l.conj() * k.conj(), -k2);
    let ket_bra = |n: usize, m: usize| {
        let mut p = ComplexMatrix::zeros(2, 2);
        p[(n, m)] = ONE;
        p
    };
    let coherence = kron(&ket_bra(1, 0), &e10).scale(c10);
    let out = &(&kron(&ket_bra(1, 1), &e11).scale(c11) + &kron(&ket_bra(0, 0), &e00).scale(c00))
        + &(&coherence + &coherence.adjoint());
    DensityMatrix::new(out, vec![2, 2])
}

/// Moves an interaction-picture global state to the Schrödinger picture via
/// `e^{−iH_S t} ⊗ e^{−iH_E t}`.
pub fn to_schrodinger_picture(
    state: &DensityMatrix,
    h_system: &ComplexMatrix,
    h_env: &ComplexMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    let u = kron(&expm_hermitian(h_system, t)?, &expm_hermitian(h_env, t)?);
    if u.rows() != state.dim() {
        return Err(Error::DimensionMismatch(
            "free Hamiltonians do not match the state".into(),
        ));
    }
    DensityMatrix::new(&(&u * &state.matrix) * &u.adjoint(), state.dims.clone())
}

/// `ρ_S0 ⊗ ρ_E0` shortcut used by tests and callers.
pub fn initial_global_state(model: &DephasingModel, rho_s0: &DensityMatrix) -> DensityMatrix {
    rho_s0.tensor(model.env_state())
}
