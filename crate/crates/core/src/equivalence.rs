//! Local indistinguishability of two dephasing models: identical reduced
//! dynamics for every initial system state.
//!
//! Three deciders are provided. The time-domain check compares the averaged
//! dephasing factors on a grid and works for any pair of models. The moment
//! check compares `tr[ρ_E G^k]` for the relative generator `G` of a qubit
//! system; Cayley–Hamilton bounds the needed powers by `d_E² − 1`. The
//! inner-product check is the closed form for qubit environments.

use std::f64::consts::PI;

use crate::dephasing::{DephasingModel, QubitModelParams, Stepping};
use crate::error::{Error, Result};
use crate::matrixcore::ComplexMatrix;
use crate::qstate::{spectral_decompose, DEFAULT_RANK_TOL};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_GRID_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    TimeDomain,
    Moments,
    InnerProduct,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::TimeDomain => "time-domain",
            Method::Moments => "moments",
            Method::InnerProduct => "inner-product",
        }
    }
}

/// Where the largest violation was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness {
    Coherence { n: usize, m: usize, t: f64 },
    Moment { k: usize },
    InnerProduct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    /// Set when the discrepancy lies in `(tol, 2·tol]`.
    pub borderline: bool,
    pub method: Method,
    pub max_discrepancy: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
}

impl EquivalenceVerdict {
    fn decide(
        method: Method,
        max_discrepancy: f64,
        tolerance: f64,
        witness: Option<Witness>,
    ) -> Self {
        EquivalenceVerdict {
            equivalent: max_discrepancy <= tolerance,
            borderline: max_discrepancy > tolerance && max_discrepancy <= 2.0 * tolerance,
            method,
            max_discrepancy,
            tolerance,
            witness,
        }
    }
}

/// `n_points` equally spaced times covering `[0, 4π/g]`.
pub fn default_grid(g: f64, n_points: usize) -> Vec<f64> {
    let t_max = 4.0 * PI / g.abs().max(f64::MIN_POSITIVE);
    linspace(0.0, t_max, n_points)
}

pub(crate) fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn same_system(a: &DephasingModel, b: &DephasingModel) -> Result<()> {
    if a.system_dim() != b.system_dim() {
        return Err(Error::DimensionMismatch(format!(
            "system dimensions {} and {}",
            a.system_dim(),
            b.system_dim()
        )));
    }
    Ok(())
}

/// Compares `Σ_α λ_α F_{α,n,m}(t)` for all `n > m` on every grid time.
pub fn time_domain_check(
    a: &DephasingModel,
    b: &DephasingModel,
    grid: &[f64],
    tol: f64,
    stepping: Stepping,
) -> Result<EquivalenceVerdict> {
    same_system(a, b)?;
    let d = a.system_dim();
    let mut worst = 0.0;
    let mut witness = None;
    let (ea, eb) = (
        a.evolve_many(grid, stepping)?,
        b.evolve_many(grid, stepping)?,
    );
    for ((&t, ea), eb) in grid.iter().zip(&ea).zip(&eb) {
        let (fa, fb) = (ea.dephasing_functions(), eb.dephasing_functions());
        for n in 0..d {
            for m in 0..n {
                let gap = (fa.averaged(n, m) - fb.averaged(n, m)).norm();
                if gap > worst || witness.is_none() {
                    worst = f64::max(worst, gap);
                    witness = Some(Witness::Coherence { n, m, t });
                }
            }
        }
    }
    Ok(EquivalenceVerdict::decide(
        Method::TimeDomain,
        worst,
        tol,
        witness,
    ))
}

/// `G = (B_1 − B_0)/2`, so that `V_0† V_1 = e^{−2iGt}`; equals `B` for the
/// symmetric coupling `B_1 = −B_0 = B`.
fn relative_generator(model: &DephasingModel) -> Result<ComplexMatrix> {
    if model.system_dim() != 2 {
        return Err(Error::UnsupportedModel(
            "moment form is implemented for qubit systems".into(),
        ));
    }
    let [b0, b1] = [&model.couplings()[0], &model.couplings()[1]];
    if !model.is_commuting() || b0.commutator(b1).frobenius_norm() > 1e-10 {
        return Err(Error::UnsupportedModel(
            "moment form needs commuting couplings and environment Hamiltonian".into(),
        ));
    }
    Ok((b1 - b0).scale_real(0.5))
}

/// `Σ_α λ_α <φ_α| G^k |φ_α>` for `k = 1..=k_max`.
pub fn moments(model: &DephasingModel, k_max: usize) -> Result<Vec<f64>> {
    let g = relative_generator(model)?;
    let spectrum = spectral_decompose(model.env_state(), DEFAULT_RANK_TOL)?;
    let mut power = ComplexMatrix::identity(g.rows());
    let mut out = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        power = &power * &g;
        let m: f64 = spectrum
            .iter()
            .map(|c| c.weight * power.sandwich(&c.vector, &c.vector).re)
            .sum();
        out.push(m);
    }
    Ok(out)
}

/// Moment comparison; `k_max = None` uses `d_E² − 1` of the larger environment.
pub fn moment_check(
    a: &DephasingModel,
    b: &DephasingModel,
    k_max: Option<usize>,
    tol: f64,
) -> Result<EquivalenceVerdict> {
    same_system(a, b)?;
    let d_env = a.env_dim().max(b.env_dim());
    let k_max = k_max.unwrap_or(d_env * d_env - 1).max(1);
    let ma = moments(a, k_max)?;
    let mb = moments(b, k_max)?;
    let (k, worst) = ma
        .iter()
        .zip(&mb)
        .enumerate()
        .map(|(i, (x, y))| (i + 1, (x - y).abs()))
        .fold(
            (1, 0.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    Ok(EquivalenceVerdict::decide(
        Method::Moments,
        worst,
        tol,
        Some(Witness::Moment { k }),
    ))
}

/// Two qubit-environment models give the same reduced dynamics iff
/// `α·η = ᾱ·η̄` (same coupling `g`).
pub fn qubit_condition(
    a: &QubitModelParams,
    b: &QubitModelParams,
    tol: f64,
) -> Result<EquivalenceVerdict> {
    a.validate()?;
    b.validate()?;
    if (a.g - b.g).abs() > tol {
        return Err(Error::CouplingMismatch(a.g, b.g));
    }
    let gap = (a.alpha.dot(&a.eta) - b.alpha.dot(&b.eta)).abs();
    Ok(EquivalenceVerdict::decide(
        Method::InnerProduct,
        gap,
        tol,
        Some(Witness::InnerProduct),
    ))
}

/// Pure-environment partner of `α = (0,0,c)`, `η = (0,0,1)`:
/// `ᾱ = (0,0,1)`, `η̄ = (√(1−c²−d²), d, c)`, with `g = 1`.
pub fn construct_partner(c: f64, d: f64) -> Result<QubitModelParams> {
    if !(c < 1.0) || !(c * c + d * d <= 1.0 + 1e-15) {
        return Err(Error::OutOfDomain(format!(
            "need c < 1 and c² + d² ≤ 1, got c = {c}, d = {d}"
        )));
    }
    let x = (1.0 - c * c - d * d).max(0.0).sqrt();
    Ok(QubitModelParams::new([0.0, 0.0, 1.0], [x, d, c], 1.0))
}

/// The mixed-environment model `α = (0,0,c)`, `η = (0,0,1)` and its partner,
/// both with coupling `g`.
pub fn reference_pair(c: f64, d: f64, g: f64) -> Result<(QubitModelParams, QubitModelParams)> {
    let mut partner = construct_partner(c, d)?;
    partner.g = g;
    Ok((
        QubitModelParams::new([0.0, 0.0, c], [0.0, 0.0, 1.0], g),
        partner,
    ))
}
