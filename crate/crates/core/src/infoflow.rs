//! Trace-distance information flow between an open system and its
//! environment.
//!
//! For two initial system states evolving under the same model, any increase
//! of their distinguishability `D_S` from time `s` to a later `t` is bounded
//! by the information stored outside the system at `s`:
//! `Δ_S(t, s) ≤ D(ρ_E¹, ρ_E²) + D(ρ_SE¹, ρ_S¹⊗ρ_E¹) + D(ρ_SE², ρ_S²⊗ρ_E²)`.

use std::f64::consts::PI;

use crate::correlate::total_correlations;
use crate::dephasing::{DephasingModel, Stepping};
use crate::error::{Error, Result};
use crate::qstate::{presets, trace_distance, DensityMatrix};

/// Grid density used by the BLP measure, points per revival period `π/g`.
pub const POINTS_PER_PERIOD: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    pub first: DensityMatrix,
    pub second: DensityMatrix,
    pub label: String,
}

impl StatePair {
    pub fn new(
        first: DensityMatrix,
        second: DensityMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        if first.dims != second.dims {
            return Err(Error::DimensionMismatch(format!(
                "pair states with dims {:?} and {:?}",
                first.dims, second.dims
            )));
        }
        first.validate()?;
        second.validate()?;
        Ok(StatePair {
            first,
            second,
            label: label.into(),
        })
    }

    /// `{|ψ₊>, |ψ₋^r>}`.
    pub fn psi_plus_minus_r(r: f64) -> Result<Self> {
        Self::new(
            presets::psi_plus(),
            presets::psi_minus_r(r)?,
            format!("psi_plus/psi_minus_r({r})"),
        )
    }

    pub fn swapped(&self) -> Self {
        StatePair {
            first: self.second.clone(),
            second: self.first.clone(),
            label: format!("{} (swapped)", self.label),
        }
    }
}

/// Antipodal pure qubit pairs `{n, −n}` on a polar/azimuthal grid of the
/// upper hemisphere (the pole counted once).
pub fn antipodal_pairs(n_theta: usize, n_phi: usize) -> Vec<StatePair> {
    let mut out = Vec::new();
    for i in 0..n_theta.max(1) {
        let theta = if n_theta <= 1 {
            0.5 * PI
        } else {
            0.5 * PI * i as f64 / (n_theta - 1) as f64
        };
        let azimuths = if i == 0 && n_theta > 1 {
            1
        } else {
            n_phi.max(1)
        };
        for j in 0..azimuths {
            let phi = 2.0 * PI * j as f64 / azimuths as f64;
            out.push(StatePair {
                first: presets::bloch_pure(theta, phi),
                second: presets::bloch_pure(PI - theta, phi + PI),
                label: format!("antipodal(theta={theta:.6}, phi={phi:.6})"),
            });
        }
    }
    out
}

/// `D(ρ_S¹(t), ρ_S²(t))`.
pub fn system_distance(
    model: &DephasingModel,
    pair: &StatePair,
    t: f64,
    stepping: Stepping,
) -> Result<f64> {
    let ev = model.evolve(t, stepping)?;
    trace_distance(
        &ev.reduced_state(&pair.first)?,
        &ev.reduced_state(&pair.second)?,
    )
}

/// `Δ_S(t, s) = D_S(t) − D_S(s)` for `0 ≤ s ≤ t`.
pub fn delta_s(
    model: &DephasingModel,
    pair: &StatePair,
    s: f64,
    t: f64,
    stepping: Stepping,
) -> Result<f64> {
    if !(0.0 <= s && s <= t) {
        return Err(Error::BadInterval { s, t });
    }
    Ok(system_distance(model, pair, t, stepping)? - system_distance(model, pair, s, stepping)?)
}

/// The three contributions to the backflow bound at time `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IseTerms {
    /// `D(ρ_E¹(s), ρ_E²(s))`.
    pub env: f64,
    /// `D(ρ_SE¹(s), ρ_S¹(s) ⊗ ρ_E¹(s))`.
    pub corr_first: f64,
    /// `D(ρ_SE²(s), ρ_S²(s) ⊗ ρ_E²(s))`.
    pub corr_second: f64,
    pub total: f64,
}

/// All quantities at one time that derive from the two global states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub system: f64,
    pub global: f64,
    pub terms: IseTerms,
}

pub fn snapshot(
    model: &DephasingModel,
    pair: &StatePair,
    s: f64,
    stepping: Stepping,
) -> Result<Snapshot> {
    let ev = model.evolve(s, stepping)?;
    let g1 = ev.global_state(&pair.first)?;
    let g2 = ev.global_state(&pair.second)?;
    let env = trace_distance(&g1.marginal(1)?, &g2.marginal(1)?)?;
    let corr_first = total_correlations(&g1)?;
    let corr_second = total_correlations(&g2)?;
    Ok(Snapshot {
        system: trace_distance(&g1.marginal(0)?, &g2.marginal(0)?)?,
        global: trace_distance(&g1, &g2)?,
        terms: IseTerms {
            env,
            corr_first,
            corr_second,
            total: env + corr_first + corr_second,
        },
    })
}

pub fn ise_terms(
    model: &DephasingModel,
    pair: &StatePair,
    s: f64,
    stepping: Stepping,
) -> Result<IseTerms> {
    if !(s >= 0.0) {
        return Err(Error::BadInterval { s, t: s });
    }
    Ok(snapshot(model, pair, s, stepping)?.terms)
}

/// Sum of positive increments of `values`.
pub fn positive_increments(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).max(0.0)).sum()
}

/// `[0, t_max]` sampled at [`POINTS_PER_PERIOD`] intervals per period `π/g`.
pub fn blp_grid(g: f64, t_max: f64) -> Vec<f64> {
    let periods = t_max * g.abs() / PI;
    let intervals = ((periods * POINTS_PER_PERIOD as f64).round() as usize).max(1);
    crate::equivalence::linspace(0.0, t_max, intervals + 1)
}

#[derive(Debug, Clone)]
pub struct BlpResult {
    pub measure: f64,
    pub best_pair: StatePair,
    /// Measure for each candidate, in input order.
    pub per_pair: Vec<f64>,
}

/// Discretized BLP measure: the largest total trace-distance revival over the
/// candidate pairs on `grid`.
pub fn blp_measure(
    model: &DephasingModel,
    candidates: &[StatePair],
    grid: &[f64],
    stepping: Stepping,
) -> Result<BlpResult> {
    if candidates.is_empty() {
        return Err(Error::EmptyInput("no candidate state pairs".into()));
    }
    if grid.len() < 2 {
        return Err(Error::EmptyInput(
            "time grid needs at least two points".into(),
        ));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::OutOfDomain(
            "time grid must be strictly ascending".into(),
        ));
    }
    let evolutions = model.evolve_many(grid, stepping)?;
    let mut per_pair = Vec::with_capacity(candidates.len());
    for pair in candidates {
        let distances = evolutions
            .iter()
            .map(|ev| {
                trace_distance(
                    &ev.reduced_state(&pair.first)?,
                    &ev.reduced_state(&pair.second)?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        per_pair.push(positive_increments(&distances));
    }
    let (best, &measure) = per_pair
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, cur| {
            if cur.1 > acc.1 {
                cur
            } else {
                acc
            }
        });
    Ok(BlpResult {
        measure,
        best_pair: candidates[best].clone(),
        per_pair,
    })
}

/// Time-indexed record for one model and one pair of initial states.
#[derive(Debug, Clone, Default)]
pub struct InfoFlowReport {
    pub times: Vec<f64>,
    pub d_s: Vec<f64>,
    /// `delta_s[i][j] = Δ_S(times[i + j], times[i])`, i.e. row `i` holds the
    /// variation from `s = times[i]` to every later grid time.
    pub delta_s: Vec<Vec<f64>>,
    pub env_term: Vec<f64>,
    pub corr_term_1: Vec<f64>,
    pub corr_term_2: Vec<f64>,
    pub i_se: Vec<f64>,
    pub d_global: Vec<f64>,
    /// Concurrence of both global states; only for qubit–qubit models.
    pub concurrence_1: Option<Vec<f64>>,
    pub concurrence_2: Option<Vec<f64>>,
}

impl InfoFlowReport {
    /// `Δ_S(t_j, s_i) ≤ I_SE(s_i) + slack` for every ordered grid pair.
    pub fn bound_holds(&self, slack: f64) -> bool {
        self.delta_s
            .iter()
            .zip(&self.i_se)
            .all(|(row, &bound)| row.iter().all(|&d| d <= bound + slack))
    }
}

pub fn info_flow_report(
    model: &DephasingModel,
    pair: &StatePair,
    times: &[f64],
    stepping: Stepping,
) -> Result<InfoFlowReport> {
    if times.is_empty() {
        return Err(Error::EmptyInput("empty time list".into()));
    }
    if times.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::OutOfDomain("times must be ascending".into()));
    }
    let qubits = model.system_dim() == 2 && model.env_dim() == 2;
    let mut report = InfoFlowReport {
        times: times.to_vec(),
        concurrence_1: qubits.then(Vec::new),
        concurrence_2: qubits.then(Vec::new),
        ..Default::default()
    };
    for ev in model.evolve_many(times, stepping)? {
        let g1 = ev.global_state(&pair.first)?;
        let g2 = ev.global_state(&pair.second)?;
        let env = trace_distance(&g1.marginal(1)?, &g2.marginal(1)?)?;
        let c1 = total_correlations(&g1)?;
        let c2 = total_correlations(&g2)?;
        report
            .d_s
            .push(trace_distance(&g1.marginal(0)?, &g2.marginal(0)?)?);
        report.d_global.push(trace_distance(&g1, &g2)?);
        report.env_term.push(env);
        report.corr_term_1.push(c1);
        report.corr_term_2.push(c2);
        report.i_se.push(env + c1 + c2);
        if let (Some(a), Some(b)) = (&mut report.concurrence_1, &mut report.concurrence_2) {
            a.push(crate::correlate::concurrence(&g1)?);
            b.push(crate::correlate::concurrence(&g2)?);
        }
    }
    report.delta_s = (0..times.len())
        .map(|i| report.d_s[i..].iter().map(|d| d - report.d_s[i]).collect())
        .collect();
    Ok(report)
}
