use crate::correlate::concurrence;
use crate::dephasing::{DephasingModel, Stepping};
use crate::equivalence::{
    moment_check, qubit_condition, time_domain_check, EquivalenceVerdict, Witness,
};
use crate::infoflow::{
    antipodal_pairs, blp_measure, snapshot, system_distance, BlpResult, StatePair,
};
use crate::qstate::trace_distance;

use super::config::{ConfigError, ExperimentConfig, Figure, ModelSpec};
use super::csv::Dataset;

/// Slack used when checking the backflow bound and contractivity on output.
pub const BOUND_SLACK: f64 = 1e-9;
/// Grid times with concurrence at or below this are reported as separable.
const ZERO_CONCURRENCE: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum WorkbenchError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] crate::error::Error),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl WorkbenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            WorkbenchError::Config(_) => 2,
            WorkbenchError::Numerical(_) => 3,
            WorkbenchError::Invariant(_) => 4,
            WorkbenchError::Io(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, WorkbenchError>;

fn header(config: &ExperimentConfig) -> Dataset {
    let mut ds = Dataset::default();
    ds.push_meta("tool", "dephaselab");
    ds.push_meta("version", env!("CARGO_PKG_VERSION"));
    for (k, v) in config.echo() {
        ds.push_meta(k, v);
    }
    ds.push_meta("picture", "interaction picture w.r.t. H_S + H_E");
    ds.push_meta(
        "assumption",
        "both models share the same free system Hamiltonian H_S",
    );
    ds
}

fn with_columns(mut ds: Dataset, columns: &[&str]) -> Dataset {
    ds.columns = columns.iter().map(|c| c.to_string()).collect();
    ds
}

fn models(config: &ExperimentConfig) -> Result<(DephasingModel, DephasingModel)> {
    Ok((config.model_a.build()?, config.model_b.build()?))
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(WorkbenchError::Invariant(what()))
    }
}

/// Evaluates the dataset behind `config.figure`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Dataset> {
    match config.figure {
        Figure::Fig3 => concurrence_series(config),
        Figure::Fig4 => distinguishability_series(config),
        Figure::Fig5 => bound_surface(config),
        Figure::Fig6 => bound_section(config),
        Figure::Fig7 => contributions(config),
        Figure::Equivalence => Ok(equivalence_report(config)?.dataset),
        Figure::Blp => Ok(blp_report(config)?.dataset),
    }
}

fn concurrence_series(config: &ExperimentConfig) -> Result<Dataset> {
    let (a, b) = models(config)?;
    let rho = config.state_1.build(config.r)?;
    let mut ds = with_columns(
        header(config),
        &["t", "concurrence_model_a", "concurrence_model_b"],
    );
    for t in config.time_axis() {
        let ca = concurrence(&a.global_state(&rho, t, Stepping::Auto)?)?;
        let cb = concurrence(&b.global_state(&rho, t, Stepping::Auto)?)?;
        ds.push_row(vec![t, ca, cb]);
    }
    for (col, key) in [
        (1, "zero_concurrence_times_model_a"),
        (2, "zero_concurrence_times_model_b"),
    ] {
        let zeros: Vec<f64> = ds
            .rows
            .iter()
            .filter(|row| row[col] <= ZERO_CONCURRENCE)
            .map(|row| row[0])
            .collect();
        let value = if zeros.len() == ds.rows.len() {
            "all".to_string()
        } else if zeros.is_empty() {
            "none".to_string()
        } else {
            zeros
                .iter()
                .map(|t| format!("{t:?}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        ds.push_meta(key, value);
    }
    Ok(ds)
}

fn distinguishability_series(config: &ExperimentConfig) -> Result<Dataset> {
    let (a, b) = models(config)?;
    let rho = config.state_1.build(config.r)?;
    let mut ds = with_columns(header(config), &["t", "D_global", "D_env"]);
    for t in config.time_axis() {
        let ga = a.global_state(&rho, t, Stepping::Auto)?;
        let gb = b.global_state(&rho, t, Stepping::Auto)?;
        let d_global = trace_distance(&ga, &gb)?;
        let d_env = trace_distance(&ga.marginal(1)?, &gb.marginal(1)?)?;
        check(d_env <= d_global + BOUND_SLACK, || {
            format!("contractivity: D_env {d_env} > D_global {d_global} at t = {t}")
        })?;
        ds.push_row(vec![t, d_global, d_env]);
    }
    Ok(ds)
}

struct BoundRow {
    delta: f64,
    delta_b: f64,
    a: crate::infoflow::IseTerms,
    b: crate::infoflow::IseTerms,
}

/// `Δ_S(t_fixed, s)` and both models' bound terms at `s`, with each model's
/// backflow bound checked on the fly. `shared` demands that both models give
/// the same `Δ_S`, which figures with a single `delta_S` column rely on.
fn bound_row(
    config: &ExperimentConfig,
    models: &(DephasingModel, DephasingModel),
    pair: &StatePair,
    d_final: (f64, f64),
    s: f64,
    shared: bool,
) -> Result<BoundRow> {
    let sa = snapshot(&models.0, pair, s, Stepping::Auto)?;
    let sb = snapshot(&models.1, pair, s, Stepping::Auto)?;
    let delta = d_final.0 - sa.system;
    let delta_b = d_final.1 - sb.system;
    for (name, d, bound) in [
        ("model_a", delta, sa.terms.total),
        ("model_b", delta_b, sb.terms.total),
    ] {
        check(d <= bound + BOUND_SLACK, || {
            format!(
                "backflow bound for {name}: delta_S {d} > I_SE {bound} at s = {s} (t = {}, pair {})",
                config.t_fixed, pair.label
            )
        })?;
    }
    if shared {
        check((delta - delta_b).abs() <= BOUND_SLACK, || {
            format!("models do not share reduced dynamics: delta_S {delta} vs {delta_b} at s = {s}")
        })?;
    }
    Ok(BoundRow {
        delta,
        delta_b,
        a: sa.terms,
        b: sb.terms,
    })
}

fn final_distances(
    config: &ExperimentConfig,
    models: &(DephasingModel, DephasingModel),
    pair: &StatePair,
) -> Result<(f64, f64)> {
    Ok((
        system_distance(&models.0, pair, config.t_fixed, Stepping::Auto)?,
        system_distance(&models.1, pair, config.t_fixed, Stepping::Auto)?,
    ))
}

fn bound_surface(config: &ExperimentConfig) -> Result<Dataset> {
    let pair_models = models(config)?;
    let mut ds = with_columns(
        header(config),
        &["r", "s", "delta_S", "I_SE_model_a", "I_SE_model_b"],
    );
    for r in config.r_axis() {
        let mut cfg = config.clone();
        cfg.r = r;
        let pair = cfg.pair()?;
        let d_final = final_distances(config, &pair_models, &pair)?;
        for s in config.time_axis() {
            let row = bound_row(config, &pair_models, &pair, d_final, s, true)?;
            ds.push_row(vec![r, s, row.delta, row.a.total, row.b.total]);
        }
    }
    Ok(ds)
}

fn bound_section(config: &ExperimentConfig) -> Result<Dataset> {
    let pair_models = models(config)?;
    let pair = config.pair()?;
    let d_final = final_distances(config, &pair_models, &pair)?;
    let mut ds = with_columns(
        header(config),
        &["s", "delta_S", "I_SE_model_a", "I_SE_model_b"],
    );
    for s in config.time_axis() {
        let row = bound_row(config, &pair_models, &pair, d_final, s, true)?;
        ds.push_row(vec![s, row.delta, row.a.total, row.b.total]);
    }
    Ok(ds)
}

fn contributions(config: &ExperimentConfig) -> Result<Dataset> {
    let pair_models = models(config)?;
    let pair = config.pair()?;
    let d_final = final_distances(config, &pair_models, &pair)?;
    let mut ds = with_columns(
        header(config),
        &[
            "s",
            "delta_S_model_a",
            "delta_S_model_b",
            "env_term_model_a",
            "corr_term_1_model_a",
            "corr_term_2_model_a",
            "env_term_model_b",
            "corr_term_1_model_b",
            "corr_term_2_model_b",
        ],
    );
    for s in config.time_axis() {
        let row = bound_row(config, &pair_models, &pair, d_final, s, false)?;
        ds.push_row(vec![
            s,
            row.delta,
            row.delta_b,
            row.a.env,
            row.a.corr_first,
            row.a.corr_second,
            row.b.env,
            row.b.corr_first,
            row.b.corr_second,
        ]);
    }
    Ok(ds)
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub time_domain: EquivalenceVerdict,
    pub moments: Option<EquivalenceVerdict>,
    pub inner_product: Option<EquivalenceVerdict>,
    pub dataset: Dataset,
}

impl EquivalenceReport {
    pub fn verdicts(&self) -> impl Iterator<Item = &EquivalenceVerdict> {
        std::iter::once(&self.time_domain)
            .chain(self.moments.as_ref())
            .chain(self.inner_product.as_ref())
    }
}

fn describe_verdict(v: &EquivalenceVerdict) -> String {
    let witness = match v.witness {
        Some(Witness::Coherence { n, m, t }) => format!("coherence ({n},{m}) at t={t:?}"),
        Some(Witness::Moment { k }) => format!("moment k={k}"),
        Some(Witness::InnerProduct) => "inner product".into(),
        None => "none".into(),
    };
    format!(
        "equivalent={} borderline={} max_discrepancy={:e} tolerance={:e} witness={}",
        v.equivalent, v.borderline, v.max_discrepancy, v.tolerance, witness
    )
}

/// All applicable equivalence deciders plus the averaged dephasing factor of
/// both models on the time axis.
pub fn equivalence_report(config: &ExperimentConfig) -> Result<EquivalenceReport> {
    let (a, b) = models(config)?;
    let grid = config.time_axis();
    let time_domain = time_domain_check(&a, &b, &grid, config.tolerance, Stepping::Auto)?;
    let moments = moment_check(&a, &b, config.k_max, config.tolerance).ok();
    let inner_product = match (&config.model_a, &config.model_b) {
        (ModelSpec::Qubit(pa), ModelSpec::Qubit(pb)) => {
            qubit_condition(pa, pb, config.tolerance).ok()
        }
        _ => None,
    };
    let mut ds = with_columns(
        header(config),
        &[
            "t",
            "factor_re_model_a",
            "factor_im_model_a",
            "factor_re_model_b",
            "factor_im_model_b",
        ],
    );
    ds.push_meta("time_domain", describe_verdict(&time_domain));
    if let Some(v) = &moments {
        ds.push_meta("moments", describe_verdict(v));
    }
    if let Some(v) = &inner_product {
        ds.push_meta("inner_product", describe_verdict(v));
    }
    let (n, m) = (1, 0);
    for &t in &grid {
        let fa = a.dephasing_functions(t, Stepping::Auto)?.averaged(n, m);
        let fb = b.dephasing_functions(t, Stepping::Auto)?.averaged(n, m);
        ds.push_row(vec![t, fa.re, fa.im, fb.re, fb.im]);
    }
    Ok(EquivalenceReport {
        time_domain,
        moments,
        inner_product,
        dataset: ds,
    })
}

#[derive(Debug, Clone)]
pub struct BlpReport {
    pub model_a: BlpResult,
    pub model_b: BlpResult,
    pub dataset: Dataset,
}

/// BLP measure of both models over the configured pair and a grid of
/// antipodal pure pairs.
pub fn blp_report(config: &ExperimentConfig) -> Result<BlpReport> {
    let (a, b) = models(config)?;
    let grid = config.time_axis();
    let mut candidates = vec![config.pair()?];
    if a.system_dim() == 2 {
        candidates.extend(antipodal_pairs(7, 12));
    }
    let ra = blp_measure(&a, &candidates, &grid, Stepping::Auto)?;
    let rb = blp_measure(&b, &candidates, &grid, Stepping::Auto)?;
    let mut ds = with_columns(header(config), &["t", "D_S_model_a", "D_S_model_b"]);
    ds.push_meta("blp_model_a", format!("{:?}", ra.measure));
    ds.push_meta("blp_model_b", format!("{:?}", rb.measure));
    ds.push_meta("best_pair", ra.best_pair.label.clone());
    for &t in &grid {
        ds.push_row(vec![
            t,
            system_distance(&a, &ra.best_pair, t, Stepping::Auto)?,
            system_distance(&b, &ra.best_pair, t, Stepping::Auto)?,
        ]);
    }
    Ok(BlpReport {
        model_a: ra,
        model_b: rb,
        dataset: ds,
    })
}
