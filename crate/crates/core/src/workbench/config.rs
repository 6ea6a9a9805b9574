use std::f64::consts::PI;
use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dephasing::{qubit_model, DephasingModel, QubitModelParams};
use crate::equivalence::{self, reference_pair};
use crate::error::Result as CoreResult;
use crate::infoflow::{StatePair, POINTS_PER_PERIOD};
use crate::matrixcore::{ComplexMatrix, C64};
use crate::qstate::{from_bloch, presets, BlochVector, DensityMatrix};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid configuration: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("cannot read configuration: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Equivalence,
    Blp,
}

impl Figure {
    pub const ALL: [Figure; 7] = [
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig7,
        Figure::Equivalence,
        Figure::Blp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Equivalence => "equivalence",
            Figure::Blp => "blp",
        }
    }

    pub fn parse(name: &str) -> Option<Figure> {
        Figure::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Whether the time axis is `s ∈ [0, t_fixed]` rather than `t ∈ [0, t_max]`.
    fn uses_s_axis(self) -> bool {
        matches!(self, Figure::Fig5 | Figure::Fig6 | Figure::Fig7)
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Initial system state presets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StatePreset {
    PsiPlus,
    /// `r|0> − √(1−r²)|1>`, with `r` taken from the configuration.
    PsiMinusR,
    Bloch([f64; 3]),
}

impl StatePreset {
    pub fn build(&self, r: f64) -> CoreResult<DensityMatrix> {
        match self {
            StatePreset::PsiPlus => Ok(presets::psi_plus()),
            StatePreset::PsiMinusR => presets::psi_minus_r(r),
            StatePreset::Bloch(v) => from_bloch(BlochVector(*v)),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            StatePreset::PsiPlus => "psi_plus".into(),
            StatePreset::PsiMinusR => "psi_minus_r".into(),
            StatePreset::Bloch(v) => format!("bloch({},{},{})", v[0], v[1], v[2]),
        }
    }
}

/// Either a qubit model in Bloch form or a fully specified dephasing model.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Qubit(QubitModelParams),
    General {
        env_hamiltonian: ComplexMatrix,
        couplings: Vec<ComplexMatrix>,
        env_state: ComplexMatrix,
    },
}

impl ModelSpec {
    pub fn build(&self) -> CoreResult<DephasingModel> {
        match self {
            ModelSpec::Qubit(p) => qubit_model(p),
            ModelSpec::General {
                env_hamiltonian,
                couplings,
                env_state,
            } => DephasingModel::new(
                env_hamiltonian.clone(),
                couplings.clone(),
                DensityMatrix::single(env_state.clone()),
            ),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ModelSpec::Qubit(p) => format!(
                "qubit(alpha=({},{},{}), eta=({},{},{}), g={})",
                p.alpha.0[0], p.alpha.0[1], p.alpha.0[2], p.eta.0[0], p.eta.0[1], p.eta.0[2], p.g
            ),
            ModelSpec::General {
                couplings,
                env_state,
                ..
            } => format!("general(d_S={}, d_E={})", couplings.len(), env_state.rows()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub figure: Figure,
    pub c: f64,
    pub d: f64,
    pub g: f64,
    /// False when `g` was filled in from the default.
    pub g_given: bool,
    pub r: f64,
    pub model_a: ModelSpec,
    pub model_b: ModelSpec,
    pub state_1: StatePreset,
    pub state_2: StatePreset,
    /// Upper end of the `t` axis (fig3, fig4, equivalence, blp).
    pub t_max: f64,
    /// The later time `t` of `Δ_S(t, s)` (fig5–fig7); `s ∈ [0, t_fixed]`.
    pub t_fixed: f64,
    pub points: usize,
    pub r_points: usize,
    pub tolerance: f64,
    pub k_max: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Figure preset with all defaults applied.
    pub fn preset(figure: Figure) -> Self {
        RawConfig {
            figure: Some(figure.name().into()),
            ..Default::default()
        }
        .resolve()
        .expect("presets are valid")
    }

    pub fn pair(&self) -> CoreResult<StatePair> {
        StatePair::new(
            self.state_1.build(self.r)?,
            self.state_2.build(self.r)?,
            format!("{}/{}", self.state_1.describe(), self.state_2.describe()),
        )
    }

    pub fn time_axis(&self) -> Vec<f64> {
        let end = if self.figure.uses_s_axis() {
            self.t_fixed
        } else {
            self.t_max
        };
        equivalence::linspace(0.0, end, self.points)
    }

    /// `r_points` samples of `r` in `[0, 1]`.
    pub fn r_axis(&self) -> Vec<f64> {
        equivalence::linspace(0.0, 1.0, self.r_points)
    }

    /// Key/value echo of every parameter for output headers.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("figure".to_string(), self.figure.name().to_string()),
            ("c".into(), fmt_num(self.c)),
            ("d".into(), fmt_num(self.d)),
            ("g".into(), fmt_num(self.g)),
            (
                "g_source".into(),
                if self.g_given {
                    "user"
                } else {
                    "default g=1 (coupling not given)"
                }
                .into(),
            ),
            ("r".into(), fmt_num(self.r)),
            ("model_a".into(), self.model_a.describe()),
            ("model_b".into(), self.model_b.describe()),
            ("state_1".into(), self.state_1.describe()),
            ("state_2".into(), self.state_2.describe()),
            ("t_max".into(), fmt_num(self.t_max)),
            ("t_fixed".into(), fmt_num(self.t_fixed)),
            ("points".into(), self.points.to_string()),
            ("r_points".into(), self.r_points.to_string()),
            ("tolerance".into(), fmt_num(self.tolerance)),
        ];
        if let Some(k) = self.k_max {
            kv.push(("k_max".into(), k.to_string()));
        }
        kv
    }
}

fn fmt_num(x: f64) -> String {
    format!("{x:?}")
}

/// Complex entries are written as `[re, im]` pairs or plain reals.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Real(f64),
    Pair([f64; 2]),
}

type RawMatrix = Vec<Vec<RawComplex>>;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum RawModel {
    Qubit {
        alpha: [f64; 3],
        eta: [f64; 3],
        g: Option<f64>,
    },
    General {
        env_hamiltonian: Option<RawMatrix>,
        couplings: Vec<RawMatrix>,
        env_state: RawMatrix,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawState {
    Name(String),
    Bloch { bloch: [f64; 3] },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    figure: Option<String>,
    c: Option<f64>,
    d: Option<f64>,
    g: Option<f64>,
    r: Option<f64>,
    model_a: Option<RawModel>,
    model_b: Option<RawModel>,
    state_1: Option<RawState>,
    state_2: Option<RawState>,
    t_max: Option<f64>,
    t_fixed: Option<f64>,
    points: Option<usize>,
    r_points: Option<usize>,
    tolerance: Option<f64>,
    k_max: Option<usize>,
    out: Option<PathBuf>,
}

fn convert_matrix(
    raw: &RawMatrix,
    what: &str,
    problems: &mut Vec<String>,
) -> Option<ComplexMatrix> {
    let n = raw.len();
    if n == 0 || raw.iter().any(|row| row.len() != n) {
        problems.push(format!("{what}: expected a non-empty square matrix"));
        return None;
    }
    let rows: Vec<Vec<C64>> = raw
        .iter()
        .map(|row| {
            row.iter()
                .map(|z| match z {
                    RawComplex::Real(x) => C64::new(*x, 0.0),
                    RawComplex::Pair([re, im]) => C64::new(*re, *im),
                })
                .collect()
        })
        .collect();
    Some(ComplexMatrix::from_rows(&rows))
}

fn convert_model(
    raw: &RawModel,
    g: f64,
    what: &str,
    problems: &mut Vec<String>,
) -> Option<ModelSpec> {
    match raw {
        RawModel::Qubit {
            alpha,
            eta,
            g: own_g,
        } => {
            let p = QubitModelParams::new(*alpha, *eta, own_g.unwrap_or(g));
            if let Err(e) = p.validate() {
                problems.push(format!("{what}: {e}"));
                return None;
            }
            Some(ModelSpec::Qubit(p))
        }
        RawModel::General {
            env_hamiltonian,
            couplings,
            env_state,
        } => {
            let state = convert_matrix(env_state, &format!("{what}.env_state"), problems)?;
            let h = match env_hamiltonian {
                Some(h) => convert_matrix(h, &format!("{what}.env_hamiltonian"), problems)?,
                None => ComplexMatrix::zeros(state.rows(), state.rows()),
            };
            let bs = couplings
                .iter()
                .enumerate()
                .map(|(i, b)| convert_matrix(b, &format!("{what}.couplings[{i}]"), problems))
                .collect::<Option<Vec<_>>>()?;
            let spec = ModelSpec::General {
                env_hamiltonian: h,
                couplings: bs,
                env_state: state,
            };
            if let Err(e) = spec.build() {
                problems.push(format!("{what}: {e}"));
                return None;
            }
            Some(spec)
        }
    }
}

fn convert_state(raw: &RawState, what: &str, problems: &mut Vec<String>) -> Option<StatePreset> {
    match raw {
        RawState::Name(n) => match n.as_str() {
            "psi_plus" => Some(StatePreset::PsiPlus),
            "psi_minus_r" => Some(StatePreset::PsiMinusR),
            other => {
                problems.push(format!("{what}: unknown state preset '{other}'"));
                None
            }
        },
        RawState::Bloch { bloch } => {
            if let Err(e) = from_bloch(BlochVector(*bloch)) {
                problems.push(format!("{what}: {e}"));
                return None;
            }
            Some(StatePreset::Bloch(*bloch))
        }
    }
}

impl RawConfig {
    fn resolve(self) -> Result<ExperimentConfig, ConfigError> {
        let mut problems = Vec::new();
        let figure = match self.figure.as_deref() {
            None => {
                problems.push("missing field 'figure'".into());
                None
            }
            Some(name) => {
                let f = Figure::parse(name);
                if f.is_none() {
                    problems.push(format!(
                        "unknown figure '{name}' (expected one of fig3, fig4, fig5, fig6, fig7, equivalence, blp)"
                    ));
                }
                f
            }
        };
        let c = self.c.unwrap_or(0.0);
        let d = self.d.unwrap_or(0.0);
        let g = self.g.unwrap_or(1.0);
        let r = self.r.unwrap_or(0.4);
        if !(0.0..=1.0).contains(&r) {
            problems.push(format!("r = {r} outside [0, 1]"));
        }
        if !(g.is_finite() && g != 0.0) {
            problems.push(format!("g = {g} must be finite and non-zero"));
        }
        let defaults = if problems.is_empty() {
            match reference_pair(c, d, g) {
                Ok((a, b)) => Some((ModelSpec::Qubit(a), ModelSpec::Qubit(b))),
                Err(e) => {
                    problems.push(format!("c, d: {e}"));
                    None
                }
            }
        } else {
            None
        };
        let model_a = match &self.model_a {
            Some(m) => convert_model(m, g, "model_a", &mut problems),
            None => defaults.as_ref().map(|p| p.0.clone()),
        };
        let model_b = match &self.model_b {
            Some(m) => convert_model(m, g, "model_b", &mut problems),
            None => defaults.as_ref().map(|p| p.1.clone()),
        };
        let state_1 = match &self.state_1 {
            Some(s) => convert_state(s, "state_1", &mut problems),
            None => Some(StatePreset::PsiPlus),
        };
        let state_2 = match &self.state_2 {
            Some(s) => convert_state(s, "state_2", &mut problems),
            None => Some(StatePreset::PsiMinusR),
        };
        let period = PI / g.abs().max(f64::MIN_POSITIVE);
        let t_max = self.t_max.unwrap_or(match figure {
            Some(Figure::Equivalence) => 4.0 * period,
            _ => period,
        });
        let t_fixed = self.t_fixed.unwrap_or(0.5 * period);
        for (name, v) in [("t_max", t_max), ("t_fixed", t_fixed)] {
            if !(v.is_finite() && v > 0.0) {
                problems.push(format!("{name} = {v} must be positive"));
            }
        }
        let span = if figure.is_some_and(Figure::uses_s_axis) {
            t_fixed
        } else {
            t_max
        };
        let points = self.points.unwrap_or(match figure {
            Some(Figure::Equivalence) => equivalence::DEFAULT_GRID_POINTS,
            _ => ((span / period * POINTS_PER_PERIOD as f64).round() as usize).max(1) + 1,
        });
        if points < 2 {
            problems.push(format!("points = {points} must be at least 2"));
        }
        let r_points = self.r_points.unwrap_or(50);
        if r_points < 2 {
            problems.push(format!("r_points = {r_points} must be at least 2"));
        }
        let tolerance = self.tolerance.unwrap_or(equivalence::DEFAULT_TOLERANCE);
        if !(tolerance > 0.0) {
            problems.push(format!("tolerance = {tolerance} must be positive"));
        }
        if self.k_max == Some(0) {
            problems.push("k_max must be at least 1".into());
        }
        if !problems.is_empty() {
            return Err(ConfigError::Validation(problems));
        }
        Ok(ExperimentConfig {
            figure: figure.unwrap(),
            c,
            d,
            g,
            g_given: self.g.is_some(),
            r,
            model_a: model_a.unwrap(),
            model_b: model_b.unwrap(),
            state_1: state_1.unwrap(),
            state_2: state_2.unwrap(),
            t_max,
            t_fixed,
            points,
            r_points,
            tolerance,
            k_max: self.k_max,
            out: self.out,
        })
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    raw.resolve()
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    parse_config(&std::fs::read_to_string(path)?)
}

pub fn load_config_from_reader(mut reader: impl Read) -> Result<ExperimentConfig, ConfigError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_config(&text)
}

/// Command-line overrides for `dephaselab figure`.
#[derive(Debug, Clone, Default)]
pub struct FigureOverrides {
    pub r: Option<f64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub g: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
}

pub fn figure_config(
    figure: Figure,
    overrides: &FigureOverrides,
) -> Result<ExperimentConfig, ConfigError> {
    // For s-axis figures the CLI's --t-max sets the later time t.
    let (t_max, t_fixed) = if figure.uses_s_axis() {
        (None, overrides.t_max)
    } else {
        (overrides.t_max, None)
    };
    RawConfig {
        figure: Some(figure.name().into()),
        c: overrides.c,
        d: overrides.d,
        g: overrides.g,
        r: overrides.r,
        t_max,
        t_fixed,
        points: overrides.points,
        ..Default::default()
    }
    .resolve()
}
