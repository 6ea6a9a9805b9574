//! Browser bindings. Every export returns a flat row-major `Float64Array`;
//! the row width is fixed per function and documented alongside it.

use dephaselab_core::workbench::{figure_config, run_experiment, Dataset, Figure, FigureOverrides};
use wasm_bindgen::prelude::*;

fn flatten(ds: Dataset) -> Vec<f64> {
    ds.rows.into_iter().flatten().collect()
}

fn compute(figure: Figure, overrides: FigureOverrides) -> Result<Vec<f64>, String> {
    let cfg = figure_config(figure, &overrides).map_err(|e| e.to_string())?;
    run_experiment(&cfg).map(flatten).map_err(|e| e.to_string())
}

pub fn concurrence_rows(
    c: f64,
    d: f64,
    g: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    compute(
        Figure::Fig3,
        FigureOverrides {
            c: Some(c),
            d: Some(d),
            g: Some(g),
            t_max: Some(t_max),
            points: Some(points),
            r: None,
        },
    )
}

pub fn bound_rows(r: f64, c: f64, d: f64, t: f64, points: usize) -> Result<Vec<f64>, String> {
    compute(
        Figure::Fig6,
        FigureOverrides {
            r: Some(r),
            c: Some(c),
            d: Some(d),
            t_max: Some(t),
            points: Some(points),
            g: None,
        },
    )
}

pub fn contribution_rows(
    r: f64,
    c: f64,
    d: f64,
    t: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    compute(
        Figure::Fig7,
        FigureOverrides {
            r: Some(r),
            c: Some(c),
            d: Some(d),
            t_max: Some(t),
            points: Some(points),
            g: None,
        },
    )
}

/// Rows `[t, C_a, C_b]`: concurrence of the zero-discord and entangled models.
#[wasm_bindgen]
pub fn concurrence(c: f64, d: f64, g: f64, t_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    concurrence_rows(c, d, g, t_max, points).map_err(|e| JsError::new(&e))
}

/// Rows `[s, Δ_S(t, s), I_SE_a(s), I_SE_b(s)]`.
#[wasm_bindgen]
pub fn bound(r: f64, c: f64, d: f64, t: f64, points: usize) -> Result<Vec<f64>, JsError> {
    bound_rows(r, c, d, t, points).map_err(|e| JsError::new(&e))
}

/// Rows `[s, Δ_a, Δ_b, env_a, corr1_a, corr2_a, env_b, corr1_b, corr2_b]`.
#[wasm_bindgen]
pub fn contributions(r: f64, c: f64, d: f64, t: f64, points: usize) -> Result<Vec<f64>, JsError> {
    contribution_rows(r, c, d, t, points).map_err(|e| JsError::new(&e))
}
