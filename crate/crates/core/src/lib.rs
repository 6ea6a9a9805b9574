//! Generalized pure-dephasing dynamics of open quantum systems.
//!
//! Builds microscopic system–environment models whose reduced dynamics
//! coincide while their global states differ, and measures how information
//! flows between system and environment: trace-distance revivals,
//! system–environment correlations and environmental distinguishability.

// `!(x <= tol)` is used throughout so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlate;
pub mod dephasing;
pub mod equivalence;
mod error;
pub mod infoflow;
pub mod matrixcore;
pub mod qstate;
pub mod workbench;

pub use error::{Error, Result};
