use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("generator is not Hermitian at s = {time} (defect {defect:.3e})")]
    NonHermitianGenerator { time: f64, defect: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("Bloch vector norm {0} exceeds 1")]
    NormExceeded(f64),
    #[error("direction vector has norm {0}, expected 1")]
    BadUnitVector(f64),
    #[error("coupling constants differ: {0} vs {1}")]
    CouplingMismatch(f64, f64),
    #[error("parameters out of domain: {0}")]
    OutOfDomain(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),
    #[error("time interval [{s}, {t}] is not ordered")]
    BadInterval { s: f64, t: f64 },
    #[error("empty input: {0}")]
    EmptyInput(String),
}
