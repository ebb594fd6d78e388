use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pole at {0}")]
    Pole(Complex64),
    #[error("accuracy bound {bound:.3e} exceeds limit while evaluating {what}")]
    Accuracy { what: &'static str, bound: f64 },
    #[error("indeterminate ratio: h(s) and h(1-s) both vanish near {0}")]
    Indeterminate(Complex64),
    #[error("sign condition violated: eta*R = {0:.6e} < 0")]
    SignCondition(f64),
    #[error("isolation failure near {at}: {detail}")]
    Isolation { at: Complex64, detail: String },
    #[error("zero or pole on the contour near {0}")]
    Boundary(Complex64),
    #[error("contour refinement did not converge: {0}")]
    NonConvergence(String),
    #[error("search depth exhausted with {} unresolved rectangle(s)", .0.len())]
    DepthExhausted(Vec<[f64; 4]>),
    #[error("phase tracking hit the minimum step near t = {0}")]
    PhaseTracking(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("bracket failure in gap ({0}, {1})")]
    Bracket(f64, f64),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("matrix is not positive definite (pivot {0:.3e})")]
    NotPositiveDefinite(f64),
    #[error("eigensolver did not converge after {0} sweeps")]
    EigNonConvergence(usize),
    #[error("truncated norm did not stabilize: {0}")]
    NormDivergence(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("missing artifact: {0}")]
    MissingArtifact(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
