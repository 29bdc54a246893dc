use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{context}: dimension mismatch (expected {expected}, found {found})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("fixed-space decomposition failed: {detail} ({deviation:.3e})")]
    Decomposition {
        detail: &'static str,
        deviation: f64,
    },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a group action: {0}")]
    NotAGroupAction(String),
    #[error("axiom `{axiom}` violated (deviation {deviation:.3e})")]
    AxiomViolation { axiom: String, deviation: f64 },
    #[error("no invariant state: {0}")]
    NoInvariantState(String),
    #[error("element is not self-adjoint (deviation {deviation:.3e})")]
    NotSelfAdjoint { deviation: f64 },
    #[error("functional is not positive")]
    NotPositive,
    #[error("map is not positive: {0}")]
    MapNotPositive(String),
    #[error("the two convolution formulas disagree (deviation {deviation:.3e})")]
    ConvolutionMismatch { deviation: f64 },
    #[error("not a probability vector: {0}")]
    NotProbability(String),
    #[error("invalid transition kernel: `{axiom}` violated (deviation {deviation:.3e})")]
    InvalidKernel { axiom: &'static str, deviation: f64 },
}
