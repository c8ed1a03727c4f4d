use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("non-admissible exponent data: {0}")]
    NonAdmissible(String),

    #[error("resource limit exceeded: {what} needs {needed} > cap {cap}")]
    ResourceLimit {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("singular configuration: {0}")]
    SingularConfiguration(String),

    #[error("not a classical real instance: {0}")]
    NotClassicalCase(String),

    #[error("Newton iteration failed to converge in cell {cell:?}")]
    ConvergenceFailure { cell: Vec<usize> },

    #[error("point is not critical: residual {residual:e} > tol {tol:e}")]
    NotCritical {
        residual: f64,
        tol: f64,
        residuals: Vec<[f64; 2]>,
    },

    #[error("off-diagonal clause ({clause}) violated: {detail}")]
    InvariantViolation {
        clause: &'static str,
        detail: String,
    },

    #[error("log-derivative of the zero function")]
    ZeroInput,

    #[error("irregular singularity at {point}")]
    IrregularSingularity { point: String },

    #[error("polynomial is not a Lame function: remainder {remainder:e}")]
    NotASolution { remainder: f64 },

    #[error("flag identity violated at level {level}: residual {residual:e}")]
    FlagViolation { level: usize, residual: f64 },

    #[error("integration path passes too close to a singular point ({0})")]
    PathThroughSingularity(String),

    #[error("Wronskian identity {index} violated: residual {residual:e}")]
    IdentityViolation { index: usize, residual: f64 },

    #[error("exponent mismatch at {point}: expected {expected}, got {got}")]
    ExponentMismatch {
        point: String,
        expected: String,
        got: String,
    },

    #[error("found {found} orbits on separating data, bound d(n-1, l) = {bound}")]
    BoundViolation { found: usize, bound: String },
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::IndexOutOfRange { .. }
            | Error::NonAdmissible(_)
            | Error::NotClassicalCase(_) => 2,
            Error::ResourceLimit { .. } => 4,
            _ => 3,
        }
    }
}
