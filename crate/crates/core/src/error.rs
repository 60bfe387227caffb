use thiserror::Error;

/// Every failure the library can report.
///
/// Each variant carries a stable diagnostic code (see [`Error::code`]) that
/// the command-line front end prints alongside the message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("quadratic form is degenerate (determinant 0)")]
    DegenerateForm,
    #[error("matrix is not symmetric: entry ({row},{col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("linking matrix is not symmetric: entry ({row},{col}) differs from its transpose")]
    AsymmetricMatrix { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "linking matrix is degenerate: H1(M) has a free part; only manifolds with \
         pure-torsion first homology (rational homology spheres) are supported"
    )]
    FreeHomologyPart,
    #[error("self-linking oracle mismatch: band-sum route gave {band_sum}, quadratic form gave {form}")]
    OracleMismatch { band_sum: String, form: String },
    #[error("invalid level k = {0}: the level must be a positive integer")]
    InvalidLevel(i64),
    #[error("brute-force sum needs {required} terms, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

impl Error {
    /// Stable, machine-readable diagnostic code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "E_SINGULAR",
            Error::DegenerateForm => "E_DEGENERATE",
            Error::NotSymmetric { .. } => "E_NOT_SYMMETRIC",
            Error::NotSquare { .. } => "E_NOT_SQUARE",
            Error::Parse { .. } => "E_PARSE",
            Error::AsymmetricMatrix { .. } => "E_ASYMMETRIC",
            Error::DimensionMismatch(_) => "E_DIMENSION",
            Error::InvalidParameter(_) => "E_PARAMETER",
            Error::FreeHomologyPart => "E_FREE_HOMOLOGY",
            Error::OracleMismatch { .. } => "E_ORACLE",
            Error::InvalidLevel(_) => "E_LEVEL",
            Error::BudgetExceeded { .. } => "E_BUDGET",
            Error::PreconditionViolated(_) => "E_PRECONDITION",
        }
    }

    /// Whether the error comes from malformed input rather than a computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::AsymmetricMatrix { .. } | Error::DimensionMismatch(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
