use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("basis rows are linearly dependent (det gram = {det:e})")]
    RankDeficient { det: f64 },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("gram matrix is ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("point is not in the row span of the basis (residual {0:e})")]
    NotInSpan(f64),
    #[error("enumeration exceeded the limit of {0} points")]
    TooManyPoints(usize),
    #[error("lattice dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("no standard glue vectors for lattice `{0}`")]
    UnsupportedLattice(String),
    #[error("glue vectors belong to different base lattices")]
    BaseMismatch,
    #[error("glue vector does not snap to a coset of the base lattice (error {0:e})")]
    SnapFailed(f64),
    #[error("glue set is not closed under addition modulo the base lattice")]
    NotAGroup,
    #[error("too many glue words ({count} > limit {limit})")]
    TooManyWords { count: usize, limit: usize },
    #[error("invalid symmetry: {0}")]
    InvalidSymmetry(String),
    #[error("unknown lattice `{0}`")]
    UnknownLattice(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable code, printed by the command-line tool.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::RankDeficient { .. } => "RANK_DEFICIENT",
            Error::NonFinite { .. } => "NON_FINITE",
            Error::IllConditioned(_) => "ILL_CONDITIONED",
            Error::NotInSpan(_) => "NOT_IN_SPAN",
            Error::TooManyPoints(_) => "TOO_MANY_POINTS",
            Error::DimensionTooLarge { .. } => "DIMENSION_TOO_LARGE",
            Error::UnsupportedLattice(_) => "UNSUPPORTED_LATTICE",
            Error::BaseMismatch => "BASE_MISMATCH",
            Error::SnapFailed(_) => "SNAP_FAILED",
            Error::NotAGroup => "NOT_A_GROUP",
            Error::TooManyWords { .. } => "TOO_MANY_WORDS",
            Error::InvalidSymmetry(_) => "INVALID_SYMMETRY",
            Error::UnknownLattice(_) => "UNKNOWN_LATTICE",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::Io(_) => "IO_ERROR",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
