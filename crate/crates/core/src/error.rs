use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dims mismatch: expected {expected}, got {actual}")]
    DimsMismatch { expected: String, actual: String },

    #[error("subsystem dimensions must be at least 2, got {m}x{n}")]
    DimsTooSmall { m: usize, n: usize },

    #[error("index out of range: {what} = {value}, allowed 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("state is not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("matrix is not unitary: max deviation {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("missing phase entry for pair ({0}, {1})")]
    MissingPhase(usize, usize),

    #[error("grid too coarse: {0} points per axis, need at least 3")]
    GridTooCoarse(usize),

    #[error("invalid Bell state: {0}")]
    InvalidBellState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
