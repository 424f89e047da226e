use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional order {0} is outside (0, 2]")]
    OrderOutOfRange(f64),

    #[error("fractional order 1 is not supported: cos(pi*alpha/2) vanishes and the operator scale is singular")]
    SingularOrder,

    #[error("grid needs at least 3 intervals, got {0}")]
    GridTooCoarse(usize),

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty vector")]
    EmptyVector,

    #[error("gamma function evaluated outside its domain at z = {0}")]
    GammaDomain(f64),

    #[error("invalid dictionary: {0}")]
    InvalidDictionary(String),

    #[error("empty candidate set")]
    EmptyDictionary,

    #[error("degenerate dictionary: every selected neuron vanishes on the grid")]
    DegenerateDictionary,

    #[error("operator is numerically singular")]
    SingularOperator,

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for failures of a numerical solve, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::SingularOperator | Error::DegenerateDictionary)
    }
}
