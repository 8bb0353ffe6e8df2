use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("dyadic value {num}/2^{level} lies outside [0, 1]")]
    OutOfUnitInterval { num: String, level: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{point} is not a point of the grid D_{level}")]
    OffGrid { point: String, level: u32 },

    #[error("expected {expected} leaves, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("enumeration needs {required} evaluations, over the budget of {budget}; try a smaller depth or cardinality")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("grid function is not certified: {0}")]
    NotCertified(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn invalid(msg: impl Into<String>) -> LabError {
    LabError::InvalidParameter(msg.into())
}
