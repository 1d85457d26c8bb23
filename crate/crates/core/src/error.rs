use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("square belongs to a different crossed module")]
    ForeignSquare,

    #[error("invalid square: boundary of {label} is not {bottom}·{top}⁻¹")]
    InvalidSquare {
        top: String,
        bottom: String,
        label: String,
    },

    #[error("vertical composition needs first.bottom == second.top, got {first_bottom} and {second_top}")]
    VerticalMismatch {
        first_bottom: String,
        second_top: String,
    },

    #[error("invalid crossed module:\n{0}")]
    InvalidCrossedModule(Report),

    #[error("invalid discretization:\n{0}")]
    InvalidDiscretization(Report),

    #[error("invalid connection:\n{0}")]
    InvalidObject(Report),

    #[error("edge word is empty")]
    EmptyWord,

    #[error("missing assignment for {0}")]
    MissingAssignment(String),

    #[error("not composable: {0}")]
    NotComposable(String),

    #[error("enumeration refused: bound {bound} exceeds budget {budget}")]
    BudgetExceeded { bound: u128, budget: u128 },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("invalid change: {0}")]
    InvalidChange(String),

    #[error("ill-formed data: {0}")]
    IllFormed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
