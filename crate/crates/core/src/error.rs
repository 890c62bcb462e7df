use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base q = {0} is too small (need q >= 2)")]
    BaseTooSmall(u32),
    #[error("digit set does not contain 0")]
    MissingZero,
    #[error("digit {digit} is out of range for base {q}")]
    DigitOutOfRange { digit: i64, q: u32 },
    #[error("digit {0} appears more than once")]
    DuplicateDigit(u32),
    #[error("q^k = {q}^{k} symbols exceeds the budget of {budget}")]
    BudgetExceeded { q: u32, k: u32, budget: u64 },
    #[error("eigenvalue selection is only implemented for degree 1 (got degree {0})")]
    UnsupportedDegree(usize),
    #[error("p_0(1) = 0: the characteristic polynomial drops degree")]
    DegenerateLeadingCoefficient,
    #[error("invalid Mahler equation: {0}")]
    InvalidEquation(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }

    /// Digit-set validation failures, as opposed to resource or numerical errors.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::BaseTooSmall(_)
                | Error::MissingZero
                | Error::DigitOutOfRange { .. }
                | Error::DuplicateDigit(_)
                | Error::InvalidParameter(_)
        )
    }
}
