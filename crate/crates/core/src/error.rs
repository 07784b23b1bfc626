use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Polynomial division left a nonzero remainder.
    #[error("not exactly divisible: remainder has degree {remainder_degree}")]
    Divisibility { remainder_degree: usize },

    /// A fixed-length coefficient buffer cannot hold the result.
    #[error("buffer of length {len} cannot hold a product of degree {needed}")]
    Capacity { len: usize, needed: usize },

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("exponent overflow at byte {offset}")]
    ExponentOverflow { offset: usize },

    #[error("memory budget exceeded: need {required} bytes, budget is {budget} bytes")]
    Resource { required: u64, budget: u64 },

    #[error("not a Kronecker polynomial: {0}")]
    NotKronecker(String),

    /// An identity check produced a counterexample.
    #[error("identity `{check}` failed: {witness}")]
    Verification { check: String, witness: String },

    /// A mathematical guarantee was violated; this indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn verification(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Verification {
            check: check.into(),
            witness: witness.into(),
        }
    }
}
