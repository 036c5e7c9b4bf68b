use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested size exceeds a configured search or solver cap.
    #[error("refusing n = {n}: {what} is capped at n <= {cap}")]
    CapExceeded { what: &'static str, n: u64, cap: u64 },

    /// The simplex ran past its pivot budget. Bland's rule terminates, so this
    /// signals a bug rather than a hard instance.
    #[error("pivot limit of {0} exceeded")]
    PivotLimit(usize),

    /// A self-check inside the library failed.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
