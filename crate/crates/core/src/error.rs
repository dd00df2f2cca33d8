use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Weierstrass model has vanishing discriminant.
    #[error("singular curve: discriminant is zero")]
    SingularCurve,

    /// The curve has bad reduction at the given prime.
    #[error("bad reduction at {0}")]
    BadReduction(u64),

    /// A prime outside the range an operation supports (e.g. 2 and 3 for
    /// point counting on a short model, or p outside an exhaustive table).
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u64),

    /// Division-polynomial level above the configured cap.
    #[error("level cap exceeded: N = {n} > cap {cap}")]
    Cap { n: u32, cap: u32 },

    /// A named precondition of a lemma-checking operation failed.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Certified numerics could not reach the requested accuracy.
    #[error("precision failure: {0}")]
    Precision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
