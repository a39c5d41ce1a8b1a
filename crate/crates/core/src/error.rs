use thiserror::Error;

/// Errors raised by the exact-algebra layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Arguments violate a documented precondition (bad prime, k > n, gcd != 1, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The ideal is not of the supported `scalar * monomial` shape, or fails
    /// the degreewise-finiteness check.
    #[error("unsupported ideal: {0}")]
    UnsupportedIdeal(String),

    /// Parameters fall outside the regime the formulas are stated for
    /// (e.g. a cyclic quotient at p <= n). Carries the notice for the caller.
    #[error("unsupported parameter regime: {0}")]
    UnsupportedRegime(String),

    /// Spectral-sequence truncation too low for the requested total degree.
    #[error("truncation too low: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
