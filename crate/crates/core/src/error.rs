use thiserror::Error;

/// Errors produced by the core algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    /// Exact arithmetic would exceed the configured size budget.
    #[error("precision budget exceeded: {needed_bits} bits needed, budget is {budget_bits} bits (raise the budget)")]
    Precision { needed_bits: u64, budget_bits: u64 },

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature failed to converge: estimate {estimate:e}, error bound {bound:e}, requested {tol:e}")]
    Quadrature { estimate: f64, bound: f64, tol: f64 },

    /// A density that should be nonnegative took a negative value.
    #[error("density is negative at t = {t:e} (value {value:e}); classification and density disagree")]
    NegativeDensity { t: f64, value: f64 },

    /// Text could not be parsed as a number.
    #[error("cannot parse `{input}` as a {expected}")]
    Parse { input: String, expected: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain { field, reason: reason.into() }
}
