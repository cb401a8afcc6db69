use thiserror::Error;

/// Errors produced by the pricing engine and its front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} = {value} is outside the admissible domain ({reason})")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature did not converge: last two estimates differ by {difference:e} after {panels} panels")]
    QuadratureNonConvergence { panels: usize, difference: f64 },

    #[error("correlation rho = {0} is not covered by any stability theorem (need |rho| < 1/2)")]
    UnsupportedCorrelation(f64),

    #[error("scheme {scheme} does not apply to rho = {rho}")]
    WrongScheme { scheme: &'static str, rho: f64 },

    #[error("stability violation on interval {interval}: condition `{condition}` fails (margin {margin:e})")]
    StabilityViolation {
        interval: usize,
        condition: String,
        margin: f64,
    },

    #[error("non-finite value produced at node (x #{l}, r #{m}) while stepping to t = {t}")]
    NonFiniteValue { l: usize, m: usize, t: f64 },

    #[error("point (V = {v}, r = {r}, t = {t}) lies outside the solved domain")]
    OutOfDomain { v: f64, r: f64, t: f64 },

    #[error("t = {0} is a coupon date; a side (before/after) must be given")]
    AmbiguousTime(f64),

    #[error("price {0} is not positive")]
    NonPositivePrice(f64),

    #[error("no feasible time step above {floor:e} years")]
    NoFeasibleDt { floor: f64 },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
