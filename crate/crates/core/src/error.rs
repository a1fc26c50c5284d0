use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("gamma function pole at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("hypergeometric transformation degenerate: c - a - b = {re} + {im}i is within 1e-8 of an integer")]
    DegenerateTransformation { re: f64, im: f64 },

    #[error("hypergeometric series did not converge after {terms} terms")]
    NonConvergence { terms: usize },

    #[error("zero-energy limit: kappa must be strictly positive")]
    ZeroEnergy,

    #[error("degenerate denominator sin(pi(nu + mu)) in connection coefficients")]
    DegenerateDenominator,

    #[error("internal consistency check `{check}` failed: deviation {deviation:e} exceeds {tolerance:e}")]
    Inconsistent {
        check: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    #[error("asymptotic fit is ill-conditioned ({reason})")]
    IllConditionedFit { reason: String },

    #[error("Numerov step too coarse: Richardson deviation {deviation:e} > {tolerance:e} at h = {step}")]
    StepTooCoarse {
        step: f64,
        deviation: f64,
        tolerance: f64,
    },

    #[error("grid propagator not converged: relative change {change:e} on doubling N = {points}")]
    GridNotConverged { points: usize, change: f64 },

    #[error("quadrature failed: {reason}")]
    Quadrature { reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
