//! Complex-parameter special functions: log-gamma, the Gauss hypergeometric
//! function on `[0, 1)` and associated Legendre functions on `(-1, 1)`.

mod gamma;
mod hyp2f1;
mod legendre;

pub use gamma::{gamma, is_nonpositive_integer, ln_cos_pi, ln_gamma, ln_sin_pi, recip_gamma};
pub use hyp2f1::{hyp2f1, MAX_TERMS};
pub use legendre::{legendre_p, legendre_p_tanh, tanh_split};

pub(crate) use hyp2f1::hyp2f1_split;
