use num_complex::Complex64;

use super::gamma::{is_nonpositive_integer, ln_gamma};
use super::hyp2f1::hyp2f1_split;
use crate::error::{Error, Result};

/// General associated Legendre function of the first kind on the cut,
///
/// `P_nu^mu(x) = [(1+x)/(1-x)]^{mu/2} F(-nu, nu+1; 1-mu; (1-x)/2) / Gamma(1-mu)`.
pub fn legendre_p(nu: Complex64, mu: Complex64, x: f64) -> Result<Complex64> {
    if !x.is_finite() || x.abs() >= 1.0 {
        return Err(Error::invalid("x", format!("must lie in (-1, 1), got {x}")));
    }
    let ln_ratio = x.ln_1p() - (-x).ln_1p();
    eval(nu, mu, 0.5 * (1.0 - x), 0.5 * (1.0 + x), ln_ratio)
}

/// `P_nu^mu(tanh u)` with the hypergeometric argument built from `u` directly,
/// so that `|u|` of order 10 loses no precision to `1 - tanh u`.
pub fn legendre_p_tanh(nu: Complex64, mu: Complex64, u: f64) -> Result<Complex64> {
    if !u.is_finite() {
        return Err(Error::invalid("u", "must be finite"));
    }
    let (z, one_minus_z) = tanh_split(u);
    if one_minus_z == 0.0 {
        return Err(Error::invalid("u", format!("tanh({u}) is numerically -1")));
    }
    eval(nu, mu, z, one_minus_z, 2.0 * u)
}

/// `((1 - tanh u)/2, (1 + tanh u)/2)` without cancellation.
pub fn tanh_split(u: f64) -> (f64, f64) {
    (1.0 / (1.0 + (2.0 * u).exp()), 1.0 / (1.0 + (-2.0 * u).exp()))
}

fn eval(nu: Complex64, mu: Complex64, z: f64, one_minus_z: f64, ln_ratio: f64) -> Result<Complex64> {
    let c = 1.0 - mu;
    if is_nonpositive_integer(c) {
        return Err(Error::invalid("mu", "1 - mu must not be a non-positive integer"));
    }
    let f = hyp2f1_split(-nu, nu + 1.0, c, z, one_minus_z)?;
    let pre = (0.5 * mu * ln_ratio - ln_gamma(c)?).exp();
    Ok(pre * f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn degree_zero_order_zero_is_one() {
        for x in [-0.7, 0.0, 0.7] {
            let p = legendre_p(c(0.0, 0.0), c(0.0, 0.0), x).unwrap();
            assert!((p - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn integer_degree_matches_polynomials() {
        // P_1 = x, P_2 = (3x^2 - 1)/2
        for x in [-0.9, -0.3, 0.2, 0.8] {
            let p1 = legendre_p(c(1.0, 0.0), c(0.0, 0.0), x).unwrap();
            let p2 = legendre_p(c(2.0, 0.0), c(0.0, 0.0), x).unwrap();
            assert!((p1 - x).norm() < 1e-14);
            assert!((p2 - 0.5 * (3.0 * x * x - 1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn degree_symmetry_on_conical_line() {
        let (lam, mu, x) = (0.8, c(0.0, 0.5), 0.3);
        let a = legendre_p(c(-0.5, -lam), mu, x).unwrap();
        let b = legendre_p(c(-0.5, lam), mu, x).unwrap();
        assert!((a - b).norm() < 1e-12 * b.norm());
    }

    #[test]
    fn tanh_form_agrees_with_direct_form() {
        let nu = c(-0.5, 0.5);
        let mu = c(0.0, 0.7);
        for u in [-2.0, -0.4, 0.0, 0.3, 1.5] {
            let a = legendre_p(nu, mu, f64::tanh(u)).unwrap();
            let b = legendre_p_tanh(nu, mu, u).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm(), "u={u}");
        }
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(legendre_p(c(0.0, 0.0), c(0.0, 0.0), 1.0).is_err());
        assert!(legendre_p(c(0.0, 0.0), c(0.0, 0.0), -1.5).is_err());
        assert!(legendre_p(c(0.0, 0.0), c(2.0, 0.0), 0.1).is_err());
        assert!(legendre_p_tanh(c(0.0, 0.0), c(0.0, 0.0), -500.0).is_err());
    }

    #[test]
    fn matches_term_by_term_series() {
        // v8 = 0.5, kappa = 0.9, x = -0.2, order i kappa
        let nu = c((-1.0 + 0.5f64.sqrt()) / 2.0, 0.0);
        let mu = c(0.0, 0.9);
        let x = -0.2f64;
        let z = (1.0 - x) / 2.0;
        let (a, b, cc) = (-nu, nu + 1.0, 1.0 - mu);
        let mut term = c(1.0, 0.0);
        let mut sum = term;
        for n in 0..400 {
            let n = n as f64;
            term *= (a + n) * (b + n) / ((cc + n) * (n + 1.0)) * z;
            sum += term;
        }
        // 1 / Gamma(1 - i 0.9), from mpmath
        let recip = c(1.6450942109918123, -0.5216670969365912);
        let want = (mu / 2.0 * ((1.0 + x) / (1.0 - x)).ln()).exp() * sum * recip;
        let got = legendre_p(nu, mu, x).unwrap();
        assert!((got - want).norm() < 1e-10 * want.norm(), "{got} vs {want}");
    }
}
