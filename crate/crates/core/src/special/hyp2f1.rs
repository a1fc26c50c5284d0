use num_complex::Complex64;

use super::gamma::{is_nonpositive_integer, ln_gamma};
use crate::error::{Error, Result};

pub const MAX_TERMS: usize = 10_000;
const TERM_TOL: f64 = 1e-16;
const DEGENERATE_TOL: f64 = 1e-8;

/// Gauss hypergeometric function `2F1(a, b; c; z)` for real `z` in `[0, 1)`.
///
/// The Gauss series is summed directly for `z <= 1/2`. Above that the
/// `z -> 1 - z` connection formula is used, which needs `c - a - b` to stay
/// away from the integers.
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    if !z.is_finite() || !(0.0..1.0).contains(&z) {
        return Err(Error::invalid("z", format!("must lie in [0, 1), got {z}")));
    }
    hyp2f1_split(a, b, c, z, 1.0 - z)
}

/// Same as [`hyp2f1`] with `1 - z` supplied separately, so callers that know
/// it to full relative precision (e.g. `z = 1 / (1 + e^{2u})`) keep it.
pub(crate) fn hyp2f1_split(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: f64,
    one_minus_z: f64,
) -> Result<Complex64> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::invalid(name, "must be finite"));
        }
    }
    if is_nonpositive_integer(c) {
        return Err(Error::invalid("c", "must not be a non-positive integer"));
    }
    // z may round to 1 when 1 - z is tiny but known exactly
    if !(z >= 0.0 && z <= 1.0 && one_minus_z > 0.0) {
        return Err(Error::invalid("z", format!("must lie in [0, 1), got {z}")));
    }
    if z == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    // terminating series: a polynomial, fine for every z in [0, 1)
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) || z <= 0.5 {
        return gauss_series(a, b, c, z);
    }

    let d = c - a - b;
    if d.im.abs() < DEGENERATE_TOL && (d.re - d.re.round()).abs() < DEGENERATE_TOL {
        return Err(Error::DegenerateTransformation { re: d.re, im: d.im });
    }
    let w = one_minus_z;
    let ln_gc = ln_gamma(c)?;

    let first = if is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b) {
        Complex64::new(0.0, 0.0)
    } else {
        let pre = ln_gc + ln_gamma(d)? - ln_gamma(c - a)? - ln_gamma(c - b)?;
        pre.exp() * gauss_series(a, b, 1.0 - d, w)?
    };
    let second = {
        let pre = ln_gc + ln_gamma(-d)? - ln_gamma(a)? - ln_gamma(b)? + d * w.ln();
        pre.exp() * gauss_series(c - a, c - b, 1.0 + d, w)?
    };
    Ok(first + second)
}

fn gauss_series(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_run = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        term *= ratio;
        sum += term;
        if term == Complex64::new(0.0, 0.0) {
            return Ok(sum);
        }
        if term.norm() <= TERM_TOL * sum.norm() && ratio.norm() < 1.0 {
            small_run += 1;
            if small_run >= 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}
