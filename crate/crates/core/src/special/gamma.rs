use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `0.5 * ln(2 pi)`
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// True when `z` sits on a pole of the gamma function.
pub fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Log-gamma on the branch that is continuous in the right half plane and
/// satisfies `ln_gamma(conj z) = conj(ln_gamma(z))`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::invalid("z", "log-gamma argument must be finite"));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - lanczos(1.0 - z))
    } else {
        Ok(lanczos(z))
    }
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut sum = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + sum.ln()
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    ln_gamma(z).map(Complex64::exp)
}

/// `1 / Gamma(z)`, which is entire: zero at the poles of gamma.
pub fn recip_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    ln_gamma(z).map(|l| (-l).exp())
}

/// `ln sin(pi z)`, stable for large `|Im z|` where `sin` itself would overflow.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = PI * z;
    if w.im.abs() < 20.0 {
        return w.sin().ln();
    }
    if w.im > 0.0 {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw})
        let i = Complex64::i();
        -i * w + Complex64::new(0.0, PI / 2.0) - 2f64.ln() + (1.0 - (2.0 * i * w).exp()).ln()
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

/// `ln cos(pi z)`
pub fn ln_cos_pi(z: Complex64) -> Complex64 {
    ln_sin_pi(z + 0.5)
}
