//! Euclidean-time propagator assembled from the scattering states,
//!
//! `K(xf, xi; tau) = int_0^inf dE w(k) [Psi1(yf) Psi1*(yi) + Psi2(yf) Psi2*(yi)] e^{-E tau / hbar}`
//!
//! with `w(k) = (m / 2 hbar^2 omega) sinh(pi kappa) / D(k)`,
//! `Psi1(y) = P_nu^{-i kappa}(y)`, `Psi2(y) = P_nu^{-i kappa}(-y)` and
//! `y = tanh(omega x)`. The integral is done in `k` with `dE = hbar^2 k dk / m`.
//!
//! `D(k) = sin pi(nu - i kappa) sin pi(nu + i kappa)` by default. For real `nu`
//! this is `|sin pi(nu - i kappa)|^2`; for `nu = -1/2 + i lambda` only the
//! product form reproduces the completeness relation, see [`NormalizationForm`].
//! The real-time kernel is the same expression continued to `tau = i t`; it is
//! never integrated numerically here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{reduce, PhysicalParams};
use crate::quadrature::{integrate_adaptive, AdaptiveConfig};
use crate::scattering::{ln_norm_denominator, NormalizationForm};
use crate::special::{legendre_p_tanh, ln_sin_pi};

/// `ln(1e16)`: the Boltzmann factor at `k_max` is below `1e-16`.
const TAIL_EXPONENT: f64 = 36.841_361_487_904_734;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub xf: f64,
    pub xi: f64,
    pub tau: f64,
    pub value: f64,
    pub quad_error: f64,
    /// `|Im K| / |Re K|` of the assembled integral.
    pub imag_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpectralConfig {
    /// Lower cut as a fraction of `omega`.
    pub k_min_factor: f64,
    /// Upper limit on `k_max / omega`; smaller `tau` is rejected.
    pub kappa_cap: f64,
    pub rel_tol: f64,
    /// Largest accepted `quad_error / value`.
    pub max_rel_error: f64,
    pub imag_tol: f64,
    /// Absolute resolution in units of the free-kernel scale `sqrt(m / 2 pi hbar tau)`.
    /// Oscillatory cancellation limits the absolute accuracy, so both the
    /// imaginary-part and the error checks allow this much on top of the
    /// relative tolerance, and kernels below it are reported as unresolved.
    pub abs_floor: f64,
    pub normalization: NormalizationForm,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            k_min_factor: 1e-6,
            kappa_cap: 400.0,
            rel_tol: 1e-11,
            max_rel_error: 1e-8,
            imag_tol: 1e-10,
            abs_floor: 1e-10,
            normalization: NormalizationForm::Continued,
        }
    }
}

/// Integrand in `k`, including the Jacobian `dE/dk`.
fn integrand(p: &PhysicalParams, form: NormalizationForm, uf: f64, ui: f64, tau: f64, k: f64) -> Result<Complex64> {
    let idx = reduce(p, k)?;
    let nu = idx.nu;
    let mu = idx.mu;
    let ln_sinh = ln_sin_pi(mu).re;
    let ln_w = ln_sinh - ln_norm_denominator(&idx, form);
    // (m / 2 hbar^2 omega) (hbar^2 k / m) = k / (2 omega)
    let weight = k / (2.0 * p.omega) * (ln_w - p.hbar * k * k * tau / (2.0 * p.m)).exp();
    let psi1_f = legendre_p_tanh(nu, -mu, uf)?;
    let psi1_i_conj = legendre_p_tanh(nu, mu, ui)?;
    let psi2_f = legendre_p_tanh(nu, -mu, -uf)?;
    let psi2_i_conj = legendre_p_tanh(nu, mu, -ui)?;
    Ok(weight * (psi1_f * psi1_i_conj + psi2_f * psi2_i_conj))
}

pub fn spectral_kernel(p: &PhysicalParams, xf: f64, xi: f64, tau: f64) -> Result<KernelValue> {
    spectral_kernel_with(p, xf, xi, tau, &SpectralConfig::default())
}

pub fn spectral_kernel_with(
    p: &PhysicalParams,
    xf: f64,
    xi: f64,
    tau: f64,
    cfg: &SpectralConfig,
) -> Result<KernelValue> {
    p.validate()?;
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::invalid("tau", format!("must be finite and > 0, got {tau}")));
    }
    if !(xf.is_finite() && xi.is_finite()) {
        return Err(Error::invalid("x", "positions must be finite"));
    }
    let k_max = (2.0 * p.m * TAIL_EXPONENT / (p.hbar * tau)).sqrt();
    if k_max / p.omega > cfg.kappa_cap {
        return Err(Error::invalid(
            "tau",
            format!(
                "too small: k_max / omega = {:.1} exceeds cap {}",
                k_max / p.omega,
                cfg.kappa_cap
            ),
        ));
    }
    let k_min = cfg.k_min_factor * p.omega;
    let (uf, ui) = (p.omega * xf, p.omega * xi);

    // enough panels to resolve both the barrier scale and the e^{ik(xf +- xi)} oscillation
    let spread = (xf.abs() + xi.abs()).max(1.0 / p.omega);
    let panels = ((k_max * spread / 2.0).ceil() as usize).clamp(8, 512);
    // free-kernel scale sets the absolute floor
    let scale = (p.m / (2.0 * std::f64::consts::PI * p.hbar * tau)).sqrt();
    let qcfg = AdaptiveConfig {
        initial_panels: panels,
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.rel_tol * scale,
        max_depth: 14,
    };
    let f = |k: f64| integrand(p, cfg.normalization, uf, ui, tau, k);
    let body = integrate_adaptive(k_min, k_max, &qcfg, f)?;
    // [0, k_min]: one-point rule; the integrand is flat or quadratic at k = 0,
    // and the change over the last half of the cut bounds the rule's error
    let f_min = integrand(p, cfg.normalization, uf, ui, tau, k_min)?;
    let head = k_min * f_min;
    let head_error = k_min * (f_min - integrand(p, cfg.normalization, uf, ui, tau, 0.5 * k_min)?).norm();
    let total = body.value + head;

    let value = total.re;
    let quad_error = body.error + head_error + body.value.norm() * f64::EPSILON * 16.0;
    let floor = cfg.abs_floor * scale;
    if !(value > floor) {
        return Err(Error::Quadrature {
            reason: format!(
                "kernel {value:e} at ({xf}, {xi}, {tau}) is below the resolution floor {floor:e}"
            ),
        });
    }
    let imag_ratio = total.im.abs() / value;
    if total.im.abs() > cfg.imag_tol * value + floor {
        return Err(Error::Inconsistent {
            check: "reality of the Euclidean kernel",
            deviation: imag_ratio,
            tolerance: cfg.imag_tol,
        });
    }
    if quad_error > cfg.max_rel_error * value + floor {
        return Err(Error::Quadrature {
            reason: format!("estimated relative error {:.3e} above {:.1e}", quad_error / value, cfg.max_rel_error),
        });
    }
    Ok(KernelValue {
        xf,
        xi,
        tau,
        value,
        quad_error,
        imag_ratio,
    })
}

/// `sqrt(m / 2 pi hbar tau) exp(-m (xf - xi)^2 / 2 hbar tau)`
pub fn free_kernel(m: f64, hbar: f64, xf: f64, xi: f64, tau: f64) -> f64 {
    let d = xf - xi;
    (m / (2.0 * std::f64::consts::PI * hbar * tau)).sqrt() * (-m * d * d / (2.0 * hbar * tau)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_case_matches_gaussian() {
        let p = PhysicalParams::natural(1.0, 0.0).unwrap();
        for (xf, xi, tau) in [(0.0, 0.0, 1.0), (0.5, -0.5, 1.0), (1.2, 0.3, 0.4)] {
            let k = spectral_kernel(&p, xf, xi, tau).unwrap();
            let want = free_kernel(1.0, 1.0, xf, xi, tau);
            assert!((k.value - want).abs() < 1e-6 * want, "{k:?} vs {want}");
        }
    }

    #[test]
    fn swap_symmetry() {
        let p = PhysicalParams::natural(1.0, 0.25).unwrap();
        let a = spectral_kernel(&p, 0.5, -0.2, 1.0).unwrap();
        let b = spectral_kernel(&p, -0.2, 0.5, 1.0).unwrap();
        assert!((a.value - b.value).abs() < 1e-12 * a.value);
        assert!(a.imag_ratio < 1e-10);
    }

    #[test]
    fn rejects_bad_tau() {
        let p = PhysicalParams::natural(1.0, 0.25).unwrap();
        assert!(spectral_kernel(&p, 0.0, 0.0, 0.0).is_err());
        assert!(spectral_kernel(&p, 0.0, 0.0, 1e-7).is_err());
    }
}
