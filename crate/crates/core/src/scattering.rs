//! Transmission and reflection amplitudes, the scattering function, the
//! connection coefficients between the two families of Legendre solutions and
//! the energy-normalized scattering states.
//!
//! The "scattering function" here is the scalar `S(k) = T(k) + R(k)`, not the
//! 2x2 S-matrix. For a symmetric barrier `R / T` is purely imaginary, which
//! makes `|S| = 1` equivalent to flux conservation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{BarrierIndex, PhysicalParams};
use crate::special::{
    hyp2f1_split, is_nonpositive_integer, legendre_p_tanh, ln_cos_pi, ln_gamma, ln_sin_pi,
    tanh_split,
};

/// Agreement required between the two closed forms of `S`.
pub const S_CONSISTENCY_TOL: f64 = 1e-10;
/// Agreement required between the Legendre and hypergeometric wave-function routes.
pub const WAVE_CONSISTENCY_TOL: f64 = 1e-10;
/// Smallest `|omega x|` accepted by the asymptotic fit.
pub const ASYMPTOTIC_MIN_OMEGA_X: f64 = 8.0;
/// Minimum number of samples on each side of the barrier for the asymptotic fit.
pub const ASYMPTOTIC_MIN_SAMPLES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitudes {
    pub kappa: f64,
    pub t: Complex64,
    pub r: Complex64,
    pub s: Complex64,
    pub t2: f64,
    pub r2: f64,
}

impl Amplitudes {
    pub fn new(kappa: f64, t: Complex64, r: Complex64) -> Self {
        Amplitudes {
            kappa,
            t,
            r,
            s: t + r,
            t2: t.norm_sqr(),
            r2: r.norm_sqr(),
        }
    }

    /// `max(| |T|^2 + |R|^2 - 1 |, | |S| - 1 |)`
    pub fn unitarity_residual(&self) -> f64 {
        (self.t2 + self.r2 - 1.0).abs().max((self.s.norm() - 1.0).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionCoefficients {
    pub a: Complex64,
    pub b: Complex64,
}

impl ConnectionCoefficients {
    /// `|a|^2 + |b|^2 - 1`
    pub fn norm_defect(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() - 1.0
    }

    /// `a conj(b) + conj(a) b`, which is real.
    pub fn cross_term(&self) -> f64 {
        (self.a * self.b.conj() + self.a.conj() * self.b).re
    }
}

/// Right- and left-moving scattering states at one position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSample {
    pub x: f64,
    pub psi_right: Complex64,
    pub psi_left: Complex64,
}

fn require_positive_kappa(idx: &BarrierIndex) -> Result<Complex64> {
    if !(idx.kappa > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    Ok(Complex64::new(0.0, idx.kappa))
}

/// `ln[Gamma(1 + nu - i kappa) Gamma(-nu - i kappa)]`, shared by `T`, `R` and the incident coefficient.
fn ln_barrier_gammas(nu: Complex64, ik: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(1.0 + nu - ik)? + ln_gamma(-nu - ik)?)
}

/// `1 / [Gamma(1 + nu) Gamma(-nu)]` vanishes on the free-particle point (and its mirror `nu = -1`).
fn free_point(nu: Complex64) -> bool {
    is_nonpositive_integer(-nu) || is_nonpositive_integer(1.0 + nu)
}

pub fn amplitudes(idx: &BarrierIndex) -> Result<Amplitudes> {
    let ik = require_positive_kappa(idx)?;
    let nu = idx.nu;
    let common = ln_barrier_gammas(nu, ik)?;
    let ln_gm = ln_gamma(-ik)?;
    let t = (common - ln_gamma(1.0 - ik)? - ln_gm).exp();
    let r = if free_point(nu) {
        Complex64::new(0.0, 0.0)
    } else {
        (common + ln_gamma(ik)? - ln_gamma(1.0 + nu)? - ln_gamma(-nu)? - ln_gm).exp()
    };
    Ok(Amplitudes::new(idx.kappa, t, r))
}

/// The gamma/cosine closed form of the scattering function.
pub fn s_closed_form(idx: &BarrierIndex) -> Result<Complex64> {
    let ik = require_positive_kappa(idx)?;
    let nu = idx.nu;
    let ln_s = ln_gamma(ik)? + ln_gamma(-nu - ik)? + ln_cos_pi(0.5 * (nu + ik))
        - ln_gamma(-ik)?
        - ln_gamma(-nu + ik)?
        - ln_cos_pi(0.5 * (nu - ik));
    Ok(ln_s.exp())
}

/// `S = T + R`, cross-checked against [`s_closed_form`].
pub fn s_function(idx: &BarrierIndex) -> Result<Complex64> {
    let s = amplitudes(idx)?.s;
    let closed = s_closed_form(idx)?;
    let deviation = (s - closed).norm();
    if deviation > S_CONSISTENCY_TOL {
        return Err(Error::Inconsistent {
            check: "S = T + R vs closed form",
            deviation,
            tolerance: S_CONSISTENCY_TOL,
        });
    }
    Ok(s)
}

/// Coefficients `a`, `b` of `P_nu^{-mu}(y) = a P_nu^mu(y) + b P_nu^mu(-y)`.
pub fn connection_coefficients(idx: &BarrierIndex) -> Result<ConnectionCoefficients> {
    let nu = idx.nu;
    let mu = idx.mu;
    let ln_sin_den = ln_sin_pi(nu + mu);
    if !ln_sin_den.re.is_finite() || ln_sin_den.re < 1e-300f64.ln() {
        return Err(Error::DegenerateDenominator);
    }
    let ln_ratio = ln_gamma(nu - mu + 1.0)? - ln_gamma(nu + mu + 1.0)? - ln_sin_den;
    let zero = Complex64::new(0.0, 0.0);
    let a = if is_nonpositive_integer(-nu) || is_nonpositive_integer(nu) {
        zero
    } else {
        (ln_ratio + ln_sin_pi(nu)).exp()
    };
    let b = if mu == zero {
        zero
    } else {
        (ln_ratio + ln_sin_pi(mu)).exp()
    };
    Ok(ConnectionCoefficients { a, b })
}

/// `ln sinh(pi kappa)` for `kappa > 0`.
fn ln_sinh_pi(kappa: f64) -> f64 {
    ln_sin_pi(Complex64::new(0.0, kappa)).re
}

/// Which denominator the energy-normalization prefactor uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationForm {
    /// `sin pi(nu - i kappa) sin pi(nu + i kappa) = sinh^2(pi kappa) + sin^2(pi nu)`.
    /// Equal to `|sin pi(nu - i kappa)|^2` for real `nu`, and still gives unit
    /// incident flux per unit energy when `nu = -1/2 + i lambda`.
    Continued,
    /// `|sin pi(nu - i kappa)|^2` for every `nu`. Over-weights states by
    /// `cosh pi(lambda + kappa) / cosh pi(lambda - kappa)` when `v8 > 1`.
    Modulus,
}

/// `ln` of the normalization denominator.
pub(crate) fn ln_norm_denominator(idx: &BarrierIndex, form: NormalizationForm) -> f64 {
    let ik = idx.mu;
    match form {
        NormalizationForm::Continued => (ln_sin_pi(idx.nu - ik) + ln_sin_pi(idx.nu + ik)).re,
        NormalizationForm::Modulus => 2.0 * ln_sin_pi(idx.nu - ik).re,
    }
}

/// Energy-normalization prefactor
/// `sqrt(m / (2 hbar^2 omega)) sinh^{1/2}(pi kappa) / sqrt(sin pi(nu - i kappa) sin pi(nu + i kappa))`.
pub fn normalization(idx: &BarrierIndex, p: &PhysicalParams) -> Result<f64> {
    normalization_with(idx, p, NormalizationForm::Continued)
}

pub fn normalization_with(idx: &BarrierIndex, p: &PhysicalParams, form: NormalizationForm) -> Result<f64> {
    require_positive_kappa(idx)?;
    let ln_n = 0.5 * (p.m / (2.0 * p.hbar * p.hbar * p.omega)).ln() + 0.5 * ln_sinh_pi(idx.kappa)
        - 0.5 * ln_norm_denominator(idx, form);
    Ok(ln_n.exp())
}

/// Coefficient of `e^{ikx}` in `psi_right` as `x -> -infinity`.
pub fn incident_coefficient(idx: &BarrierIndex, p: &PhysicalParams) -> Result<Complex64> {
    let ik = require_positive_kappa(idx)?;
    let n = normalization(idx, p)?;
    Ok(n * (ln_gamma(-ik)? - ln_barrier_gammas(idx.nu, ik)?).exp())
}

/// `psi_right(x)` through `P_nu^{i kappa}(tanh omega x)`.
fn psi_legendre(idx: &BarrierIndex, norm: f64, u: f64) -> Result<Complex64> {
    Ok(norm * legendre_p_tanh(idx.nu, idx.mu, u)?)
}

/// `psi_right(x)` through `F(1 + nu - i kappa, -nu - i kappa; 1 - i kappa; (1 - tanh u)/2)`.
fn psi_hypergeometric(idx: &BarrierIndex, norm: f64, u: f64) -> Result<Complex64> {
    let ik = idx.mu;
    let nu = idx.nu;
    let (z, one_minus_z) = tanh_split(u);
    // ln[(1 - tanh^2 u) / 4] = -2 ln cosh u - ln 4
    let ln_cosh = u.abs() + (-2.0 * u.abs()).exp().ln_1p() - 2f64.ln();
    let ln_quarter_sech2 = -2.0 * ln_cosh - 4f64.ln();
    let pre = (-ln_gamma(1.0 - ik)? - 0.5 * ik * ln_quarter_sech2).exp();
    let f = hyp2f1_split(1.0 + nu - ik, -nu - ik, 1.0 - ik, z, one_minus_z)?;
    Ok(norm * pre * f)
}

fn check_routes(a: Complex64, b: Complex64, scale: f64) -> Result<()> {
    let deviation = (a - b).norm() / a.norm().max(scale);
    if deviation > WAVE_CONSISTENCY_TOL {
        return Err(Error::Inconsistent {
            check: "Legendre vs hypergeometric wave function",
            deviation,
            tolerance: WAVE_CONSISTENCY_TOL,
        });
    }
    Ok(())
}

/// Energy-normalized right- and left-moving scattering states at `x`.
///
/// Both the Legendre and the transformed hypergeometric representation are
/// evaluated; an [`Error::Inconsistent`] is returned if they disagree.
pub fn wavefunctions(idx: &BarrierIndex, p: &PhysicalParams, x: f64) -> Result<WaveSample> {
    if !x.is_finite() {
        return Err(Error::invalid("x", "must be finite"));
    }
    let norm = normalization(idx, p)?;
    // amplitude of a unit incident wave in these units, used as the comparison floor
    let scale = (p.m / (2.0 * PI * p.hbar * p.hbar * idx.kappa * p.omega)).sqrt();
    let u = p.omega * x;
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (slot, arg) in out.iter_mut().zip([u, -u]) {
        let via_legendre = psi_legendre(idx, norm, arg)?;
        let via_hyp = psi_hypergeometric(idx, norm, arg)?;
        check_routes(via_legendre, via_hyp, scale)?;
        *slot = via_legendre;
    }
    Ok(WaveSample {
        x,
        psi_right: out[0],
        psi_left: out[1],
    })
}

/// Large-`|x|` form of `psi_right`: transmitted wave on the right, incident plus
/// reflected wave on the left.
pub fn asymptotic_psi_right(idx: &BarrierIndex, p: &PhysicalParams, x: f64) -> Result<Complex64> {
    let ik = require_positive_kappa(idx)?;
    let k = idx.kappa * p.omega;
    let norm = normalization(idx, p)?;
    let plane = Complex64::new(0.0, k * x).exp();
    if x >= 0.0 {
        return Ok(norm * (-ln_gamma(1.0 - ik)?).exp() * plane);
    }
    let incoming = (ln_gamma(-ik)? - ln_barrier_gammas(idx.nu, ik)?).exp();
    let reflected = if free_point(idx.nu) {
        Complex64::new(0.0, 0.0)
    } else {
        (ln_gamma(ik)? - ln_gamma(1.0 + idx.nu)? - ln_gamma(-idx.nu)?).exp()
    };
    Ok(norm * (incoming * plane + reflected / plane))
}

/// Result of fitting sampled scattering states to plane-wave asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub amplitudes: Amplitudes,
    /// Fitted coefficient of the incident wave (the overall normalization).
    pub incident: Complex64,
    /// RMS fit residual relative to `|incident|`.
    pub residual: f64,
}

#[derive(Clone, Copy)]
enum Mover {
    Right,
    Left,
}

/// Fits `psi_right` to `c T e^{ikx}` (right) and `c (e^{ikx} + R e^{-ikx})` (left).
pub fn asymptotic_extract(
    samples: &[WaveSample],
    idx: &BarrierIndex,
    p: &PhysicalParams,
) -> Result<AsymptoticFit> {
    fit(samples, idx, p, Mover::Right)
}

/// Fits `psi_left` to `c T e^{-ikx}` (left) and `c (e^{-ikx} + R e^{ikx})` (right).
pub fn asymptotic_extract_left(
    samples: &[WaveSample],
    idx: &BarrierIndex,
    p: &PhysicalParams,
) -> Result<AsymptoticFit> {
    fit(samples, idx, p, Mover::Left)
}

fn fit(samples: &[WaveSample], idx: &BarrierIndex, p: &PhysicalParams, mover: Mover) -> Result<AsymptoticFit> {
    require_positive_kappa(idx)?;
    let k = idx.kappa * p.omega;
    // incident side is where the wave comes from; transmitted side is opposite
    let mut incident_side = Vec::new();
    let mut transmitted_side = Vec::new();
    for s in samples {
        let u = p.omega * s.x;
        if !(u.abs() >= ASYMPTOTIC_MIN_OMEGA_X) {
            return Err(Error::invalid(
                "samples",
                format!("|omega x| = {} is below {ASYMPTOTIC_MIN_OMEGA_X}", u.abs()),
            ));
        }
        let (psi, x_dir) = match mover {
            Mover::Right => (s.psi_right, s.x),
            Mover::Left => (s.psi_left, -s.x),
        };
        // in the mover's own frame the wave always travels toward +x_dir
        if x_dir > 0.0 {
            transmitted_side.push((x_dir, psi));
        } else {
            incident_side.push((x_dir, psi));
        }
    }
    if incident_side.len() < ASYMPTOTIC_MIN_SAMPLES || transmitted_side.len() < ASYMPTOTIC_MIN_SAMPLES {
        return Err(Error::invalid(
            "samples",
            format!("need at least {ASYMPTOTIC_MIN_SAMPLES} points on each side"),
        ));
    }

    let wave = |x: f64| Complex64::new(0.0, k * x).exp();

    // transmitted: psi = alpha e^{ikx}
    let n_t = transmitted_side.len() as f64;
    let alpha = transmitted_side.iter().map(|&(x, psi)| psi / wave(x)).sum::<Complex64>() / n_t;

    // incident: psi = beta e^{ikx} + gamma e^{-ikx}, least squares via normal equations
    let n_i = incident_side.len() as f64;
    let mut g12 = Complex64::new(0.0, 0.0);
    let mut rhs1 = Complex64::new(0.0, 0.0);
    let mut rhs2 = Complex64::new(0.0, 0.0);
    for &(x, psi) in &incident_side {
        let e = wave(x);
        g12 += (e * e).conj();
        rhs1 += psi * e.conj();
        rhs2 += psi * e;
    }
    let det = n_i * n_i - g12.norm_sqr();
    if det < 1e-6 * n_i * n_i {
        return Err(Error::IllConditionedFit {
            reason: format!(
                "sample spacing aliases e^(2ikx): normalized determinant {:.3e}",
                det / (n_i * n_i)
            ),
        });
    }
    // [[n, g12], [conj g12, n]] (beta, gamma) = (rhs1, rhs2)
    let beta = (n_i * rhs1 - g12 * rhs2) / det;
    let gamma = (n_i * rhs2 - g12.conj() * rhs1) / det;

    let mut sq = 0.0;
    for &(x, psi) in &transmitted_side {
        sq += (psi - alpha * wave(x)).norm_sqr();
    }
    for &(x, psi) in &incident_side {
        sq += (psi - beta * wave(x) - gamma / wave(x)).norm_sqr();
    }
    let residual = (sq / (n_t + n_i)).sqrt() / beta.norm();

    Ok(AsymptoticFit {
        amplitudes: Amplitudes::new(idx.kappa, alpha / beta, gamma / beta),
        incident: beta,
        residual,
    })
}

/// Evenly spaced samples on `omega |x| in [start, start + (n - 1) step]` on both sides.
pub fn asymptotic_samples(
    idx: &BarrierIndex,
    p: &PhysicalParams,
    start: f64,
    step: f64,
    n: usize,
) -> Result<Vec<WaveSample>> {
    let mut out = Vec::with_capacity(2 * n);
    for j in 0..n {
        let u = start + step * j as f64;
        for sign in [-1.0, 1.0] {
            out.push(wavefunctions(idx, p, sign * u / p.omega)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(v8: f64, kappa: f64) -> BarrierIndex {
        BarrierIndex::from_dimensionless(v8, kappa).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_particle_amplitudes_are_exact() {
        for kappa in [0.01, 0.3, 1.0, 40.0] {
            let a = amplitudes(&idx(0.0, kappa)).unwrap();
            assert_eq!(a.r, c(0.0, 0.0));
            assert!((a.t - 1.0).norm() < 1e-13, "kappa={kappa} t={}", a.t);
            assert!((s_function(&idx(0.0, kappa)).unwrap() - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn zero_energy_is_rejected() {
        assert_eq!(amplitudes(&idx(2.0, 0.0)), Err(Error::ZeroEnergy));
        assert_eq!(s_function(&idx(2.0, 0.0)), Err(Error::ZeroEnergy));
    }

    // Reference amplitudes from an arbitrary-precision evaluation of the gamma ratios.
    #[test]
    fn reference_amplitudes() {
        let a = amplitudes(&idx(2.0, 1.0)).unwrap();
        assert!((a.t - c(0.827_836_599_135_431_6, -0.519_238_713_779_048_8)).norm() < 1e-13);
        assert!((a.r - c(-0.112_814_270_510_114_39, -0.179_862_902_273_459_2)).norm() < 1e-13);
        let s = s_function(&idx(0.5, 0.3)).unwrap();
        assert!((s - c(0.676_384_380_815_097_9, -0.736_548_823_493_308_3)).norm() < 1e-13);
    }

    #[test]
    fn closed_form_matches_sum() {
        let i = idx(0.5, 0.3);
        let sum = amplitudes(&i).unwrap().s;
        assert!((s_closed_form(&i).unwrap() - sum).norm() < 1e-12);
        assert!((s_function(&idx(2.0, 1.0)).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflection_over_transmission_is_imaginary() {
        for (v8, kappa) in [(0.3, 0.4), (3.0, 1.2), (20.0, 0.1)] {
            let a = amplitudes(&idx(v8, kappa)).unwrap();
            let q = a.r / a.t;
            assert!(q.re.abs() < 1e-12 * q.norm().max(1.0), "v8={v8} kappa={kappa}");
        }
    }

    #[test]
    fn branch_invariance() {
        for (v8, kappa) in [(0.1, 0.5), (0.7, 2.0), (2.0, 1.0), (20.0, 5.0)] {
            let i = idx(v8, kappa);
            let a = amplitudes(&i).unwrap();
            let b = amplitudes(&i.other_branch()).unwrap();
            assert!((a.t - b.t).norm() < 1e-12);
            assert!((a.r - b.r).norm() < 1e-12);
        }
        // mirror of the free point
        let b = amplitudes(&idx(0.0, 0.7).other_branch()).unwrap();
        assert_eq!(b.r, c(0.0, 0.0));
    }

    #[test]
    fn connection_coefficients_free_and_strong() {
        let i = idx(0.0, 0.6);
        let cc = connection_coefficients(&i).unwrap();
        assert_eq!(cc.a, c(0.0, 0.0));
        let mu = i.mu;
        let want = (ln_gamma(1.0 - mu).unwrap() - ln_gamma(1.0 + mu).unwrap()).exp();
        assert!((cc.b - want).norm() < 1e-14);

        let cc = connection_coefficients(&idx(2.0, 1.0)).unwrap();
        assert!(cc.norm_defect().abs() < 1e-12);
        let cc = connection_coefficients(&idx(0.5, 0.7)).unwrap();
        assert!(cc.cross_term().abs() < 1e-12);
    }

    #[test]
    fn wave_parity() {
        let p = PhysicalParams::natural(1.0, PhysicalParams::v0_for_v8(1.0, 1.0, 1.0, 2.0)).unwrap();
        let i = crate::params::reduce(&p, 1.0).unwrap();
        let a = wavefunctions(&i, &p, 0.6).unwrap();
        let b = wavefunctions(&i, &p, -0.6).unwrap();
        assert!((a.psi_left - b.psi_right).norm() < 1e-14);
        assert!((a.psi_right - b.psi_left).norm() < 1e-14);
    }

    #[test]
    fn free_wave_is_normalized_plane_wave() {
        let p = PhysicalParams::natural(1.0, 0.0).unwrap();
        let k = 0.8;
        let i = crate::params::reduce(&p, k).unwrap();
        let want_sq = p.m / (2.0 * PI * p.hbar * p.hbar * k);
        let w0 = wavefunctions(&i, &p, 0.0).unwrap().psi_right;
        for j in 0..=20 {
            let x = -5.0 + 0.5 * j as f64;
            let w = wavefunctions(&i, &p, x).unwrap();
            assert!((w.psi_right.norm_sqr() - want_sq).abs() < 1e-12 * want_sq, "x={x}");
            let phase = w.psi_right / w0;
            assert!((phase - Complex64::new(0.0, k * x).exp()).norm() < 1e-12);
        }
    }

    #[test]
    fn incident_coefficient_matches_energy_normalization() {
        // energy-normalized states carry |c|^2 = m / (2 pi hbar^2 k) in the incident wave
        for (v8, k, omega) in [(0.5, 0.5, 1.0), (2.0, 1.0, 1.0), (5.0, 3.0, 1.5)] {
            let p = PhysicalParams::natural(omega, PhysicalParams::v0_for_v8(1.0, 1.0, omega, v8)).unwrap();
            let i = crate::params::reduce(&p, k).unwrap();
            let c_inc = incident_coefficient(&i, &p).unwrap();
            let want = 1.0 / (2.0 * PI * k);
            assert!((c_inc.norm_sqr() - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn modulus_normalization_differs_only_for_complex_degree() {
        let p = PhysicalParams::natural(1.0, 0.1).unwrap();
        let weak = idx(0.5, 0.7);
        let a = normalization_with(&weak, &p, NormalizationForm::Continued).unwrap();
        let b = normalization_with(&weak, &p, NormalizationForm::Modulus).unwrap();
        assert!((a - b).abs() < 1e-14 * a);
        let strong = idx(2.0, 1.0);
        let lambda = strong.nu.im;
        let a = normalization_with(&strong, &p, NormalizationForm::Continued).unwrap();
        let b = normalization_with(&strong, &p, NormalizationForm::Modulus).unwrap();
        let want = (PI * (lambda + 1.0)).cosh() / (PI * (lambda - 1.0)).cosh();
        assert!(((b / a).powi(2) - want).abs() < 1e-12 * want);
    }

    #[test]
    fn fit_rejects_bad_samples() {
        let p = PhysicalParams::natural(1.0, 0.25).unwrap();
        let i = crate::params::reduce(&p, 1.0).unwrap();
        let near = asymptotic_samples(&i, &p, 2.0, 1.0, 4).unwrap();
        assert!(matches!(asymptotic_extract(&near, &i, &p), Err(Error::InvalidParameter { .. })));
        let few = asymptotic_samples(&i, &p, 8.0, 1.0, 3).unwrap();
        assert!(asymptotic_extract(&few, &i, &p).is_err());
        // spacing of pi/k makes e^{2ikx} identical at every sample
        let aliased = asymptotic_samples(&i, &p, 8.0, PI, 5).unwrap();
        assert!(matches!(
            asymptotic_extract(&aliased, &i, &p),
            Err(Error::IllConditionedFit { .. })
        ));
    }

    #[test]
    fn transparency_grows_with_energy() {
        for v8 in [0.1, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let t2: Vec<f64> = [0.1, 0.5, 1.0, 2.0, 5.0]
                .iter()
                .map(|&k| amplitudes(&idx(v8, k)).unwrap().t2)
                .collect();
            assert!(t2.windows(2).all(|w| w[1] > w[0]), "v8={v8} {t2:?}");
            let far = amplitudes(&idx(v8, 50.0)).unwrap();
            assert!((far.t2 - 1.0).abs() < 1e-8, "v8={v8} t2={}", far.t2);
        }
    }

    #[test]
    fn asymptotic_fit_recovers_amplitudes() {
        let free = PhysicalParams::natural(1.0, 0.0).unwrap();
        let i = crate::params::reduce(&free, 0.8).unwrap();
        let fit = asymptotic_extract(&asymptotic_samples(&i, &free, 8.0, 0.7, 6).unwrap(), &i, &free).unwrap();
        assert!((fit.amplitudes.t - 1.0).norm() < 1e-8);
        assert!(fit.amplitudes.r.norm() < 1e-8);

        let p = PhysicalParams::natural(1.0, 0.25).unwrap();
        let i = crate::params::reduce(&p, 1.0).unwrap();
        let samples = asymptotic_samples(&i, &p, 12.0, 0.37, 12).unwrap();
        let a = amplitudes(&i).unwrap();
        let right = asymptotic_extract(&samples, &i, &p).unwrap();
        assert!((right.amplitudes.t - a.t).norm() < 1e-6);
        assert!((right.amplitudes.r - a.r).norm() < 1e-6);
        assert!((right.incident - incident_coefficient(&i, &p).unwrap()).norm() < 1e-8);
        let left = asymptotic_extract_left(&samples, &i, &p).unwrap();
        assert!((left.amplitudes.s - a.s).norm() < 1e-8);
    }
}
