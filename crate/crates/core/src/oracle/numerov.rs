use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::scattering::Amplitudes;

/// Plane waves the Numerov solution is seeded with and matched against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchBasis {
    /// `e^{+-ik'x}` with `k'` the wavenumber the Numerov recursion actually
    /// propagates in a force-free region; free motion is then exact.
    Discrete,
    /// Continuum plane waves `e^{+-ikx}`; the free-propagation phase error
    /// of the scheme shows up in `T` at fourth order in `h`.
    Continuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Half width `L` of the integration box; derived from `k`, `omega` and
    /// `tail_threshold` when unset.
    pub box_half_width: Option<f64>,
    /// Initial step `h`; `min(2 pi / (40 k), 1 / (40 omega))` when unset.
    pub step: Option<f64>,
    /// Largest accepted Richardson estimate of the remaining error in `T` and `R`.
    pub match_tolerance: f64,
    /// Number of times `h` may be halved while chasing `match_tolerance`.
    pub max_refinements: u32,
    /// Bound on `V(L) / E` at the box edge.
    pub tail_threshold: f64,
    pub basis: MatchBasis,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            box_half_width: None,
            step: None,
            match_tolerance: 1e-13,
            max_refinements: 8,
            tail_threshold: 1e-17,
            basis: MatchBasis::Discrete,
        }
    }
}

impl SolverConfig {
    pub fn box_for(&self, p: &PhysicalParams, k: f64) -> Result<f64> {
        let energy = p.energy(k);
        let l = match self.box_half_width {
            Some(l) => {
                if !(l.is_finite() && l > 0.0) {
                    return Err(Error::invalid("box_half_width", format!("must be > 0, got {l}")));
                }
                l
            }
            None => {
                let base = (10.0 / p.omega).max(10.0 / k);
                // 4 V0 e^{-2 omega L} / E <= tail_threshold / 8, leaving room
                // for the second matching point up to 1 / (2 omega) inside
                let tail = if p.v0 > 0.0 {
                    (32.0 * p.v0 / (energy * self.tail_threshold)).ln() / (2.0 * p.omega)
                } else {
                    0.0
                };
                base.max(tail)
            }
        };
        let ratio = p.potential(l) / energy;
        if !(ratio <= self.tail_threshold) {
            return Err(Error::invalid(
                "box_half_width",
                format!("V(L)/E = {ratio:.3e} exceeds tail threshold {:.3e}", self.tail_threshold),
            ));
        }
        Ok(l)
    }

    pub fn step_for(&self, p: &PhysicalParams, k: f64) -> Result<f64> {
        match self.step {
            Some(h) if h.is_finite() && h > 0.0 => Ok(h),
            Some(h) => Err(Error::invalid("step", format!("must be > 0, got {h}"))),
            None => Ok((2.0 * std::f64::consts::PI / (40.0 * k)).min(1.0 / (40.0 * p.omega))),
        }
    }
}

/// Transmission and reflection amplitudes from direct integration of the
/// stationary Schrodinger equation.
///
/// The equation is integrated from `x = +L`, where only the transmitted wave is
/// present, back to `x = -L`, and the solution there is split into incident
/// and reflected plane waves using two grid values near `-L`. `h` is halved
/// until the Richardson error estimate drops below `match_tolerance`; the
/// returned amplitudes are the extrapolated ones.
pub fn numerov_amplitudes(p: &PhysicalParams, k: f64, cfg: &SolverConfig) -> Result<Amplitudes> {
    p.validate()?;
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::invalid("k", format!("must be finite and > 0, got {k}")));
    }
    if !(cfg.match_tolerance > 0.0) {
        return Err(Error::invalid("match_tolerance", "must be > 0"));
    }
    let l = cfg.box_for(p, k)?;
    let mut h = cfg.step_for(p, k)?;
    let mut coarse = integrate(p, k, l, h, cfg.basis)?;
    let mut deviation = f64::INFINITY;
    for _ in 0..=cfg.max_refinements {
        h *= 0.5;
        let fine = integrate(p, k, l, h, cfg.basis)?;
        // fourth-order scheme: error of the fine solve ~ (fine - coarse) / 15
        let dt = (fine.0 - coarse.0) / 15.0;
        let dr = (fine.1 - coarse.1) / 15.0;
        deviation = dt.norm().max(dr.norm());
        if deviation <= cfg.match_tolerance {
            return Ok(Amplitudes::new(k / p.omega, fine.0 + dt, fine.1 + dr));
        }
        coarse = fine;
    }
    Err(Error::StepTooCoarse {
        step: h,
        deviation,
        tolerance: cfg.match_tolerance,
    })
}

/// One Numerov solve at fixed `h`; returns `(T, R)`.
pub fn integrate(p: &PhysicalParams, k: f64, l: f64, h: f64, basis: MatchBasis) -> Result<(Complex64, Complex64)> {
    let n = (2.0 * l / h).ceil().max(4.0) as usize;
    let h = 2.0 * l / n as f64;
    let h2 = h * h / 12.0;
    let scale = 2.0 * p.m / (p.hbar * p.hbar);
    let energy = p.energy(k);
    let force = |x: f64| scale * (p.potential(x) - energy);

    let kw = match basis {
        MatchBasis::Continuum => k,
        MatchBasis::Discrete => {
            // (1 + h^2 k^2/12)(y+ + y-) = 2 (1 - 5 h^2 k^2/12) y, so
            // 1 - cos(k'h) = 6 q / (1 + q) with q = h^2 k^2 / 12
            let q = h2 * k * k;
            let half = 3.0 * q / (1.0 + q);
            if half >= 1.0 {
                return Err(Error::StepTooCoarse {
                    step: h,
                    deviation: half,
                    tolerance: 1.0,
                });
            }
            2.0 * half.sqrt().asin() / h
        }
    };
    let wave = |x: f64| Complex64::new(0.0, kw * x).exp();

    // matching abscissae x_0 and x_m, up to a quarter wavelength apart but
    // no further than 1 / (2 omega) so that both stay in the force-free tail
    let m = ((std::f64::consts::FRAC_PI_2 / kw).min(0.5 / p.omega) / h).floor().clamp(1.0, (n / 2) as f64) as usize;

    // y[j] at x_j = -L + j h, walking j downward from n. With z = w y the
    // recursion reads z[j-1] - z[j] = (z[j] - z[j+1]) + h^2 f[j] y[j]; carrying
    // the difference keeps roundoff from growing like 1 / (k h).
    let x_at = |j: usize| -l + j as f64 * h;
    let hh = h * h;
    let w_n = 1.0 - h2 * force(x_at(n));
    let w_cur = 1.0 - h2 * force(x_at(n - 1));
    let y_n = wave(x_at(n));
    let mut y_cur = wave(x_at(n - 1));
    // y[n-1] - y[n] = e^{ikx_n} (e^{-ikh} - 1), formed without cancellation
    let th = kw * h;
    let step_back = Complex64::new(-2.0 * (0.5 * th).sin().powi(2), -th.sin());
    let mut z_cur = Compensated::new(w_cur * y_cur);
    let mut diff = Compensated::new(w_cur * (y_n * step_back) + (w_cur - w_n) * y_n);
    let mut y_m = y_cur;
    for j in (0..n - 1).rev() {
        let f_cur = force(x_at(j + 1));
        diff.add(hh * f_cur * y_cur);
        z_cur.add(diff.value());
        y_cur = z_cur.value() / (1.0 - h2 * force(x_at(j)));
        if j == m {
            y_m = y_cur;
        }
    }
    // solve A e^{ikx} + B e^{-ikx} = y at x_0 and x_m
    let (e0, e1) = (wave(x_at(0)), wave(x_at(m)));
    let det = e0 / e1 - e1 / e0;
    let a = (y_cur / e1 - y_m / e0) / det;
    let b = (e0 * y_m - e1 * y_cur) / det;
    Ok((1.0 / a, b / a))
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy)]
struct Compensated {
    sum: Complex64,
    carry: Complex64,
}

impl Compensated {
    fn new(start: Complex64) -> Self {
        Compensated {
            sum: start,
            carry: Complex64::new(0.0, 0.0),
        }
    }

    fn add(&mut self, v: Complex64) {
        let (re, cre) = two_sum(self.sum.re, v.re);
        let (im, cim) = two_sum(self.sum.im, v.im);
        self.sum = Complex64::new(re, im);
        self.carry += Complex64::new(cre, cim);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_motion_is_exact_in_discrete_basis() {
        let p = PhysicalParams::natural(1.0, 0.0).unwrap();
        for k in [0.2, 1.0, 3.0] {
            let a = numerov_amplitudes(&p, k, &SolverConfig::default()).unwrap();
            assert!((a.t - 1.0).norm() < 1e-10, "k={k} t={}", a.t);
            assert!(a.r.norm() < 1e-10);
        }
    }

    #[test]
    fn box_respects_tail_threshold() {
        let p = PhysicalParams::natural(1.0, 2.5).unwrap();
        let cfg = SolverConfig::default();
        let l = cfg.box_for(&p, 5.0).unwrap();
        assert!(p.potential(l) / p.energy(5.0) <= cfg.tail_threshold);
        let short = SolverConfig {
            box_half_width: Some(3.0),
            ..cfg
        };
        assert!(short.box_for(&p, 5.0).is_err());
    }

    #[test]
    fn refuses_impossible_tolerance() {
        let p = PhysicalParams::natural(1.0, 0.25).unwrap();
        let cfg = SolverConfig {
            match_tolerance: 1e-30,
            max_refinements: 1,
            ..SolverConfig::default()
        };
        assert!(matches!(numerov_amplitudes(&p, 1.0, &cfg), Err(Error::StepTooCoarse { .. })));
        assert!(numerov_amplitudes(&p, 0.0, &SolverConfig::default()).is_err());
    }

    #[test]
    fn fourth_order_in_continuum_basis() {
        let p = PhysicalParams::natural(1.0, 0.0).unwrap();
        let err = |h: f64| (integrate(&p, 1.0, 10.0, h, MatchBasis::Continuum).unwrap().0 - 1.0).norm();
        let (e1, e2) = (err(0.1), err(0.05));
        let order = (e1 / e2).log2();
        assert!(order >= 3.8, "observed order {order} ({e1:e}, {e2:e})");
    }

    #[test]
    fn narrow_barrier_approaches_delta_limit() {
        // hbar = 2m = 1, V0 = hbar^2 g omega / 4m with g = 2, k = 1
        let omega = 200.0;
        let p = PhysicalParams::new(0.5, 1.0, omega, omega).unwrap();
        let a = numerov_amplitudes(&p, 1.0, &SolverConfig::default()).unwrap();
        let delta = Complex64::new(2.0, 0.0) / Complex64::new(2.0, 2.0);
        assert!((a.t - delta).norm() < 2.0 / omega, "t={} delta={delta}", a.t);
    }

    #[test]
    fn conserves_flux() {
        for (v0, k) in [(0.25, 1.0), (2.5, 0.5), (0.0125, 2.0)] {
            let p = PhysicalParams::natural(1.0, v0).unwrap();
            let a = numerov_amplitudes(&p, k, &SolverConfig::default()).unwrap();
            assert!((a.t2 + a.r2 - 1.0).abs() < 1e-8, "v0={v0} k={k}");
        }
    }
}
