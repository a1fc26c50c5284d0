//! Gauss-Legendre rules and an adaptive panel integrator for smooth complex integrands.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> Result<Complex64>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += *w * f(mid + half * x)?;
        }
        Ok(sum * half)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveConfig {
    pub initial_panels: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        AdaptiveConfig {
            initial_panels: 16,
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_depth: 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive integration on `[a, b]` with a 10/20-point Gauss-Legendre pair per
/// panel. Panels are refined by bisection and summed left to right.
pub fn integrate_adaptive<F>(a: f64, b: f64, cfg: &AdaptiveConfig, mut f: F) -> Result<Integral>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::Quadrature {
            reason: format!("invalid interval [{a}, {b}]"),
        });
    }
    let coarse = GaussLegendre::new(10);
    let fine = GaussLegendre::new(20);
    let width = b - a;
    let n0 = cfg.initial_panels.max(1);
    let mut out = Integral {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        evaluations: 0,
    };
    // explicit stack keeps the summation order fixed
    let mut stack: Vec<(f64, f64, u32)> = (0..n0)
        .rev()
        .map(|j| {
            let lo = a + width * j as f64 / n0 as f64;
            let hi = if j + 1 == n0 { b } else { a + width * (j + 1) as f64 / n0 as f64 };
            (lo, hi, 0)
        })
        .collect();
    while let Some((lo, hi, depth)) = stack.pop() {
        let g10 = coarse.integrate(lo, hi, &mut f)?;
        let g20 = fine.integrate(lo, hi, &mut f)?;
        out.evaluations += 30;
        let diff = (g20 - g10).norm();
        let allowed = (cfg.abs_tol * (hi - lo) / width).max(cfg.rel_tol * g20.norm());
        if diff <= allowed {
            out.value += g20;
            out.error += diff;
        } else if depth >= cfg.max_depth {
            return Err(Error::Quadrature {
                reason: format!("no convergence on [{lo}, {hi}] after {depth} bisections (diff {diff:.3e})"),
            });
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(out)
}
