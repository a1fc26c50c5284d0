//! Physical inputs and the dimensionless groups derived from them.
//!
//! Everything downstream depends on the barrier only through
//! `v8 = 8 m V0 / (hbar^2 omega^2)` and on the energy only through
//! `kappa = k / omega`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mass, reduced Planck constant, width parameter and height of the barrier
/// `V(x) = v0 / cosh^2(omega x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m: f64,
    pub hbar: f64,
    pub omega: f64,
    pub v0: f64,
}

impl PhysicalParams {
    pub fn new(m: f64, hbar: f64, omega: f64, v0: f64) -> Result<Self> {
        let p = PhysicalParams { m, hbar, omega, v0 };
        p.validate()?;
        Ok(p)
    }

    /// Units with `hbar = m = 1`.
    pub fn natural(omega: f64, v0: f64) -> Result<Self> {
        Self::new(1.0, 1.0, omega, v0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("m", self.m), ("hbar", self.hbar), ("omega", self.omega)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {value}")));
            }
        }
        if !self.v0.is_finite() || self.v0 < 0.0 {
            return Err(Error::invalid(
                "v0",
                format!("must be finite and >= 0, got {}", self.v0),
            ));
        }
        Ok(())
    }

    pub fn v8(&self) -> f64 {
        8.0 * self.m * self.v0 / (self.hbar * self.hbar * self.omega * self.omega)
    }

    /// Barrier height that produces the requested `v8` for the other three fields.
    pub fn v0_for_v8(m: f64, hbar: f64, omega: f64, v8: f64) -> f64 {
        v8 * hbar * hbar * omega * omega / (8.0 * m)
    }

    pub fn energy(&self, k: f64) -> f64 {
        self.hbar * self.hbar * k * k / (2.0 * self.m)
    }

    pub fn potential(&self, x: f64) -> f64 {
        let c = (self.omega * x).cosh();
        self.v0 / (c * c)
    }
}

/// Legendre degree `nu` and order `mu = i kappa` for one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierIndex {
    pub kappa: f64,
    pub v8: f64,
    pub nu: Complex64,
    pub mu: Complex64,
}

impl BarrierIndex {
    /// Builds the index straight from the dimensionless groups.
    pub fn from_dimensionless(v8: f64, kappa: f64) -> Result<Self> {
        if !v8.is_finite() || v8 < 0.0 {
            return Err(Error::invalid("v8", format!("must be finite and >= 0, got {v8}")));
        }
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(Error::invalid(
                "kappa",
                format!("must be finite and >= 0, got {kappa}"),
            ));
        }
        Ok(BarrierIndex {
            kappa,
            v8,
            nu: degree(v8),
            mu: Complex64::new(0.0, kappa),
        })
    }

    /// Index with an explicitly chosen degree; `v8` is recomputed from
    /// `nu (nu + 1) = -v8 / 4`.
    pub fn from_degree(nu: Complex64, kappa: f64) -> Result<Self> {
        if !(nu.re.is_finite() && nu.im.is_finite()) {
            return Err(Error::invalid("nu", "must be finite"));
        }
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(Error::invalid(
                "kappa",
                format!("must be finite and >= 0, got {kappa}"),
            ));
        }
        Ok(BarrierIndex {
            kappa,
            v8: (-4.0 * nu * (nu + 1.0)).re,
            nu,
            mu: Complex64::new(0.0, kappa),
        })
    }

    /// The same index on the other square-root branch, `nu -> -1 - nu`.
    pub fn other_branch(&self) -> Self {
        BarrierIndex {
            nu: -1.0 - self.nu,
            ..*self
        }
    }

    pub fn is_free(&self) -> bool {
        self.nu == Complex64::new(0.0, 0.0)
    }
}

/// `nu = (-1 + sqrt(1 - v8)) / 2` on the principal branch.
fn degree(v8: f64) -> Complex64 {
    let d = 1.0 - v8;
    if d >= 0.0 {
        Complex64::new(0.5 * (-1.0 + d.sqrt()), 0.0)
    } else {
        Complex64::new(-0.5, 0.5 * (-d).sqrt())
    }
}

pub fn reduce(p: &PhysicalParams, k: f64) -> Result<BarrierIndex> {
    p.validate()?;
    if !k.is_finite() {
        return Err(Error::invalid("k", "must be finite"));
    }
    if k < 0.0 {
        return Err(Error::invalid("k", format!("must be >= 0, got {k}")));
    }
    BarrierIndex::from_dimensionless(p.v8(), k / p.omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_particle_has_zero_degree() {
        let p = PhysicalParams::natural(1.3, 0.0).unwrap();
        for k in [0.0, 0.2, 7.0] {
            let idx = reduce(&p, k).unwrap();
            assert_eq!(idx.nu, Complex64::new(0.0, 0.0));
            assert!(idx.is_free());
        }
    }

    #[test]
    fn critical_and_strong_barriers() {
        let idx = BarrierIndex::from_dimensionless(1.0, 0.5).unwrap();
        assert_eq!(idx.nu, Complex64::new(-0.5, 0.0));
        let idx = BarrierIndex::from_dimensionless(2.0, 0.5).unwrap();
        assert_eq!(idx.nu, Complex64::new(-0.5, 0.5));
        assert_eq!(idx.mu, Complex64::new(0.0, 0.5));
    }

    #[test]
    fn degree_satisfies_quadratic_and_conjugation() {
        for v8 in [0.0, 0.1, 0.5, 0.99, 1.0, 1.01, 2.0, 5.0, 20.0, 1e4] {
            let nu = BarrierIndex::from_dimensionless(v8, 1.0).unwrap().nu;
            let lhs = nu * (nu + 1.0);
            let err = (lhs + v8 / 4.0).norm() / (v8 / 4.0).max(1e-300);
            assert!(v8 == 0.0 || err < 1e-14, "v8={v8} err={err}");
            if v8 < 1.0 {
                assert_eq!(nu.im, 0.0);
                assert!(nu.re > -0.5 && nu.re <= 0.0);
            }
            if v8 > 1.0 {
                assert_eq!(nu.re, -0.5);
                assert!((1.0 + nu.conj() + nu).norm() < 1e-14);
                assert!(nu.im > 0.0);
            }
        }
    }

    #[test]
    fn index_depends_only_on_dimensionless_groups() {
        let a = PhysicalParams::new(1.0, 1.0, 2.0, 1.0).unwrap();
        // scale m by 3 and v0 by 1/3, hbar by 2 and v0 by 4, omega by 5 and v0 by 25
        let b = PhysicalParams::new(3.0, 2.0, 10.0, 1.0 / 3.0 * 4.0 * 25.0).unwrap();
        assert!((a.v8() - b.v8()).abs() < 1e-14 * a.v8());
        let ia = reduce(&a, 1.4).unwrap();
        let ib = reduce(&b, 7.0).unwrap();
        assert!((ia.kappa - ib.kappa).abs() < 1e-15);
        assert!((ia.nu - ib.nu).norm() < 1e-14);
        assert!((ia.mu - ib.mu).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = PhysicalParams::natural(1.0, 1.0).unwrap();
        assert!(reduce(&p, -0.1).is_err());
        assert!(reduce(&p, f64::NAN).is_err());
        assert!(reduce(&p, f64::INFINITY).is_err());
        assert!(PhysicalParams::natural(0.0, 1.0).is_err());
        assert!(PhysicalParams::natural(1.0, -1.0).is_err());
        assert!(PhysicalParams::new(f64::NAN, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn other_branch_round_trips() {
        let idx = BarrierIndex::from_dimensionless(0.5, 0.3).unwrap();
        let back = idx.other_branch().other_branch();
        assert!((back.nu - idx.nu).norm() < 1e-16);
        let from = BarrierIndex::from_degree(idx.other_branch().nu, 0.3).unwrap();
        assert!((from.v8 - 0.5).abs() < 1e-14);
    }
}
