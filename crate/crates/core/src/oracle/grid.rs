use crate::error::{Error, Result};
use crate::params::PhysicalParams;

pub const MIN_GRID_POINTS: usize = 200;
pub const GRID_CONVERGENCE_TOL: f64 = 1e-4;
const QL_MAX_ITER: usize = 60;

/// Eigen-decomposition of the second-order finite-difference Hamiltonian on
/// `[-L, L]` with vanishing boundary values.
///
/// The matrix is tridiagonal, so it is diagonalized with implicit QL and only
/// the eigenvector components at the requested grid nodes are accumulated.
#[derive(Debug, Clone)]
pub struct GridSpectrum {
    pub half_width: f64,
    pub spacing: f64,
    pub points: usize,
    pub energies: Vec<f64>,
    /// `(node, components)` where `components[n]` is the n-th normalized eigenvector at `node`.
    rows: Vec<(usize, Vec<f64>)>,
    hbar: f64,
}

impl GridSpectrum {
    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + (j + 1) as f64 * self.spacing
    }

    /// Builds the Hamiltonian and keeps the eigenvector rows at `nodes`.
    pub fn new(p: &PhysicalParams, half_width: f64, points: usize, nodes: &[usize]) -> Result<Self> {
        p.validate()?;
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::invalid("L", format!("must be > 0, got {half_width}")));
        }
        if points < MIN_GRID_POINTS {
            return Err(Error::invalid("N", format!("need at least {MIN_GRID_POINTS} points, got {points}")));
        }
        let dx = 2.0 * half_width / (points + 1) as f64;
        let kinetic = p.hbar * p.hbar / (2.0 * p.m * dx * dx);
        let mut diag: Vec<f64> = (0..points)
            .map(|j| 2.0 * kinetic + p.potential(-half_width + (j + 1) as f64 * dx))
            .collect();
        let mut off = vec![-kinetic; points];
        off[points - 1] = 0.0;

        let mut nodes: Vec<usize> = nodes.to_vec();
        nodes.sort_unstable();
        nodes.dedup();
        if let Some(&bad) = nodes.iter().find(|&&j| j >= points) {
            return Err(Error::invalid("nodes", format!("node {bad} outside grid of {points}")));
        }
        let mut rows: Vec<(usize, Vec<f64>)> = nodes
            .iter()
            .map(|&j| {
                let mut r = vec![0.0; points];
                r[j] = 1.0;
                (j, r)
            })
            .collect();
        tridiagonal_ql(&mut diag, &mut off, &mut rows)?;
        Ok(GridSpectrum {
            half_width,
            spacing: dx,
            points,
            energies: diag,
            rows,
            hbar: p.hbar,
        })
    }

    fn row(&self, node: usize) -> Option<&[f64]> {
        self.rows
            .binary_search_by_key(&node, |(j, _)| *j)
            .ok()
            .map(|i| self.rows[i].1.as_slice())
    }

    /// Interpolation stencil for `x`: a single node when `x` sits on the grid,
    /// otherwise four-point Lagrange weights.
    pub fn stencil(&self, x: f64) -> Result<Vec<(usize, f64)>> {
        let s = (x + self.half_width) / self.spacing - 1.0;
        if !(s > -1.0 && s < self.points as f64) {
            return Err(Error::invalid("x", format!("{x} is outside (-L, L)")));
        }
        let nearest = s.round();
        if (s - nearest).abs() < 1e-9 && nearest >= 0.0 && (nearest as usize) < self.points {
            return Ok(vec![(nearest as usize, 1.0)]);
        }
        let base = (s.floor() as isize - 1).clamp(0, self.points as isize - 4) as usize;
        let idx: Vec<usize> = (base..base + 4).collect();
        Ok(idx
            .iter()
            .map(|&j| {
                let w = idx
                    .iter()
                    .filter(|&&m| m != j)
                    .map(|&m| (s - m as f64) / (j as f64 - m as f64))
                    .product();
                (j, w)
            })
            .collect())
    }

    /// Nodes whose eigenvector rows are needed to evaluate the kernel at `xs`.
    pub fn nodes_for(p: &PhysicalParams, half_width: f64, points: usize, xs: &[f64]) -> Result<Vec<usize>> {
        let probe = GridSpectrum {
            half_width,
            spacing: 2.0 * half_width / (points + 1) as f64,
            points,
            energies: Vec::new(),
            rows: Vec::new(),
            hbar: p.hbar,
        };
        let mut out = Vec::new();
        for &x in xs {
            out.extend(probe.stencil(x)?.into_iter().map(|(j, _)| j));
        }
        Ok(out)
    }

    fn interpolated_row(&self, x: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.points];
        for (j, w) in self.stencil(x)? {
            let row = self
                .row(j)
                .ok_or_else(|| Error::invalid("x", format!("node {j} for x = {x} was not retained")))?;
            for (o, v) in out.iter_mut().zip(row) {
                *o += w * v;
            }
        }
        Ok(out)
    }

    /// `sum_n e^{-E_n tau / hbar} phi_n(xf) phi_n(xi)` with continuum-normalized `phi_n`.
    pub fn kernel(&self, tau: f64, xf: f64, xi: f64) -> Result<f64> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::invalid("tau", format!("must be > 0, got {tau}")));
        }
        let rf = self.interpolated_row(xf)?;
        let ri = self.interpolated_row(xi)?;
        let sum: f64 = self
            .energies
            .iter()
            .zip(rf.iter().zip(&ri))
            .map(|(e, (a, b))| (-e * tau / self.hbar).exp() * (a * b))
            .sum();
        Ok(sum / self.spacing)
    }

    /// Full eigenvectors are not kept; this returns `(E_n, phi_n)` for tests on small grids
    /// where every node was retained.
    pub fn eigenpair(&self, n: usize) -> Option<(f64, Vec<f64>)> {
        if self.rows.len() != self.points {
            return None;
        }
        Some((self.energies[n], self.rows.iter().map(|(_, r)| r[n]).collect()))
    }
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
/// `off[i]` couples `i` and `i + 1`; on return `diag` holds the eigenvalues and
/// each tracked row `(j, r)` holds `r[n] = (eigenvector n)_j`.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], rows: &mut [(usize, Vec<f64>)]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::GridNotConverged {
                    points: n,
                    change: f64::NAN,
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut shift) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= shift;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - shift;
                r = (diag[i] - g) * s + 2.0 * c * b;
                shift = s * r;
                diag[i + 1] = g + shift;
                g = c * r - b;
                for (_, row) in rows.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            diag[l] -= shift;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

/// Euclidean propagator from the grid Hamiltonian at `N` and `2N + 1` points
/// (spacing halved), combined by Richardson extrapolation.
#[derive(Debug, Clone)]
pub struct GridPropagator {
    coarse: GridSpectrum,
    fine: GridSpectrum,
}

impl GridPropagator {
    /// Prepares both grids for kernel queries at any pair drawn from `xs`.
    pub fn new(p: &PhysicalParams, half_width: f64, points: usize, xs: &[f64]) -> Result<Self> {
        let fine_points = 2 * points + 1;
        let coarse_nodes = GridSpectrum::nodes_for(p, half_width, points, xs)?;
        let fine_nodes = GridSpectrum::nodes_for(p, half_width, fine_points, xs)?;
        let (coarse, fine) = rayon::join(
            || GridSpectrum::new(p, half_width, points, &coarse_nodes),
            || GridSpectrum::new(p, half_width, fine_points, &fine_nodes),
        );
        Ok(GridPropagator {
            coarse: coarse?,
            fine: fine?,
        })
    }

    pub fn kernel(&self, tau: f64, xf: f64, xi: f64) -> Result<f64> {
        let k1 = self.coarse.kernel(tau, xf, xi)?;
        let k2 = self.fine.kernel(tau, xf, xi)?;
        let change = (k2 - k1).abs() / k2.abs();
        if !(change <= GRID_CONVERGENCE_TOL) {
            return Err(Error::GridNotConverged {
                points: self.coarse.points,
                change,
            });
        }
        // second order in the spacing
        Ok((4.0 * k2 - k1) / 3.0)
    }
}

pub fn grid_propagator(
    p: &PhysicalParams,
    half_width: f64,
    points: usize,
    tau: f64,
    xf: f64,
    xi: f64,
) -> Result<f64> {
    GridPropagator::new(p, half_width, points, &[xf, xi])?.kernel(tau, xf, xi)
}
