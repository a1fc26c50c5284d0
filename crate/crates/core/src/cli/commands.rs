use num_complex::Complex64;
use rayon::prelude::*;

use super::config::RunConfig;
use super::table::{Cell, Table};
use crate::oracle::{numerov_amplitudes, GridPropagator, SolverConfig, MIN_GRID_POINTS};
use crate::params::{reduce, PhysicalParams};
use crate::propagator::{free_kernel, spectral_kernel};
use crate::scattering::{
    amplitudes, asymptotic_extract, asymptotic_psi_right, wavefunctions, WaveSample, ASYMPTOTIC_MIN_OMEGA_X,
};

/// Scatter rows pass when the unitarity residual is below this.
pub const SCATTER_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    /// A check on the row failed (exit 1).
    Failed,
    /// The library returned an error for the row (exit 3).
    Numerical,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::Numerical => 3,
        }
    }
}

pub struct Output {
    pub table: Table,
    pub status: Status,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

const NAN: f64 = f64::NAN;

fn complex_cells(z: Complex64) -> [Cell; 2] {
    [z.re.into(), z.im.into()]
}

struct ScatterRow {
    cells: Vec<Cell>,
    status: Status,
    note: Option<String>,
}

fn scatter_row(p: &PhysicalParams, k: f64, oracle: Option<&SolverConfig>) -> ScatterRow {
    let kappa = k / p.omega;
    let mut cells: Vec<Cell> = vec![k.into(), kappa.into(), p.v8().into()];
    let width = if oracle.is_some() { 18 } else { 13 };
    let fail = |mut cells: Vec<Cell>, err: String| {
        cells.resize(width - 1, NAN.into());
        cells.push("error".into());
        ScatterRow {
            cells,
            status: Status::Numerical,
            note: Some(format!("k = {k}: {err}")),
        }
    };

    if k == 0.0 {
        // zero-energy limit: total reflection, unless there is no barrier at all
        let (t, r) = if p.v0 == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0))
        };
        cells.extend(complex_cells(t));
        cells.extend(complex_cells(r));
        cells.extend([t.norm_sqr().into(), r.norm_sqr().into()]);
        cells.extend(complex_cells(t + r));
        cells.push(0.0.into());
        if oracle.is_some() {
            cells.extend([NAN.into(), NAN.into(), NAN.into(), NAN.into(), NAN.into()]);
        }
        cells.push("limit".into());
        return ScatterRow {
            cells,
            status: Status::Ok,
            note: None,
        };
    }

    let a = match reduce(p, k).and_then(|idx| amplitudes(&idx)) {
        Ok(a) => a,
        Err(e) => return fail(cells, e.to_string()),
    };
    let residual = a.unitarity_residual();
    cells.extend(complex_cells(a.t));
    cells.extend(complex_cells(a.r));
    cells.extend([a.t2.into(), a.r2.into()]);
    cells.extend(complex_cells(a.s));
    cells.push(residual.into());
    let status = if residual < SCATTER_RESIDUAL_TOL {
        Status::Ok
    } else {
        Status::Failed
    };
    if let Some(solver) = oracle {
        match numerov_amplitudes(p, k, solver) {
            Ok(n) => {
                cells.extend(complex_cells(n.t));
                cells.extend(complex_cells(n.r));
                cells.push((a.t - n.t).norm().max((a.r - n.r).norm()).into());
            }
            Err(e) => return fail(cells, format!("oracle: {e}")),
        }
    }
    cells.push(if status == Status::Ok { "ok" } else { "unitarity" }.into());
    ScatterRow {
        cells,
        status,
        note: None,
    }
}

pub fn scatter(cfg: &RunConfig, with_oracle: bool) -> Result<Output, String> {
    let p = cfg.params()?;
    let ks = cfg.k_values()?;
    let mut columns = vec![
        "k",
        "kappa",
        "v8",
        "re_t",
        "im_t",
        "re_r",
        "im_r",
        "t2",
        "r2",
        "re_s",
        "im_s",
        "unitarity_residual",
    ];
    if with_oracle {
        columns.extend(["re_t_oracle", "im_t_oracle", "re_r_oracle", "im_r_oracle", "oracle_max_dev"]);
    }
    columns.push("status");
    let oracle = with_oracle.then_some(&cfg.oracle);
    let rows: Vec<ScatterRow> = ks.par_iter().map(|&k| scatter_row(&p, k, oracle)).collect();
    Ok(collect(columns, rows.into_iter().map(|r| (r.cells, r.status, r.note))))
}

fn collect(columns: Vec<&'static str>, rows: impl Iterator<Item = (Vec<Cell>, Status, Option<String>)>) -> Output {
    let mut table = Table::new(columns);
    let mut status = Status::Ok;
    let mut notes = Vec::new();
    for (cells, s, note) in rows {
        table.push(cells);
        status = status.max(s);
        notes.extend(note);
    }
    Output { table, status, notes }
}

pub fn wavefunction(cfg: &RunConfig) -> Result<Output, String> {
    let p = cfg.params()?;
    let ks = cfg.k_values()?;
    cfg.wavefunction.x_range.check()?;
    let xs = cfg.wavefunction.x_range.values();
    let columns = vec![
        "k",
        "x",
        "re_psi_right",
        "im_psi_right",
        "re_psi_left",
        "im_psi_left",
        "re_asymptotic",
        "im_asymptotic",
        "status",
    ];
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for &k in &ks {
        let idx = match reduce(&p, k) {
            Ok(idx) if k > 0.0 => idx,
            Ok(_) => {
                notes.push(format!("k = {k}: scattering states need k > 0"));
                for &x in &xs {
                    let mut cells: Vec<Cell> = vec![k.into(), x.into()];
                    cells.extend(std::iter::repeat_with(|| NAN.into()).take(6));
                    cells.push("error".into());
                    rows.push((cells, Status::Numerical, None));
                }
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        let samples: Vec<Result<(WaveSample, Option<Complex64>), String>> = xs
            .par_iter()
            .map(|&x| {
                let s = wavefunctions(&idx, &p, x).map_err(|e| format!("k = {k}, x = {x}: {e}"))?;
                let asym = if (p.omega * x).abs() >= ASYMPTOTIC_MIN_OMEGA_X {
                    Some(asymptotic_psi_right(&idx, &p, x).map_err(|e| e.to_string())?)
                } else {
                    None
                };
                Ok((s, asym))
            })
            .collect();
        let mut good = Vec::new();
        for (&x, res) in xs.iter().zip(samples) {
            let mut cells: Vec<Cell> = vec![k.into(), x.into()];
            match res {
                Ok((s, asym)) => {
                    cells.extend(complex_cells(s.psi_right));
                    cells.extend(complex_cells(s.psi_left));
                    cells.extend(complex_cells(asym.unwrap_or(Complex64::new(NAN, NAN))));
                    cells.push("ok".into());
                    rows.push((cells, Status::Ok, None));
                    if asym.is_some() {
                        good.push(s);
                    }
                }
                Err(e) => {
                    cells.extend(std::iter::repeat_with(|| NAN.into()).take(6));
                    cells.push("error".into());
                    rows.push((cells, Status::Numerical, Some(e)));
                }
            }
        }
        match asymptotic_extract(&good, &idx, &p) {
            Ok(fit) => {
                let dev = amplitudes(&idx)
                    .map(|a| (a.t - fit.amplitudes.t).norm().max((a.r - fit.amplitudes.r).norm()))
                    .unwrap_or(NAN);
                notes.push(format!(
                    "k = {k}: asymptotic fit T = {:.10e}{:+.10e}i, R = {:.10e}{:+.10e}i, rms residual {:.3e}, max deviation from closed form {:.3e}",
                    fit.amplitudes.t.re, fit.amplitudes.t.im, fit.amplitudes.r.re, fit.amplitudes.r.im, fit.residual, dev
                ));
            }
            Err(e) => notes.push(format!("k = {k}: no asymptotic fit ({e})")),
        }
    }
    let mut out = collect(columns, rows.into_iter());
    notes.append(&mut out.notes);
    out.notes = notes;
    Ok(out)
}

/// Box and point count for the grid oracle when the config leaves them open.
pub fn grid_defaults(p: &PhysicalParams, tau: f64, points: &[f64]) -> (f64, usize) {
    let diffusion = (p.hbar * tau / p.m).sqrt();
    let reach = points.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let half_width = (12.0 / p.omega).max(reach + 10.0 * diffusion);
    let spacing = (1.0 / p.omega).min(diffusion) / 60.0;
    let n = ((2.0 * half_width / spacing).ceil() as usize).saturating_sub(1);
    (half_width, n.max(MIN_GRID_POINTS))
}

pub fn propagator(cfg: &RunConfig) -> Result<Output, String> {
    let p = cfg.params()?;
    let s = &cfg.propagator;
    if !(s.tau.is_finite() && s.tau > 0.0) {
        return Err(format!("propagator: tau must be finite and > 0, got {}", s.tau));
    }
    if s.points.is_empty() || s.points.iter().any(|x| !x.is_finite()) {
        return Err("propagator: points must be a non-empty list of finite positions".into());
    }
    let (l_default, n_default) = grid_defaults(&p, s.tau, &s.points);
    let half_width = s.grid_half_width.unwrap_or(l_default);
    let n = s.grid_points.unwrap_or(n_default);
    let grid = GridPropagator::new(&p, half_width, n, &s.points);

    let pairs: Vec<(f64, f64)> = s
        .points
        .iter()
        .flat_map(|&xf| s.points.iter().map(move |&xi| (xf, xi)))
        .collect();
    let columns = vec![
        "xf",
        "xi",
        "tau",
        "k_spectral",
        "k_oracle",
        "rel_dev",
        "k_free",
        "quad_error",
        "status",
    ];
    let rows: Vec<_> = pairs
        .par_iter()
        .map(|&(xf, xi)| {
            let mut notes = Vec::new();
            let spectral = spectral_kernel(&p, xf, xi, s.tau);
            let oracle = grid
                .as_ref()
                .map_err(|e| e.clone())
                .and_then(|g| g.kernel(s.tau, xf, xi));
            let (ks, qe) = match &spectral {
                Ok(v) => (v.value, v.quad_error),
                Err(e) => {
                    notes.push(format!("({xf}, {xi}): spectral: {e}"));
                    (NAN, NAN)
                }
            };
            let ko = match &oracle {
                Ok(v) => *v,
                Err(e) => {
                    notes.push(format!("({xf}, {xi}): oracle: {e}"));
                    NAN
                }
            };
            let status = if spectral.is_ok() && oracle.is_ok() {
                Status::Ok
            } else {
                Status::Numerical
            };
            let cells: Vec<Cell> = vec![
                xf.into(),
                xi.into(),
                s.tau.into(),
                ks.into(),
                ko.into(),
                ((ks - ko).abs() / ko.abs()).into(),
                free_kernel(p.m, p.hbar, xf, xi, s.tau).into(),
                qe.into(),
                if status == Status::Ok { "ok" } else { "error" }.into(),
            ];
            (cells, status, (!notes.is_empty()).then(|| notes.join("; ")))
        })
        .collect();
    Ok(collect(columns, rows.into_iter()))
}
