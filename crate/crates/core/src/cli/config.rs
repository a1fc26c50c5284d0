use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::oracle::SolverConfig;
use crate::params::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Units {
    pub hbar: f64,
    pub m: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units { hbar: 1.0, m: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Barrier {
    pub omega: f64,
    pub v0: f64,
}

impl Default for Barrier {
    fn default() -> Self {
        Barrier { omega: 1.0, v0: 0.25 }
    }
}

/// Inclusive, evenly spaced `start..=stop` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let step = (self.stop - self.start) / (n - 1) as f64;
                (0..n)
                    .map(|j| if j == n - 1 { self.stop } else { self.start + step * j as f64 })
                    .collect()
            }
        }
    }
}

impl FromStr for Range {
    type Err = String;

    /// Parses `a:b:n`.
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:count, got `{s}`"));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("`{}`: {e}", parts[2]))?;
        let r = Range {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            count,
        };
        r.check()?;
        Ok(r)
    }
}

impl Range {
    pub fn check(&self) -> Result<(), String> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if self.count == 0 {
            return Err("range count must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub k_values: Option<Vec<f64>>,
    pub k_range: Option<Range>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveSettings {
    pub x_range: Range,
}

impl Default for WaveSettings {
    fn default() -> Self {
        WaveSettings {
            x_range: Range {
                start: -10.0,
                stop: 10.0,
                count: 201,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagatorSettings {
    pub tau: f64,
    /// Every ordered pair `(xf, xi)` drawn from this list is evaluated.
    pub points: Vec<f64>,
    pub grid_half_width: Option<f64>,
    pub grid_points: Option<usize>,
}

impl Default for PropagatorSettings {
    fn default() -> Self {
        PropagatorSettings {
            tau: 1.0,
            points: vec![-0.5, 0.0, 0.5],
            grid_half_width: None,
            grid_points: None,
        }
    }
}

/// Everything a run needs; every field may be omitted from the JSON file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub units: Units,
    pub barrier: Barrier,
    pub sweep: Sweep,
    pub outputs: Outputs,
    pub checks: Vec<String>,
    pub oracle: SolverConfig,
    pub wavefunction: WaveSettings,
    pub propagator: PropagatorSettings,
}

pub const DEFAULT_K_RANGE: Range = Range {
    start: 0.1,
    stop: 5.0,
    count: 50,
};

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("config: {e}"))
    }

    pub fn params(&self) -> Result<PhysicalParams, String> {
        PhysicalParams::new(self.units.m, self.units.hbar, self.barrier.omega, self.barrier.v0)
            .map_err(|e| e.to_string())
    }

    /// Wavenumbers of the sweep, in input order.
    pub fn k_values(&self) -> Result<Vec<f64>, String> {
        let ks = match (&self.sweep.k_values, &self.sweep.k_range) {
            (Some(_), Some(_)) => return Err("sweep: give either k_values or k_range, not both".into()),
            (Some(v), None) => v.clone(),
            (None, Some(r)) => {
                r.check()?;
                r.values()
            }
            (None, None) => DEFAULT_K_RANGE.values(),
        };
        if ks.is_empty() {
            return Err("sweep: no wavenumbers".into());
        }
        if let Some(k) = ks.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
            return Err(format!("sweep: wavenumbers must be finite and >= 0, got {k}"));
        }
        Ok(ks)
    }

    pub fn format_or(&self, fallback: Format) -> Format {
        self.outputs.format.unwrap_or(fallback)
    }
}
