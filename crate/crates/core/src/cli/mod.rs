//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad arguments or config,
//! 3 numerical failure in at least one row.

pub mod commands;
pub mod config;
pub mod table;
pub mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::Output;
use config::{Format, Range, RunConfig};
use table::Table;
use verify::{run_suite, SuiteReport, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "COSHBAR_THREADS";

#[derive(Debug, Parser)]
#[command(name = "coshbar", version, about = "Scattering off the V0/cosh^2(omega x) barrier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mass: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
    /// Wavenumber; repeat or separate with commas for several.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "k_range")]
    pub k: Vec<f64>,
    /// Wavenumber sweep `start:stop:count`, end points included.
    #[arg(long, allow_hyphen_values = true)]
    pub k_range: Option<Range>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transmission and reflection amplitudes over a wavenumber sweep.
    Scatter {
        #[command(flatten)]
        common: Common,
        /// Add Numerov oracle columns.
        #[arg(long)]
        oracle: bool,
    },
    /// Energy-normalized scattering states on an x grid.
    Wavefunction {
        #[command(flatten)]
        common: Common,
        /// Positions `start:stop:count`.
        #[arg(long, allow_hyphen_values = true)]
        x_range: Option<Range>,
    },
    /// Euclidean propagator from the spectral integral and the grid oracle.
    Propagator {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        tau: Option<f64>,
        /// Positions; all ordered pairs are evaluated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Vec<f64>,
        /// Half width of the grid oracle box.
        #[arg(long)]
        grid_half_width: Option<f64>,
        /// Interior points of the coarser oracle grid.
        #[arg(long)]
        grid_points: Option<usize>,
    },
    /// Run verification suites and emit a pass/fail report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite to run; repeat for several. All suites when omitted.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: Vec<String>,
    },
}

fn load(common: &Common) -> Result<RunConfig, String> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(v) = common.hbar {
        cfg.units.hbar = v;
    }
    if let Some(v) = common.mass {
        cfg.units.m = v;
    }
    if let Some(v) = common.omega {
        cfg.barrier.omega = v;
    }
    if let Some(v) = common.v0 {
        cfg.barrier.v0 = v;
    }
    if !common.k.is_empty() {
        cfg.sweep.k_values = Some(common.k.clone());
        cfg.sweep.k_range = None;
    }
    if let Some(r) = common.k_range {
        cfg.sweep.k_range = Some(r);
        cfg.sweep.k_values = None;
    }
    if let Some(f) = common.format {
        cfg.outputs.format = Some(f);
    }
    if let Some(p) = &common.out {
        cfg.outputs.path = Some(p.clone());
    }
    cfg.params()?;
    Ok(cfg)
}

fn sink(cfg: &RunConfig) -> io::Result<Box<dyn Write>> {
    Ok(match &cfg.outputs.path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_table(cfg: &RunConfig, out: Output) -> i32 {
    for note in &out.notes {
        eprintln!("{note}");
    }
    if let Err(e) = write_table(cfg, &out.table) {
        eprintln!("error: writing output: {e}");
        return EXIT_USAGE;
    }
    out.status.exit_code()
}

fn write_table(cfg: &RunConfig, table: &Table) -> io::Result<()> {
    let mut w = sink(cfg)?;
    table.write(&mut w, cfg.format_or(Format::Csv))?;
    w.flush()
}

fn write_reports(cfg: &RunConfig, reports: &[SuiteReport]) -> io::Result<()> {
    let mut w = sink(cfg)?;
    match cfg.format_or(Format::Json) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, reports)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut t = Table::new(vec!["suite", "name", "residual", "tolerance", "pass"]);
            for r in reports {
                for c in &r.cases {
                    t.push(vec![
                        r.suite.as_str().into(),
                        // names may contain commas
                        format!("\"{}\"", c.name.replace('"', "\"\"")).as_str().into(),
                        c.residual.into(),
                        c.tolerance.into(),
                        if c.pass { "true" } else { "false" }.into(),
                    ]);
                }
            }
            t.write(&mut w, Format::Csv)?;
        }
    }
    w.flush()
}

fn verify(cfg: &RunConfig, suites: &[String]) -> i32 {
    let names: Vec<String> = if !suites.is_empty() {
        suites.to_vec()
    } else if !cfg.checks.is_empty() {
        cfg.checks.clone()
    } else {
        SUITES.iter().map(|s| s.to_string()).collect()
    };
    let mut reports = Vec::new();
    for name in &names {
        match run_suite(name) {
            Some(r) => {
                let failed = r.cases.iter().filter(|c| !c.pass).count();
                eprintln!("{name}: {} cases, {failed} failed", r.cases.len());
                reports.push(r);
            }
            None => {
                eprintln!("error: unknown suite `{name}`; known: {}", SUITES.join(", "));
                return EXIT_USAGE;
            }
        }
    }
    if let Err(e) = write_reports(cfg, &reports) {
        eprintln!("error: writing output: {e}");
        return EXIT_USAGE;
    }
    if reports.iter().all(SuiteReport::passed) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn dispatch(cli: Cli) -> i32 {
    let common = match &cli.command {
        Command::Scatter { common, .. }
        | Command::Wavefunction { common, .. }
        | Command::Propagator { common, .. }
        | Command::Verify { common, .. } => common,
    };
    let mut cfg = match load(common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match &cli.command {
        Command::Scatter { oracle, .. } => commands::scatter(&cfg, *oracle),
        Command::Wavefunction { x_range, .. } => {
            if let Some(r) = x_range {
                cfg.wavefunction.x_range = *r;
            }
            commands::wavefunction(&cfg)
        }
        Command::Propagator {
            tau,
            points,
            grid_half_width,
            grid_points,
            ..
        } => {
            let s = &mut cfg.propagator;
            if let Some(t) = tau {
                s.tau = *t;
            }
            if !points.is_empty() {
                s.points = points.clone();
            }
            if grid_half_width.is_some() {
                s.grid_half_width = *grid_half_width;
            }
            if grid_points.is_some() {
                s.grid_points = *grid_points;
            }
            commands::propagator(&cfg)
        }
        Command::Verify { suite, .. } => return verify(&cfg, suite),
    };
    match result {
        Ok(out) => emit_table(&cfg, out),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got `{v}`")),
        },
        Err(_) => Ok(None),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cap = match thread_cap() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cap {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(|| dispatch(cli)),
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            EXIT_NUMERICAL
        }
    }
}
