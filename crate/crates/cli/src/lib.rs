//! Command-line front end for `ncforce`: separation scans of the forces and
//! displacements, and reference shape tables for plotting.

pub mod config;
pub mod error;
pub mod scan;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::ScanConfig;
pub use error::CliError;
pub use scan::{emit_reference_shapes, render_scan, run_scan, ScanReport};

#[derive(Debug, Parser)]
#[command(
    name = "ncforce",
    version,
    about = "Nonconservative two-atom dipole forces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan forces (and optionally displacements) over the separation
    Scan(ScanArgs),
    /// Write the displacement shape functions f_A(v), f_B(v)
    Shapes(ShapesArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScanArgs {
    /// Config file of `key = value` lines; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// hydrogen | custom
    #[arg(long)]
    pub preset: Option<String>,
    /// leading | full-identical | full-dissimilar
    #[arg(long)]
    pub tier: Option<String>,
    /// Smallest separation (m)
    #[arg(long)]
    pub rmin: Option<f64>,
    /// Largest separation (m)
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub rpoints: Option<usize>,
    /// Observation time in seconds, or `lifetime`
    #[arg(long)]
    pub tobs: Option<String>,
    /// Add displacement columns
    #[arg(long)]
    pub displacement: bool,
    /// truncate | full-decay
    #[arg(long)]
    pub convention: Option<String>,
    /// Also write a per-term breakdown to <stem>.terms.csv
    #[arg(long)]
    pub diagnostic: bool,
    /// Output file
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    /// (omega_A - omega_B) / Gamma_A
    #[arg(long, allow_hyphen_values = true)]
    pub detuning_ratio: Option<f64>,
    /// reconciled | printed
    #[arg(long)]
    pub reading: Option<String>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
}

impl ScanArgs {
    /// Defaults, then the config file, then flags.
    pub fn to_config(&self) -> Result<ScanConfig, CliError> {
        let mut c = ScanConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
                line: None,
                field: "config".into(),
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            c.apply_text(&text)?;
        }
        let pairs = [
            ("preset", self.preset.clone()),
            ("tier", self.tier.clone()),
            ("rmin", self.rmin.map(|x| x.to_string())),
            ("rmax", self.rmax.map(|x| x.to_string())),
            ("rpoints", self.rpoints.map(|x| x.to_string())),
            ("tobs", self.tobs.clone()),
            ("convention", self.convention.clone()),
            ("format", self.format.clone()),
            ("detuning_ratio", self.detuning_ratio.map(|x| x.to_string())),
            ("reading", self.reading.clone()),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                c.set(k, &v)?;
            }
        }
        c.displacement |= self.displacement;
        c.diagnostic |= self.diagnostic;
        if let Some(out) = &self.out {
            c.output_path = out.clone();
        }
        if self.threads.is_some() {
            c.threads = self.threads;
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ShapesArgs {
    #[arg(long, default_value_t = 1.0)]
    pub vmin: f64,
    #[arg(long, default_value_t = 10.0)]
    pub vmax: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value = "shapes.csv")]
    pub out: PathBuf,
}

impl ShapesArgs {
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        if n < 2 {
            return vec![self.vmin; n];
        }
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.vmax
                } else {
                    self.vmin + (self.vmax - self.vmin) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Scan(args) => args.to_config().and_then(|c| run_scan(&c)).map(|report| {
            if report.failed_rows > 0 {
                eprintln!(
                    "{} of {} rows failed; see the status column of {}",
                    report.failed_rows,
                    report.rows,
                    report.output.display()
                );
            }
            report.exit_code()
        }),
        Command::Shapes(args) => emit_reference_shapes(&args.grid(), &args.out).map(|_| 0),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
