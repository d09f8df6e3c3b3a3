//! `jcm` command-line driver.
//!
//! ```text
//! jcm <subcommand> [--nbar R] [--mode exact|quadratic] [--cutoff N] [--tau EXPR] [--out DIR] [--config FILE]
//! ```
//!
//! Exit status is 0 on success, 2 on invalid input or parameters and 1 on I/O failure.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::dynamics::RabiMode;
use crate::error::{Error, Result};
use crate::observables::PhaseWindow;
use crate::tau::Tau;

pub use config::{ConfigOverrides, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "jcm", version, about = "Four-photon Jaynes-Cummings model: observables as CSV/JSON")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Mean photon number of the initial coherent state.
    #[arg(long, global = true)]
    pub nbar: Option<f64>,

    /// Phase of alpha in radians.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha_phase: Option<f64>,

    /// Photon multiplicity.
    #[arg(long, global = true)]
    pub k: Option<u32>,

    /// Fock-space cutoff N.
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,

    /// Rabi frequencies: exact or quadratic.
    #[arg(long, global = true, value_parser = parse_mode)]
    pub mode: Option<RabiMode>,

    /// Largest Poisson mass allowed beyond the cutoff.
    #[arg(long, global = true)]
    pub tail_tol: Option<f64>,

    /// Output directory.
    #[arg(long = "out", global = true)]
    pub out: Option<PathBuf>,

    /// JSON config file; flags take precedence over its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Photon-number distribution at one or more times.
    Pnd {
        /// Times such as `0`, `pi/8`, `pi/8-pi/24000`; repeat or separate with commas.
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        tau: Vec<String>,
    },
    /// Field entropy over a time range, or around pi/4 with `--dip-window`.
    Entropy {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        from: String,
        #[arg(long, default_value = "pi", allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        steps: Option<usize>,
        /// Scan pi/4 +- HALFWIDTH * delta_1 instead and annotate the r gridlines.
        #[arg(long)]
        dip_window: bool,
        #[arg(long, default_value_t = 6)]
        halfwidth: i64,
    },
    /// Husimi Q-function on a grid plus its component count.
    Qfunc {
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        /// `re_min,re_max,im_min,im_max`; defaults to [-12, 12]^2.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Grid points per axis.
        #[arg(long, default_value_t = 241)]
        resolution: usize,
        /// Component threshold as a fraction of the peak value.
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
    },
    /// Atomic population inversion over a time range.
    Inversion {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        from: String,
        #[arg(long, default_value = "pi", allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 4001)]
        steps: usize,
    },
    /// Fidelity, entropy and coherence checks at tau = pi, pi/2 and pi/4 + delta_r.
    Catcheck {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        r: i64,
    },
}

fn parse_mode(s: &str) -> std::result::Result<RabiMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_window(s: &str) -> Result<PhaseWindow> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| Error::parse(s, "window must be four numbers")))
        .collect::<Result<_>>()?;
    match parts.as_slice() {
        [a, b, c, d] => PhaseWindow::new(*a, *b, *c, *d),
        _ => Err(Error::parse(s, "window must be re_min,re_max,im_min,im_max")),
    }
}

impl CommonArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            nbar: self.nbar,
            alpha_phase: self.alpha_phase,
            k: self.k,
            cutoff: self.cutoff,
            mode: self.mode,
            output_dir: self.out.clone(),
            tail_tol: self.tail_tol,
        }
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let file = self.config.as_deref().map(ConfigOverrides::from_file).transpose()?;
        RunConfig::resolve(file.as_ref(), &self.overrides())
    }
}

/// Runs a parsed command line and returns what should go to stdout.
pub fn run(cli: &Cli) -> Result<String> {
    let config = cli.common.resolve()?;
    let lines = |paths: Vec<PathBuf>| paths.iter().map(|p| format!("{}\n", p.display())).collect::<String>();
    match &cli.command {
        Command::Pnd { tau } => {
            let taus = tau.iter().map(|t| t.parse::<Tau>()).collect::<Result<Vec<_>>>()?;
            Ok(lines(commands::cmd_pnd(&config, &taus)?))
        }
        Command::Entropy { from, to, steps, dip_window, halfwidth } => {
            if *dip_window {
                if *halfwidth < 1 {
                    return Err(Error::InvalidScan(format!("halfwidth must be positive, got {halfwidth}")));
                }
                let steps = steps.unwrap_or(200 * *halfwidth as usize + 1);
                Ok(lines(commands::cmd_entropy_dip(&config, *halfwidth, steps)?))
            } else {
                let steps = steps.unwrap_or(1001);
                Ok(lines(commands::cmd_entropy(&config, from.parse()?, to.parse()?, steps)?))
            }
        }
        Command::Qfunc { tau, window, resolution, threshold } => {
            let window = match window {
                Some(w) => parse_window(w)?,
                None => PhaseWindow::square(12.0)?,
            };
            let result = commands::cmd_qfunc(&config, tau.parse()?, window, *resolution, *threshold)?;
            Ok(format!(
                "{}components: {}\nriemann_sum: {}\n",
                lines(result.files),
                result.components.count,
                result.riemann_sum
            ))
        }
        Command::Inversion { from, to, steps } => {
            Ok(lines(commands::cmd_inversion(&config, from.parse()?, to.parse()?, *steps)?))
        }
        Command::Catcheck { r } => {
            let (path, report) = commands::cmd_catcheck(&config, *r)?;
            Ok(format!("{}\n{}\n", serde_json::to_string_pretty(&report)?, path.display()))
        }
    }
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => 1,
                _ => 2,
            }
        }
    }
}
