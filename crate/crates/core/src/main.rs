use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use werner_ou::noise::{AveragingMode, NoiseConfig};
use werner_ou::sweep::{
    emit_csv, emit_metadata, run_mc_validation, run_sweep, write_csv, Dynamics, McSettings, Preset, SweepConfig,
};
use werner_ou::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_MC_FAILED: u8 = 3;

/// Dynamics of entropic uncertainty, concurrence and entanglement witness for
/// a Werner state under Ornstein-Uhlenbeck dephasing.
#[derive(Parser, Debug)]
#[command(name = "werner-ou", version, allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate L, R, U, C and EW on a parameter grid and write CSV.
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        /// Output CSV path; a `<out>.meta.json` sidecar is written next to it.
        /// Writes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare Monte Carlo coherences with the closed form and report z-scores.
    ValidateMc {
        #[command(flatten)]
        grid: GridArgs,
        /// Times at which to compare, comma separated.
        #[arg(long, value_delimiter = ',')]
        tau: Option<Vec<f64>>,
    },
    /// Noiseless entanglement-witness traces for constant fields.
    Ew {
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<f64>>,
        /// Constant field seen by both qubits.
        #[arg(long, default_value_t = 1.0)]
        chi: f64,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        tau_max: Option<f64>,
        #[arg(long)]
        tau_points: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Grid and sampling options. Flags override `--preset` or `--config-file`.
/// Setting `--n-traj`, `--dt` or `--seed` switches a sweep to Monte Carlo averaging.
#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, conflicts_with = "config_file")]
    preset: Option<Preset>,
    /// JSON file with any subset of the sweep configuration fields.
    #[arg(long)]
    config_file: Option<PathBuf>,
    /// Noise configuration(s): cqn, iqn or cqn,iqn.
    #[arg(long, value_delimiter = ',')]
    config: Option<Vec<NoiseConfig>>,
    /// paper-literal or gaussian-exact.
    #[arg(long)]
    mode: Option<AveragingMode>,
    #[arg(long, value_delimiter = ',')]
    g: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_traj: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
}

impl GridArgs {
    fn build(self, default: SweepConfig) -> Result<SweepConfig, Error> {
        let mut cfg = match (&self.config_file, self.preset) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                SweepConfig::from_json(&text)?
            }
            (None, Some(preset)) => SweepConfig::preset(preset),
            (None, None) => default,
        };
        if let Some(v) = self.config {
            cfg.configs = v;
        }
        if let Some(v) = self.mode {
            cfg.mode = v;
        }
        if let Some(v) = self.g {
            cfg.g_values = v;
        }
        if let Some(v) = self.p {
            cfg.p_values = v;
        }
        if let Some(v) = self.lambda {
            cfg.lambdas = v;
        }
        if let Some(v) = self.kappa {
            cfg.kappa = v;
        }
        if let Some(v) = self.tau_max {
            cfg.tau_max = v;
        }
        if let Some(v) = self.tau_points {
            cfg.tau_points = v;
        }
        if self.n_traj.is_some() || self.dt.is_some() || self.seed.is_some() {
            let mc = cfg.mc.get_or_insert_with(McSettings::default);
            if let Some(v) = self.n_traj {
                mc.n_traj = v;
            }
            if let Some(v) = self.dt {
                mc.dt = v;
            }
            if let Some(v) = self.seed {
                mc.seed = v;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn validation_defaults() -> SweepConfig {
    SweepConfig {
        configs: vec![NoiseConfig::Cqn, NoiseConfig::Iqn],
        mode: AveragingMode::GaussianExact,
        g_values: vec![0.4, 1.0],
        lambdas: vec![0.5, 1.0],
        mc: Some(McSettings::default()),
        ..SweepConfig::default()
    }
}

fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn write_sweep(cfg: &SweepConfig, out: Option<&Path>) -> Result<(), Error> {
    let result = run_sweep(cfg)?;
    match out {
        Some(path) => {
            emit_csv(&result, path)?;
            emit_metadata(&result, &meta_path(path))
        }
        None => write_csv(&result, io::stdout().lock()).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Sweep { grid, out } => {
            let cfg = grid.build(SweepConfig::default())?;
            write_sweep(&cfg, out.as_deref())?;
        }
        Command::ValidateMc { grid, tau } => {
            let mut cfg = grid.build(validation_defaults())?;
            let mc = cfg.mc.get_or_insert_with(McSettings::default);
            if let Some(taus) = tau {
                mc.taus = taus;
            }
            let report = run_mc_validation(&cfg)?;
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{report}").map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            })?;
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_MC_FAILED));
            }
        }
        Command::Ew {
            p,
            lambda,
            chi,
            kappa,
            tau_max,
            tau_points,
            out,
        } => {
            let mut cfg = SweepConfig::preset(Preset::Fig2);
            cfg.dynamics = Dynamics::Noiseless { chi };
            if let Some(v) = p {
                cfg.p_values = v;
            }
            if let Some(v) = lambda {
                cfg.lambdas = v;
            }
            if let Some(v) = kappa {
                cfg.kappa = v;
            }
            if let Some(v) = tau_max {
                cfg.tau_max = v;
            }
            if let Some(v) = tau_points {
                cfg.tau_points = v;
            }
            write_sweep(&cfg, out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Usage(_) | Error::Io { .. } => EXIT_USAGE,
        Error::Domain(_) | Error::Positivity { .. } | Error::NoConvergence { .. } => EXIT_NUMERICAL,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
