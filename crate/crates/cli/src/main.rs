//! `spindemag`: command-line front end for adiabatic demagnetization runs.

mod commands;
mod config;
mod error;
mod format;
mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_n_list, parse_pairs, FileConfig, Overrides, Probe, RunConfig, Spacing};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "spindemag", version, about = "Adiabatic demagnetization of dipolar spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args)]
struct GlobalArgs {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Spin pairs, `m:n[,m:n...]`.
    #[arg(long, global = true)]
    pairs: Option<String>,
    /// Number of field grid points.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Logarithmic field grid.
    #[arg(long, global = true, conflicts_with = "linear")]
    log: bool,
    /// Linear field grid.
    #[arg(long, global = true)]
    linear: bool,
    /// Write a gnuplot script next to the output file.
    #[arg(long, global = true)]
    plot_script: bool,
    #[arg(long, global = true)]
    n_spins: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// Initial inverse temperature, in units of 1/D12.
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Initial field, in units of D12.
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega0: Option<f64>,
    /// Final field, in units of D12.
    #[arg(long, global = true, allow_negative_numbers = true)]
    omega0_final: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Isentropic field sweep of one chain.
    Ad,
    /// Entangled/separable boundary of one pair.
    Boundary {
        /// Point to classify, `omega0:beta`; repeatable.
        #[arg(long = "probe")]
        probes: Vec<String>,
    },
    /// Isentropic sweeps over several chain lengths.
    Sweep {
        /// Chain lengths, e.g. `4,5,8` or `4-10`.
        #[arg(long)]
        n_list: Option<String>,
    },
    /// Hamiltonian matrices, spectrum and local field.
    Hamiltonian {
        /// Structured JSON output.
        #[arg(long)]
        json: bool,
    },
}

fn resolve(cli: &Cli) -> CliResult<RunConfig> {
    let g = &cli.global;
    let file = match &g.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let mut over = Overrides {
        n_spins: g.n_spins,
        theta: g.theta,
        phi: g.phi,
        beta_init: g.beta,
        omega0_init: g.omega0,
        omega0_final: g.omega0_final,
        grid_points: g.grid,
        grid_spacing: if g.log {
            Some(Spacing::Log)
        } else if g.linear {
            Some(Spacing::Linear)
        } else {
            None
        },
        pairs: g.pairs.as_deref().map(parse_pairs).transpose()?,
        output_path: g.out.clone(),
        ..Default::default()
    };
    match &cli.command {
        Command::Boundary { probes } if !probes.is_empty() => {
            over.probes = Some(probes.iter().map(|s| s.parse()).collect::<CliResult<Vec<Probe>>>()?);
        }
        Command::Sweep { n_list: Some(s) } => over.n_list = Some(parse_n_list(s)?),
        _ => {}
    }
    RunConfig::resolve(file, over)
}

fn emit(cfg: &RunConfig, text: &str, script: Option<String>) -> CliResult<()> {
    match &cfg.output_path {
        Some(path) => {
            format::write_atomic(path, text)?;
            if let Some(s) = script {
                format::write_atomic(&script_path(path), &s)?;
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn script_path(csv: &Path) -> PathBuf {
    let mut p = csv.as_os_str().to_owned();
    p.push(".gp");
    PathBuf::from(p)
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = resolve(&cli)?;
    let plot = cli.global.plot_script;
    if plot && cfg.output_path.is_none() {
        return Err(CliError::Config("--plot-script requires an output path".into()));
    }
    let out = cfg.output_path.clone().unwrap_or_default();
    match &cli.command {
        Command::Ad => {
            let text = commands::ad(&cfg)?;
            emit(&cfg, &text, plot.then(|| plot::ad(&out, &cfg.pairs)))
        }
        Command::Boundary { .. } => {
            let text = commands::boundary(&cfg)?;
            emit(&cfg, &text, plot.then(|| plot::boundary(&out)))
        }
        Command::Sweep { .. } => {
            let text = commands::sweep(&cfg)?;
            emit(&cfg, &text, plot.then(|| plot::sweep(&out, &cfg.n_list)))
        }
        Command::Hamiltonian { json } => {
            if plot {
                return Err(CliError::Config("hamiltonian has no plot script".into()));
            }
            let text = commands::hamiltonian(&cfg, *json)?;
            emit(&cfg, &text, None)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spindemag: {e}");
            e.exit_code()
        }
    }
}
