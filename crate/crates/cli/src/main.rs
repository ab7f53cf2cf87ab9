use std::path::PathBuf;
use std::process::ExitCode;

use cavity_zeno::LorentzianSpectrum;
use cavity_zeno_cli::checks::{selftest, ZenoRate};
use cavity_zeno_cli::config::{RunConfig, SolverSelector, SweepSpec};
use cavity_zeno_cli::error::{CliError, Result};
use cavity_zeno_cli::figures::{reproduce_figure, FigureId};
use cavity_zeno_cli::{run_dynamics, run_sweep};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cavity-zeno", version, about = "Two atoms in a lossy cavity: dynamics, sweeps and Zeno rates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the amplitudes and write one CSV per solver plus metadata.
    Dynamics {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the solver named in the config.
        #[arg(long, value_enum)]
        solver: Option<SolverSelector>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run a parameter sweep and write a summary CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Print the effective and asymptotic decay rates and the regime.
    ZenoRate {
        /// Take the spectrum from a run config instead of the flags below.
        #[arg(long, conflicts_with_all = ["lambda", "delta", "w"])]
        config: Option<PathBuf>,
        #[arg(long, required_unless_present = "config", allow_negative_numbers = true)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long = "W", default_value_t = 1.0, id = "w", allow_negative_numbers = true)]
        w: f64,
        /// Elapsed time; defaults to 100/lambda.
        #[arg(long, allow_negative_numbers = true)]
        time: Option<f64>,
    },
    /// Write the data and plot script for one figure.
    Reproduce {
        #[arg(value_enum)]
        figure: FigureId,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check both oracles against the closed-form solution.
    Selftest,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dynamics {
            config,
            out,
            solver,
            format: Format::Csv,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(s) = solver {
                cfg.solver = s;
            }
            let dir = out.unwrap_or_else(|| cfg.output_dir());
            let result = run_dynamics(&cfg, &dir)?;
            for f in &result.files {
                println!("wrote {}", f.display());
            }
            if let Some(report) = &result.comparison {
                println!("max solver deviation {:.3e}", report.max_deviation);
                if !report.within_tolerance {
                    eprintln!("warning: solvers disagree beyond {:.0e}", report.tolerance);
                }
            }
        }
        Command::Sweep {
            config,
            out,
            format: Format::Csv,
        } => {
            let spec = SweepSpec::load(&config)?;
            let dir = out.unwrap_or_else(|| spec.base.output_dir());
            let result = run_sweep(&spec, &dir)?;
            for f in &result.files {
                println!("wrote {}", f.display());
            }
        }
        Command::ZenoRate {
            config,
            lambda,
            delta,
            w,
            time,
        } => {
            let spectrum = match (config, lambda) {
                (Some(path), _) => RunConfig::load(&path)?.resolve()?.spectrum,
                (None, Some(l)) => {
                    LorentzianSpectrum::with_detuning(w, l, delta).map_err(|e| CliError::Config(e.to_string()))?
                }
                (None, None) => return Err(CliError::Config("need --config or --lambda".into())),
            };
            let t = time.unwrap_or(100.0 / spectrum.half_width());
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Config(format!("--time: must be positive, got {t}")));
            }
            println!("{}", ZenoRate::new(&spectrum, t)?);
        }
        Command::Reproduce { figure, out } => {
            let dir = out.unwrap_or_else(|| PathBuf::from("figures"));
            for f in reproduce_figure(figure, &dir)? {
                println!("wrote {}", f.display());
            }
        }
        Command::Selftest => {
            let lines = selftest()?;
            for line in &lines {
                println!("{line}");
            }
            let failed = lines.iter().filter(|l| !l.pass()).count();
            println!("selftest: {} of {} passed", lines.len() - failed, lines.len());
            if failed > 0 {
                return Err(CliError::Selftest(format!("{failed} oracle comparisons exceeded tolerance")));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
