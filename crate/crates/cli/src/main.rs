use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fhjam_core::bounds::{cr_lower, cr_upper_gaussian, LogUnit};
use fhjam_cli::{
    campaign, emit_plot, report, sweep_bounds, waterfill_table, ConfigError, ExperimentConfig,
    HarnessError, PlotKind,
};

#[derive(Parser)]
#[command(name = "fhjam", version, about = "Frequency-hopping jamming experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (for `plot`, the SVG path or its directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report rates in nats.
    #[arg(long, global = true)]
    nats: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity bounds over the configured (Γ, Λ) points.
    Bounds {
        /// Fail with status 3 unless the upper bound applies everywhere.
        #[arg(long)]
        upper: bool,
    },
    /// Waterfilling jammer allocation.
    Waterfill,
    /// Monte Carlo error rates per blocklength and jammer strategy.
    Simulate {
        /// Add a wall-clock column (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Error floor of the codeword-replay attack.
    Attack,
    /// Minimax mutual-information estimate.
    Mi,
    /// Render a CSV produced by `simulate` or `bounds` as SVG.
    Plot {
        csv: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    ErrorVsN,
    BoundsVsGamma,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fhjam: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| HarnessError::Format(e.to_string()))?;
    }
    if let Command::Plot { csv, kind } = &cli.command {
        let kind = match kind {
            Kind::ErrorVsN => PlotKind::ErrorVsN,
            Kind::BoundsVsGamma => PlotKind::BoundsVsGamma,
        };
        let out = plot_path(csv, cli.out.as_deref());
        emit_plot(csv, kind, &out)?;
        eprintln!("wrote {}", out.display());
        return Ok(());
    }

    let cfg = load(&cli)?;
    let unit = if cfg.nats { LogUnit::Nats } else { LogUnit::Bits };
    let out_dir = cli.out.clone().or_else(|| cfg.out.clone());
    let sink = |name: &str| sink(out_dir.as_deref(), name);
    match cli.command {
        Command::Bounds { upper } => {
            let rows = sweep_bounds(&cfg)?;
            if upper {
                if let Some(r) = rows.iter().find(|r| r.cr_upper.is_none()) {
                    return Err(fhjam_core::Error::Infeasible(format!(
                        "upper bound needs J ≥ active bands (Γ = {}, Λ = {}: {} active, J = {})",
                        r.gamma, r.lambda, r.active_bands, cfg.budget.max_bands
                    ))
                    .into());
                }
            }
            report::write_bounds(sink("bounds")?, &rows, unit)?;
        }
        Command::Waterfill => report::write_waterfill(sink("waterfill")?, &waterfill_table(&cfg)?)?,
        Command::Simulate { timing } => {
            let rows = campaign::run_error_simulation(&cfg)?;
            report::write_results(sink("simulate")?, &rows, unit, timing)?;
        }
        Command::Attack => report::write_attack(sink("attack")?, &campaign::run_attack(&cfg)?)?,
        Command::Mi => {
            let est = campaign::run_minimax(&cfg)?;
            let ch = cfg.channel()?;
            let b = &cfg.budget;
            let r = report::MinimaxReport {
                experiment: &cfg.experiment,
                gamma: b.gamma,
                lambda: b.lambda,
                max_bands: b.max_bands,
                estimate: &est,
                cr_lower: cr_lower(b.gamma, b.lambda, ch.sigma2())?,
                cr_upper: cr_upper_gaussian(b.gamma, b.lambda, ch.sigma2(), b.max_bands).ok(),
            };
            report::write_minimax(sink("mi")?, &r, unit)?;
            if out_dir.is_some() {
                report::write_trace(sink("mi_trace")?, &est, unit)?;
            }
        }
        Command::Plot { .. } => unreachable!(),
    }
    Ok(())
}

fn load(cli: &Cli) -> Result<ExperimentConfig, HarnessError> {
    let path = cli.config.as_ref().ok_or_else(|| ConfigError {
        line: None,
        key: None,
        message: "--config is required".into(),
    })?;
    let src = std::fs::read_to_string(path).map_err(|e| ConfigError {
        line: None,
        key: None,
        message: format!("{}: {e}", path.display()),
    })?;
    let mut cfg = ExperimentConfig::parse(&src)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.nats |= cli.nats;
    Ok(cfg)
}

/// `<dir>/<name>.csv`, or stdout without a directory.
fn sink(dir: Option<&Path>, name: &str) -> Result<Box<dyn Write>, HarnessError> {
    match dir {
        Some(d) => {
            std::fs::create_dir_all(d)?;
            let path = d.join(format!("{name}.csv"));
            eprintln!("writing {}", path.display());
            Ok(Box::new(BufWriter::new(File::create(path)?)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn plot_path(csv: &Path, out: Option<&Path>) -> PathBuf {
    let svg_name = csv.with_extension("svg");
    match out {
        Some(o) if o.extension().is_some_and(|e| e == "svg") => o.to_path_buf(),
        Some(dir) => dir.join(svg_name.file_name().unwrap_or_default()),
        None => svg_name,
    }
}
