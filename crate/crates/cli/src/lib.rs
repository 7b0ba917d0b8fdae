//! Experiment harness for FH jamming studies: TOML configs, seeded Monte
//! Carlo campaigns, closed-form bound sweeps, the minimax game, and CSV/SVG
//! output. The `fhjam` binary wraps this library.

pub mod campaign;
pub mod config;
pub mod plot;
pub mod report;
pub mod sweep;

pub use campaign::{run_attack, run_error_simulation, run_minimax, AttackRow, ResultRow};
pub use config::{ConfigError, ExperimentConfig};
pub use plot::{emit_plot, PlotKind};
pub use sweep::{sweep_bounds, waterfill_table, BoundsRow, WaterfillRow};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] fhjam_core::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    /// Process exit status: 2 config, 3 infeasible, 4 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Core(fhjam_core::Error::Infeasible(_)) => 3,
            _ => 4,
        }
    }
}
