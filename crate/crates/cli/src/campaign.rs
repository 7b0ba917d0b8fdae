//! Seeded Monte Carlo campaigns.
//!
//! Every random quantity comes from a stream derived from the config seed
//! and the cell's position, so results do not depend on thread count or
//! on which other cells run.

use std::time::{Duration, Instant};

use fhjam_core::coding::empirical_error;
use fhjam_core::jammer::attack_error_floor;
use fhjam_core::minimax::{minimax_estimate, SaddleEstimate};
use fhjam_core::{rng, Codebook};

use crate::config::ExperimentConfig;
use crate::HarnessError;

const CODEBOOK_STREAM: u64 = 1;
const TRIAL_STREAM: u64 = 2;
const ATTACK_STREAM: u64 = 3;

/// One `(n, strategy)` cell of an error simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub n: usize,
    pub messages: usize,
    /// `log2(M)/n`.
    pub rate_bits: f64,
    pub strategy: String,
    pub trials: u64,
    pub errors: u64,
    pub error: f64,
    pub std_error: f64,
    pub wall_clock: Duration,
}

/// Codebook of the `index`-th blocklength; shared by every strategy and
/// by the attack campaign.
pub fn codebook(cfg: &ExperimentConfig, index: usize) -> Result<Codebook, HarnessError> {
    let ch = cfg.channel()?;
    let n = cfg.code.n[index];
    let mut rng = rng::derive(cfg.seed, &[CODEBOOK_STREAM, index as u64]);
    Ok(Codebook::random(
        ch.bands(),
        n,
        cfg.messages(n)?,
        cfg.budget.gamma,
        cfg.hopping()?,
        &mut rng,
    )?)
}

/// Empirical average error for every blocklength and strategy.
pub fn run_error_simulation(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, HarnessError> {
    let ch = cfg.channel()?;
    let budget = cfg.jam_budget()?;
    let strategies = cfg.strategies()?;
    let mut rows = Vec::new();
    for (ni, &n) in cfg.code.n.iter().enumerate() {
        let cb = codebook(cfg, ni)?;
        for (si, strategy) in strategies.iter().enumerate() {
            let jam = strategy.provider(&cb, &ch, &budget)?;
            let seed = rng::derive_seed(cfg.seed, &[TRIAL_STREAM, ni as u64, si as u64]);
            let start = Instant::now();
            let est = empirical_error(&cb, &ch, jam.as_ref(), cfg.simulation.trials, seed)?;
            rows.push(ResultRow {
                experiment: cfg.experiment.clone(),
                n,
                messages: cb.messages(),
                rate_bits: cb.rate_bits(),
                strategy: strategy.to_string(),
                trials: est.trials,
                errors: est.errors,
                error: est.rate(),
                std_error: est.std_error(),
                wall_clock: start.elapsed(),
            });
        }
    }
    Ok(rows)
}

/// Error floor of the codeword-replay attack per blocklength.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackRow {
    pub experiment: String,
    pub n: usize,
    pub messages: usize,
    pub trials: u64,
    pub average: f64,
    pub average_se: f64,
    /// Restricted to trials where the replayed message differs.
    pub distinct: f64,
    pub distinct_se: f64,
    /// Zero-based index of the most damaging replayed message.
    pub worst_attack: usize,
    pub worst_error: f64,
}

pub fn run_attack(cfg: &ExperimentConfig) -> Result<Vec<AttackRow>, HarnessError> {
    let ch = cfg.channel()?;
    let budget = cfg.jam_budget()?;
    let mut rows = Vec::new();
    for (ni, &n) in cfg.code.n.iter().enumerate() {
        let cb = codebook(cfg, ni)?;
        let seed = rng::derive_seed(cfg.seed, &[ATTACK_STREAM, ni as u64]);
        let est = attack_error_floor(&cb, &ch, &budget, cfg.simulation.trials, seed)?;
        rows.push(AttackRow {
            experiment: cfg.experiment.clone(),
            n,
            messages: cb.messages(),
            trials: est.average.trials,
            average: est.average.rate(),
            average_se: est.average.std_error(),
            distinct: est.distinct.rate(),
            distinct_se: est.distinct.std_error(),
            worst_attack: est.worst_attack,
            worst_error: est.per_attack[est.worst_attack].rate(),
        });
    }
    Ok(rows)
}

/// Minimax estimate for the configured channel and budgets.
pub fn run_minimax(cfg: &ExperimentConfig) -> Result<SaddleEstimate, HarnessError> {
    let ch = cfg.channel()?;
    let budget = cfg.jam_budget()?;
    Ok(minimax_estimate(
        &ch,
        cfg.budget.gamma,
        &budget,
        &cfg.game_grids(),
        &cfg.minimax_options(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(extra: &str) -> ExperimentConfig {
        let src = format!(
            r#"
seed = 3
[channel]
sigma2 = [1.0, 1.0]
[budget]
gamma = 1.0
lambda = 1.0
max_bands = 2
[code]
n = [8]
messages = 4
[simulation]
strategies = ["none", "mimic"]
trials = 200
{extra}"#
        );
        ExperimentConfig::parse(&src).unwrap()
    }

    #[test]
    fn rows_follow_config_order() {
        let rows = run_error_simulation(&cfg("")).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].strategy, "none");
        assert_eq!(rows[1].strategy, "mimic");
        for r in &rows {
            assert_eq!(r.trials, 200);
            assert_eq!(r.rate_bits, 2.0 / 8.0);
            assert!((0.0..=1.0).contains(&r.error));
            let se = (r.error * (1.0 - r.error) / 200.0).sqrt();
            assert_eq!(r.std_error, se);
        }
    }

    #[test]
    fn single_trial_is_zero_or_one() {
        let mut c = cfg("");
        c.simulation.trials = 1;
        for r in run_error_simulation(&c).unwrap() {
            assert!(r.error == 0.0 || r.error == 1.0);
            assert_eq!(r.std_error, 0.0);
        }
    }

    #[test]
    fn seed_determines_results() {
        let a = run_error_simulation(&cfg("")).unwrap();
        let b = run_error_simulation(&cfg("")).unwrap();
        let errs = |rows: &[ResultRow]| rows.iter().map(|r| r.errors).collect::<Vec<_>>();
        assert_eq!(errs(&a), errs(&b));
        let mut other = cfg("");
        other.seed = 4;
        assert_eq!(codebook(&other, 0).unwrap().messages(), 4);
        assert_ne!(codebook(&other, 0).unwrap(), codebook(&cfg(""), 0).unwrap());
    }

    #[test]
    fn attack_rows() {
        let rows = run_attack(&cfg("")).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].messages, 4);
        assert!(rows[0].worst_attack < 4);
    }
}
