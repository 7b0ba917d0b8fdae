//! Experiment configuration.
//!
//! Configs are TOML: top-level keys plus `[channel]`, `[budget]`, `[code]`,
//! `[simulation]`, and the optional `[sweep]` and `[minimax]` tables.
//!
//! ```toml
//! experiment = "demo"
//! seed = 7
//!
//! [channel]
//! sigma2 = [1.0, 1.0]
//!
//! [budget]
//! gamma = 4.0
//! lambda = 1.0
//! max_bands = 2
//!
//! [code]
//! n = [16, 64]
//! rate = 0.25
//!
//! [simulation]
//! strategies = ["waterfill", "mimic"]
//! trials = 10000
//! ```

use std::fmt;
use std::path::PathBuf;

use fhjam_core::coding::messages_for_rate;
use fhjam_core::minimax::{BinSpec, GameGrids, GridSpec, MinimaxOptions};
use fhjam_core::{FhChannel, HoppingPolicy, JamBudget, Strategy};
use serde::{Deserialize, Serialize};

/// A config problem, located by line and key where possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("config")?;
        if let Some(line) = self.line {
            write!(f, ":{line}")?;
        }
        if let Some(key) = &self.key {
            write!(f, ": `{key}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_experiment")]
    pub experiment: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Report rates in nats instead of bits.
    #[serde(default)]
    pub nats: bool,
    pub channel: ChannelSpec,
    pub budget: BudgetSpec,
    #[serde(default)]
    pub code: CodeSpec,
    #[serde(default)]
    pub simulation: SimulationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub minimax: MinimaxSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    /// Per-band noise variances; `K` is the length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<Vec<f64>>,
    /// `gaussian` or `finite`.
    #[serde(default = "default_noise")]
    pub noise: String,
    /// For finite noise: per band, a list of `[value, probability]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    pub gamma: f64,
    pub lambda: f64,
    /// `J`: bands the jammer may touch per symbol.
    pub max_bands: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub n: Vec<usize>,
    /// Bits per channel use; exclusive with `messages`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub messages: Option<usize>,
    /// `fixed:<k>`, `uniform` or `keyed`.
    #[serde(default = "default_hopping")]
    pub hopping: String,
}

impl Default for CodeSpec {
    fn default() -> Self {
        Self {
            n: vec![16],
            rate: None,
            messages: Some(2),
            hopping: default_hopping(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    /// `none`, `tone:<k>`, `waterfill` or `mimic`.
    #[serde(default = "default_strategies")]
    pub strategies: Vec<String>,
    #[serde(default = "default_trials")]
    pub trials: u64,
}

impl Default for SimulationSpec {
    fn default() -> Self {
        Self {
            strategies: default_strategies(),
            trials: default_trials(),
        }
    }
}

/// A `(Γ, Λ)` grid for bound sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub gamma: Vec<f64>,
    pub lambda: Vec<f64>,
}

/// Grid overrides for the minimax game; anything unset follows the budgets.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimaxSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jam_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jam_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bin_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bin_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_target: Option<f64>,
}

fn default_experiment() -> String {
    "run".into()
}

fn default_noise() -> String {
    "gaussian".into()
}

fn default_hopping() -> String {
    "keyed".into()
}

fn default_strategies() -> Vec<String> {
    vec!["waterfill".into()]
}

fn default_trials() -> u64 {
    10_000
}

impl ExperimentConfig {
    /// Parses and validates a config.
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(src).map_err(|e| ConfigError {
            line: e.span().map(|s| line_of(src, s.start)),
            key: None,
            message: e.message().trim().to_string(),
        })?;
        cfg.validate().map_err(|(key, message)| ConfigError {
            line: locate(src, &key),
            key: Some(key),
            message,
        })?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    /// Checks everything downstream code would reject, naming the key.
    pub fn validate(&self) -> Result<(), (String, String)> {
        let err = |key: &str, msg: String| Err((key.to_string(), msg));
        let ch = self.channel().map_err(|e| ("channel".to_string(), e.to_string()))?;
        let b = &self.budget;
        if !(b.gamma.is_finite() && b.gamma >= 0.0) {
            return err("budget.gamma", format!("must be finite and nonnegative, got {}", b.gamma));
        }
        if !(b.lambda.is_finite() && b.lambda >= 0.0) {
            return err("budget.lambda", format!("must be finite and nonnegative, got {}", b.lambda));
        }
        if b.max_bands > ch.bands() {
            return err(
                "budget.max_bands",
                format!("J = {} exceeds the {} bands", b.max_bands, ch.bands()),
            );
        }
        let c = &self.code;
        if c.n.is_empty() || c.n.contains(&0) {
            return err("code.n", "needs at least one positive blocklength".into());
        }
        match (c.rate, c.messages) {
            (Some(_), Some(_)) => return err("code.rate", "give either rate or messages, not both".into()),
            (None, None) => return err("code.rate", "give either rate or messages".into()),
            (Some(r), None) => {
                for &n in &c.n {
                    if let Err(e) = messages_for_rate(n, r) {
                        return err("code.rate", e.to_string());
                    }
                }
            }
            (None, Some(m)) => {
                if m == 0 {
                    return err("code.messages", "needs at least one message".into());
                }
            }
        }
        match self.hopping() {
            Ok(HoppingPolicy::FixedBand(k)) if k >= ch.bands() => {
                return err("code.hopping", format!("band {} does not exist", k + 1));
            }
            Err(e) => return err("code.hopping", e.to_string()),
            _ => {}
        }
        if self.simulation.strategies.is_empty() {
            return err("simulation.strategies", "needs at least one strategy".into());
        }
        for s in &self.simulation.strategies {
            match s.parse::<Strategy>() {
                Ok(Strategy::Tone(k)) if k >= ch.bands() => {
                    return err("simulation.strategies", format!("tone band {} does not exist", k + 1));
                }
                Err(e) => return err("simulation.strategies", e.to_string()),
                _ => {}
            }
        }
        if self.simulation.trials == 0 {
            return err("simulation.trials", "needs at least one trial".into());
        }
        if let Some(sw) = &self.sweep {
            if sw.gamma.is_empty() || sw.gamma.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
                return err("sweep.gamma", "needs finite nonnegative values".into());
            }
            if sw.lambda.is_empty() || sw.lambda.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
                return err("sweep.lambda", "needs finite nonnegative values".into());
            }
        }
        let grids = self.game_grids();
        for (key, v) in [
            ("minimax.input_step", grids.input.values().err()),
            ("minimax.jam_step", grids.jam.values().err()),
            ("minimax.bin_width", grids.output.edges().err()),
        ] {
            if let Some(e) = v {
                return err(key, e.to_string());
            }
        }
        if self.minimax.iterations == Some(0) {
            return err("minimax.iterations", "needs at least one iteration".into());
        }
        Ok(())
    }

    pub fn channel(&self) -> fhjam_core::Result<FhChannel> {
        let c = &self.channel;
        match c.noise.as_str() {
            "gaussian" => FhChannel::gaussian(c.sigma2.clone().unwrap_or_default()),
            "finite" => {
                let support = c.support.clone().unwrap_or_default();
                let ch = FhChannel::finite_support(
                    support
                        .iter()
                        .map(|band| band.iter().map(|&[z, p]| (z, p)).collect())
                        .collect(),
                )?;
                if let Some(s2) = &c.sigma2 {
                    let agrees = s2.len() == ch.bands()
                        && s2.iter().zip(ch.sigma2()).all(|(a, b)| (a - b).abs() <= 1e-9);
                    if !agrees {
                        return Err(fhjam_core::Error::Contract(
                            "sigma2 disagrees with the finite noise support".into(),
                        ));
                    }
                }
                Ok(ch)
            }
            other => Err(fhjam_core::Error::Format(format!(
                "unknown noise `{other}`; expected gaussian or finite"
            ))),
        }
    }

    pub fn jam_budget(&self) -> fhjam_core::Result<JamBudget> {
        JamBudget::new(self.budget.lambda, self.budget.max_bands)
    }

    pub fn hopping(&self) -> fhjam_core::Result<HoppingPolicy> {
        self.code.hopping.parse()
    }

    pub fn strategies(&self) -> fhjam_core::Result<Vec<Strategy>> {
        self.simulation.strategies.iter().map(|s| s.parse()).collect()
    }

    /// Codebook size at blocklength `n`.
    pub fn messages(&self, n: usize) -> fhjam_core::Result<usize> {
        match (self.code.messages, self.code.rate) {
            (Some(m), _) => Ok(m),
            (None, Some(r)) => messages_for_rate(n, r),
            (None, None) => Err(fhjam_core::Error::Contract("no rate or messages".into())),
        }
    }

    pub fn game_grids(&self) -> GameGrids {
        let sigma_max = self
            .channel
            .sigma2
            .as_ref()
            .and_then(|s| s.iter().copied().reduce(f64::max))
            .unwrap_or(1.0);
        let base = GameGrids::for_budgets(self.budget.gamma, self.budget.lambda, sigma_max);
        let m = &self.minimax;
        let input_max = m.input_max.unwrap_or(base.input.max);
        let jam_max = m.jam_max.unwrap_or(base.jam.max);
        let bin_max = m.bin_max.unwrap_or(base.output.max);
        GameGrids {
            input: GridSpec::symmetric(input_max, m.input_step.unwrap_or(base.input.step)),
            jam: GridSpec::symmetric(jam_max, m.jam_step.unwrap_or(base.jam.step)),
            output: BinSpec {
                min: -bin_max,
                max: bin_max,
                width: m.bin_width.unwrap_or(base.output.width),
            },
        }
    }

    pub fn minimax_options(&self) -> MinimaxOptions {
        let d = MinimaxOptions::default();
        MinimaxOptions {
            iterations: self.minimax.iterations.unwrap_or(d.iterations),
            gap_target: self.minimax.gap_target.unwrap_or(d.gap_target),
            ..d
        }
    }
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

/// Line of `table.key` (or a top-level `key`) in `src`, if written there.
fn locate(src: &str, path: &str) -> Option<usize> {
    let (table, key) = match path.split_once('.') {
        Some((t, k)) => (Some(t), k),
        None => (None, path),
    };
    let mut current: Option<String> = None;
    let mut table_line = None;
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = Some(name.trim().to_string());
            if table.is_none() && name.trim() == key {
                return Some(i + 1);
            }
            if table == Some(name.trim()) {
                table_line = Some(i + 1);
            }
            continue;
        }
        let here = current.as_deref() == table;
        let is_key = line
            .split_once('=')
            .is_some_and(|(k, _)| k.trim() == key);
        if here && is_key {
            return Some(i + 1);
        }
    }
    table_line
}
