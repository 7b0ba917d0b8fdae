//! Jamming strategies inside the jammer constraint set.
//!
//! A jam block is admissible when every column touches at most `J` bands and
//! the block power is at most `n·Λ`. Besides the trivial silent and tone
//! jammers this module provides the two strategies that pin down the
//! capacity: the waterfilling Gaussian jammer, and the mimicking attack that
//! replays a legitimate codeword and drives the average error of any code to
//! at least 1/4 once `Γ ≤ Λ`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::bounds::waterfill;
use crate::channel::FhChannel;
use crate::coding::{run_trials, Codebook, ErrorEstimate, JamProvider, TrialSetup, POWER_SLACK};
use crate::error::{contract, Error, Result};
use crate::matrix::BlockMatrix;
use crate::rng::StreamRng;

/// Jammer power budget `Λ` and simultaneous-band cap `J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JamBudget {
    lambda: f64,
    max_bands: usize,
}

impl JamBudget {
    pub fn new(lambda: f64, max_bands: usize) -> Result<Self> {
        contract!(
            lambda.is_finite() && lambda >= 0.0,
            "jammer power must be nonnegative, got {lambda}"
        );
        contract!(max_bands >= 1, "jammer must be allowed at least one band");
        Ok(Self { lambda, max_bands })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `J`.
    pub fn max_bands(&self) -> usize {
        self.max_bands
    }

    fn check_bands(&self, bands: usize) -> Result<()> {
        contract!(
            self.max_bands <= bands,
            "J = {} exceeds the number of bands {bands}",
            self.max_bands
        );
        Ok(())
    }
}

/// True iff every column of `jam` has at most `J` nonzero entries and the
/// total power is at most `n·Λ` (up to a relative `1e-12`).
pub fn check_jam_constraint(jam: &BlockMatrix, budget: &JamBudget) -> bool {
    let supported = (0..jam.n()).all(|col| jam.column_support(col) <= budget.max_bands);
    supported && jam.power() <= jam.n() as f64 * budget.lambda * (1.0 + POWER_SLACK)
}

pub fn jam_none(bands: usize, n: usize) -> BlockMatrix {
    BlockMatrix::zeros(bands, n)
}

/// Constant amplitude `√Λ` on one band: power exactly `n·Λ`.
pub fn jam_tone(bands: usize, n: usize, band: usize, budget: &JamBudget) -> Result<BlockMatrix> {
    contract!(band < bands, "tone band {band} out of range 0..{bands}");
    let mut out = BlockMatrix::zeros(bands, n);
    out.row_mut(band).fill(budget.lambda.sqrt());
    Ok(out)
}

/// Independent `N(0, Λ_k)` rows on the waterfilled bands.
///
/// Fails with [`Error::Infeasible`] when the waterfilling support is larger
/// than `J`. A draw whose power exceeds `n·Λ` is scaled back to `n·Λ`.
pub fn jam_waterfilling_gaussian<R: Rng + ?Sized>(
    ch: &FhChannel,
    budget: &JamBudget,
    n: usize,
    rng: &mut R,
) -> Result<BlockMatrix> {
    let plan = WaterfillJammer::new(ch, budget)?;
    Ok(plan.draw(n, rng))
}

/// A validated waterfilling jammer, reusable across blocks.
#[derive(Debug, Clone)]
struct WaterfillJammer {
    bands: usize,
    lambda: f64,
    rows: Vec<(usize, Normal<f64>)>,
}

impl WaterfillJammer {
    fn new(ch: &FhChannel, budget: &JamBudget) -> Result<Self> {
        budget.check_bands(ch.bands())?;
        let wf = waterfill(ch.sigma2(), budget.lambda)?;
        if wf.active.len() > budget.max_bands {
            return Err(Error::Infeasible(format!(
                "waterfilling needs {} bands (σ² < c = {}) but J = {}",
                wf.active.len(),
                wf.level,
                budget.max_bands
            )));
        }
        let rows = wf
            .active
            .iter()
            .filter(|&&k| wf.allocation[k] > 0.0)
            .map(|&k| (k, Normal::new(0.0, wf.allocation[k].sqrt()).expect("positive sd")))
            .collect();
        Ok(Self {
            bands: ch.bands(),
            lambda: budget.lambda,
            rows,
        })
    }

    fn draw<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> BlockMatrix {
        let mut out = BlockMatrix::zeros(self.bands, n);
        for (band, normal) in &self.rows {
            for v in out.row_mut(*band) {
                *v = normal.sample(rng);
            }
        }
        let budget = n as f64 * self.lambda;
        let power = out.power();
        if power > budget {
            out.scale((budget / power).sqrt());
        }
        out
    }
}

/// The codeword of `m_prime`, replayed as a jam block.
///
/// A codeword occupies one band per column, so any `J ≥ 1` admits it; the
/// only requirement is that its power fits in `n·Λ`.
pub fn jam_mimic(cb: &Codebook, m_prime: usize, budget: &JamBudget) -> Result<BlockMatrix> {
    contract!(
        m_prime < cb.messages(),
        "message {m_prime} out of range 0..{}",
        cb.messages()
    );
    check_mimic_power(cb, budget, Some(m_prime))?;
    cb.encode(m_prime)
}

fn check_mimic_power(cb: &Codebook, budget: &JamBudget, only: Option<usize>) -> Result<()> {
    let power = only.map_or_else(|| cb.max_power(), |m| cb.power(m));
    let allowed = cb.n() as f64 * budget.lambda;
    if power > allowed * (1.0 + POWER_SLACK) {
        return Err(Error::Infeasible(format!(
            "codeword power {power} exceeds the jammer's n·Λ = {allowed}; mimicking needs Γ ≤ Λ"
        )));
    }
    Ok(())
}

/// Outcome of the mimicking attack.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackEstimate {
    /// Error averaged over uniform `(m, m′)`.
    pub average: ErrorEstimate,
    /// Trials with `m ≠ m′` only.
    pub distinct: ErrorEstimate,
    /// Error conditioned on each replayed message `m′`.
    pub per_attack: Vec<ErrorEstimate>,
    /// `m′` with the largest empirical error (smallest index on ties).
    pub worst_attack: usize,
}

/// Monte Carlo estimate of `(1/M)·Σ_{m′} ē(code, replay of m′)`.
///
/// Each trial draws the message `m` and the replayed `m′` independently and
/// uniformly.
pub fn attack_error_floor(
    cb: &Codebook,
    ch: &FhChannel,
    budget: &JamBudget,
    trials: u64,
    seed: u64,
) -> Result<AttackEstimate> {
    let messages = cb.messages();
    contract!(messages >= 2, "the attack needs at least two messages");
    check_mimic_power(cb, budget, None)?;

    // group = 2·m′ + [m ≠ m′]
    let tallies = run_trials(cb, ch, trials, seed, 2 * messages, |rng| {
        let m = rng.random_range(0..messages);
        let m_prime = rng.random_range(0..messages);
        Ok(TrialSetup {
            message: m,
            group: 2 * m_prime + usize::from(m != m_prime),
            jam: cb.encode(m_prime)?,
        })
    })?;

    let mut average = ErrorEstimate::default();
    let mut distinct = ErrorEstimate::default();
    let mut per_attack = Vec::with_capacity(messages);
    for pair in tallies.chunks_exact(2) {
        let (same, other) = (pair[0], pair[1]);
        let attack = ErrorEstimate {
            errors: same.errors + other.errors,
            trials: same.trials + other.trials,
        };
        average.errors += attack.errors;
        average.trials += attack.trials;
        distinct.errors += other.errors;
        distinct.trials += other.trials;
        per_attack.push(attack);
    }
    let worst_attack = per_attack
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (m, e)| {
            if e.trials > 0 && e.rate() > best.1 {
                (m, e.rate())
            } else {
                best
            }
        })
        .0;
    Ok(AttackEstimate {
        average,
        distinct,
        per_attack,
        worst_attack,
    })
}

/// Jamming strategy, selectable by name: `none | tone:<k> | waterfill | mimic`.
///
/// In the textual form the tone band `k` counts from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    None,
    /// Zero-based band.
    Tone(usize),
    Waterfill,
    /// Replays a uniformly chosen codeword in every block.
    Mimic,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::None => f.write_str("none"),
            Strategy::Tone(k) => write!(f, "tone:{}", k + 1),
            Strategy::Waterfill => f.write_str("waterfill"),
            Strategy::Mimic => f.write_str("mimic"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(Strategy::None),
            "waterfill" => Ok(Strategy::Waterfill),
            "mimic" => Ok(Strategy::Mimic),
            other => {
                let band = other
                    .strip_prefix("tone:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| {
                        Error::Format(format!(
                            "unknown jammer `{other}`; expected none, tone:<k>, waterfill or mimic"
                        ))
                    })?;
                Ok(Strategy::Tone(band - 1))
            }
        }
    }
}

impl Strategy {
    /// Binds the strategy to a code, channel and budget, checking feasibility
    /// once up front.
    pub fn provider<'a>(
        &self,
        cb: &'a Codebook,
        ch: &FhChannel,
        budget: &JamBudget,
    ) -> Result<Box<dyn JamProvider + 'a>> {
        budget.check_bands(ch.bands())?;
        let (bands, n) = (cb.bands(), cb.n());
        Ok(match *self {
            Strategy::None => Box::new(move |_: &mut StreamRng| Ok(jam_none(bands, n))),
            Strategy::Tone(k) => {
                let block = jam_tone(bands, n, k, budget)?;
                Box::new(move |_: &mut StreamRng| Ok(block.clone()))
            }
            Strategy::Waterfill => {
                let plan = WaterfillJammer::new(ch, budget)?;
                Box::new(move |rng: &mut StreamRng| Ok(plan.draw(n, rng)))
            }
            Strategy::Mimic => {
                check_mimic_power(cb, budget, None)?;
                let messages = cb.messages();
                Box::new(move |rng: &mut StreamRng| cb.encode(rng.random_range(0..messages)))
            }
        })
    }
}
