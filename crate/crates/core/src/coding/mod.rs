//! FH block codes: random codebook generation, encoding and
//! minimum-distance decoding, plus Monte Carlo error estimation.
//!
//! A codeword is a `K×n` matrix with at most one nonzero entry per column.
//! Codebooks store each codeword as a hopping sequence plus an amplitude
//! sequence; [`Codebook::encode`] expands it to a dense [`BlockMatrix`].

mod io;
mod sim;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{contract, Error, Result};
use crate::matrix::BlockMatrix;

pub use sim::{empirical_error, run_trials, ErrorEstimate, JamProvider, TrialSetup};

/// Relative slack allowed on power constraints, absorbing rounding in
/// rescaled codewords.
pub const POWER_SLACK: f64 = 1e-12;

/// Fraction of the power budget used as amplitude variance by the random
/// code generator.
pub const AMPLITUDE_VARIANCE_FRACTION: f64 = 0.98;

/// How a random codebook chooses its band sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoppingPolicy {
    /// Every symbol on one band.
    FixedBand(usize),
    /// One i.i.d. uniform hopping pattern shared by all messages.
    UniformRandom,
    /// An independent i.i.d. uniform hopping pattern per message, so the band
    /// sequence itself carries information.
    MessageKeyed,
}

/// Textual form: `fixed:<k>` (band counted from 1), `uniform`, `keyed`.
impl fmt::Display for HoppingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoppingPolicy::FixedBand(k) => write!(f, "fixed:{}", k + 1),
            HoppingPolicy::UniformRandom => f.write_str("uniform"),
            HoppingPolicy::MessageKeyed => f.write_str("keyed"),
        }
    }
}

impl FromStr for HoppingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "uniform" => Ok(HoppingPolicy::UniformRandom),
            "keyed" => Ok(HoppingPolicy::MessageKeyed),
            other => other
                .strip_prefix("fixed:")
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .map(|k| HoppingPolicy::FixedBand(k - 1))
                .ok_or_else(|| {
                    Error::Format(format!(
                        "unknown hopping policy `{other}`; expected fixed:<k>, uniform or keyed"
                    ))
                }),
        }
    }
}

/// A blocklength-`n` FH code under sender power budget `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    bands: usize,
    n: usize,
    gamma: f64,
    hops: Vec<u32>,
    amps: Vec<f64>,
    energy: Vec<f64>,
}

impl Codebook {
    /// Draws a random Gaussian code.
    ///
    /// Amplitudes are i.i.d. `N(0, 0.98·gamma)`; a codeword whose power ends
    /// up above `n·gamma` is scaled down to exactly `n·gamma`.
    pub fn random<R: Rng + ?Sized>(
        bands: usize,
        n: usize,
        messages: usize,
        gamma: f64,
        policy: HoppingPolicy,
        rng: &mut R,
    ) -> Result<Self> {
        contract!(bands >= 1, "need at least one band");
        contract!(bands <= u32::MAX as usize, "too many bands");
        contract!(n >= 1, "blocklength must be at least 1");
        contract!(messages >= 1, "need at least one message");
        contract!(gamma.is_finite() && gamma > 0.0, "sender power must be positive, got {gamma}");
        if let HoppingPolicy::FixedBand(k) = policy {
            contract!(k < bands, "fixed band {k} out of range 0..{bands}");
        }

        let amplitude = Normal::new(0.0, (AMPLITUDE_VARIANCE_FRACTION * gamma).sqrt())
            .expect("positive sd");
        let shared: Option<Vec<u32>> = match policy {
            HoppingPolicy::FixedBand(k) => Some(vec![k as u32; n]),
            HoppingPolicy::UniformRandom => {
                Some((0..n).map(|_| rng.random_range(0..bands as u32)).collect())
            }
            HoppingPolicy::MessageKeyed => None,
        };

        let budget = n as f64 * gamma;
        let mut hops = Vec::with_capacity(messages * n);
        let mut amps = Vec::with_capacity(messages * n);
        let mut energy = Vec::with_capacity(messages);
        for _ in 0..messages {
            match &shared {
                Some(seq) => hops.extend_from_slice(seq),
                None => hops.extend((0..n).map(|_| rng.random_range(0..bands as u32))),
            }
            let start = amps.len();
            amps.extend((0..n).map(|_| amplitude.sample(rng)));
            let word = &mut amps[start..];
            let mut power: f64 = word.iter().map(|a| a * a).sum();
            if power > budget {
                let factor = (budget / power).sqrt();
                word.iter_mut().for_each(|a| *a *= factor);
                power = word.iter().map(|a| a * a).sum();
            }
            energy.push(power);
        }
        Ok(Self {
            bands,
            n,
            gamma,
            hops,
            amps,
            energy,
        })
    }

    /// Wraps explicit codewords, checking the FH structure and power budget.
    pub fn from_codewords(gamma: f64, codewords: &[BlockMatrix]) -> Result<Self> {
        contract!(!codewords.is_empty(), "need at least one codeword");
        contract!(gamma.is_finite() && gamma > 0.0, "sender power must be positive, got {gamma}");
        let (bands, n) = codewords[0].shape();
        contract!(bands >= 1 && n >= 1, "codewords must be nonempty");
        let budget = n as f64 * gamma * (1.0 + POWER_SLACK);
        let mut hops = Vec::with_capacity(codewords.len() * n);
        let mut amps = Vec::with_capacity(codewords.len() * n);
        let mut energy = Vec::with_capacity(codewords.len());
        for (m, word) in codewords.iter().enumerate() {
            contract!(
                word.shape() == (bands, n),
                "codeword {m} has shape {:?}, expected {:?}",
                word.shape(),
                (bands, n)
            );
            for col in 0..n {
                contract!(
                    word.column_support(col) <= 1,
                    "codeword {m} uses more than one band in column {col}"
                );
                let band = (0..bands).find(|&b| word.get(b, col) != 0.0).unwrap_or(0);
                hops.push(band as u32);
                amps.push(word.get(band, col));
            }
            let power: f64 = amps[m * n..].iter().map(|a| a * a).sum();
            contract!(
                power <= budget,
                "codeword {m} has power {power} above n·gamma = {}",
                n as f64 * gamma
            );
            energy.push(power);
        }
        Ok(Self {
            bands,
            n,
            gamma,
            hops,
            amps,
            energy,
        })
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of messages `M`.
    pub fn messages(&self) -> usize {
        self.energy.len()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Rate `log2(M)/n` in bits per channel use.
    pub fn rate_bits(&self) -> f64 {
        (self.messages() as f64).log2() / self.n as f64
    }

    /// Band used by message `m` at each time.
    pub fn hopping_sequence(&self, m: usize) -> &[u32] {
        &self.hops[m * self.n..(m + 1) * self.n]
    }

    pub fn amplitudes(&self, m: usize) -> &[f64] {
        &self.amps[m * self.n..(m + 1) * self.n]
    }

    /// `‖codeword m‖²`.
    pub fn power(&self, m: usize) -> f64 {
        self.energy[m]
    }

    pub fn max_power(&self) -> f64 {
        self.energy.iter().copied().fold(0.0, f64::max)
    }

    /// The codeword of message `m` (zero-based).
    pub fn encode(&self, m: usize) -> Result<BlockMatrix> {
        contract!(
            m < self.messages(),
            "message {m} out of range 0..{}",
            self.messages()
        );
        let mut out = BlockMatrix::zeros(self.bands, self.n);
        self.add_codeword(m, &mut out);
        Ok(out)
    }

    pub(crate) fn add_codeword(&self, m: usize, out: &mut BlockMatrix) {
        for (col, (&band, &amp)) in self
            .hopping_sequence(m)
            .iter()
            .zip(self.amplitudes(m))
            .enumerate()
        {
            let v = out.get(band as usize, col) + amp;
            out.set(band as usize, col, v);
        }
    }

    /// Minimum Euclidean distance decoding; ties go to the smallest index.
    pub fn decode(&self, y: &BlockMatrix) -> Result<usize> {
        contract!(
            y.shape() == (self.bands, self.n),
            "output has shape {:?}, code expects {:?}",
            y.shape(),
            (self.bands, self.n)
        );
        Ok(self.decode_batch(std::slice::from_ref(y))[0])
    }

    /// Decodes several outputs at once, streaming the codebook once per batch.
    pub(crate) fn decode_batch(&self, ys: &[BlockMatrix]) -> Vec<usize> {
        // ‖y − c‖² = ‖y‖² + ‖c‖² − 2⟨y, c⟩ and ‖y‖² is common to all m.
        const CHUNK: usize = 256;
        let n = self.n;
        let mut best = vec![(f64::INFINITY, 0usize); ys.len()];
        for start in (0..self.messages()).step_by(CHUNK) {
            let end = (start + CHUNK).min(self.messages());
            for (y, slot) in ys.iter().zip(best.iter_mut()) {
                let data = y.row_major();
                for m in start..end {
                    let hops = &self.hops[m * n..(m + 1) * n];
                    let amps = &self.amps[m * n..(m + 1) * n];
                    let mut dot = 0.0;
                    for (col, (&band, &amp)) in hops.iter().zip(amps).enumerate() {
                        dot += amp * data[band as usize * n + col];
                    }
                    let score = self.energy[m] - 2.0 * dot;
                    if score < slot.0 {
                        *slot = (score, m);
                    }
                }
            }
        }
        best.into_iter().map(|(_, m)| m).collect()
    }
}

/// Message count for a target rate: `max(2, round(2^(n·rate)))`.
pub fn messages_for_rate(n: usize, rate_bits: f64) -> Result<usize> {
    contract!(rate_bits >= 0.0, "rate must be nonnegative");
    let bits = n as f64 * rate_bits;
    contract!(bits <= 30.0, "n·rate = {bits} bits gives an impractically large codebook");
    Ok((bits.exp2().round() as usize).max(2))
}
