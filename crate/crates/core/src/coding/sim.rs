use rand::Rng;
use rayon::prelude::*;

use crate::channel::FhChannel;
use crate::coding::Codebook;
use crate::error::{contract, Result};
use crate::matrix::BlockMatrix;
use crate::rng::{self, StreamRng};

/// Trials decoded together; fixed so that results do not depend on the
/// thread count.
const BATCH: usize = 32;

/// A source of jam blocks.
///
/// The provider only sees its random stream, never the transmitted message.
pub trait JamProvider: Sync {
    fn draw(&self, rng: &mut StreamRng) -> Result<BlockMatrix>;
}

impl<F> JamProvider for F
where
    F: Fn(&mut StreamRng) -> Result<BlockMatrix> + Sync,
{
    fn draw(&self, rng: &mut StreamRng) -> Result<BlockMatrix> {
        self(rng)
    }
}

/// Error count over a number of Monte Carlo trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ErrorEstimate {
    pub errors: u64,
    pub trials: u64,
}

impl ErrorEstimate {
    /// Empirical error rate; zero when no trials ran.
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.errors as f64 / self.trials as f64
        }
    }

    /// `√(e(1−e)/trials)`.
    pub fn std_error(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let e = self.rate();
        (e * (1.0 - e) / self.trials as f64).sqrt()
    }

    fn merge(&mut self, other: ErrorEstimate) {
        self.errors += other.errors;
        self.trials += other.trials;
    }
}

/// Estimates the average decoding error of `cb` under `jam`, with the
/// message drawn uniformly per trial.
pub fn empirical_error(
    cb: &Codebook,
    ch: &FhChannel,
    jam: &dyn JamProvider,
    trials: u64,
    seed: u64,
) -> Result<ErrorEstimate> {
    let messages = cb.messages();
    let tallies = run_trials(cb, ch, trials, seed, 1, |rng| {
        let m = rng.random_range(0..messages);
        Ok(TrialSetup {
            message: m,
            group: 0,
            jam: jam.draw(rng)?,
        })
    })?;
    Ok(tallies[0])
}

/// What one trial sends: a message, the jam it faces, and a tally group.
pub struct TrialSetup {
    pub message: usize,
    pub group: usize,
    pub jam: BlockMatrix,
}

/// Runs `trials` independent transmissions and tallies decoding errors per
/// group.
///
/// Trial `t` draws everything from the stream `(seed, t)`: first whatever
/// `setup` consumes, then the channel noise.
pub fn run_trials<F>(
    cb: &Codebook,
    ch: &FhChannel,
    trials: u64,
    seed: u64,
    groups: usize,
    setup: F,
) -> Result<Vec<ErrorEstimate>>
where
    F: Fn(&mut StreamRng) -> Result<TrialSetup> + Sync,
{
    contract!(trials >= 1, "need at least one trial");
    contract!(
        ch.bands() == cb.bands(),
        "code has {} bands, channel has {}",
        cb.bands(),
        ch.bands()
    );
    let batches = trials.div_ceil(BATCH as u64);
    let partial: Vec<Result<Vec<ErrorEstimate>>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let first = b * BATCH as u64;
            let last = (first + BATCH as u64).min(trials);
            let mut sent = Vec::with_capacity(BATCH);
            let mut outputs = Vec::with_capacity(BATCH);
            for t in first..last {
                let mut r = rng::derive(seed, &[t]);
                let TrialSetup {
                    message,
                    group,
                    jam: mut y,
                } = setup(&mut r)?;
                contract!(group < groups, "tally group {group} out of range");
                contract!(
                    y.shape() == (cb.bands(), cb.n()),
                    "jam block has shape {:?}, code expects {:?}",
                    y.shape(),
                    (cb.bands(), cb.n())
                );
                cb.add_codeword(message, &mut y);
                ch.add_noise(&mut y, &mut r);
                sent.push((message, group));
                outputs.push(y);
            }
            let mut tally = vec![ErrorEstimate::default(); groups];
            for ((m, g), decoded) in sent.into_iter().zip(cb.decode_batch(&outputs)) {
                tally[g].trials += 1;
                tally[g].errors += u64::from(decoded != m);
            }
            Ok(tally)
        })
        .collect();
    let mut total = vec![ErrorEstimate::default(); groups];
    for tally in partial {
        for (acc, t) in total.iter_mut().zip(tally?) {
            acc.merge(t);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::HoppingPolicy;

    fn silent(bands: usize, n: usize) -> impl Fn(&mut StreamRng) -> Result<BlockMatrix> + Sync {
        move |_: &mut StreamRng| Ok(BlockMatrix::zeros(bands, n))
    }

    #[test]
    fn near_noiseless_channel_rarely_errs() {
        // SNR 10^6: pairwise error Q(d/2σ) with d ~ sqrt(2·8) is ~0.
        let ch = FhChannel::gaussian(vec![1e-6]).unwrap();
        let cb = Codebook::random(1, 8, 2, 1.0, HoppingPolicy::FixedBand(0), &mut rng::derive(1, &[])).unwrap();
        let est = empirical_error(&cb, &ch, &silent(1, 8), 2000, 5).unwrap();
        assert!(est.rate() < 0.01, "{est:?}");
    }

    #[test]
    fn single_message_never_errs() {
        let ch = FhChannel::gaussian(vec![100.0]).unwrap();
        let cb = Codebook::random(1, 4, 1, 1.0, HoppingPolicy::FixedBand(0), &mut rng::derive(1, &[])).unwrap();
        let est = empirical_error(&cb, &ch, &silent(1, 4), 500, 5).unwrap();
        assert_eq!(est, ErrorEstimate { errors: 0, trials: 500 });
    }

    #[test]
    fn standard_error_is_bounded() {
        let est = ErrorEstimate { errors: 37, trials: 100 };
        assert!((est.std_error() - (0.37f64 * 0.63 / 100.0).sqrt()).abs() < 1e-15);
        assert!(est.std_error() <= 0.5 / 10.0);
    }

    #[test]
    fn rejects_bad_jam_shape_and_zero_trials() {
        let ch = FhChannel::gaussian(vec![1.0, 1.0]).unwrap();
        let cb = Codebook::random(2, 4, 2, 1.0, HoppingPolicy::MessageKeyed, &mut rng::derive(1, &[])).unwrap();
        assert!(empirical_error(&cb, &ch, &silent(2, 3), 10, 0).is_err());
        assert!(empirical_error(&cb, &ch, &silent(2, 4), 0, 0).is_err());
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let ch = FhChannel::gaussian(vec![1.0, 2.0]).unwrap();
        let cb = Codebook::random(2, 6, 8, 1.0, HoppingPolicy::MessageKeyed, &mut rng::derive(1, &[])).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| empirical_error(&cb, &ch, &silent(2, 6), 1000, 42).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(3));
        assert_eq!(one, run(8));
    }
}
