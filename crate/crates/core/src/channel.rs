//! The FH channel: `K` parallel additive-noise subbands observed jointly.
//!
//! Band indices are zero-based throughout the library.

use std::collections::BTreeSet;

use rand::Rng;
use rand_distr::{weighted::WeightedIndex, Distribution, Normal};

use crate::error::{contract, Result};
use crate::matrix::BlockMatrix;

/// Per-band noise law. Every law is mean-zero.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseKind {
    Gaussian,
    /// One list of `(value, probability)` atoms per band.
    FiniteSupport(Vec<Vec<(f64, f64)>>),
}

#[derive(Debug, Clone)]
enum BandSampler {
    Gaussian(Normal<f64>),
    Atoms { values: Vec<f64>, index: WeightedIndex<f64> },
}

impl BandSampler {
    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            BandSampler::Gaussian(normal) => normal.sample(rng),
            BandSampler::Atoms { values, index } => values[index.sample(rng)],
        }
    }
}

/// Static description of an FH channel.
#[derive(Debug, Clone)]
pub struct FhChannel {
    sigma2: Vec<f64>,
    noise: NoiseKind,
    samplers: Vec<BandSampler>,
}

impl PartialEq for FhChannel {
    fn eq(&self, other: &Self) -> bool {
        self.sigma2 == other.sigma2 && self.noise == other.noise
    }
}

impl FhChannel {
    /// Validates and builds a channel.
    ///
    /// For finite-support noise the atoms must sum to one, have mean zero and
    /// have second moment `sigma2[k]` on band `k`.
    pub fn new(sigma2: Vec<f64>, noise: NoiseKind) -> Result<Self> {
        contract!(!sigma2.is_empty(), "a channel needs at least one band");
        contract!(
            sigma2.iter().all(|&v| v.is_finite() && v > 0.0),
            "noise variances must be positive and finite, got {:?}",
            sigma2
        );
        let samplers = match &noise {
            NoiseKind::Gaussian => sigma2
                .iter()
                .map(|&v| BandSampler::Gaussian(Normal::new(0.0, v.sqrt()).expect("positive sd")))
                .collect(),
            NoiseKind::FiniteSupport(bands) => {
                contract!(
                    bands.len() == sigma2.len(),
                    "finite-support noise given for {} bands, channel has {}",
                    bands.len(),
                    sigma2.len()
                );
                let mut samplers = Vec::with_capacity(bands.len());
                for (k, atoms) in bands.iter().enumerate() {
                    let (mass, mean, second) = moments(atoms);
                    contract!(
                        atoms.iter().all(|&(v, p)| v.is_finite() && p >= 0.0),
                        "band {k}: atoms must be finite with nonnegative mass"
                    );
                    contract!(
                        (mass - 1.0).abs() <= 1e-12,
                        "band {k}: probabilities sum to {mass}"
                    );
                    contract!(mean.abs() <= 1e-9, "band {k}: noise mean {mean} is not zero");
                    contract!(
                        (second - sigma2[k]).abs() <= 1e-9,
                        "band {k}: second moment {second} differs from sigma2 {}",
                        sigma2[k]
                    );
                    let index = WeightedIndex::new(atoms.iter().map(|a| a.1))
                        .map_err(|e| crate::Error::Contract(format!("band {k}: {e}")))?;
                    samplers.push(BandSampler::Atoms {
                        values: atoms.iter().map(|a| a.0).collect(),
                        index,
                    });
                }
                samplers
            }
        };
        Ok(Self {
            sigma2,
            noise,
            samplers,
        })
    }

    pub fn gaussian(sigma2: Vec<f64>) -> Result<Self> {
        Self::new(sigma2, NoiseKind::Gaussian)
    }

    /// Finite-support noise; the variances are read off the atoms.
    pub fn finite_support(bands: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        let sigma2 = bands.iter().map(|atoms| moments(atoms).2).collect();
        Self::new(sigma2, NoiseKind::FiniteSupport(bands))
    }

    /// Number of subbands `K`.
    pub fn bands(&self) -> usize {
        self.sigma2.len()
    }

    pub fn sigma2(&self) -> &[f64] {
        &self.sigma2
    }

    pub fn noise_kind(&self) -> &NoiseKind {
        &self.noise
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.noise, NoiseKind::Gaussian)
    }

    /// One channel use: `y = x·e_k + s∘e_I + noise`.
    pub fn transmit(&self, sym: SenderSymbol, jam: &JamSymbol, noise: &[f64]) -> Result<Vec<f64>> {
        let bands = self.bands();
        contract!(sym.band < bands, "sender band {} out of range 0..{bands}", sym.band);
        contract!(
            jam.s.len() == bands,
            "jam vector has length {}, channel has {bands} bands",
            jam.s.len()
        );
        contract!(
            jam.bands.iter().all(|&l| l < bands),
            "jam band set {:?} exceeds 0..{bands}",
            jam.bands
        );
        contract!(
            noise.len() == bands,
            "noise vector has length {}, channel has {bands} bands",
            noise.len()
        );
        Ok((0..bands)
            .map(|l| {
                let x = if l == sym.band { sym.x } else { 0.0 };
                x + jam.s[l] + noise[l]
            })
            .collect())
    }

    /// `K×n` matrix of independent noise columns.
    pub fn sample_noise<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<BlockMatrix> {
        contract!(n >= 1, "blocklength must be at least 1");
        let mut out = BlockMatrix::zeros(self.bands(), n);
        self.add_noise(&mut out, rng);
        Ok(out)
    }

    /// Adds a fresh noise block to `block` in place.
    ///
    /// Draws column by column, band by band: the same stream as
    /// [`FhChannel::sample_noise`].
    pub(crate) fn add_noise<R: Rng + ?Sized>(&self, block: &mut BlockMatrix, rng: &mut R) {
        debug_assert_eq!(block.bands(), self.bands());
        for col in 0..block.n() {
            for (band, sampler) in self.samplers.iter().enumerate() {
                let v = block.get(band, col) + sampler.sample(rng);
                block.set(band, col, v);
            }
        }
    }

    /// Sends a whole block: `codeword + jam + noise`.
    pub fn transmit_block<R: Rng + ?Sized>(
        &self,
        codeword: &BlockMatrix,
        jam: &BlockMatrix,
        rng: &mut R,
    ) -> Result<BlockMatrix> {
        contract!(
            codeword.bands() == self.bands(),
            "codeword has {} bands, channel has {}",
            codeword.bands(),
            self.bands()
        );
        contract!(codeword.n() >= 1, "blocklength must be at least 1");
        let mut out = codeword.try_add(jam)?;
        self.add_noise(&mut out, rng);
        Ok(out)
    }
}

fn moments(atoms: &[(f64, f64)]) -> (f64, f64, f64) {
    atoms.iter().fold((0.0, 0.0, 0.0), |(m, mean, sq), &(v, p)| {
        (m + p, mean + p * v, sq + p * v * v)
    })
}

/// A sender channel input: amplitude `x` on band `band`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SenderSymbol {
    pub x: f64,
    pub band: usize,
}

/// A jammer channel input: a band subset and a vector vanishing off it.
#[derive(Debug, Clone, PartialEq)]
pub struct JamSymbol {
    bands: BTreeSet<usize>,
    s: Vec<f64>,
}

impl JamSymbol {
    /// `max_bands` is the jammer's simultaneous-band cap `J`.
    pub fn new(bands: BTreeSet<usize>, s: Vec<f64>, max_bands: usize) -> Result<Self> {
        contract!(
            bands.len() <= max_bands,
            "jammer uses {} bands, cap is {max_bands}",
            bands.len()
        );
        contract!(
            bands.iter().all(|&l| l < s.len()),
            "band set {:?} exceeds vector length {}",
            bands,
            s.len()
        );
        contract!(
            s.iter()
                .enumerate()
                .all(|(l, &v)| v == 0.0 || bands.contains(&l)),
            "jam vector is nonzero outside its band set"
        );
        Ok(Self { bands, s })
    }

    /// No jamming on a `bands`-band channel.
    pub fn silent(bands: usize) -> Self {
        Self {
            bands: BTreeSet::new(),
            s: vec![0.0; bands],
        }
    }

    pub fn bands(&self) -> &BTreeSet<usize> {
        &self.bands
    }

    pub fn vector(&self) -> &[f64] {
        &self.s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use proptest::prelude::*;
    use rand::Rng;

    fn two_band() -> FhChannel {
        FhChannel::gaussian(vec![1.0, 1.0]).unwrap()
    }

    fn jam(bands: &[usize], s: Vec<f64>) -> JamSymbol {
        JamSymbol::new(bands.iter().copied().collect(), s, 2).unwrap()
    }

    #[test]
    fn transmit_examples() {
        let ch = two_band();
        let sym = SenderSymbol { x: 1.0, band: 0 };
        assert_eq!(
            ch.transmit(sym, &JamSymbol::silent(2), &[0.0, 0.0]).unwrap(),
            vec![1.0, 0.0]
        );
        assert_eq!(
            ch.transmit(sym, &jam(&[1], vec![0.0, 2.0]), &[0.0, 0.0]).unwrap(),
            vec![1.0, 2.0]
        );
        let y = ch
            .transmit(sym, &jam(&[0], vec![0.5, 0.0]), &[0.1, -0.2])
            .unwrap();
        // componentwise: 1 + 0.5 + 0.1, 0 + 0 - 0.2
        assert_eq!(y, vec![1.0 + 0.5 + 0.1, -0.2]);
        assert!((y[0] - 1.6).abs() < 1e-15);
    }

    #[test]
    fn transmit_rejects_bad_dimensions() {
        let ch = two_band();
        let sym = SenderSymbol { x: 1.0, band: 0 };
        assert!(ch.transmit(sym, &JamSymbol::silent(3), &[0.0, 0.0]).is_err());
        assert!(ch.transmit(sym, &JamSymbol::silent(2), &[0.0]).is_err());
        let off = SenderSymbol { x: 1.0, band: 2 };
        assert!(ch.transmit(off, &JamSymbol::silent(2), &[0.0, 0.0]).is_err());
    }

    #[test]
    fn jam_symbol_invariants() {
        assert!(JamSymbol::new([0].into(), vec![1.0, 1.0], 2).is_err());
        assert!(JamSymbol::new([0, 1].into(), vec![1.0, 1.0], 1).is_err());
        assert!(JamSymbol::new([0, 1].into(), vec![1.0, 0.0], 2).is_ok());
    }

    #[test]
    fn channel_validation() {
        assert!(FhChannel::gaussian(vec![]).is_err());
        assert!(FhChannel::gaussian(vec![1.0, 0.0]).is_err());
        // not mean zero
        assert!(FhChannel::finite_support(vec![vec![(1.0, 0.5), (0.0, 0.5)]]).is_err());
        // mass 0.9
        assert!(FhChannel::finite_support(vec![vec![(1.0, 0.45), (-1.0, 0.45)]]).is_err());
        let ch = FhChannel::finite_support(vec![vec![(2.0, 0.5), (-2.0, 0.5)]]).unwrap();
        assert_eq!(ch.sigma2(), &[4.0]);
        // declared variance disagrees with the atoms
        let bad = FhChannel::new(
            vec![1.0],
            NoiseKind::FiniteSupport(vec![vec![(2.0, 0.5), (-2.0, 0.5)]]),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn noise_variance_concentrates() {
        let ch = FhChannel::gaussian(vec![1.0]).unwrap();
        let n = 100_000;
        let noise = ch.sample_noise(n, &mut rng::derive(1, &[0])).unwrap();
        let var = noise.row(0).iter().map(|v| v * v).sum::<f64>() / n as f64;
        // sd of the variance estimator is sqrt(2/n) ~ 0.0045; 0.02 is > 4 sd
        assert!((var - 1.0).abs() < 0.02, "sample variance {var}");
    }

    #[test]
    fn noise_row_means_vanish() {
        let ch = FhChannel::gaussian(vec![1.0, 4.0]).unwrap();
        let n = 100_000;
        let noise = ch.sample_noise(n, &mut rng::derive(2, &[0])).unwrap();
        for band in 0..2 {
            let mean = noise.row(band).iter().sum::<f64>() / n as f64;
            assert!(mean.abs() < 0.03, "band {band} mean {mean}");
        }
    }

    #[test]
    fn finite_support_noise_moments() {
        let ch = FhChannel::finite_support(vec![
            vec![(1.0, 0.5), (-1.0, 0.5)],
            vec![(-1.0, 0.8), (4.0, 0.2)],
        ])
        .unwrap();
        assert_eq!(ch.sigma2(), &[1.0, 4.0]);
        let n = 100_000;
        let noise = ch.sample_noise(n, &mut rng::derive(3, &[0])).unwrap();
        for band in 0..2 {
            let mean = noise.row(band).iter().sum::<f64>() / n as f64;
            let var = noise.row(band).iter().map(|v| v * v).sum::<f64>() / n as f64;
            let sd = ch.sigma2()[band].sqrt();
            assert!(mean.abs() < 5.0 * sd / (n as f64).sqrt());
            assert!((var / ch.sigma2()[band] - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn single_column_shape() {
        let ch = FhChannel::gaussian(vec![1.0, 2.0, 3.0]).unwrap();
        let noise = ch.sample_noise(1, &mut rng::derive(0, &[])).unwrap();
        assert_eq!(noise.shape(), (3, 1));
        assert!(ch.sample_noise(0, &mut rng::derive(0, &[])).is_err());
    }

    #[test]
    fn transmit_block_is_additive_in_the_noise() {
        let ch = two_band();
        let zero = BlockMatrix::zeros(2, 5);
        let out = ch.transmit_block(&zero, &zero, &mut rng::derive(9, &[])).unwrap();
        let noise = ch.sample_noise(5, &mut rng::derive(9, &[])).unwrap();
        assert_eq!(out, noise);

        let mut c = BlockMatrix::zeros(2, 5);
        c.set(0, 0, 1.5);
        c.set(1, 3, -0.25);
        let with_c = ch.transmit_block(&c, &zero, &mut rng::derive(9, &[])).unwrap();
        let diff = &with_c - &out;
        for (a, b) in diff.row_major().iter().zip(c.row_major()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(ch
            .transmit_block(&c, &BlockMatrix::zeros(2, 4), &mut rng::derive(9, &[]))
            .is_err());
    }

    #[test]
    fn transmit_block_residual_variance() {
        // Monte Carlo moment check of output − codeword − jam on random inputs.
        let ch = FhChannel::gaussian(vec![0.5, 2.0]).unwrap();
        let mut r = rng::derive(11, &[]);
        let n = 10;
        let trials = 10_000;
        let mut sq = [0.0f64; 2];
        for _ in 0..trials {
            let c = BlockMatrix::from_row_major(2, n, (0..2 * n).map(|_| r.random_range(-3.0..3.0)).collect()).unwrap();
            let j = BlockMatrix::from_row_major(2, n, (0..2 * n).map(|_| r.random_range(-1.0..1.0)).collect()).unwrap();
            let y = ch.transmit_block(&c, &j, &mut r).unwrap();
            for band in 0..2 {
                for col in 0..n {
                    let res = y.get(band, col) - c.get(band, col) - j.get(band, col);
                    sq[band] += res * res;
                }
            }
        }
        for band in 0..2 {
            let var = sq[band] / (trials * n) as f64;
            assert!((var / ch.sigma2()[band] - 1.0).abs() < 0.03, "band {band}: {var}");
        }
    }

    #[test]
    fn unused_bands_carry_pure_noise() {
        let ch = FhChannel::gaussian(vec![1.0, 1.0, 1.0]).unwrap();
        let sym = SenderSymbol { x: 2.0, band: 0 };
        let j = JamSymbol::new([1].into(), vec![0.0, 3.0, 0.0], 1).unwrap();
        let noise = [0.3, -0.1, 0.7];
        let y = ch.transmit(sym, &j, &noise).unwrap();
        assert_eq!(y[2], 0.7);
        let y0 = ch.transmit(sym, &j, &[0.0; 3]).unwrap();
        assert_eq!(y0[2], 0.0);
    }

    proptest! {
        // Dyadic values keep every sum exact, so equality is bitwise.
        #[test]
        fn transmit_is_additive(a in -64i32..64, b in -64i32..64, s in -64i32..64,
                                n0 in -64i32..64, n1 in -64i32..64, band in 0usize..2) {
            let ch = two_band();
            let (a, b) = (a as f64 / 8.0, b as f64 / 8.0);
            let mut sv = vec![0.0, 0.0];
            sv[1 - band] = s as f64 / 8.0;
            let j = jam(&[1 - band], sv);
            let noise = [n0 as f64 / 8.0, n1 as f64 / 8.0];
            let ya = ch.transmit(SenderSymbol { x: a, band }, &j, &noise).unwrap();
            let yb = ch.transmit(SenderSymbol { x: b, band }, &JamSymbol::silent(2), &[0.0, 0.0]).unwrap();
            let sum = ch.transmit(SenderSymbol { x: a + b, band }, &j, &noise).unwrap();
            let added: Vec<f64> = ya.iter().zip(&yb).map(|(p, q)| p + q).collect();
            prop_assert_eq!(added, sum);
        }
    }
}
