//! Fixtures shared by the benchmarks.

use fhjam_core::minimax::{BinSpec, GameGrids, GridSpec};
use fhjam_core::{rng, BlockMatrix, Codebook, FhChannel, HoppingPolicy};

/// Two unit-noise bands.
pub fn channel() -> FhChannel {
    FhChannel::gaussian(vec![1.0, 1.0]).expect("valid variances")
}

/// A message-keyed code on [`channel`].
pub fn codebook(n: usize, messages: usize) -> Codebook {
    Codebook::random(2, n, messages, 4.0, HoppingPolicy::MessageKeyed, &mut rng::derive(1, &[n as u64]))
        .expect("valid code parameters")
}

/// Codeword 0 through the channel, unjammed.
pub fn received(cb: &Codebook) -> BlockMatrix {
    let ch = channel();
    let jam = BlockMatrix::zeros(cb.bands(), cb.n());
    ch.transmit_block(&cb.encode(0).expect("message exists"), &jam, &mut rng::derive(2, &[]))
        .expect("shapes match")
}

/// Quantized AWGN channel: `±4` in steps of 0.25, cells of width 0.1 on
/// `[-12, 12]`.
pub fn awgn_transition() -> (Vec<Vec<f64>>, Vec<f64>) {
    let xs: Vec<f64> = (-16..=16).map(|i| f64::from(i) * 0.25).collect();
    let edges: Vec<f64> = (0..=240).map(|i| -12.0 + f64::from(i) * 0.1).collect();
    let cdf = |t: f64| 0.5 * libm::erfc(-t / std::f64::consts::SQRT_2);
    let rows = xs
        .iter()
        .map(|&x| {
            let mut row = vec![cdf(edges[0] - x)];
            row.extend(edges.windows(2).map(|e| cdf(e[1] - x) - cdf(e[0] - x)));
            row.push(1.0 - cdf(edges[edges.len() - 1] - x));
            let total: f64 = row.iter().sum();
            row.iter().map(|v| v / total).collect()
        })
        .collect();
    (rows, xs.iter().map(|x| x * x).collect())
}

/// Small game grids for the two-band channel.
pub fn small_grids() -> GameGrids {
    GameGrids {
        input: GridSpec::symmetric(3.0, 1.0),
        jam: GridSpec::symmetric(2.0, 1.0),
        output: BinSpec { min: -6.0, max: 6.0, width: 1.0 },
    }
}
