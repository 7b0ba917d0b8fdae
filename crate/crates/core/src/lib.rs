//! Frequency-hopping channels under adversarial jamming.
//!
//! The FH channel has `K` parallel additive-noise subbands. Per channel use
//! the sender puts one real amplitude on one band, the jammer puts an
//! arbitrary vector on at most `J` bands, and the receiver observes all
//! bands:
//!
//! ```text
//! y = x·e_k + s∘e_I + N
//! ```
//!
//! The crate is organized around that model:
//!
//! - [`channel`]: the channel description, single-use and block transmission.
//! - [`coding`]: random FH codebooks, minimum-distance decoding, Monte Carlo
//!   error estimation.
//! - [`jammer`]: the jamming constraint set and the jamming strategies,
//!   including the waterfilling Gaussian jammer and the codeword-mimicking
//!   attack.
//! - [`bounds`]: waterfilling and the closed-form capacity bounds.
//! - [`minimax`]: discrete mutual information, Blahut–Arimoto, the
//!   sender/jammer mutual-information game and symmetrizability diagnostics.
//! - [`rng`]: counter-derived RNG streams for reproducible parallel trials.

pub mod bounds;
pub mod channel;
pub mod coding;
mod error;
pub mod jammer;
pub mod matrix;
pub mod minimax;
pub mod rng;

pub use bounds::{waterfill, WaterfillResult};
pub use channel::{FhChannel, JamSymbol, NoiseKind, SenderSymbol};
pub use coding::{Codebook, ErrorEstimate, HoppingPolicy};
pub use error::{Error, Result};
pub use jammer::{JamBudget, Strategy};
pub use matrix::BlockMatrix;
pub use rng::StreamRng;
