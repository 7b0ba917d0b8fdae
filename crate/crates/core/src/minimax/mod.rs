//! The mutual-information game behind the keyed capacity, plus the
//! numerical tools it needs.

mod blahut;
mod game;
mod mi;
mod symmetry;

pub use blahut::{blahut_arimoto, CapacityResult};
pub use game::{
    minimax_estimate, BinSpec, DiscretizedGame, GameGrids, GridSpec, MinimaxOptions,
    SaddleEstimate, TracePoint,
};
pub use mi::{mi_decomposition_check, mutual_information, Decomposition};
pub use symmetry::{
    canonical_mean_map, jensen_power_bound, symmetry_mean_residual, tau_lower, InputAtom,
    JensenBound,
};
