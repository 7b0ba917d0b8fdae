//! Waterfilling and the closed-form capacity bounds.
//!
//! All rates are in bits per channel use. A jammer with power `Λ` facing
//! noise variances `σ_k²` spreads its power so that `σ_k² + Λ_k` equals a
//! common level `c` on the bands it touches; the common-randomness capacity
//! is then bracketed by
//!
//! ```text
//! ½·log2(1 + Γ/c)  ≤  C_r  ≤  ½·log2(1 + Γ/c) + log2(K)
//! ```
//!
//! the upper bound needing Gaussian noise and `J` at least the number of
//! waterfilled bands.

use crate::error::{contract, Error, Result};

/// Jammer waterfilling allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillResult {
    /// Water level `c`.
    pub level: f64,
    /// Per-band jammer power `Λ_k`.
    pub allocation: Vec<f64>,
    /// Bands with `σ_k² < c`, ascending.
    pub active: Vec<usize>,
}

/// Spreads `lambda` over the bands so that `σ_k² + Λ_k = c` wherever
/// `σ_k² < c` and `Λ_k = 0` elsewhere.
///
/// With `lambda == 0` the level is `min_k σ_k²` and nothing is active.
pub fn waterfill(sigma2: &[f64], lambda: f64) -> Result<WaterfillResult> {
    contract!(!sigma2.is_empty(), "need at least one band");
    contract!(
        sigma2.iter().all(|&v| v.is_finite() && v > 0.0),
        "noise variances must be positive, got {sigma2:?}"
    );
    contract!(
        lambda.is_finite() && lambda >= 0.0,
        "jammer power must be nonnegative, got {lambda}"
    );

    let mut order: Vec<usize> = (0..sigma2.len()).collect();
    order.sort_by(|&a, &b| sigma2[a].total_cmp(&sigma2[b]).then(a.cmp(&b)));

    if lambda == 0.0 {
        return Ok(WaterfillResult {
            level: sigma2[order[0]],
            allocation: vec![0.0; sigma2.len()],
            active: Vec::new(),
        });
    }

    // The level over the m quietest bands is (Λ + Σ σ²)/m; the active set is
    // the largest prefix whose last variance still sits below its level.
    let mut prefix = 0.0;
    let mut level = f64::NAN;
    let mut count = 0;
    for (m, &k) in order.iter().enumerate() {
        let candidate = (lambda + prefix + sigma2[k]) / (m + 1) as f64;
        if sigma2[k] < candidate {
            prefix += sigma2[k];
            level = candidate;
            count = m + 1;
        } else {
            break;
        }
    }
    debug_assert!(count >= 1);

    let mut allocation = vec![0.0; sigma2.len()];
    let mut active: Vec<usize> = order[..count].to_vec();
    for &k in &active {
        allocation[k] = level - sigma2[k];
    }
    active.sort_unstable();
    Ok(WaterfillResult {
        level,
        allocation,
        active,
    })
}

/// `½·log2(1 + Γ/c)` with `c` the waterfilling level: achievable without
/// hopping against any jammer of power `lambda`.
pub fn cr_lower(gamma: f64, lambda: f64, sigma2: &[f64]) -> Result<f64> {
    contract!(gamma.is_finite() && gamma >= 0.0, "sender power must be nonnegative");
    let wf = waterfill(sigma2, lambda)?;
    Ok(awgn_bits(gamma, wf.level))
}

/// Upper bound `cr_lower + log2(K)`, valid for Gaussian noise when the
/// jammer can cover every waterfilled band (`J ≥ |active|`).
pub fn cr_upper_gaussian(gamma: f64, lambda: f64, sigma2: &[f64], max_bands: usize) -> Result<f64> {
    contract!(gamma.is_finite() && gamma >= 0.0, "sender power must be nonnegative");
    let wf = waterfill(sigma2, lambda)?;
    if wf.active.len() > max_bands {
        return Err(Error::Infeasible(format!(
            "waterfilling jams {} bands but J = {max_bands}",
            wf.active.len()
        )));
    }
    Ok(awgn_bits(gamma, wf.level) + (sigma2.len() as f64).log2())
}

/// Capacity bound of one subband when the jammer concentrates all power
/// there: `½·log2(1 + Γ/(σ² + Λ))`.
pub fn subband_capacity(gamma: f64, lambda: f64, sigma2: f64) -> Result<f64> {
    contract!(sigma2 > 0.0, "noise variance must be positive");
    contract!(gamma >= 0.0 && lambda >= 0.0, "powers must be nonnegative");
    Ok(awgn_bits(gamma, sigma2 + lambda))
}

/// Best single-band capacity bound over all bands.
pub fn best_subband_capacity(gamma: f64, lambda: f64, sigma2: &[f64]) -> Result<f64> {
    contract!(!sigma2.is_empty(), "need at least one band");
    sigma2
        .iter()
        .map(|&v| subband_capacity(gamma, lambda, v))
        .try_fold(0.0f64, |best, r| r.map(|v| best.max(v)))
}

fn awgn_bits(power: f64, noise: f64) -> f64 {
    0.5 * (power / noise).ln_1p() / std::f64::consts::LN_2
}

/// Brute-force check that waterfilling minimizes
/// `max_k ½·log2(1 + Γ/(σ_k² + Λ_k))` over allocations with `Σ Λ_k = Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsLowerCheck {
    /// Minimum over the simplex grid.
    pub brute_min: f64,
    /// The grid allocation attaining `brute_min` (first found).
    pub argmin: Vec<f64>,
    /// `½·log2(1 + Γ/c)`.
    pub waterfill_value: f64,
}

impl RhsLowerCheck {
    /// `brute_min − waterfill_value`; nonnegative up to rounding.
    pub fn grid_slack(&self) -> f64 {
        self.brute_min - self.waterfill_value
    }
}

/// Evaluates the min-max over a simplex grid with `grid_steps` points per
/// axis (allocations in multiples of `Λ/(grid_steps − 1)`).
pub fn verify_rhslower(
    gamma: f64,
    lambda: f64,
    sigma2: &[f64],
    grid_steps: usize,
) -> Result<RhsLowerCheck> {
    contract!(grid_steps >= 2, "grid needs at least two steps per axis");
    let waterfill_value = cr_lower(gamma, lambda, sigma2)?;
    let units = grid_steps - 1;
    let quantum = lambda / units as f64;

    let mut best = (f64::INFINITY, Vec::new());
    let mut parts = vec![0usize; sigma2.len()];
    enumerate_compositions(&mut parts, 0, units, &mut |parts| {
        let value = parts
            .iter()
            .zip(sigma2)
            .map(|(&u, &s)| awgn_bits(gamma, s + u as f64 * quantum))
            .fold(f64::NEG_INFINITY, f64::max);
        if value < best.0 {
            best = (value, parts.iter().map(|&u| u as f64 * quantum).collect());
        }
    });
    Ok(RhsLowerCheck {
        brute_min: best.0,
        argmin: best.1,
        waterfill_value,
    })
}

fn enumerate_compositions(parts: &mut [usize], at: usize, left: usize, visit: &mut impl FnMut(&[usize])) {
    if at + 1 == parts.len() {
        parts[at] = left;
        visit(parts);
        return;
    }
    for u in 0..=left {
        parts[at] = u;
        enumerate_compositions(parts, at + 1, left - u, visit);
    }
}

/// Unit for displaying rates. Computation is always in bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LogUnit {
    #[default]
    Bits,
    Nats,
}

impl LogUnit {
    pub fn from_bits(self, bits: f64) -> f64 {
        match self {
            LogUnit::Bits => bits,
            LogUnit::Nats => bits * std::f64::consts::LN_2,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            LogUnit::Bits => "bits",
            LogUnit::Nats => "nats",
        }
    }
}
