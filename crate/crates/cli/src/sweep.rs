//! Closed-form bound sweeps over `(Γ, Λ)`.

use fhjam_core::bounds::{best_subband_capacity, cr_lower, cr_upper_gaussian};
use fhjam_core::{waterfill, Error};

use crate::config::ExperimentConfig;
use crate::HarnessError;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub gamma: f64,
    pub lambda: f64,
    /// Waterfilling level `c`.
    pub level: f64,
    pub active_bands: usize,
    /// Bits per use.
    pub cr_lower: f64,
    /// `None` when `J` is smaller than the active set or the noise is not
    /// Gaussian.
    pub cr_upper: Option<f64>,
    pub best_subband: f64,
}

/// Bounds at every `(Γ, Λ)` of the `[sweep]` grid, `Γ` outermost; the
/// `[budget]` point alone when there is no grid.
pub fn sweep_bounds(cfg: &ExperimentConfig) -> Result<Vec<BoundsRow>, HarnessError> {
    let ch = cfg.channel()?;
    let sigma2 = ch.sigma2();
    let (gammas, lambdas) = match &cfg.sweep {
        Some(s) => (s.gamma.clone(), s.lambda.clone()),
        None => (vec![cfg.budget.gamma], vec![cfg.budget.lambda]),
    };
    let mut rows = Vec::with_capacity(gammas.len() * lambdas.len());
    for &gamma in &gammas {
        for &lambda in &lambdas {
            let wf = waterfill(sigma2, lambda)?;
            let cr_upper = if ch.is_gaussian() {
                match cr_upper_gaussian(gamma, lambda, sigma2, cfg.budget.max_bands) {
                    Ok(v) => Some(v),
                    Err(Error::Infeasible(_)) => None,
                    Err(e) => return Err(e.into()),
                }
            } else {
                None
            };
            rows.push(BoundsRow {
                gamma,
                lambda,
                level: wf.level,
                active_bands: wf.active.len(),
                cr_lower: cr_lower(gamma, lambda, sigma2)?,
                cr_upper,
                best_subband: best_subband_capacity(gamma, lambda, sigma2)?,
            });
        }
    }
    Ok(rows)
}

/// Per-band jammer powers at the `[budget]` point.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillRow {
    /// Counted from 1.
    pub band: usize,
    pub sigma2: f64,
    pub jam_power: f64,
    pub active: bool,
    pub level: f64,
}

pub fn waterfill_table(cfg: &ExperimentConfig) -> Result<Vec<WaterfillRow>, HarnessError> {
    let ch = cfg.channel()?;
    let wf = waterfill(ch.sigma2(), cfg.budget.lambda)?;
    Ok(ch
        .sigma2()
        .iter()
        .enumerate()
        .map(|(k, &s)| WaterfillRow {
            band: k + 1,
            sigma2: s,
            jam_power: wf.allocation[k],
            active: wf.active.contains(&k),
            level: wf.level,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(sigma2: &str, j: usize, sweep: &str) -> ExperimentConfig {
        ExperimentConfig::parse(&format!(
            "seed = 1\n[channel]\nsigma2 = {sigma2}\n[budget]\ngamma = 2.0\nlambda = 2.0\nmax_bands = {j}\n{sweep}"
        ))
        .unwrap()
    }

    #[test]
    fn single_point_matches_bounds_module() {
        let rows = sweep_bounds(&cfg("[1.0, 1.0]", 2, "")).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(r.level, 2.0);
        assert_eq!(r.active_bands, 2);
        assert!((r.cr_lower - 0.5).abs() <= 1e-12);
        assert_eq!(r.cr_upper, Some(r.cr_lower + 1.0));
        assert_eq!(rows, sweep_bounds(&cfg("[1.0, 1.0]", 2, "")).unwrap());
    }

    #[test]
    fn small_j_marks_upper_infeasible() {
        let rows = sweep_bounds(&cfg("[1.0, 1.0]", 1, "")).unwrap();
        assert_eq!(rows[0].cr_upper, None);
    }

    #[test]
    fn lower_bound_falls_as_lambda_grows() {
        let rows = sweep_bounds(&cfg(
            "[0.5, 1.0, 2.0]",
            3,
            "[sweep]\ngamma = [1.0]\nlambda = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0]",
        ))
        .unwrap();
        assert_eq!(rows.len(), 6);
        for w in rows.windows(2) {
            assert!(w[1].cr_lower <= w[0].cr_lower);
        }
    }

    #[test]
    fn one_band_has_no_hopping_gain() {
        let rows = sweep_bounds(&cfg("[1.5]", 1, "[sweep]\ngamma = [0.5, 1.0, 3.0]\nlambda = [0.0, 1.0]")).unwrap();
        for r in rows {
            assert_eq!(r.cr_upper.unwrap() - r.cr_lower, 0.0);
        }
    }

    #[test]
    fn waterfill_rows() {
        let rows = waterfill_table(&cfg("[1.0, 3.0]", 2, "")).unwrap();
        // Λ = 2 fills band 1 up to level 3 and leaves band 2 dry
        assert_eq!(rows[0].jam_power, 2.0);
        assert!(rows[0].active && !rows[1].active);
        assert_eq!(rows[1].jam_power, 0.0);
        assert_eq!(rows[0].level, 3.0);
    }
}
