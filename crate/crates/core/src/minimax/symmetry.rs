//! Diagnostics for symmetrizing jammers.
//!
//! A jammer that symmetrizes the channel must, in mean, satisfy
//! `x·e_k + E[Z(x',k')] = x'·e_k' + E[Z(x,k)]` for every pair of inputs.
//! Jensen's inequality then bounds the power such a jammer spends from
//! below by the sender's power, whenever the sender's per-band
//! amplitude laws are symmetric about zero.

use crate::error::{contract, Result};

/// One sender atom: amplitude `x` on band `band` with probability `prob`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputAtom {
    pub x: f64,
    pub band: usize,
    pub prob: f64,
}

/// The mimicking mean map `(x, k) ↦ x·e_k`.
pub fn canonical_mean_map(x: f64, band: usize, bands: usize) -> Vec<f64> {
    let mut v = vec![0.0; bands];
    v[band] = x;
    v
}

/// `‖x·e_k + m(x',k') − x'·e_k' − m(x,k)‖₂`; zero iff the mean condition
/// holds on this pair.
pub fn symmetry_mean_residual<F>(a: (f64, usize), b: (f64, usize), bands: usize, mean: F) -> f64
where
    F: Fn(f64, usize) -> Vec<f64>,
{
    let ma = mean(a.0, a.1);
    let mb = mean(b.0, b.1);
    let mut sq = 0.0;
    for i in 0..bands {
        let mut d = mb[i] - ma[i];
        if i == a.1 {
            d += a.0;
        }
        if i == b.1 {
            d -= b.0;
        }
        sq += d * d;
    }
    sq.sqrt()
}

/// Lower bounds on the power of a symmetrizing jammer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenBound {
    /// Smallest anchored value `Σ P(x,k)·|x − x'[k'=k] + m(x',k')_k|²`
    /// over anchors `(x',k')` in the support.
    pub bound: f64,
    /// `Σ_k P(k)·min_a Σ_x P(x|k)|x − a|²`, the floor every anchor clears.
    pub floor: f64,
    /// `E[X²]` of the input.
    pub power: f64,
}

/// Evaluates the Jensen chain for a full-power input that is symmetric
/// about zero on every band, and a mean map satisfying the mean condition
/// on the support.
pub fn jensen_power_bound<F>(
    atoms: &[InputAtom],
    bands: usize,
    gamma: f64,
    mean: F,
) -> Result<JensenBound>
where
    F: Fn(f64, usize) -> Vec<f64>,
{
    contract!(!atoms.is_empty(), "input distribution is empty");
    contract!(
        atoms.iter().all(|a| a.band < bands && a.prob >= 0.0 && a.x.is_finite()),
        "atoms must have valid bands, finite amplitudes and nonnegative mass"
    );
    let total: f64 = atoms.iter().map(|a| a.prob).sum();
    contract!((total - 1.0).abs() <= 1e-12, "input distribution sums to {total}");
    let power: f64 = atoms.iter().map(|a| a.prob * a.x * a.x).sum();
    contract!(
        (power - gamma).abs() <= 1e-9,
        "input power {power} does not exhaust the budget {gamma}"
    );

    // per-band symmetry: the law of X given κ = k is even
    for k in 0..bands {
        let mut pos: Vec<(f64, f64)> = Vec::new();
        let mut neg: Vec<(f64, f64)> = Vec::new();
        for a in atoms.iter().filter(|a| a.band == k && a.prob > 0.0 && a.x != 0.0) {
            if a.x > 0.0 {
                pos.push((a.x, a.prob));
            } else {
                neg.push((-a.x, a.prob));
            }
        }
        let merge = |v: &mut Vec<(f64, f64)>| {
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut out: Vec<(f64, f64)> = Vec::new();
            for &(x, p) in v.iter() {
                match out.last_mut() {
                    Some(last) if (last.0 - x).abs() <= 1e-12 => last.1 += p,
                    _ => out.push((x, p)),
                }
            }
            out
        };
        let (pos, neg) = (merge(&mut pos), merge(&mut neg));
        let symmetric = pos.len() == neg.len()
            && pos
                .iter()
                .zip(&neg)
                .all(|(a, b)| (a.0 - b.0).abs() <= 1e-12 && (a.1 - b.1).abs() <= 1e-12);
        contract!(symmetric, "input law on band {k} is not symmetric about zero");
    }

    let support: Vec<&InputAtom> = atoms.iter().filter(|a| a.prob > 0.0).collect();
    for a in &support {
        for b in &support {
            let r = symmetry_mean_residual((a.x, a.band), (b.x, b.band), bands, &mean);
            contract!(r <= 1e-9, "mean condition fails with residual {r}");
        }
    }

    let mut bound = f64::INFINITY;
    for anchor in &support {
        let m = mean(anchor.x, anchor.band);
        let value: f64 = support
            .iter()
            .map(|a| {
                let shift = if a.band == anchor.band { anchor.x } else { 0.0 };
                let d = a.x - shift + m[a.band];
                a.prob * d * d
            })
            .sum();
        bound = bound.min(value);
    }

    let mut floor = 0.0;
    for k in 0..bands {
        let pk: f64 = support.iter().filter(|a| a.band == k).map(|a| a.prob).sum();
        if pk > 0.0 {
            let mean_k: f64 = support.iter().filter(|a| a.band == k).map(|a| a.prob * a.x).sum::<f64>() / pk;
            floor += support
                .iter()
                .filter(|a| a.band == k)
                .map(|a| a.prob * (a.x - mean_k).powi(2))
                .sum::<f64>();
        }
    }
    Ok(JensenBound { bound, floor, power })
}

/// Lower bound on the symmetrizability threshold: power needed over `Λ`.
pub fn tau_lower(bound: &JensenBound, lambda: f64) -> f64 {
    bound.bound / lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn antipodal(gamma: f64) -> Vec<InputAtom> {
        let a = gamma.sqrt();
        vec![
            InputAtom { x: a, band: 0, prob: 0.5 },
            InputAtom { x: -a, band: 0, prob: 0.5 },
        ]
    }

    #[test]
    fn canonical_map_has_zero_residual() {
        let canon = |x, k| canonical_mean_map(x, k, 3);
        for &(a, b) in &[((1.0, 0), (-2.0, 2)), ((0.5, 1), (0.5, 1)), ((0.0, 0), (3.0, 1))] {
            assert_eq!(symmetry_mean_residual(a, b, 3, canon), 0.0);
        }
    }

    #[test]
    fn zero_map_residual_is_unit_vector() {
        let zero = |_: f64, _: usize| vec![0.0; 2];
        assert_eq!(symmetry_mean_residual((1.0, 0), (0.0, 0), 2, zero), 1.0);
    }

    #[test]
    fn perturbed_map_residual_matches_perturbation() {
        let eps = 0.037;
        let map = |x: f64, k: usize| {
            let mut v = canonical_mean_map(x, k, 2);
            if x == 2.0 && k == 1 {
                v[0] += eps;
            }
            v
        };
        assert_abs_diff_eq!(symmetry_mean_residual((2.0, 1), (-1.0, 0), 2, map), eps, epsilon = 1e-15);
        assert_abs_diff_eq!(symmetry_mean_residual((-1.0, 0), (2.0, 1), 2, map), eps, epsilon = 1e-15);
    }

    #[test]
    fn antipodal_bound_equals_power() {
        for gamma in [1.0, 4.0] {
            let b = jensen_power_bound(&antipodal(gamma), 1, gamma, |x, k| canonical_mean_map(x, k, 1)).unwrap();
            assert_abs_diff_eq!(b.bound, gamma, epsilon = 1e-12);
            assert_abs_diff_eq!(b.floor, gamma, epsilon = 1e-12);
        }
    }

    #[test]
    fn tau_exceeds_one_when_sender_is_stronger() {
        let b = jensen_power_bound(&antipodal(2.0), 1, 2.0, |x, k| canonical_mean_map(x, k, 1)).unwrap();
        assert!(tau_lower(&b, 1.0) >= 2.0 - 1e-12);
    }

    #[test]
    fn preconditions() {
        let canon = |x, k| canonical_mean_map(x, k, 2);
        // not full power
        assert!(jensen_power_bound(&antipodal(1.0), 2, 2.0, canon).is_err());
        // asymmetric
        let skew = [InputAtom { x: 1.0, band: 0, prob: 1.0 }];
        assert!(jensen_power_bound(&skew, 2, 1.0, canon).is_err());
        // map violating the mean condition
        assert!(jensen_power_bound(&antipodal(1.0), 2, 1.0, |_, _| vec![0.0; 2]).is_err());
    }

    fn symmetric_input() -> impl Strategy<Value = (Vec<InputAtom>, usize, f64)> {
        (1usize..4, prop::collection::vec((0.05f64..3.0, 0usize..4, 0.01f64..1.0), 1..6), 0.1f64..5.0)
            .prop_map(|(bands, raw, gamma)| {
                let total: f64 = raw.iter().map(|r| r.2).sum();
                let mut atoms = Vec::new();
                for &(x, k, w) in &raw {
                    let band = k % bands;
                    atoms.push(InputAtom { x, band, prob: 0.5 * w / total });
                    atoms.push(InputAtom { x: -x, band, prob: 0.5 * w / total });
                }
                let power: f64 = atoms.iter().map(|a| a.prob * a.x * a.x).sum();
                let scale = (gamma / power).sqrt();
                atoms.iter_mut().for_each(|a| a.x *= scale);
                let gamma = atoms.iter().map(|a| a.prob * a.x * a.x).sum();
                (atoms, bands, gamma)
            })
    }

    proptest! {
        #[test]
        fn bound_dominates_power_for_shifted_maps(
            (atoms, bands, gamma) in symmetric_input(),
            shift in prop::collection::vec(-2.0f64..2.0, 4),
        ) {
            let map = |x: f64, k: usize| {
                let mut v = canonical_mean_map(x, k, bands);
                for (vi, s) in v.iter_mut().zip(&shift) {
                    *vi += s;
                }
                v
            };
            let b = jensen_power_bound(&atoms, bands, gamma, map).unwrap();
            prop_assert!(b.bound >= gamma - 1e-9);
            prop_assert!((b.floor - gamma).abs() <= 1e-9);
        }
    }
}
