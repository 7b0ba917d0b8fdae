//! Mutual information of finite joint tables and the hopping decomposition
//! `I(X·e_κ; Y) = I(X; Y | κ) + I(κ; Y)`.

use crate::error::{contract, Result};

const LOG2_E: f64 = std::f64::consts::LOG2_E;

fn check_table(joint: &[Vec<f64>]) -> Result<(usize, usize)> {
    contract!(!joint.is_empty(), "joint table is empty");
    let cols = joint[0].len();
    contract!(cols > 0, "joint table has no columns");
    contract!(
        joint.iter().all(|r| r.len() == cols),
        "joint table rows have different lengths"
    );
    contract!(
        joint.iter().flatten().all(|&p| p.is_finite() && p >= 0.0),
        "joint probabilities must be nonnegative"
    );
    let total: f64 = joint.iter().flatten().sum();
    contract!((total - 1.0).abs() <= 1e-12, "joint sums to {total}, not 1");
    Ok((joint.len(), cols))
}

/// `I(A; B)` in bits for a joint table `p[a][b]`, with `0·log 0 = 0`.
pub fn mutual_information(joint: &[Vec<f64>]) -> Result<f64> {
    let (rows, cols) = check_table(joint)?;
    Ok(mi_unchecked(joint, rows, cols, 1.0))
}

/// Mutual information of `joint / mass`, skipping validation.
fn mi_unchecked(joint: &[Vec<f64>], rows: usize, cols: usize, mass: f64) -> f64 {
    let pa: Vec<f64> = joint.iter().map(|r| r.iter().sum::<f64>() / mass).collect();
    let mut pb = vec![0.0; cols];
    for r in joint {
        for (acc, &p) in pb.iter_mut().zip(r) {
            *acc += p / mass;
        }
    }
    let mut nats = 0.0;
    for a in 0..rows {
        for b in 0..cols {
            let p = joint[a][b] / mass;
            if p > 0.0 {
                nats += p * (p / (pa[a] * pb[b])).ln();
            }
        }
    }
    nats * LOG2_E
}

/// Both sides of the hopping decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    /// `I(X·e_κ; Y)`.
    pub lhs: f64,
    /// `I(X; Y | κ) + I(κ; Y)`.
    pub rhs: f64,
    pub conditional: f64,
    pub hopping: f64,
}

/// Evaluates both sides for `joint[x][k][y]` with amplitude values `xs`.
///
/// Requires `(x, k) ↦ x·e_k` to be injective on the support, i.e. amplitude
/// zero carries mass on at most one band.
pub fn mi_decomposition_check(xs: &[f64], joint: &[Vec<Vec<f64>>]) -> Result<Decomposition> {
    contract!(
        xs.len() == joint.len(),
        "{} amplitudes for {} table slices",
        xs.len(),
        joint.len()
    );
    contract!(!joint.is_empty() && !joint[0].is_empty(), "joint table is empty");
    let bands = joint[0].len();
    contract!(
        joint.iter().all(|s| s.len() == bands),
        "every amplitude needs one row per band"
    );
    for (i, a) in xs.iter().enumerate() {
        contract!(
            !xs[..i].contains(a),
            "amplitude {a} listed twice"
        );
    }

    // (X, κ) as one variable
    let flat: Vec<Vec<f64>> = joint.iter().flatten().cloned().collect();
    let (_, outputs) = check_table(&flat)?;

    if let Some(zero) = xs.iter().position(|&x| x == 0.0) {
        let loaded = joint[zero]
            .iter()
            .filter(|row| row.iter().sum::<f64>() > 0.0)
            .count();
        contract!(
            loaded <= 1,
            "amplitude 0 has mass on {loaded} bands: x·e_k no longer identifies (x, k)"
        );
    }
    let lhs = mi_unchecked(&flat, flat.len(), outputs, 1.0);

    let mut conditional = 0.0;
    let mut band_output = vec![vec![0.0; outputs]; bands];
    for k in 0..bands {
        let slice: Vec<Vec<f64>> = joint.iter().map(|s| s[k].clone()).collect();
        let mass: f64 = slice.iter().flatten().sum();
        for row in &slice {
            for (acc, &p) in band_output[k].iter_mut().zip(row) {
                *acc += p;
            }
        }
        if mass > 0.0 {
            conditional += mass * mi_unchecked(&slice, slice.len(), outputs, mass);
        }
    }
    let hopping = mi_unchecked(&band_output, bands, outputs, 1.0);
    Ok(Decomposition {
        lhs,
        rhs: conditional + hopping,
        conditional,
        hopping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn mi_examples() {
        let product = vec![vec![0.06, 0.14], vec![0.24, 0.56]];
        assert_abs_diff_eq!(mutual_information(&product).unwrap(), 0.0, epsilon = 1e-15);

        let diag: Vec<Vec<f64>> = (0..4)
            .map(|a| (0..4).map(|b| if a == b { 0.25 } else { 0.0 }).collect())
            .collect();
        assert_abs_diff_eq!(mutual_information(&diag).unwrap(), 2.0, epsilon = 1e-15);

        // 0.8·log2(0.4/0.25) + 0.2·log2(0.1/0.25)
        let bsc = vec![vec![0.4, 0.1], vec![0.1, 0.4]];
        let oracle = 0.8 * (1.6f64).log2() + 0.2 * (0.4f64).log2();
        assert_abs_diff_eq!(mutual_information(&bsc).unwrap(), oracle, epsilon = 1e-15);
        assert_abs_diff_eq!(oracle, 0.2781, epsilon = 1e-4);
    }

    #[test]
    fn mi_rejects_bad_tables() {
        assert!(mutual_information(&[vec![1.2, -0.2]]).is_err());
        assert!(mutual_information(&[vec![0.5, 0.4]]).is_err());
        assert!(mutual_information(&[vec![0.5], vec![0.25, 0.25]]).is_err());
    }

    #[test]
    fn decomposition_examples() {
        // κ constant: only band 0 carries mass
        let joint = vec![
            vec![vec![0.3, 0.2], vec![0.0, 0.0]],
            vec![vec![0.1, 0.4], vec![0.0, 0.0]],
        ];
        let d = mi_decomposition_check(&[-1.0, 1.0], &joint).unwrap();
        let plain = mutual_information(&[vec![0.3, 0.2], vec![0.1, 0.4]]).unwrap();
        assert_abs_diff_eq!(d.lhs, plain, epsilon = 1e-12);
        assert_abs_diff_eq!(d.rhs, plain, epsilon = 1e-12);
        assert_abs_diff_eq!(d.hopping, 0.0, epsilon = 1e-15);

        // X constant: all information is in the band
        let joint = vec![vec![vec![0.35, 0.05, 0.1], vec![0.1, 0.1, 0.3]]];
        let d = mi_decomposition_check(&[2.0], &joint).unwrap();
        let hop = mutual_information(&[vec![0.35, 0.05, 0.1], vec![0.1, 0.1, 0.3]]).unwrap();
        assert_abs_diff_eq!(d.lhs, hop, epsilon = 1e-12);
        assert_abs_diff_eq!(d.rhs, hop, epsilon = 1e-12);
    }

    #[test]
    fn zero_amplitude_on_two_bands_is_rejected() {
        let joint = vec![
            vec![vec![0.25, 0.0], vec![0.25, 0.0]],
            vec![vec![0.0, 0.5], vec![0.0, 0.0]],
        ];
        assert!(mi_decomposition_check(&[0.0, 1.0], &joint).is_err());
        assert!(mi_decomposition_check(&[1.0, 1.0], &joint).is_err());
    }

    fn joint3(xs: usize, bands: usize, ys: usize) -> impl Strategy<Value = Vec<Vec<Vec<f64>>>> {
        prop::collection::vec(0.0f64..1.0, xs * bands * ys).prop_map(move |w| {
            let total: f64 = w.iter().sum::<f64>().max(1e-300);
            (0..xs)
                .map(|x| {
                    (0..bands)
                        .map(|k| (0..ys).map(|y| w[(x * bands + k) * ys + y] / total).collect())
                        .collect()
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn decomposition_holds(joint in joint3(3, 2, 4)) {
            let d = mi_decomposition_check(&[-1.0, 0.5, 2.0], &joint).unwrap();
            prop_assert!((d.lhs - d.rhs).abs() <= 1e-9);
            prop_assert!(d.hopping <= 1.0 + 1e-12);
        }
    }
}
