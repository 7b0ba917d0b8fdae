//! Blahut–Arimoto capacity with an optional input cost constraint.
//!
//! For a multiplier `s ≥ 0` the iteration maximizes `I(p) − s·E_p[cost]`;
//! the multiplier is then bisected until the optimizer meets the budget.
//! Every returned value comes with a certified bracket:
//! `capacity ≤ C ≤ upper`.

use crate::error::{contract, Error, Result};

const LOG2_E: f64 = std::f64::consts::LOG2_E;
const MAX_FIXED_ITERATIONS: usize = 200_000;
const MAX_BISECTIONS: usize = 80;

/// Cost-constrained capacity of a discrete memoryless channel.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    /// `I(p)` of the returned distribution, in bits; a lower bound on capacity.
    pub capacity: f64,
    /// Upper bound on capacity, in bits.
    pub upper: f64,
    /// Input distribution achieving `capacity`, feasible for the budget.
    pub input: Vec<f64>,
    /// Final cost multiplier (0 when the budget is slack).
    pub multiplier: f64,
}

/// Capacity of `transition[input][output]`, optionally under
/// `E[cost] ≤ budget`. Stops once the bracket is narrower than `tol` bits.
pub fn blahut_arimoto(
    transition: &[Vec<f64>],
    cost: Option<(&[f64], f64)>,
    tol: f64,
) -> Result<CapacityResult> {
    contract!(!transition.is_empty(), "transition table is empty");
    let cols = transition[0].len();
    contract!(
        transition.iter().all(|r| r.len() == cols),
        "transition rows have different lengths"
    );
    let flat: Vec<f64> = transition.concat();
    let res = capacity_flat(&flat, transition.len(), cols, cost, tol / LOG2_E, None)?;
    Ok(res.into_bits())
}

/// Same as [`CapacityResult`] but in nats.
#[derive(Debug, Clone)]
pub(crate) struct CapacityNats {
    pub lower: f64,
    pub upper: f64,
    pub input: Vec<f64>,
    pub multiplier: f64,
}

impl CapacityNats {
    fn into_bits(self) -> CapacityResult {
        CapacityResult {
            capacity: self.lower * LOG2_E,
            upper: self.upper * LOG2_E,
            input: self.input,
            multiplier: self.multiplier,
        }
    }
}

struct Dmc<'a> {
    w: &'a [f64],
    lnw: Vec<f64>,
    rows: usize,
    cols: usize,
    allowed: Vec<bool>,
}

struct FixedPoint {
    /// `I(p)` in nats.
    info: f64,
    /// `E_p[cost]`.
    spend: f64,
    /// `max_i D_i − s·cost_i`, bounding `max_p I − s·E[cost]` from above.
    upper: f64,
}

impl<'a> Dmc<'a> {
    fn new(w: &'a [f64], rows: usize, cols: usize) -> Self {
        let lnw = w.iter().map(|&v| if v > 0.0 { v.ln() } else { 0.0 }).collect();
        Self {
            w,
            lnw,
            rows,
            cols,
            allowed: vec![true; rows],
        }
    }

    /// Divergences `D(W_i ‖ q)` for the output law `q` induced by `p`.
    fn divergences(&self, p: &[f64], d: &mut [f64], q: &mut [f64]) {
        q.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.rows {
            if p[i] > 0.0 {
                let row = &self.w[i * self.cols..(i + 1) * self.cols];
                for (acc, &wv) in q.iter_mut().zip(row) {
                    *acc += p[i] * wv;
                }
            }
        }
        // an underflowed output cell would otherwise make D infinite
        let lnq: Vec<f64> = q.iter().map(|&v| v.max(1e-300).ln()).collect();
        for i in 0..self.rows {
            let row = &self.w[i * self.cols..(i + 1) * self.cols];
            let lrow = &self.lnw[i * self.cols..(i + 1) * self.cols];
            let mut acc = 0.0;
            for y in 0..self.cols {
                if row[y] > 0.0 {
                    acc += row[y] * (lrow[y] - lnq[y]);
                }
            }
            d[i] = acc;
        }
    }

    fn info(&self, p: &[f64]) -> f64 {
        let mut d = vec![0.0; self.rows];
        let mut q = vec![0.0; self.cols];
        self.divergences(p, &mut d, &mut q);
        p.iter().zip(&d).map(|(a, b)| a * b).sum()
    }

    /// Runs the multiplier-`s` iteration on `p` until its bracket is below `tol`.
    fn iterate(&self, cost: &[f64], s: f64, p: &mut [f64], tol: f64) -> FixedPoint {
        let mut d = vec![0.0; self.rows];
        let mut q = vec![0.0; self.cols];
        let mut a = vec![0.0; self.rows];
        let mut iter = 0;
        loop {
            self.divergences(p, &mut d, &mut q);
            let mut info = 0.0;
            let mut spend = 0.0;
            let mut upper = f64::NEG_INFINITY;
            for i in 0..self.rows {
                if !self.allowed[i] {
                    a[i] = f64::NEG_INFINITY;
                    continue;
                }
                a[i] = d[i] - s * cost[i];
                info += p[i] * d[i];
                spend += p[i] * cost[i];
                upper = upper.max(a[i]);
            }
            iter += 1;
            if upper - (info - s * spend) < tol || iter >= MAX_FIXED_ITERATIONS {
                return FixedPoint { info, spend, upper };
            }
            let mut total = 0.0;
            for i in 0..self.rows {
                p[i] *= (a[i] - upper).exp();
                total += p[i];
            }
            p.iter_mut().for_each(|v| *v /= total);
        }
    }
}

/// Validates `w` and computes its (cost-constrained) capacity in nats.
pub(crate) fn capacity_flat(
    w: &[f64],
    rows: usize,
    cols: usize,
    cost: Option<(&[f64], f64)>,
    tol: f64,
    warm: Option<&[f64]>,
) -> Result<CapacityNats> {
    contract!(tol > 0.0, "tolerance must be positive");
    contract!(rows >= 1 && cols >= 1 && w.len() == rows * cols, "transition shape mismatch");
    for i in 0..rows {
        let row = &w[i * cols..(i + 1) * cols];
        contract!(
            row.iter().all(|&v| v.is_finite() && v >= 0.0),
            "transition row {i} has negative entries"
        );
        let total: f64 = row.iter().sum();
        contract!((total - 1.0).abs() <= 1e-9, "transition row {i} sums to {total}");
    }

    let mut dmc = Dmc::new(w, rows, cols);
    let zero_cost = vec![0.0; rows];
    let (cost, budget) = match cost {
        Some((c, b)) => {
            contract!(c.len() == rows, "{} costs for {rows} inputs", c.len());
            contract!(c.iter().all(|&v| v.is_finite() && v >= 0.0), "costs must be nonnegative");
            (c, b)
        }
        None => (zero_cost.as_slice(), f64::INFINITY),
    };
    let cheapest = cost.iter().copied().fold(f64::INFINITY, f64::min);
    if budget < cheapest - 1e-12 {
        return Err(Error::Infeasible(format!(
            "budget {budget} is below the cheapest input cost {cheapest}"
        )));
    }
    if budget <= cheapest + 1e-12 {
        // only the cheapest inputs are usable; no multiplier needed
        for i in 0..rows {
            dmc.allowed[i] = cost[i] <= budget + 1e-12;
        }
    }

    let mut p = initial(&dmc.allowed, warm);
    let fp = dmc.iterate(cost, 0.0, &mut p, tol);
    if fp.spend <= budget {
        return Ok(CapacityNats {
            lower: fp.info,
            upper: fp.upper,
            input: p,
            multiplier: 0.0,
        });
    }

    // Bracket the multiplier: lo overspends, hi is feasible.
    let mut lo = (0.0, p.clone(), fp.spend);
    let mut best_upper = fp.upper;
    let mut s = 1.0;
    let mut hi = loop {
        let mut ph = revive(&p, &dmc.allowed);
        let fh = dmc.iterate(cost, s, &mut ph, tol);
        best_upper = best_upper.min(fh.upper + s * budget);
        if fh.spend <= budget {
            break (s, ph, fh.spend);
        }
        lo = (s, ph, fh.spend);
        s *= 2.0;
        if s > 1e12 {
            return Err(Error::Infeasible("cost multiplier diverged".into()));
        }
    };

    let mix = |lo: &(f64, Vec<f64>, f64), hi: &(f64, Vec<f64>, f64)| -> Vec<f64> {
        // hit the budget exactly with a convex combination; I is concave
        let theta = if lo.2 > hi.2 {
            ((budget - hi.2) / (lo.2 - hi.2)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        lo.1.iter()
            .zip(&hi.1)
            .map(|(a, b)| theta * a + (1.0 - theta) * b)
            .collect()
    };

    let mut input = mix(&lo, &hi);
    let mut lower = dmc.info(&input);
    for _ in 0..MAX_BISECTIONS {
        if best_upper - lower < tol {
            break;
        }
        let mid = 0.5 * (lo.0 + hi.0);
        let mut pm = revive(&hi.1, &dmc.allowed);
        let fm = dmc.iterate(cost, mid, &mut pm, tol * 0.5);
        best_upper = best_upper.min(fm.upper + mid * budget);
        if fm.spend <= budget {
            hi = (mid, pm, fm.spend);
        } else {
            lo = (mid, pm, fm.spend);
        }
        let candidate = mix(&lo, &hi);
        let info = dmc.info(&candidate);
        if info > lower {
            lower = info;
            input = candidate;
        }
    }
    Ok(CapacityNats {
        lower,
        upper: best_upper.max(lower),
        input,
        multiplier: hi.0,
    })
}

/// Restores a little mass on every allowed input; the multiplicative
/// update can never revive an input whose mass has underflowed.
fn revive(p: &[f64], allowed: &[bool]) -> Vec<f64> {
    let n = allowed.iter().filter(|&&a| a).count() as f64;
    p.iter()
        .zip(allowed)
        .map(|(&v, &ok)| if ok { 0.999 * v + 0.001 / n } else { 0.0 })
        .collect()
}

fn initial(allowed: &[bool], warm: Option<&[f64]>) -> Vec<f64> {
    let mut p: Vec<f64> = match warm {
        // keep every allowed input alive so the multiplicative update can reach it
        Some(w) if w.len() == allowed.len() => w.iter().map(|&v| v + 1e-3).collect(),
        _ => vec![1.0; allowed.len()],
    };
    for (v, &ok) in p.iter_mut().zip(allowed) {
        if !ok {
            *v = 0.0;
        }
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    p
}
