//! The sender/jammer mutual-information game on finite grids.
//!
//! The sender mixes over atoms `(x, k)` with `E[x²] ≤ Γ`; the jammer mixes
//! over vectors `s` on an amplitude grid with at most `J` nonzero entries
//! and `E‖s‖² ≤ Λ`. Each band's output is quantized separately, so the
//! output alphabet is the product of the per-band bins. `I(p, W_q)` is
//! concave in `p` and convex in `q`; the saddle is approached by
//! fictitious play with uniform averaging and bracketed by two certified
//! one-sided values.

use rayon::prelude::*;

use crate::bounds::waterfill;
use crate::channel::{FhChannel, NoiseKind};
use crate::error::{contract, Error, Result};
use crate::jammer::JamBudget;

use super::blahut::capacity_flat;

const LOG2_E: f64 = std::f64::consts::LOG2_E;
const MAX_OUTPUTS: usize = 1 << 22;
const MAX_JAM_ATOMS: usize = 200_000;
const TINY: f64 = 1e-300;

/// An evenly spaced amplitude grid `min, min + step, …, ≤ max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl GridSpec {
    /// Grid on `[-max, max]`.
    pub fn symmetric(max: f64, step: f64) -> Self {
        Self { min: -max, max, step }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        contract!(
            self.min.is_finite() && self.max.is_finite() && self.step.is_finite(),
            "grid bounds must be finite"
        );
        contract!(self.max >= self.min, "grid max {} below min {}", self.max, self.min);
        contract!(self.step > 0.0, "grid step must be positive");
        let count = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        contract!(count <= 10_000, "grid has {count} points");
        Ok((0..count)
            .map(|i| {
                let v = self.min + i as f64 * self.step;
                // land exactly on zero when the grid passes through it
                if v.abs() < 1e-9 * self.step {
                    0.0
                } else {
                    v
                }
            })
            .collect())
    }
}

/// Per-band output quantizer: cells of width `width` covering `[min, max)`
/// plus the two unbounded outer cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinSpec {
    pub min: f64,
    pub max: f64,
    pub width: f64,
}

impl BinSpec {
    /// Interior cell edges; there is one more cell than edges.
    pub fn edges(&self) -> Result<Vec<f64>> {
        contract!(
            self.min.is_finite() && self.max.is_finite() && self.width.is_finite(),
            "bin range must be finite"
        );
        contract!(self.width > 0.0 && self.max > self.min, "empty bin range");
        let cells = ((self.max - self.min) / self.width).round() as usize;
        contract!((1..=100_000).contains(&cells), "bin range has {cells} cells");
        Ok((0..=cells).map(|i| self.min + i as f64 * self.width).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameGrids {
    /// Sender amplitudes.
    pub input: GridSpec,
    /// Jammer amplitudes, per band.
    pub jam: GridSpec,
    pub output: BinSpec,
}

impl GameGrids {
    /// Grids scaled to the budgets: amplitudes out to about 2.5 standard
    /// deviations, outputs out to a comfortable margin past the largest
    /// mean.
    pub fn for_budgets(gamma: f64, lambda: f64, sigma2_max: f64) -> Self {
        let step = 0.5;
        let reach = |p: f64| ((2.5 * p.sqrt()) / step).ceil() * step;
        let input = GridSpec::symmetric(reach(gamma), step);
        let jam = GridSpec::symmetric(reach(lambda), step);
        let span = input.max + jam.max + 4.0 * sigma2_max.sqrt();
        let span = (span / step).ceil() * step;
        Self {
            input,
            jam,
            output: BinSpec { min: -span, max: span, width: step },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxOptions {
    /// Fictitious-play rounds (at least 1).
    pub iterations: usize,
    /// Stop once the certified gap falls to this many bits.
    pub gap_target: f64,
    /// Projected-gradient steps per jammer best response.
    pub jammer_steps: usize,
    /// Blahut–Arimoto bracket width per sender best response, in bits.
    pub sender_tol: f64,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        Self {
            iterations: 500,
            gap_target: 0.01,
            jammer_steps: 4,
            sender_tol: 1e-4,
        }
    }
}

/// One round of the bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    /// Best certified upper value so far, bits.
    pub sup_side: f64,
    /// Best certified lower value so far, bits.
    pub min_side: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaddleEstimate {
    /// `I(p, W_q)` in bits for the returned strategies.
    pub value: f64,
    /// Sender atoms `(x, band)`, parallel to `input_dist`.
    pub input_atoms: Vec<(f64, usize)>,
    pub input_dist: Vec<f64>,
    /// Jammer vectors, parallel to `jam_dist`.
    pub jam_atoms: Vec<Vec<f64>>,
    pub jam_dist: Vec<f64>,
    /// `max_p I(p, W_q)` bound for the returned jammer, bits.
    pub sup_side: f64,
    /// `min_q I(p, W_q)` bound for the returned sender, bits.
    pub min_side: f64,
    /// `sup_side − min_side`, never negative.
    pub gap: f64,
    pub iterations: usize,
    pub trace: Vec<TracePoint>,
}

/// Finite restriction of the FH game.
#[derive(Debug, Clone)]
pub struct DiscretizedGame {
    bands: usize,
    bins: usize,
    amps: Vec<f64>,
    /// `(amplitude index, band)`; amplitude zero appears once.
    inputs: Vec<(usize, usize)>,
    input_cost: Vec<f64>,
    jam_values: Vec<f64>,
    jams: Vec<Vec<u32>>,
    jam_cost: Vec<f64>,
    /// `[band][jam value]`: output law of an unused band.
    idle: Vec<Vec<Vec<f64>>>,
    /// `[band][amplitude][jam value]`: output law of the hopped-to band.
    hop: Vec<Vec<Vec<Vec<f64>>>>,
}

impl DiscretizedGame {
    pub fn new(ch: &FhChannel, grids: &GameGrids, max_bands: usize) -> Result<Self> {
        let bands = ch.bands();
        contract!(max_bands <= bands, "J = {max_bands} exceeds K = {bands}");
        let amps = grids.input.values()?;
        let jam_values = grids.jam.values()?;
        let edges = grids.output.edges()?;
        let bins = edges.len() + 1;
        let outputs = bins
            .checked_pow(bands as u32)
            .filter(|&o| o <= MAX_OUTPUTS)
            .ok_or_else(|| Error::Contract(format!("{bins}^{bands} output cells is too many")))?;
        let _ = outputs;

        let mut inputs = Vec::new();
        for (a, &x) in amps.iter().enumerate() {
            for k in 0..bands {
                // 0·e_k is the same channel input for every k
                if x == 0.0 && k > 0 {
                    continue;
                }
                inputs.push((a, k));
            }
        }
        let input_cost = inputs.iter().map(|&(a, _)| amps[a] * amps[a]).collect();

        let jams = jam_atoms(bands, &jam_values, max_bands)?;
        contract!(!jams.is_empty(), "no jammer vector on the grid uses at most {max_bands} bands");
        let jam_cost = jams
            .iter()
            .map(|s| s.iter().map(|&v| jam_values[v as usize].powi(2)).sum())
            .collect();

        let law = |band: usize, mean: f64| bin_law(ch, band, mean, &edges);
        let idle: Vec<Vec<Vec<f64>>> = (0..bands)
            .map(|b| jam_values.iter().map(|&v| law(b, v)).collect())
            .collect();
        let hop = (0..bands)
            .map(|b| {
                amps.iter()
                    .map(|&x| jam_values.iter().map(|&v| law(b, x + v)).collect())
                    .collect()
            })
            .collect();

        Ok(Self {
            bands,
            bins,
            amps,
            inputs,
            input_cost,
            jam_values,
            jams,
            jam_cost,
            idle,
            hop,
        })
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    /// Output cells per band.
    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn outputs(&self) -> usize {
        self.bins.pow(self.bands as u32)
    }

    pub fn input_atoms(&self) -> Vec<(f64, usize)> {
        self.inputs.iter().map(|&(a, k)| (self.amps[a], k)).collect()
    }

    pub fn input_costs(&self) -> &[f64] {
        &self.input_cost
    }

    pub fn jam_atoms(&self) -> Vec<Vec<f64>> {
        self.jams
            .iter()
            .map(|s| s.iter().map(|&v| self.jam_values[v as usize]).collect())
            .collect()
    }

    pub fn jam_costs(&self) -> &[f64] {
        &self.jam_cost
    }

    /// Output law of input atom `i` against jammer atom `j`, flattened with
    /// band 0 varying slowest.
    pub fn transition(&self, i: usize, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.outputs()];
        accumulate(&mut out, &self.factors(i, j), 1.0);
        out
    }

    /// Checks a strategy pair against the probability and power invariants.
    pub fn validate(&self, input_dist: &[f64], jam_dist: &[f64], gamma: f64, lambda: f64) -> Result<()> {
        check_dist(input_dist, self.inputs.len(), "input")?;
        check_dist(jam_dist, self.jams.len(), "jammer")?;
        let spend = dot(input_dist, &self.input_cost);
        contract!(spend <= gamma + 1e-9, "sender spends {spend} > {gamma}");
        let spend = dot(jam_dist, &self.jam_cost);
        contract!(spend <= lambda + 1e-9, "jammer spends {spend} > {lambda}");
        Ok(())
    }

    fn factors(&self, i: usize, j: usize) -> Vec<&[f64]> {
        let (a, k) = self.inputs[i];
        let s = &self.jams[j];
        (0..self.bands)
            .map(|b| {
                let v = s[b] as usize;
                if b == k {
                    self.hop[b][a][v].as_slice()
                } else {
                    self.idle[b][v].as_slice()
                }
            })
            .collect()
    }

    /// Row-major `W_q(y | i)`.
    fn mixed_rows(&self, q: &[f64]) -> Vec<f64> {
        let outs = self.outputs();
        let mut rows = vec![0.0; self.inputs.len() * outs];
        let active: Vec<usize> = (0..q.len()).filter(|&j| q[j] > 0.0).collect();
        rows.par_chunks_mut(outs).enumerate().for_each(|(i, row)| {
            for &j in &active {
                accumulate(row, &self.factors(i, j), q[j]);
            }
        });
        rows
    }

    /// `I(p, W)` in nats and the log-ratio table `ln W(y|i)/r(y)`.
    fn information(&self, p: &[f64], rows: &[f64]) -> (f64, Vec<f64>) {
        let outs = self.outputs();
        let mut r = vec![0.0; outs];
        for (pi, row) in p.iter().zip(rows.chunks(outs)) {
            if *pi > 0.0 {
                for (acc, w) in r.iter_mut().zip(row) {
                    *acc += pi * w;
                }
            }
        }
        let ln_r: Vec<f64> = r.iter().map(|&v| v.max(TINY).ln()).collect();
        let mut info = 0.0;
        let mut ratio = vec![0.0; rows.len()];
        for (i, (row, lr)) in rows.chunks(outs).zip(ratio.chunks_mut(outs)).enumerate() {
            let mut acc = 0.0;
            for y in 0..outs {
                lr[y] = row[y].max(TINY).ln() - ln_r[y];
                acc += row[y] * lr[y];
            }
            info += p[i] * acc;
        }
        (info, ratio)
    }

    /// `∂I(p, W_q)/∂q_j = Σ_i p_i Σ_y W_j(y|i) ln(W_q(y|i)/r(y))`.
    fn jam_gradient(&self, p: &[f64], ratio: &[f64]) -> Vec<f64> {
        let outs = self.outputs();
        (0..self.jams.len())
            .into_par_iter()
            .map(|j| {
                let mut g = 0.0;
                for (i, &pi) in p.iter().enumerate() {
                    if pi > 0.0 {
                        g += pi * contract_with(&ratio[i * outs..(i + 1) * outs], &self.factors(i, j));
                    }
                }
                g
            })
            .collect()
    }

    /// Discretized waterfilling jammer, or the cheapest atom when that is
    /// not available.
    fn initial_jammer(&self, ch: &FhChannel, lambda: f64, max_bands: usize) -> Vec<f64> {
        let n = self.jams.len();
        let cheapest = argmin(&self.jam_cost);
        let mut q = vec![0.0; n];
        q[cheapest] = 1.0;
        let zero = self.jam_values.iter().position(|&v| v == 0.0);
        let (Some(zero), true) = (zero, ch.is_gaussian() && lambda > 0.0) else {
            return q;
        };
        let Ok(wf) = waterfill(ch.sigma2(), lambda) else {
            return q;
        };
        if wf.active.len() > max_bands {
            return q;
        }
        let mut w: Vec<f64> = self
            .jams
            .iter()
            .map(|s| {
                (0..self.bands)
                    .map(|b| {
                        let v = self.jam_values[s[b] as usize];
                        let var = wf.allocation[b];
                        if var > 0.0 {
                            (-v * v / (2.0 * var)).exp()
                        } else if s[b] as usize == zero {
                            1.0
                        } else {
                            0.0
                        }
                    })
                    .product()
            })
            .collect();
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return q;
        }
        w.iter_mut().for_each(|v| *v /= total);
        let spend = dot(&w, &self.jam_cost);
        if spend > lambda {
            // thin out towards silence to meet the budget
            let zero_atom = self.jams.iter().position(|s| s.iter().all(|&v| v as usize == zero));
            let Some(z) = zero_atom else { return q };
            let theta = lambda / spend;
            w.iter_mut().for_each(|v| *v *= theta);
            w[z] += 1.0 - theta;
        }
        w
    }

    /// Projected-gradient descent on `q ↦ I(p, W_q)` from `q`. Returns the
    /// final point and a certified lower bound on the minimum (nats).
    fn jammer_response(&self, p: &[f64], q: Vec<f64>, lambda: f64, steps: usize, eta: &mut f64) -> (Vec<f64>, f64) {
        let mut q = q;
        let (mut f, ratio) = self.information(p, &self.mixed_rows(&q));
        let mut g = self.jam_gradient(p, &ratio);
        for _ in 0..steps {
            let mut moved = false;
            while *eta > 1e-12 {
                let z: Vec<f64> = q.iter().zip(&g).map(|(a, b)| a - *eta * b).collect();
                let cand = project(&z, &self.jam_cost, lambda);
                let diff: Vec<f64> = cand.iter().zip(&q).map(|(a, b)| a - b).collect();
                let (fc, rc) = self.information(p, &self.mixed_rows(&cand));
                let model = f + dot(&g, &diff) + dot(&diff, &diff) / (2.0 * *eta);
                if fc <= model + 1e-15 {
                    q = cand;
                    f = fc;
                    g = self.jam_gradient(p, &rc);
                    *eta = (*eta * 2.0).min(1e6);
                    moved = true;
                    break;
                }
                *eta *= 0.5;
            }
            if !moved {
                *eta = 1.0;
                break;
            }
        }
        let lower = f + lp_min(&g, &self.jam_cost, lambda) - dot(&g, &q);
        (q, lower)
    }

    /// Fictitious play for `rounds` rounds.
    pub fn solve(
        &self,
        ch: &FhChannel,
        gamma: f64,
        budget: &JamBudget,
        options: &MinimaxOptions,
    ) -> Result<SaddleEstimate> {
        contract!(options.iterations >= 1, "at least one iteration is required");
        contract!(options.sender_tol > 0.0, "sender tolerance must be positive");
        contract!(gamma >= 0.0 && gamma.is_finite(), "Γ must be finite and nonnegative");
        let lambda = budget.lambda();
        let cheapest_jam = self.jam_cost.iter().copied().fold(f64::INFINITY, f64::min);
        if cheapest_jam > lambda {
            return Err(Error::Infeasible(format!(
                "every jammer vector on the grid costs more than Λ = {lambda}"
            )));
        }

        let outs = self.outputs();
        let n_in = self.inputs.len();
        let mut q_avg = self.initial_jammer(ch, lambda, budget.max_bands());
        let mut q_br = q_avg.clone();
        let mut p_avg = vec![0.0; n_in];
        let mut p_br: Option<Vec<f64>> = None;
        let mut eta = 1.0;

        let mut best_upper = (f64::INFINITY, q_avg.clone());
        let mut best_lower = (f64::NEG_INFINITY, vec![0.0; n_in]);
        let mut trace = Vec::new();
        let mut rounds = 0;
        for t in 1..=options.iterations {
            rounds = t;
            let rows = self.mixed_rows(&q_avg);
            let sender = capacity_flat(
                &rows,
                n_in,
                outs,
                Some((&self.input_cost, gamma)),
                options.sender_tol / LOG2_E,
                p_br.as_deref(),
            )?;
            if sender.upper < best_upper.0 {
                best_upper = (sender.upper, q_avg.clone());
            }
            let w = 1.0 / t as f64;
            for (a, b) in p_avg.iter_mut().zip(&sender.input) {
                *a += w * (b - *a);
            }
            p_br = Some(sender.input);

            let (q_new, lower) = self.jammer_response(&p_avg, q_br, lambda, options.jammer_steps, &mut eta);
            if lower > best_lower.0 {
                best_lower = (lower, p_avg.clone());
            }
            let w = 1.0 / (t + 1) as f64;
            for (a, b) in q_avg.iter_mut().zip(&q_new) {
                *a += w * (b - *a);
            }
            q_br = q_new;

            trace.push(TracePoint {
                iteration: t,
                sup_side: best_upper.0 * LOG2_E,
                min_side: best_lower.0 * LOG2_E,
            });
            if (best_upper.0 - best_lower.0) * LOG2_E <= options.gap_target {
                break;
            }
        }

        let (upper, jam_dist) = best_upper;
        let (lower, input_dist) = best_lower;
        let (value, _) = self.information(&input_dist, &self.mixed_rows(&jam_dist));
        // value lies in [lower, upper] up to rounding
        let value = value.clamp(lower.min(upper), upper);
        self.validate(&input_dist, &jam_dist, gamma, lambda)?;
        Ok(SaddleEstimate {
            value: value * LOG2_E,
            input_atoms: self.input_atoms(),
            input_dist,
            jam_atoms: self.jam_atoms(),
            jam_dist,
            sup_side: upper * LOG2_E,
            min_side: lower * LOG2_E,
            gap: ((upper - lower) * LOG2_E).max(0.0),
            iterations: rounds,
            trace,
        })
    }
}

/// Saddle value of the discretized FH game by fictitious play.
pub fn minimax_estimate(
    ch: &FhChannel,
    gamma: f64,
    budget: &JamBudget,
    grids: &GameGrids,
    options: &MinimaxOptions,
) -> Result<SaddleEstimate> {
    let game = DiscretizedGame::new(ch, grids, budget.max_bands())?;
    game.solve(ch, gamma, budget, options)
}

fn jam_atoms(bands: usize, values: &[f64], max_bands: usize) -> Result<Vec<Vec<u32>>> {
    let g = values.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; bands];
    loop {
        let nnz = idx.iter().filter(|&&v| values[v] != 0.0).count();
        if nnz <= max_bands {
            contract!(out.len() < MAX_JAM_ATOMS, "more than {MAX_JAM_ATOMS} jammer vectors");
            out.push(idx.iter().map(|&v| v as u32).collect());
        }
        // odometer, last band fastest
        let mut b = bands;
        loop {
            if b == 0 {
                return Ok(out);
            }
            b -= 1;
            idx[b] += 1;
            if idx[b] < g {
                break;
            }
            idx[b] = 0;
        }
    }
}

/// Probability of each output cell on `band` when the noiseless output is `mean`.
fn bin_law(ch: &FhChannel, band: usize, mean: f64, edges: &[f64]) -> Vec<f64> {
    let cells = edges.len() + 1;
    let mut law = vec![0.0; cells];
    match ch.noise_kind() {
        NoiseKind::Gaussian => {
            let sd = ch.sigma2()[band].sqrt();
            let z = |e: f64| (e - mean) / (sd * std::f64::consts::SQRT_2);
            let upper_tail = |e: f64| 0.5 * libm::erfc(z(e));
            let lower_tail = |e: f64| 0.5 * libm::erfc(-z(e));
            for c in 0..cells {
                let lo = if c == 0 { f64::NEG_INFINITY } else { edges[c - 1] };
                let hi = if c == cells - 1 { f64::INFINITY } else { edges[c] };
                // difference the tail that is small here to keep precision
                law[c] = if lo >= mean {
                    upper_tail(lo) - upper_tail(hi)
                } else if hi <= mean {
                    lower_tail(hi) - lower_tail(lo)
                } else {
                    1.0 - lower_tail(lo) - upper_tail(hi)
                };
                law[c] = law[c].max(0.0);
            }
        }
        NoiseKind::FiniteSupport(dist) => {
            for &(z, w) in &dist[band] {
                let v = mean + z;
                law[edges.partition_point(|&e| e <= v)] += w;
            }
        }
    }
    let total: f64 = law.iter().sum();
    law.iter_mut().for_each(|v| *v /= total);
    law
}

/// `out += w · (f_0 ⊗ f_1 ⊗ …)`.
fn accumulate(out: &mut [f64], factors: &[&[f64]], w: f64) {
    match factors {
        [last] => {
            for (o, f) in out.iter_mut().zip(*last) {
                *o += w * f;
            }
        }
        [first, rest @ ..] => {
            let stride = out.len() / first.len();
            for (chunk, &f) in out.chunks_mut(stride).zip(*first) {
                let wf = w * f;
                if wf != 0.0 {
                    accumulate(chunk, rest, wf);
                }
            }
        }
        [] => {}
    }
}

/// `⟨t, f_0 ⊗ f_1 ⊗ …⟩`.
fn contract_with(t: &[f64], factors: &[&[f64]]) -> f64 {
    match factors {
        [last] => dot(t, last),
        [first, rest @ ..] => {
            let stride = t.len() / first.len();
            t.chunks(stride)
                .zip(*first)
                .filter(|(_, &f)| f != 0.0)
                .map(|(chunk, &f)| f * contract_with(chunk, rest))
                .sum()
        }
        [] => 0.0,
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x < v[best] {
            best = i;
        }
    }
    best
}

fn check_dist(p: &[f64], len: usize, what: &str) -> Result<()> {
    contract!(p.len() == len, "{what} distribution has {} entries, expected {len}", p.len());
    contract!(p.iter().all(|&v| v >= 0.0), "{what} distribution has negative mass");
    let total: f64 = p.iter().sum();
    contract!((total - 1.0).abs() <= 1e-12, "{what} distribution sums to {total}");
    Ok(())
}

/// Euclidean projection onto the simplex.
fn project_simplex(z: &[f64]) -> Vec<f64> {
    let mut sorted = z.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        cum += v;
        let t = (cum - 1.0) / (i + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    z.iter().map(|&v| (v - theta).max(0.0)).collect()
}

/// Euclidean projection onto `{q ∈ simplex : ⟨cost, q⟩ ≤ budget}` by
/// bisection on the budget multiplier.
fn project(z: &[f64], cost: &[f64], budget: f64) -> Vec<f64> {
    let at = |nu: f64| {
        let shifted: Vec<f64> = z.iter().zip(cost).map(|(a, c)| a - nu * c).collect();
        project_simplex(&shifted)
    };
    let q = at(0.0);
    if dot(&q, cost) <= budget {
        return q;
    }
    let mut hi = 1.0;
    let mut q_hi = at(hi);
    while dot(&q_hi, cost) > budget {
        hi *= 2.0;
        q_hi = at(hi);
        if hi > 1e15 {
            break;
        }
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let qm = at(mid);
        if dot(&qm, cost) > budget {
            lo = mid;
        } else {
            hi = mid;
            q_hi = qm;
        }
    }
    q_hi
}

/// `min ⟨g, q⟩` over `{q ∈ simplex : ⟨cost, q⟩ ≤ budget}`: the lower convex
/// envelope of the points `(cost_j, g_j)` at cost `budget` or below.
fn lp_min(g: &[f64], cost: &[f64], budget: f64) -> f64 {
    let mut pts: Vec<(f64, f64)> = cost.iter().copied().zip(g.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup_by(|b, a| a.0 == b.0);
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut best = f64::INFINITY;
    for (i, &(c, v)) in hull.iter().enumerate() {
        if c <= budget {
            best = best.min(v);
            if let Some(&(c2, v2)) = hull.get(i + 1) {
                if c2 > budget {
                    best = best.min(v + (v2 - v) * (budget - c) / (c2 - c));
                }
            }
        }
    }
    best
}
