//! CSV output. Every file has a header row; floats are written in their
//! shortest round-tripping form, so identical results give identical bytes.

use std::io::Write;

use fhjam_core::bounds::LogUnit;
use fhjam_core::minimax::SaddleEstimate;

use crate::campaign::{AttackRow, ResultRow};
use crate::sweep::{BoundsRow, WaterfillRow};

/// Marks a bound that does not apply at that point.
pub const INFEASIBLE: &str = "infeasible";

fn num(v: f64) -> String {
    format!("{v}")
}

fn rate(unit: LogUnit, bits: f64) -> String {
    num(unit.from_bits(bits))
}

/// Simulation rows; `timing` adds the (nondeterministic) wall-clock column.
pub fn write_results<W: Write>(w: W, rows: &[ResultRow], unit: LogUnit, timing: bool) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec![
        "experiment", "n", "messages", "rate", "unit", "strategy", "trials", "errors", "error", "std_error",
    ];
    if timing {
        header.push("wall_ms");
    }
    out.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.experiment.clone(),
            r.n.to_string(),
            r.messages.to_string(),
            rate(unit, r.rate_bits),
            unit.suffix().to_string(),
            r.strategy.clone(),
            r.trials.to_string(),
            r.errors.to_string(),
            num(r.error),
            num(r.std_error),
        ];
        if timing {
            rec.push(num(r.wall_clock.as_secs_f64() * 1e3));
        }
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_attack<W: Write>(w: W, rows: &[AttackRow]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "experiment", "n", "messages", "trials", "average", "average_se", "distinct", "distinct_se",
        "worst_attack", "worst_error",
    ])?;
    for r in rows {
        out.write_record([
            r.experiment.clone(),
            r.n.to_string(),
            r.messages.to_string(),
            r.trials.to_string(),
            num(r.average),
            num(r.average_se),
            num(r.distinct),
            num(r.distinct_se),
            r.worst_attack.to_string(),
            num(r.worst_error),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_bounds<W: Write>(w: W, rows: &[BoundsRow], unit: LogUnit) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "gamma", "lambda", "level", "active_bands", "cr_lower", "cr_upper", "best_subband", "upper_minus_lower", "unit",
    ])?;
    for r in rows {
        let (upper, diff) = match r.cr_upper {
            Some(u) => (rate(unit, u), rate(unit, u - r.cr_lower)),
            None => (INFEASIBLE.to_string(), INFEASIBLE.to_string()),
        };
        out.write_record([
            num(r.gamma),
            num(r.lambda),
            num(r.level),
            r.active_bands.to_string(),
            rate(unit, r.cr_lower),
            upper,
            rate(unit, r.best_subband),
            diff,
            unit.suffix().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_waterfill<W: Write>(w: W, rows: &[WaterfillRow]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["band", "sigma2", "jam_power", "active", "level"])?;
    for r in rows {
        out.write_record([
            r.band.to_string(),
            num(r.sigma2),
            num(r.jam_power),
            r.active.to_string(),
            num(r.level),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Game summary row, with the closed-form bracket for reference.
pub struct MinimaxReport<'a> {
    pub experiment: &'a str,
    pub gamma: f64,
    pub lambda: f64,
    pub max_bands: usize,
    pub estimate: &'a SaddleEstimate,
    pub cr_lower: f64,
    pub cr_upper: Option<f64>,
}

pub fn write_minimax<W: Write>(w: W, r: &MinimaxReport<'_>, unit: LogUnit) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "experiment", "gamma", "lambda", "max_bands", "value", "sup_side", "min_side", "gap", "iterations",
        "cr_lower", "cr_upper", "unit",
    ])?;
    let e = r.estimate;
    out.write_record([
        r.experiment.to_string(),
        num(r.gamma),
        num(r.lambda),
        r.max_bands.to_string(),
        rate(unit, e.value),
        rate(unit, e.sup_side),
        rate(unit, e.min_side),
        rate(unit, e.gap),
        e.iterations.to_string(),
        rate(unit, r.cr_lower),
        r.cr_upper.map_or(INFEASIBLE.to_string(), |u| rate(unit, u)),
        unit.suffix().to_string(),
    ])?;
    out.flush()?;
    Ok(())
}

pub fn write_trace<W: Write>(w: W, e: &SaddleEstimate, unit: LogUnit) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["iteration", "sup_side", "min_side", "unit"])?;
    for t in &e.trace {
        out.write_record([
            t.iteration.to_string(),
            rate(unit, t.sup_side),
            rate(unit, t.min_side),
            unit.suffix().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
