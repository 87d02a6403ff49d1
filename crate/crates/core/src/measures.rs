//! Characterization measures of a fitted superposition.
//!
//! * `m_max`: the largest slope of the fitted curve (peak of its bell curve).
//! * `ratio`: `m_max / (1 + a)`.
//! * `nl_percent`: `100 |sum p_i m_i - m_max| / m_max`, how far the realized
//!   peak slope sits from the slope with nonlinearity switched off.
//! * `m_bar`: peak of the bell curve after dividing by its sum over histogram
//!   edges, comparable to relative-frequency bars.

use serde::{Deserialize, Serialize};

use crate::data::{linspace, HistogramSpec};
use crate::error::{Error, Result};
use crate::kernel::Superposition;
use crate::par;

/// Dense grid size for the slope search.
pub const GRID_POINTS: usize = 2048;
/// Fractional padding added to each side of the data range.
pub const INTERVAL_PADDING: f64 = 0.05;
const GOLDEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSet {
    pub m_max: f64,
    pub argmax_x: f64,
    pub ratio: f64,
    /// `None` when `m_max` is zero.
    pub nl_percent: Option<f64>,
    /// Only available when a histogram of the raw samples is known.
    pub m_bar: Option<f64>,
}

/// `[lo, hi]` widened by [`INTERVAL_PADDING`] of its width on each side.
pub fn padded_interval(lo: f64, hi: f64) -> (f64, f64) {
    let pad = INTERVAL_PADDING * (hi - lo);
    (lo - pad, hi + pad)
}

/// Maximum of `f` on `[lo, hi]` by golden-section search, assuming a single
/// peak in the bracket. Returns `(x, f(x))`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Largest value of the superposition's slope on `interval` and where it
/// occurs.
///
/// A single unit-weight curve peaks at its inflection with slope `|m|`.
/// Otherwise a [`GRID_POINTS`] grid, augmented with every component
/// inflection inside the interval, brackets the peak and golden-section
/// search polishes it.
pub fn max_slope(sup: &Superposition, interval: (f64, f64)) -> Result<(f64, f64)> {
    sup.validate()?;
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Range(format!(
            "degenerate search interval [{lo}, {hi}]"
        )));
    }
    if let [c] = sup.components.as_slice() {
        return Ok(((c.weight * c.slope).abs(), c.x_c));
    }

    let h = (hi - lo) / (GRID_POINTS - 1) as f64;
    let mut xs = linspace(lo, hi, GRID_POINTS);
    xs.extend(
        sup.components
            .iter()
            .map(|c| c.x_c)
            .filter(|&x| x > lo && x < hi),
    );
    let ds = par::map(&xs, |&x| sup.derivative_unchecked(x));
    let mut best = 0;
    for (i, d) in ds.iter().enumerate() {
        if *d > ds[best] {
            best = i;
        }
    }
    let (bx, bd) = (xs[best], ds[best]);
    let (rx, rd) = golden_max(
        |x| sup.derivative_unchecked(x),
        (bx - h).max(lo),
        (bx + h).min(hi),
        GOLDEN_TOL,
    );
    Ok(if rd > bd { (rd, rx) } else { (bd, bx) })
}

pub fn ratio_measure(a: f64, m_max: f64) -> f64 {
    m_max / (1.0 + a)
}

/// Percentage gap between the linearized slope sum and the realized peak.
pub fn nonlinearity_percent(sup: &Superposition, m_max: f64) -> Result<f64> {
    if m_max == 0.0 || !m_max.is_finite() {
        return Err(Error::UndefinedMeasure(format!(
            "nonlinearity needs a finite nonzero peak slope, got {m_max}"
        )));
    }
    Ok(100.0 * (sup.linear_slope() - m_max).abs() / m_max.abs())
}

/// Peak slope divided by the sum of slopes at the histogram edges.
pub fn normalized_peak(sup: &Superposition, hist: &HistogramSpec) -> Result<f64> {
    normalized_peak_on(sup, hist, None)
}

/// As [`normalized_peak`], searching the peak on `interval` instead of the
/// padded edge range.
pub fn normalized_peak_on(
    sup: &Superposition,
    hist: &HistogramSpec,
    interval: Option<(f64, f64)>,
) -> Result<f64> {
    let edges = &hist.edges;
    if edges.len() < 2 {
        return Err(Error::UndefinedMeasure(format!(
            "normalized peak needs at least two histogram edges, got {}",
            edges.len()
        )));
    }
    sup.validate()?;
    let interval = interval.unwrap_or_else(|| padded_interval(edges[0], edges[edges.len() - 1]));
    let (peak, _) = max_slope(sup, interval)?;
    let denom: f64 = edges.iter().map(|&e| sup.derivative_unchecked(e)).sum();
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::UndefinedMeasure(format!(
            "slope sum over histogram edges is {denom}"
        )));
    }
    Ok(peak / denom)
}

/// All measures for `sup` over `interval`.
pub fn measure_set(
    sup: &Superposition,
    interval: (f64, f64),
    hist: Option<&HistogramSpec>,
) -> Result<MeasureSet> {
    let (m_max, argmax_x) = max_slope(sup, interval)?;
    let m_bar = match hist {
        Some(h) => normalized_peak_on(sup, h, Some(interval)).ok(),
        None => None,
    };
    Ok(MeasureSet {
        m_max,
        argmax_x,
        ratio: ratio_measure(sup.a, m_max),
        nl_percent: nonlinearity_percent(sup, m_max).ok(),
        m_bar,
    })
}
