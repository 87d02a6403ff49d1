use serde::{Deserialize, Serialize};

use super::{EmpiricalCdf, Observations};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Midpoints of the steepest segments between consecutive points.
    SlopeMidpoint,
    /// The most frequently observed values, at their ECDF fraction.
    ModeFrequency,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slope" | "slope-midpoint" => Ok(Self::SlopeMidpoint),
            "mode" | "mode-frequency" => Ok(Self::ModeFrequency),
            other => Err(Error::InvalidInput(format!(
                "unknown inflection strategy {other:?}"
            ))),
        }
    }
}

/// Candidate inflection points in priority order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InflectionSet {
    pub points: Vec<(f64, f64)>,
    pub strategy: Strategy,
}

impl InflectionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Indices of `keys` from largest to smallest; equal keys come out with the
/// larger index first (stable ascending sort, then reversed).
fn descending_order(keys: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&i, &j| keys[i].total_cmp(&keys[j]));
    idx.reverse();
    idx
}

pub fn select_inflections_slope<O: Observations + ?Sized>(
    data: &O,
    count: usize,
) -> Result<InflectionSet> {
    let (xs, ys) = (data.xs(), data.ys());
    if xs.len() < 2 {
        return Err(Error::Range(format!(
            "slope selection needs at least 2 points, got {}",
            xs.len()
        )));
    }
    if count == 0 || count > xs.len() - 1 {
        return Err(Error::Range(format!(
            "requested {count} inflections from {} segments",
            xs.len() - 1
        )));
    }
    let slopes: Vec<f64> = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| ((y[1] - y[0]) / (x[1] - x[0])).abs())
        .collect();
    let points = descending_order(&slopes)
        .into_iter()
        .take(count)
        .map(|k| (0.5 * (xs[k] + xs[k + 1]), 0.5 * (ys[k] + ys[k + 1])))
        .collect();
    Ok(InflectionSet {
        points,
        strategy: Strategy::SlopeMidpoint,
    })
}

pub fn select_inflections_mode(cdf: &EmpiricalCdf, count: usize) -> Result<InflectionSet> {
    if count == 0 || count > cdf.xs.len() {
        return Err(Error::Range(format!(
            "requested {count} inflections from {} unique values",
            cdf.xs.len()
        )));
    }
    let keys: Vec<f64> = cdf.counts.iter().map(|&c| c as f64).collect();
    let points = descending_order(&keys)
        .into_iter()
        .take(count)
        .map(|j| (cdf.xs[j], cdf.fractions[j]))
        .collect();
    Ok(InflectionSet {
        points,
        strategy: Strategy::ModeFrequency,
    })
}

/// Dispatches on `strategy`.
pub fn select_inflections(
    cdf: &EmpiricalCdf,
    strategy: Strategy,
    count: usize,
) -> Result<InflectionSet> {
    match strategy {
        Strategy::SlopeMidpoint => select_inflections_slope(cdf, count),
        Strategy::ModeFrequency => select_inflections_mode(cdf, count),
    }
}
