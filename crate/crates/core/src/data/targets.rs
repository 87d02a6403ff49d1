use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::Observations;
use crate::error::{Error, Result};

/// Grid size used when none is given.
pub const DEFAULT_TARGET_POINTS: usize = 101;

/// Sampled analytic curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetTable {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

impl Observations for TargetTable {
    fn xs(&self) -> &[f64] {
        &self.xs
    }

    fn ys(&self) -> &[f64] {
        &self.ys
    }
}

/// `points` equally spaced values from `lo` to `hi`, both included.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            let mut v: Vec<f64> = (0..points).map(|i| lo + i as f64 * step).collect();
            v[points - 1] = hi;
            v
        }
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn grid(interval: (f64, f64), points: usize) -> Result<Vec<f64>> {
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Range(format!("empty interval [{lo}, {hi}]")));
    }
    if points < 2 {
        return Err(Error::Range(format!(
            "need at least 2 grid points, got {points}"
        )));
    }
    Ok(linspace(lo, hi, points))
}

/// Logistic sigmoid `1 / (1 + e^-x)` sampled on `interval`.
pub fn gen_sigmoid_target(interval: (f64, f64), points: usize) -> Result<TargetTable> {
    let xs = grid(interval, points)?;
    let ys = xs.iter().map(|&x| 1.0 / (1.0 + (-x).exp())).collect();
    Ok(TargetTable { xs, ys })
}

/// Standard normal CDF sampled on `interval`.
pub fn gen_erf_target(interval: (f64, f64), points: usize) -> Result<TargetTable> {
    let xs = grid(interval, points)?;
    let ys = xs.iter().map(|&x| normal_cdf(x)).collect();
    Ok(TargetTable { xs, ys })
}
