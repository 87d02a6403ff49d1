use serde::{Deserialize, Serialize};

use super::{linspace, SampleColumn};
use crate::error::{Error, Result};

/// Uniform bins over the data range with relative frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub edges: Vec<f64>,
    pub masses: Vec<f64>,
}

impl HistogramSpec {
    pub fn bins(&self) -> usize {
        self.masses.len()
    }
}

/// Percentile with linear interpolation between closest ranks.
///
/// `sorted` must be ascending and non-empty; `q` is in `[0, 100]`.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * q / 100.0;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Sturges / Freedman–Diaconis bin count, whichever is larger.
fn bin_count(sorted: &[f64]) -> usize {
    let n = sorted.len() as f64;
    let range = sorted[sorted.len() - 1] - sorted[0];
    let sturges = n.log2().ceil() as usize + 1;
    let iqr = percentile(sorted, 75.0) - percentile(sorted, 25.0);
    let fd = if iqr > 0.0 {
        (range / (2.0 * iqr * n.powf(-1.0 / 3.0))).ceil() as usize
    } else {
        0
    };
    sturges.max(fd).max(1)
}

pub fn auto_histogram(samples: &SampleColumn) -> Result<HistogramSpec> {
    let mut sorted = samples.values.clone();
    if sorted.is_empty() {
        return Err(Error::EmptyData(format!(
            "column {} has no values",
            samples.label
        )));
    }
    sorted.sort_by(f64::total_cmp);
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    if lo == hi {
        return Err(Error::DegenerateData(format!(
            "all {} values of {} equal {lo}; a histogram needs at least two distinct values",
            sorted.len(),
            samples.label
        )));
    }
    let k = bin_count(&sorted);
    let edges = linspace(lo, hi, k + 1);
    let mut counts = vec![0u64; k];
    for &x in &sorted {
        let mut i = (((x - lo) / (hi - lo)) * k as f64).floor() as usize;
        i = i.min(k - 1);
        // Bins are half-open except the last; correct for rounding in the guess.
        while i > 0 && x < edges[i] {
            i -= 1;
        }
        while i + 1 < k && x >= edges[i + 1] {
            i += 1;
        }
        counts[i] += 1;
    }
    let total = sorted.len() as f64;
    let masses = counts.iter().map(|&c| c as f64 / total).collect();
    Ok(HistogramSpec { edges, masses })
}
