use serde::{Deserialize, Serialize};

use super::Observations;
use crate::error::{Error, Result};

/// Raw measurements of one attribute for one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleColumn {
    pub values: Vec<f64>,
    pub label: String,
    pub group: String,
}

impl SampleColumn {
    pub fn new(
        values: Vec<f64>,
        label: impl Into<String>,
        group: impl Into<String>,
    ) -> Result<Self> {
        let label = label.into();
        if values.is_empty() {
            return Err(Error::EmptyData(format!("column {label} has no values")));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "column {label} contains non-finite value {v}"
            )));
        }
        Ok(Self {
            values,
            label,
            group: group.into(),
        })
    }
}

/// Cumulative relative frequencies over the unique sorted sample values.
///
/// Counts are positive for observed values. A point added through
/// [`EmpiricalCdf::with_zero_point`] carries count zero and repeats the
/// fraction of its left neighbour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCdf {
    pub xs: Vec<f64>,
    pub fractions: Vec<f64>,
    pub counts: Vec<u64>,
}

impl EmpiricalCdf {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyData(
                "cannot build an ECDF from no samples".into(),
            ));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite sample {v}")));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);

        let mut xs: Vec<f64> = Vec::new();
        let mut counts: Vec<u64> = Vec::new();
        for v in sorted {
            match xs.last() {
                Some(&last) if last == v => *counts.last_mut().unwrap() += 1,
                _ => {
                    xs.push(v);
                    counts.push(1);
                }
            }
        }
        let fractions = cumulative_fractions(&counts);
        Ok(Self {
            xs,
            fractions,
            counts,
        })
    }

    /// Adds an unobserved abscissa with zero frequency.
    pub fn with_zero_point(&self, x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidInput(format!(
                "injected point must be finite, got {x}"
            )));
        }
        let k = self.xs.partition_point(|&v| v < x);
        if self.xs.get(k) == Some(&x) {
            return Err(Error::InvalidInput(format!(
                "injected point {x} coincides with an observed value"
            )));
        }
        let mut out = self.clone();
        out.xs.insert(k, x);
        out.counts.insert(k, 0);
        out.fractions = cumulative_fractions(&out.counts);
        Ok(out)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn cumulative_fractions(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    let mut acc = 0u64;
    counts
        .iter()
        .map(|&c| {
            acc += c;
            // Integer accumulation keeps the last entry exactly 1.
            acc as f64 / total as f64
        })
        .collect()
}

impl Observations for EmpiricalCdf {
    fn xs(&self) -> &[f64] {
        &self.xs
    }

    fn ys(&self) -> &[f64] {
        &self.fractions
    }
}

pub fn build_ecdf(samples: &SampleColumn) -> Result<EmpiricalCdf> {
    EmpiricalCdf::from_values(&samples.values)
}
