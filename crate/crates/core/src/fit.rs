//! Bounded least-squares fits of S-curve superpositions.
//!
//! Inflection coordinates are fixed by the caller (usually through
//! [`crate::data::select_inflections`]). A single curve fits `(a, m)` with
//! unit weight; `n > 1` fits `a` plus every `(p_i, m_i)`.

use serde::{Deserialize, Serialize};

use crate::data::{
    auto_histogram, build_ecdf, select_inflections, select_inflections_slope, EmpiricalCdf,
    HistogramSpec, InflectionSet, Observations, SampleColumn, Strategy, TargetTable,
};
use crate::error::{Error, Result};
use crate::kernel::{Component, Superposition, A_LOWER_BOUND};
use crate::lm::{self, LmSettings, Termination};
use crate::measures::{self, MeasureSet};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitMode {
    /// Every component starts from `init_p` and `init_m`.
    Constant,
    /// Slopes start at the data slope across each inflection; weights at zero
    /// unless given.
    SlopeAtInflection,
}

impl std::str::FromStr for InitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Self::Constant),
            "slope" | "slope-at-inflection" => Ok(Self::SlopeAtInflection),
            other => Err(Error::InvalidInput(format!("unknown init mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Number of superposed curves.
    pub n: usize,
    pub init_a: f64,
    /// One value for all components or one per component. `None` picks 0.1
    /// for a single curve and 1 otherwise.
    pub init_m: Option<Vec<f64>>,
    /// Initial weights (ignored for a single curve). `None` picks 1, or 0 in
    /// slope-at-inflection mode.
    pub init_p: Option<Vec<f64>>,
    pub init_mode: InitMode,
    pub a_lower_bound: f64,
    pub max_iterations: usize,
    pub sse_rel_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            n: 1,
            init_a: 1.0,
            init_m: None,
            init_p: None,
            init_mode: InitMode::Constant,
            a_lower_bound: A_LOWER_BOUND,
            max_iterations: 1000,
            sse_rel_tol: 1e-10,
        }
    }
}

impl FitConfig {
    pub fn with_n(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput(
                "component count must be at least 1".into(),
            ));
        }
        if !(self.a_lower_bound.is_finite() && self.a_lower_bound > 0.0) {
            return Err(Error::InvalidInput(format!(
                "a lower bound must be positive, got {}",
                self.a_lower_bound
            )));
        }
        if !self.init_a.is_finite() || self.init_a < self.a_lower_bound {
            return Err(Error::InvalidInput(format!(
                "initial a = {} violates the bound {}",
                self.init_a, self.a_lower_bound
            )));
        }
        for (name, v) in [("init_m", &self.init_m), ("init_p", &self.init_p)] {
            if let Some(v) = v {
                if v.len() != 1 && v.len() != self.n {
                    return Err(Error::InvalidInput(format!(
                        "{name} needs 1 or {} values, got {}",
                        self.n,
                        v.len()
                    )));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidInput(format!("{name} must be finite")));
                }
            }
        }
        if self.sse_rel_tol.is_nan() || self.sse_rel_tol < 0.0 {
            return Err(Error::InvalidInput(
                "sse_rel_tol must be non-negative".into(),
            ));
        }
        Ok(())
    }

    fn lm_settings(&self, n_params: usize) -> LmSettings {
        let mut lower_bounds = vec![None; n_params];
        lower_bounds[0] = Some(self.a_lower_bound);
        LmSettings {
            max_iterations: self.max_iterations,
            sse_rel_tol: self.sse_rel_tol,
            lower_bounds,
            ..LmSettings::default()
        }
    }
}

fn pick(values: &Option<Vec<f64>>, i: usize, default: f64) -> f64 {
    match values.as_deref() {
        Some([v]) => *v,
        Some(v) => v[i],
        None => default,
    }
}

/// Slope of the data across `x`: between the nearest points strictly below
/// and strictly above it, clamped to the ends of the table.
pub fn bracketing_slope<O: Observations + ?Sized>(data: &O, x: f64) -> f64 {
    let (xs, ys) = (data.xs(), data.ys());
    if xs.len() < 2 {
        return 0.0;
    }
    let below = xs.partition_point(|&v| v < x);
    let above = xs.partition_point(|&v| v <= x);
    let lo = below.saturating_sub(1);
    let hi = above.min(xs.len() - 1);
    if hi <= lo {
        return 0.0;
    }
    (ys[hi] - ys[lo]) / (xs[hi] - xs[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub params: Superposition,
    pub sse: f64,
    pub initial_sse: f64,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    pub measures: MeasureSet,
    pub config: FitConfig,
}

impl FitReport {
    /// Fills in the normalized peak from a histogram of the raw samples.
    pub fn with_histogram(mut self, hist: &HistogramSpec, interval: (f64, f64)) -> Self {
        self.measures.m_bar = measures::normalized_peak_on(&self.params, hist, Some(interval)).ok();
        self
    }
}

/// Model minus data at every tabulated abscissa.
pub fn residuals<O: Observations + ?Sized>(sup: &Superposition, data: &O) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(Error::EmptyData("no points to compute residuals on".into()));
    }
    sup.validate()?;
    Ok(residuals_unchecked(sup, data.xs(), data.ys()))
}

fn residuals_unchecked(sup: &Superposition, xs: &[f64], ys: &[f64]) -> Vec<f64> {
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| sup.value_unchecked(x) - y)
        .collect()
}

pub fn sse<O: Observations + ?Sized>(sup: &Superposition, data: &O) -> Result<f64> {
    Ok(residuals(sup, data)?.iter().map(|r| r * r).sum())
}

/// Search interval for the measures: the data range padded on both sides.
pub fn measure_interval<O: Observations + ?Sized>(data: &O) -> (f64, f64) {
    let (lo, hi) = data.x_range().unwrap_or((0.0, 0.0));
    if hi > lo {
        measures::padded_interval(lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

struct Layout {
    points: Vec<(f64, f64)>,
}

impl Layout {
    fn single(&self) -> bool {
        self.points.len() == 1
    }

    fn to_sup(&self, theta: &[f64]) -> Superposition {
        let components = if self.single() {
            let (x_c, y_c) = self.points[0];
            vec![Component::new(1.0, theta[1], x_c, y_c)]
        } else {
            self.points
                .iter()
                .enumerate()
                .map(|(i, &(x_c, y_c))| {
                    Component::new(theta[1 + 2 * i], theta[2 + 2 * i], x_c, y_c)
                })
                .collect()
        };
        Superposition {
            a: theta[0],
            components,
        }
    }
}

/// Levenberg–Marquardt fit of `config.n` curves anchored at the first
/// `config.n` inflection points.
pub fn fit<O: Observations + ?Sized>(
    data: &O,
    inflections: &InflectionSet,
    config: &FitConfig,
) -> Result<FitReport> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyData("no points to fit".into()));
    }
    if inflections.len() < config.n {
        return Err(Error::Range(format!(
            "{} inflection points for {} components",
            inflections.len(),
            config.n
        )));
    }
    let layout = Layout {
        points: inflections.points[..config.n].to_vec(),
    };

    let slope_init = |i: usize, x_c: f64| match config.init_mode {
        InitMode::Constant => pick(&config.init_m, i, if layout.single() { 0.1 } else { 1.0 }),
        InitMode::SlopeAtInflection => match &config.init_m {
            Some(_) => pick(&config.init_m, i, 0.0),
            None => bracketing_slope(data, x_c),
        },
    };
    let default_p = match config.init_mode {
        InitMode::Constant => 1.0,
        InitMode::SlopeAtInflection => 0.0,
    };
    let mut theta0 = vec![config.init_a];
    for (i, &(x_c, _)) in layout.points.iter().enumerate() {
        if !layout.single() {
            theta0.push(pick(&config.init_p, i, default_p));
        }
        theta0.push(slope_init(i, x_c));
    }

    let (xs, ys) = (data.xs(), data.ys());
    let outcome = lm::minimize(
        |theta: &[f64]| residuals_unchecked(&layout.to_sup(theta), xs, ys),
        &theta0,
        &config.lm_settings(theta0.len()),
    );

    let params = layout.to_sup(&outcome.theta);
    let measures = measures::measure_set(&params, measure_interval(data), None)?;
    Ok(FitReport {
        params,
        sse: outcome.sse,
        initial_sse: outcome.initial_sse,
        iterations: outcome.iterations,
        converged: outcome.termination.converged(),
        termination: outcome.termination,
        measures,
        config: config.clone(),
    })
}

/// Tables that can supply their own inflection points.
pub trait InflectionSource: Observations + Sync {
    fn inflections(&self, strategy: Strategy, count: usize) -> Result<InflectionSet>;
}

impl InflectionSource for EmpiricalCdf {
    fn inflections(&self, strategy: Strategy, count: usize) -> Result<InflectionSet> {
        select_inflections(self, strategy, count)
    }
}

impl InflectionSource for TargetTable {
    fn inflections(&self, strategy: Strategy, count: usize) -> Result<InflectionSet> {
        match strategy {
            Strategy::SlopeMidpoint => select_inflections_slope(self, count),
            Strategy::ModeFrequency => Err(Error::InvalidInput(
                "analytic targets have no frequencies; use slope-midpoint selection".into(),
            )),
        }
    }
}

/// One entry of [`sweep_n`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub n: usize,
    pub report: Result<FitReport>,
}

/// Fits every `n` in `n_values` independently (in parallel), re-selecting
/// inflection points each time. Failures are recorded per entry.
pub fn sweep_n<D: InflectionSource + ?Sized>(
    data: &D,
    strategy: Strategy,
    n_values: &[usize],
    config: &FitConfig,
) -> Vec<SweepEntry> {
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    par::map_range(ns.len(), |i| {
        let n = ns[i];
        let cfg = FitConfig {
            n,
            ..config.clone()
        };
        let report = data
            .inflections(strategy, n)
            .and_then(|infl| fit(data, &infl, &cfg));
        SweepEntry { n, report }
    })
}

/// Everything derived from one column of raw samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnFit {
    pub cdf: EmpiricalCdf,
    pub histogram: Option<HistogramSpec>,
    pub inflections: InflectionSet,
    pub report: FitReport,
}

/// ECDF, optional zero-frequency injections, inflection selection, fit, and
/// the histogram-normalized peak.
pub fn fit_samples(
    samples: &SampleColumn,
    strategy: Strategy,
    config: &FitConfig,
    zero_points: &[f64],
) -> Result<ColumnFit> {
    let mut cdf = build_ecdf(samples)?;
    for &x in zero_points {
        cdf = cdf.with_zero_point(x)?;
    }
    let inflections = select_inflections(&cdf, strategy, config.n)?;
    let mut report = fit(&cdf, &inflections, config)?;
    let histogram = auto_histogram(samples).ok();
    if let Some(h) = &histogram {
        report = report.with_histogram(h, measure_interval(&cdf));
    }
    Ok(ColumnFit {
        cdf,
        histogram,
        inflections,
        report,
    })
}
