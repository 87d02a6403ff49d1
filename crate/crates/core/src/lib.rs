//! Sigmoid and bell-shaped curves as singular perturbations of straight lines.
//!
//! The line `y = m x` perturbed to `a y^3 + y = m x` (`a > 0`) bends into an
//! S-curve whose derivative is a bell curve. Small `a` gives back the line, a
//! uniform CDF; large `a` concentrates all slope at the inflection point.
//! Curves with different inflection points superpose under a shared `a`.
//!
//! * [`kernel`]: closed-form evaluation of single curves and superpositions.
//! * [`data`]: ECDFs, histograms, inflection selection, analytic targets, CSV.
//! * [`fit`]: bounded Levenberg–Marquardt fits and sweeps over `n`.
//! * [`measures`]: peak slope, `m / (1 + a)`, percentage nonlinearity and the
//!   histogram-normalized peak.
//!
//! Batch work (grid evaluation, Jacobian columns, sweeps) uses rayon when the
//! `parallel` feature is on, which it is by default.
//!
//! ```
//! use scurve::kernel::{eval_scurve, SCurveParams};
//!
//! let p = SCurveParams::new(1.0, 1.0, 0.0, 0.0)?;
//! let y = eval_scurve(&p, 1.0)?;
//! assert!((y + y.powi(3) - 1.0).abs() < 1e-12);
//! # Ok::<(), scurve::Error>(())
//! ```

pub mod data;
pub mod error;
pub mod fit;
pub mod kernel;
pub mod lm;
pub mod measures;
pub mod par;

pub use error::{Error, Result};
pub use fit::{fit, fit_samples, sweep_n, FitConfig, FitReport, InitMode};
pub use kernel::{Component, SCurveParams, Superposition, A_LOWER_BOUND};
pub use measures::MeasureSet;
