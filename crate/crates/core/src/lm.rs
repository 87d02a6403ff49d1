//! Levenberg–Marquardt minimization of a sum of squared residuals.
//!
//! Jacobians come from forward differences. The damped step solves
//!
//! ```text
//! [ J          ]       [ -r ]
//! [ sqrt(l) D  ] d  =  [  0 ]
//! ```
//!
//! in the least-squares sense by Householder QR, where `D` holds the column
//! norms of `J`. Lower bounds are enforced by projecting each trial point.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::par;

#[derive(Debug, Clone, PartialEq)]
pub struct LmSettings {
    pub initial_damping: f64,
    /// Damping multiplier on a rejected step; divided out on acceptance.
    pub damping_factor: f64,
    pub max_damping: f64,
    pub max_iterations: usize,
    pub sse_rel_tol: f64,
    pub gradient_tol: f64,
    /// Relative forward-difference step, scaled by `max(1, |theta_j|)`.
    pub jacobian_step: f64,
    /// Per-parameter lower bounds; `None` leaves a parameter free.
    pub lower_bounds: Vec<Option<f64>>,
}

impl Default for LmSettings {
    fn default() -> Self {
        Self {
            initial_damping: 1e-3,
            damping_factor: 10.0,
            max_damping: 1e16,
            max_iterations: 1000,
            sse_rel_tol: 1e-10,
            gradient_tol: 1e-12,
            jacobian_step: 1e-6,
            lower_bounds: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// Relative SSE decrease of an accepted step fell below tolerance.
    SseTolerance,
    /// Gradient infinity-norm fell below tolerance.
    Gradient,
    /// Residuals are exactly zero.
    ExactFit,
    /// No step reduced the SSE even at maximal damping.
    DampingLimit,
    MaxIterations,
    /// The starting point produced non-finite residuals.
    NonFinite,
}

impl Termination {
    pub fn converged(self) -> bool {
        !matches!(self, Self::MaxIterations | Self::NonFinite)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmOutcome {
    pub theta: Vec<f64>,
    pub sse: f64,
    pub initial_sse: f64,
    pub iterations: usize,
    pub termination: Termination,
}

fn sse(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn project(theta: &mut [f64], bounds: &[Option<f64>]) {
    for (t, b) in theta.iter_mut().zip(bounds) {
        if let Some(lb) = *b {
            if *t < lb {
                *t = lb;
            }
        }
    }
}

/// Forward-difference Jacobian, one parallel task per column.
pub fn forward_jacobian<F>(residual: &F, theta: &[f64], r0: &[f64], rel_step: f64) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    let cols = par::map_range(theta.len(), |j| {
        let h = rel_step * theta[j].abs().max(1.0);
        let mut t = theta.to_vec();
        t[j] += h;
        let h = t[j] - theta[j];
        residual(&t)
            .iter()
            .zip(r0)
            .map(|(a, b)| (a - b) / h)
            .collect::<Vec<f64>>()
    });
    DMatrix::from_fn(r0.len(), theta.len(), |i, j| cols[j][i])
}

/// Damped Gauss–Newton step, `None` if the system is numerically singular.
fn damped_step(jac: &DMatrix<f64>, r: &[f64], scale: &[f64], damping: f64) -> Option<Vec<f64>> {
    let (m, n) = jac.shape();
    let sqrt_l = damping.sqrt();
    let aug = DMatrix::from_fn(m + n, n, |i, j| {
        if i < m {
            jac[(i, j)]
        } else if i - m == j {
            sqrt_l * scale[j]
        } else {
            0.0
        }
    });
    let mut rhs = DVector::from_fn(m + n, |i, _| if i < m { -r[i] } else { 0.0 });
    let qr = aug.qr();
    qr.q_tr_mul(&mut rhs);
    let rmat = qr.r();
    let step = rmat.solve_upper_triangular(&rhs.rows(0, n).into_owned())?;
    step.iter()
        .all(|v| v.is_finite())
        .then(|| step.iter().copied().collect())
}

/// Minimizes `sum residual(theta)^2` from `theta0`.
pub fn minimize<F>(residual: F, theta0: &[f64], settings: &LmSettings) -> LmOutcome
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    let mut bounds = settings.lower_bounds.clone();
    bounds.resize(theta0.len(), None);

    let mut theta = theta0.to_vec();
    project(&mut theta, &bounds);
    let mut r = residual(&theta);
    let mut cur = sse(&r);
    let initial_sse = cur;
    let finish = |theta: Vec<f64>, sse, iterations, termination| LmOutcome {
        theta,
        sse,
        initial_sse,
        iterations,
        termination,
    };

    if !cur.is_finite() {
        return finish(theta, cur, 0, Termination::NonFinite);
    }
    if cur == 0.0 {
        return finish(theta, cur, 0, Termination::ExactFit);
    }

    let mut damping = settings.initial_damping;
    for iter in 0..settings.max_iterations {
        let jac = forward_jacobian(&residual, &theta, &r, settings.jacobian_step);
        let grad = jac.transpose() * DVector::from_column_slice(&r);
        if grad.amax() < settings.gradient_tol {
            return finish(theta, cur, iter, Termination::Gradient);
        }
        let scale: Vec<f64> = jac
            .column_iter()
            .map(|c| {
                let norm = c.norm();
                if norm > 0.0 && norm.is_finite() {
                    norm
                } else {
                    1.0
                }
            })
            .collect();

        loop {
            if let Some(step) = damped_step(&jac, &r, &scale, damping) {
                let mut trial: Vec<f64> = theta.iter().zip(&step).map(|(t, d)| t + d).collect();
                project(&mut trial, &bounds);
                let r_trial = residual(&trial);
                let s_trial = sse(&r_trial);
                if s_trial.is_finite() && s_trial < cur {
                    let rel = (cur - s_trial) / cur;
                    theta = trial;
                    r = r_trial;
                    cur = s_trial;
                    damping = (damping / settings.damping_factor).max(f64::MIN_POSITIVE);
                    if cur == 0.0 {
                        return finish(theta, cur, iter + 1, Termination::ExactFit);
                    }
                    if rel < settings.sse_rel_tol {
                        return finish(theta, cur, iter + 1, Termination::SseTolerance);
                    }
                    break;
                }
            }
            damping *= settings.damping_factor;
            if damping > settings.max_damping {
                return finish(theta, cur, iter + 1, Termination::DampingLimit);
            }
        }
    }
    finish(
        theta,
        cur,
        settings.max_iterations,
        Termination::MaxIterations,
    )
}
