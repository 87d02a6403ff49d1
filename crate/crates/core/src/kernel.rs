//! Closed-form evaluation of perturbed-line S-curves.
//!
//! A single curve is the real root of
//!
//! ```text
//! a (y - y_c)^3 + (y - y_c) = m (x - x_c),   a > 0
//! ```
//!
//! which is S-shaped with one inflection at `(x_c, y_c)` and slope `m` there.
//! As `a -> 0` the curve collapses onto the line `y = m (x - x_c) + y_c`.
//! Superpositions add weighted curves that share one `a`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Smallest admissible perturbation parameter.
pub const A_LOWER_BOUND: f64 = 1e-9;

/// Real root `u` of `a u^3 + u = z` for `a > 0`.
///
/// Evaluated on the non-positive branch of `z`, where the Cardano
/// discriminant term adds rather than cancels, and mirrored through odd
/// symmetry. One Newton step on the cubic follows.
#[inline]
pub(crate) fn cubic_root(a: f64, z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    let mag = z.abs();
    let q = 13.5 * mag / a;
    let c = 27.0 / (a * a * a);
    // t = q + sqrt(q^2 + c), written to avoid overflowing q^2 when q >> sqrt(c).
    let t = if q > c.sqrt() {
        q * (1.0 + (1.0 + c / (q * q)).sqrt())
    } else {
        q + (q * q + c).sqrt()
    };
    let ct = t.cbrt();
    // Root at -|z| is  -ct/3 + 1/(a ct); the root at +|z| is its negation.
    let mut u = ct / 3.0 - 1.0 / (a * ct);
    if !u.is_finite() {
        // t overflowed for huge |z|/a; the cubic term dominates.
        u = (mag / a).cbrt();
    }
    let f = a * u * u * u + u - mag;
    let df = 3.0 * a * u * u + 1.0;
    u -= f / df;
    u.copysign(z)
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be finite, got {v}"
        )))
    }
}

fn check_a(a: f64) -> Result<()> {
    check_finite("a", a)?;
    if a < A_LOWER_BOUND {
        return Err(Error::Domain {
            a,
            bound: A_LOWER_BOUND,
        });
    }
    Ok(())
}

/// One perturbed-line component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SCurveParams {
    /// Perturbation (adjustment) parameter, `a >= 1e-9`.
    pub a: f64,
    /// Slope at the inflection point. May be negative.
    pub m: f64,
    pub x_c: f64,
    pub y_c: f64,
}

impl SCurveParams {
    pub fn new(a: f64, m: f64, x_c: f64, y_c: f64) -> Result<Self> {
        let p = Self { a, m, x_c, y_c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_a(self.a)?;
        check_finite("m", self.m)?;
        check_finite("x_c", self.x_c)?;
        check_finite("y_c", self.y_c)
    }

    /// Offset `y - y_c` at `x`, without validation.
    #[inline]
    pub(crate) fn offset(&self, x: f64) -> f64 {
        cubic_root(self.a, self.m * (x - self.x_c))
    }
}

/// Curve value at `x`.
pub fn eval_scurve(params: &SCurveParams, x: f64) -> Result<f64> {
    params.validate()?;
    check_finite("x", x)?;
    Ok(params.offset(x) + params.y_c)
}

/// Slope `m / (1 + 3 a (y - y_c)^2)` at `x`; equals `m` at the inflection.
pub fn eval_scurve_derivative(params: &SCurveParams, x: f64) -> Result<f64> {
    params.validate()?;
    check_finite("x", x)?;
    let u = params.offset(x);
    Ok(params.m / (1.0 + 3.0 * params.a * u * u))
}

/// One weighted term of a [`Superposition`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub weight: f64,
    pub slope: f64,
    pub x_c: f64,
    pub y_c: f64,
}

impl Component {
    pub fn new(weight: f64, slope: f64, x_c: f64, y_c: f64) -> Self {
        Self {
            weight,
            slope,
            x_c,
            y_c,
        }
    }

    #[inline]
    fn offset(&self, a: f64, x: f64) -> f64 {
        cubic_root(a, self.slope * (x - self.x_c))
    }

    #[inline]
    fn value(&self, a: f64, x: f64) -> f64 {
        self.weight * (self.offset(a, x) + self.y_c)
    }

    #[inline]
    fn slope_at(&self, a: f64, x: f64) -> f64 {
        let u = self.offset(a, x);
        self.weight * self.slope / (1.0 + 3.0 * a * u * u)
    }
}

/// Weighted sum of S-curves sharing one perturbation parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Superposition {
    pub a: f64,
    pub components: Vec<Component>,
}

impl Superposition {
    pub fn new(a: f64, components: Vec<Component>) -> Result<Self> {
        let s = Self { a, components };
        s.validate()?;
        Ok(s)
    }

    /// Single unit-weight curve.
    pub fn single(params: SCurveParams) -> Self {
        Self {
            a: params.a,
            components: vec![Component::new(1.0, params.m, params.x_c, params.y_c)],
        }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn validate(&self) -> Result<()> {
        check_a(self.a)?;
        if self.components.is_empty() {
            return Err(Error::InvalidInput(
                "superposition needs at least one component".into(),
            ));
        }
        for (i, c) in self.components.iter().enumerate() {
            for (name, v) in [
                ("weight", c.weight),
                ("slope", c.slope),
                ("x_c", c.x_c),
                ("y_c", c.y_c),
            ] {
                check_finite(&format!("component {i} {name}"), v)?;
            }
        }
        Ok(())
    }

    /// Sum of `p_i m_i`: the slope with every nonlinearity switched off.
    pub fn linear_slope(&self) -> f64 {
        self.components.iter().map(|c| c.weight * c.slope).sum()
    }

    pub(crate) fn value_unchecked(&self, x: f64) -> f64 {
        self.components.iter().map(|c| c.value(self.a, x)).sum()
    }

    pub(crate) fn derivative_unchecked(&self, x: f64) -> f64 {
        self.components.iter().map(|c| c.slope_at(self.a, x)).sum()
    }

    /// Values at every point of `xs`, parallel over points for large batches.
    pub fn eval_many(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.validate()?;
        check_all_finite(xs)?;
        Ok(par::map(xs, |&x| self.value_unchecked(x)))
    }

    pub fn eval_many_seq(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.validate()?;
        check_all_finite(xs)?;
        Ok(par::map_seq(xs, |&x| self.value_unchecked(x)))
    }

    pub fn derivative_many(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.validate()?;
        check_all_finite(xs)?;
        Ok(par::map(xs, |&x| self.derivative_unchecked(x)))
    }

    pub fn derivative_many_seq(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.validate()?;
        check_all_finite(xs)?;
        Ok(par::map_seq(xs, |&x| self.derivative_unchecked(x)))
    }
}

fn check_all_finite(xs: &[f64]) -> Result<()> {
    match xs.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(Error::InvalidInput(format!(
            "x[{i}] must be finite, got {}",
            xs[i]
        ))),
        None => Ok(()),
    }
}

pub fn eval_superposition(sup: &Superposition, x: f64) -> Result<f64> {
    sup.validate()?;
    check_finite("x", x)?;
    Ok(sup.value_unchecked(x))
}

pub fn eval_superposition_derivative(sup: &Superposition, x: f64) -> Result<f64> {
    sup.validate()?;
    check_finite("x", x)?;
    Ok(sup.derivative_unchecked(x))
}
