//! Numerical integration: adaptive Gauss–Kronrod, double-exponential rules,
//! oscillatory transforms, principal values and vertical contour integrals.
//!
//! Every routine returns an [`Estimate`] carrying an error estimate, or an
//! [`Error::NoConvergence`] naming the stage that gave up.

pub(crate) mod contour;
mod double_exp;
mod gauss;
mod oscillatory;
mod principal;

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

pub use contour::{contour_integral, ContourSpec};
pub use double_exp::{exp_sinh, tanh_sinh};
pub use gauss::{gauss_kronrod, GaussLegendre};
pub use oscillatory::{cosine_transform, sine_transform, wynn_epsilon};
pub use principal::{principal_value, PvOptions};

use crate::error::{Error, Result};
use crate::specfun::Complex;

/// Scalar type a rule can accumulate: `f64` or [`Complex`].
pub trait Field:
    Copy
    + Send
    + Sync
    + Default
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + AddAssign
{
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl Field for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl Field for Complex {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Integral value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T = f64> {
    pub value: T,
    pub error: f64,
}

impl<T: Field> Estimate<T> {
    pub(crate) fn combine(self, other: Estimate<T>) -> Estimate<T> {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
        }
    }

    pub(crate) fn scale(self, k: f64) -> Estimate<T> {
        Estimate {
            value: self.value * k,
            error: self.error * k.abs(),
        }
    }
}

/// Tolerances shared by all rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on adaptive bisections (and on refinement levels times 100
    /// for the double-exponential rules).
    pub max_subdivisions: usize,
    /// Relative size below which an integrand tail is treated as zero.
    pub tail_cutoff: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            tail_cutoff: 1e-16,
        }
    }
}

impl QuadConfig {
    pub fn with_tolerance(rel_tol: f64, abs_tol: f64) -> Self {
        QuadConfig {
            rel_tol,
            abs_tol,
            ..QuadConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::out_of_range("rel_tol", self.rel_tol, "(0, 1)"));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::out_of_range("abs_tol", self.abs_tol, "[0, inf)"));
        }
        if self.max_subdivisions < 16 {
            return Err(Error::out_of_range(
                "max_subdivisions",
                self.max_subdivisions as f64,
                "[16, inf)",
            ));
        }
        if !(self.tail_cutoff > 0.0 && self.tail_cutoff < 1.0) {
            return Err(Error::out_of_range(
                "tail_cutoff",
                self.tail_cutoff,
                "(0, 1)",
            ));
        }
        Ok(())
    }

    pub(crate) fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Integrates `f` over `[a, b]`; either limit may be infinite.
///
/// Finite intervals use tanh-sinh with an adaptive Gauss–Kronrod fallback,
/// half-lines use the exp-sinh map and the whole line is split at zero.
pub fn integrate<T: Field>(
    f: impl Fn(f64) -> T + Sync,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<Estimate<T>> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::NonFinite { stage: "integrate" });
    }
    if a == b {
        return Ok(Estimate {
            value: T::default(),
            error: 0.0,
        });
    }
    if a > b {
        return integrate(f, b, a, cfg).map(|e| e.scale(-1.0));
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => match tanh_sinh(&f, a, b, cfg) {
            Ok(e) => Ok(e),
            Err(Error::NoConvergence { .. }) => gauss_kronrod(&f, a, b, cfg),
            Err(e) => Err(e),
        },
        (true, false) => exp_sinh(&f, a, cfg),
        (false, true) => exp_sinh(|x| f(-x), -b, cfg),
        (false, false) => {
            let right = exp_sinh(&f, 0.0, cfg)?;
            let left = exp_sinh(|x| f(-x), 0.0, cfg)?;
            Ok(right.combine(left))
        }
    }
}

/// `d w^p` for `d = O(w)` near a kernel singularity, formed in logs where
/// `w^p` alone would overflow.
pub(crate) fn power_weighted(d: f64, w: f64, p: f64) -> f64 {
    let k = w.powf(p);
    if d == 0.0 {
        0.0
    } else if k.is_finite() {
        d * k
    } else {
        d.signum() * (d.abs().ln() + p * w.ln()).exp()
    }
}

/// Powers of four from 1 up to `hi`: panels that keep an O(1) feature
/// visible on a very long range.
pub(crate) fn geometric_breaks(hi: f64) -> Vec<f64> {
    std::iter::successors(Some(1.0f64), |b| Some(4.0 * b))
        .take_while(|&b| b < hi)
        .collect()
}

/// Integrates over `[a, b]` after splitting at the given interior points.
pub fn integrate_with_breaks<T: Field>(
    f: impl Fn(f64) -> T + Sync,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<Estimate<T>> {
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi && p.is_finite())
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut edges = Vec::with_capacity(pts.len() + 2);
    edges.push(lo);
    edges.extend(pts);
    edges.push(hi);
    let mut acc = Estimate {
        value: T::default(),
        error: 0.0,
    };
    for w in edges.windows(2) {
        acc = acc.combine(integrate(&f, w[0], w[1], cfg)?);
    }
    Ok(acc.scale(sign))
}
