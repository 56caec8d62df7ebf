//! Double-exponential rules: tanh-sinh on finite intervals and exp-sinh on
//! half-lines, refined by step halving.

use std::f64::consts::FRAC_PI_2;

use super::{Estimate, Field, QuadConfig};
use crate::error::{Error, Result};

const FIRST_STEP: f64 = 0.5;
const MAX_LEVEL: u32 = 11;
const T_CAP: f64 = 7.5;
/// The walk may stop on negligible terms only beyond this `|t|`, so that a
/// vanishing centre does not hide mass near an endpoint.
const TAIL_START: f64 = 3.0;

/// Tanh-sinh quadrature on a finite interval.
///
/// Abscissae near either endpoint are formed from the endpoint distance
/// directly, so integrable endpoint singularities at `a = 0` are resolved
/// to full relative precision.
pub fn tanh_sinh<T: Field>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<Estimate<T>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite { stage: "tanh_sinh" });
    }
    if a == b {
        return Ok(Estimate {
            value: T::default(),
            error: 0.0,
        });
    }
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let node = |t: f64| -> Option<T> {
        if t == 0.0 {
            return Some(f(c) * (FRAC_PI_2 * d));
        }
        let u = FRAC_PI_2 * t.abs().sinh();
        let e = (-2.0 * u).exp();
        let q = 2.0 * e / (1.0 + e);
        let off = d * q;
        let x = if t > 0.0 { b - off } else { a + off };
        if off == 0.0 || x == a || x == b {
            return None;
        }
        let w = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e)) * d;
        Some(f(x) * w)
    };
    de_driver(node, cfg, "tanh_sinh")
}

/// Exp-sinh quadrature on `[a, inf)` using `x = a + exp((pi/2) sinh t)`.
pub fn exp_sinh<T: Field>(f: impl Fn(f64) -> T, a: f64, cfg: &QuadConfig) -> Result<Estimate<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite { stage: "exp_sinh" });
    }
    let node = |t: f64| -> Option<T> {
        let u = FRAC_PI_2 * t.sinh();
        let off = u.exp();
        let x = a + off;
        if off == 0.0 || !x.is_finite() || x == a {
            return None;
        }
        let w = FRAC_PI_2 * t.cosh() * off;
        if !w.is_finite() {
            return None;
        }
        Some(f(x) * w)
    };
    de_driver(node, cfg, "exp_sinh")
}

fn de_driver<T: Field>(
    node: impl Fn(f64) -> Option<T>,
    cfg: &QuadConfig,
    stage: &'static str,
) -> Result<Estimate<T>> {
    let mut sum = node(0.0).unwrap_or_default();
    if !sum.is_finite_value() {
        return Err(Error::NonFinite { stage });
    }
    let mut acc_abs = sum.magnitude();
    let walk = |start: f64, step: f64, sum: &mut T, acc_abs: &mut f64| -> Result<()> {
        for sign in [1.0, -1.0] {
            let mut t = start;
            let mut small = 0;
            while t <= T_CAP {
                let Some(v) = node(sign * t) else { break };
                if !v.is_finite_value() {
                    return Err(Error::NonFinite { stage });
                }
                *sum += v;
                let m = v.magnitude();
                *acc_abs += m;
                if t >= TAIL_START && m <= cfg.tail_cutoff * *acc_abs {
                    small += 1;
                    if small >= 2 {
                        break;
                    }
                } else {
                    small = 0;
                }
                t += step;
            }
        }
        Ok(())
    };
    walk(FIRST_STEP, FIRST_STEP, &mut sum, &mut acc_abs)?;
    let mut h = FIRST_STEP;
    let mut estimate = sum * h;
    let mut err = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        walk(h, 2.0 * h, &mut sum, &mut acc_abs)?;
        let next = sum * h;
        err = (next - estimate).magnitude();
        estimate = next;
        let tol = cfg.tolerance(estimate.magnitude());
        let rounding = 16.0 * f64::EPSILON * acc_abs * h;
        if level >= 2 && (err <= tol || err <= rounding) {
            return Ok(Estimate {
                value: estimate,
                error: err,
            });
        }
    }
    Err(Error::NoConvergence {
        stage,
        estimate: estimate.magnitude(),
        error: err,
        tolerance: cfg.tolerance(estimate.magnitude()),
    })
}
