//! Cauchy principal values by subtraction of the simple pole.

use super::{integrate, Estimate, QuadConfig};
use crate::error::{Error, Result};

/// Tuning for [`principal_value`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PvOptions {
    /// Half-width `w` of the window `[pole - w, pole + w]` on which the pole
    /// is subtracted. Defaults to half the distance to the nearer limit,
    /// capped at 1/2.
    pub half_width: Option<f64>,
}

/// Principal value of `∫_a^b f` where `f` has a simple pole at `pole`.
///
/// Inside a symmetric window the integrand is paired as
/// `(f(p+y) - R/y) + (f(p-y) + R/y)`; the subtracted terms integrate to a
/// logarithm that vanishes on a symmetric window. The residue `R` is
/// estimated from samples and its stability checks that the pole is simple.
/// Either limit may be infinite.
pub fn principal_value(
    f: impl Fn(f64) -> f64 + Sync,
    pole: f64,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    principal_value_with(f, pole, a, b, PvOptions::default(), cfg)
}

/// [`principal_value`] with explicit options.
pub fn principal_value_with(
    f: impl Fn(f64) -> f64 + Sync,
    pole: f64,
    a: f64,
    b: f64,
    opts: PvOptions,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    if !pole.is_finite() || a.is_nan() || b.is_nan() {
        return Err(Error::NonFinite {
            stage: "principal_value",
        });
    }
    if !(a < pole && pole < b) {
        return Err(Error::out_of_range("pole", pole, "(a, b)"));
    }
    let room = (pole - a).min(b - pole);
    let w = match opts.half_width {
        Some(w) if w > 0.0 && w < room => w,
        Some(w) => {
            return Err(Error::out_of_range(
                "half_width",
                w,
                "(0, distance to nearer limit)",
            ))
        }
        None => (0.5 * room).min(0.5),
    };
    let residue = residue_estimate(&f, pole, w)?;
    let window = integrate(
        |y: f64| {
            let (hi, lo) = (pole + y, pole - y);
            // pair each sample with its representable distance from the pole
            let (dp, dm) = (hi - pole, pole - lo);
            if dp == 0.0 || dm == 0.0 {
                return 0.0;
            }
            (f(hi) - residue / dp) + (f(lo) + residue / dm)
        },
        0.0,
        w,
        cfg,
    )?;
    let left = integrate(&f, a, pole - w, cfg)?;
    let right = integrate(&f, pole + w, b, cfg)?;
    Ok(window.combine(left).combine(right))
}

/// Residue estimate with a simple-pole check: the one-sided estimates
/// `h f(p+h)` and `-h f(p-h)` must approach each other linearly in `h`.
fn residue_estimate(f: &impl Fn(f64) -> f64, p: f64, w: f64) -> Result<f64> {
    let one_sided = |h: f64| (h * f(p + h), -h * f(p - h));
    let h1 = w / 8.0;
    let h2 = w / 64.0;
    let (a1, b1) = one_sided(h1);
    let (a2, b2) = one_sided(h2);
    if ![a1, b1, a2, b2].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite {
            stage: "principal_value",
        });
    }
    let spread1 = (a1 - b1).abs();
    let spread2 = (a2 - b2).abs();
    let scale = a2.abs().max(b2.abs()).max(f64::MIN_POSITIVE);
    if spread2 > 0.5 * spread1 && spread2 > 1e-9 * scale {
        return Err(Error::NotSimplePole { pole: p });
    }
    let r1 = 0.5 * (a1 + b1);
    let r2 = 0.5 * (a2 + b2);
    // symmetric average is even in h: one Richardson step
    Ok(r2 + (r2 - r1) / 63.0)
}
