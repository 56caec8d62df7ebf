//! Cosine and sine transforms on the half-line: integration between
//! consecutive zeros of the trigonometric factor, with Wynn's epsilon
//! algorithm accelerating the alternating partial sums.

use std::f64::consts::PI;

use super::{exp_sinh, gauss_kronrod, tanh_sinh, QuadConfig};
use crate::error::{Error, Result};

const MAX_PANELS: usize = 600;

/// `2 ∫₀^∞ f(r) cos(κr) dr`, the Fourier transform of the even extension of `f`.
pub fn cosine_transform(
    f: impl Fn(f64) -> f64 + Sync,
    kappa: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    transform(f, kappa, cfg, Kind::Cosine).map(|v| 2.0 * v)
}

/// `2 ∫₀^∞ f(r) sin(κr) dr`, the Fourier transform of the odd extension of `f` divided by `-i`.
pub fn sine_transform(f: impl Fn(f64) -> f64 + Sync, kappa: f64, cfg: &QuadConfig) -> Result<f64> {
    transform(f, kappa, cfg, Kind::Sine).map(|v| 2.0 * v)
}

#[derive(Clone, Copy)]
enum Kind {
    Cosine,
    Sine,
}

fn transform(
    f: impl Fn(f64) -> f64 + Sync,
    kappa: f64,
    cfg: &QuadConfig,
    kind: Kind,
) -> Result<f64> {
    if !kappa.is_finite() {
        return Err(Error::NonFinite {
            stage: "cosine_transform",
        });
    }
    if kappa < 0.0 {
        return Err(Error::out_of_range("kappa", kappa, "[0, inf)"));
    }
    if kappa == 0.0 {
        return match kind {
            Kind::Cosine => exp_sinh(&f, 0.0, cfg).map(|e| e.value),
            Kind::Sine => Ok(0.0),
        };
    }
    let g = |r: f64| {
        let phase = kappa * r;
        f(r) * match kind {
            Kind::Cosine => phase.cos(),
            Kind::Sine => phase.sin(),
        }
    };
    let zero = |k: usize| match kind {
        Kind::Cosine => (k as f64 + 0.5) * PI / kappa,
        Kind::Sine => (k as f64 + 1.0) * PI / kappa,
    };
    let panel_cfg = QuadConfig {
        rel_tol: cfg.rel_tol * 0.1,
        abs_tol: cfg.abs_tol * 0.01,
        ..*cfg
    };
    let first = first_panel(&g, zero(0), &panel_cfg)?;
    let mut sums = vec![first];
    let mut total = first;
    let mut settled = 0;
    let mut last_estimate = f64::NAN;
    for k in 0..MAX_PANELS {
        let term = gauss_kronrod(&g, zero(k), zero(k + 1), &panel_cfg)?.value;
        total += term;
        sums.push(total);
        let tol = cfg.tolerance(total);
        if term.abs() <= 1e-3 * tol || term.abs() <= cfg.tail_cutoff * total.abs() {
            return Ok(total);
        }
        if sums.len() >= 6 {
            let window = &sums[sums.len().saturating_sub(40)..];
            let (estimate, err) = wynn_epsilon(window);
            let tol = cfg.tolerance(estimate);
            if err <= tol && (estimate - last_estimate).abs() <= tol {
                settled += 1;
                if settled >= 2 {
                    return Ok(estimate);
                }
            } else {
                settled = 0;
            }
            last_estimate = estimate;
        }
    }
    Err(Error::NoConvergence {
        stage: "cosine_transform",
        estimate: last_estimate,
        error: f64::NAN,
        tolerance: cfg.tolerance(last_estimate),
    })
}

/// `∫₀^z g` before the first sign change. A long panel (small `κ`) is cut
/// into the ladder `[0, 1], [1, 2], [2, 4], …` so that the integrand's own
/// scale is resolved, and the ladder stops once its pieces are negligible.
fn first_panel(g: &(impl Fn(f64) -> f64 + Sync), end: f64, cfg: &QuadConfig) -> Result<f64> {
    if end <= 2.0 {
        return tanh_sinh(g, 0.0, end, cfg).map(|e| e.value);
    }
    let mut total = tanh_sinh(g, 0.0, 1.0, cfg)?.value;
    let mut a = 1.0;
    let mut quiet = 0;
    while a < end {
        let b = (2.0 * a).min(end);
        let piece = tanh_sinh(g, a, b, cfg)?.value;
        total += piece;
        if piece.abs() <= cfg.tail_cutoff * total.abs() {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        a = b;
    }
    Ok(total)
}

/// Wynn's epsilon extrapolation of a sequence of partial sums.
///
/// Returns the limit estimate from the highest even column reached and the
/// difference to its predecessor in that column as an error estimate.
pub fn wynn_epsilon(s: &[f64]) -> (f64, f64) {
    let n = s.len();
    match n {
        0 => return (f64::NAN, f64::INFINITY),
        1 => return (s[0], f64::INFINITY),
        2 => return (s[1], (s[1] - s[0]).abs()),
        _ => {}
    }
    let mut best = s[n - 1];
    let mut best_err = (s[n - 1] - s[n - 2]).abs();
    let mut prev = vec![0.0; n + 1];
    let mut cur = s.to_vec();
    for k in 1..n {
        let m = n - k;
        let mut next = Vec::with_capacity(m);
        for j in 0..m {
            let d = cur[j + 1] - cur[j];
            if d == 0.0 || d.abs() <= f64::EPSILON * cur[j + 1].abs() {
                if k % 2 == 1 {
                    // the even column just read has stalled at its limit
                    let err = d.abs();
                    if err < best_err {
                        best = cur[j + 1];
                        best_err = err;
                    }
                }
                return (best, best_err);
            }
            next.push(prev[j + 1] + 1.0 / d);
        }
        if k % 2 == 0 && m >= 2 {
            let err = (next[m - 1] - next[m - 2]).abs();
            if err < best_err && next[m - 1].is_finite() {
                best = next[m - 1];
                best_err = err;
            }
        }
        prev = cur;
        cur = next;
    }
    (best, best_err)
}
