//! Symmetric stable densities and the space-fractional diffusion equation
//! `∂_t P = L P`, `P(x; 0) = δ(x)`.
//!
//! The density is `P(x; t) = (1/π) ∫₀^∞ cos(κx) e^{-κ^α t} dκ`, the inverse
//! transform of `e^{-|κ|^α t}`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fraclap::{evaluate, RadialFunction, RouteId};
use crate::func::{complex_fn, real_fn};
use crate::mellin::{FracOrder, MellinImage};
use crate::quadrature::{cosine_transform, integrate, sine_transform, ContourSpec, QuadConfig};
use crate::specfun::{
    gamma, gamma_ratio, gamma_real, ln_gamma_real, sin_pi, sin_pi_complex, Complex, Decay,
};

/// Scaled distance `|x| t^{-1/α}` from which the large-`|x|` series is tried.
const SERIES_FROM: f64 = 4.0;
const SERIES_TERMS: usize = 400;

/// Symmetric α-stable density at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableDensity {
    pub alpha: f64,
    pub t: f64,
}

impl StableDensity {
    pub fn new(alpha: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::out_of_range("alpha", alpha, "(0, 2]"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::out_of_range("t", t, "(0, inf)"));
        }
        Ok(StableDensity { alpha, t })
    }

    /// Length scale `t^{1/α}`.
    pub fn scale(&self) -> f64 {
        self.t.powf(1.0 / self.alpha)
    }

    /// `C_α = Γ(1+α) sin(πα/2) / π`, the coefficient of `t |x|^{-1-α}` in the tail.
    pub fn tail_constant(&self) -> f64 {
        gamma_real(1.0 + self.alpha) * sin_pi(0.5 * self.alpha) / PI
    }

    /// Mellin image of `r ↦ P(r; t)`:
    /// `t^{(s-1)/α} Γ((1-s)/α) / (2α Γ(1-s) sin(πs/2))`, strip `(0, 1+α)`
    /// (unbounded for α = 2), continued to the left with poles at `0, -2, -4, …`.
    pub fn mellin_image(&self) -> MellinImage {
        let StableDensity { alpha, t } = *self;
        let eval = complex_fn(move |s: Complex| {
            let scale = ((s - 1.0) * (t.ln() / alpha)).exp();
            if s == Complex::new(1.0, 0.0) {
                // Γ(ε/α)/Γ(ε) → α
                return Ok(scale * 0.5);
            }
            let den = sin_pi_complex(s / 2.0);
            if den.norm() == 0.0 {
                return Err(Error::Pole { re: s.re, im: s.im });
            }
            let ratio = gamma_ratio(&[(1.0 - s) / alpha], &[1.0 - s])?;
            Ok(scale * ratio / (den * (2.0 * alpha)))
        });
        let hi = if alpha < 2.0 {
            1.0 + alpha
        } else {
            f64::INFINITY
        };
        MellinImage::new(eval, 0.0, hi)
            .expect("valid strip")
            .continued(f64::NEG_INFINITY)
    }

    /// `x ↦ P(x; t)` as a radial function on the line, with its second
    /// derivative, Fourier image and Mellin image attached. Quadrature
    /// failures inside the profile surface as NaN.
    pub fn radial(&self, cfg: QuadConfig) -> RadialFunction {
        let d = *self;
        let decay = if d.alpha < 2.0 {
            Decay::Power(1.0 + d.alpha)
        } else {
            Decay::Gaussian(0.25 / d.t)
        };
        RadialFunction::new(
            real_fn(move |r| stable_pdf(&d, r, &cfg).unwrap_or(f64::NAN)),
            1,
            decay,
        )
        .with_d2(real_fn(move |r| {
            pdf_derivative(&d, 2, r, &cfg).unwrap_or(f64::NAN)
        }))
        .with_fourier(real_fn(move |k: f64| (-k.abs().powf(d.alpha) * d.t).exp()))
        .with_mellin(d.mellin_image())
    }
}

/// `∂_x^k P(x; t)` for `k ≤ 2`.
fn pdf_derivative(d: &StableDensity, k: u32, x: f64, cfg: &QuadConfig) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite {
            stage: "stable_pdf",
        });
    }
    let StableDensity { alpha, t } = *d;
    let sign = if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    let ax = x.abs();
    if alpha == 1.0 {
        let q = ax * ax + t * t;
        let v = match k {
            0 => t / q,
            1 => -2.0 * ax * t / (q * q),
            _ => (6.0 * ax * ax * t - 2.0 * t.powi(3)) / (q * q * q),
        };
        return Ok(sign * v / PI);
    }
    if alpha == 2.0 {
        let p = (-ax * ax / (4.0 * t)).exp() / (2.0 * (PI * t).sqrt());
        let v = match k {
            0 => p,
            1 => -ax / (2.0 * t) * p,
            _ => (ax * ax / (4.0 * t * t) - 0.5 / t) * p,
        };
        return Ok(sign * v);
    }
    if ax >= SERIES_FROM * d.scale() {
        if let Some(v) = tail_series(d, k, ax) {
            return Ok(sign * v);
        }
    }
    let damp = move |kappa: f64| (-kappa.powf(alpha) * t).exp();
    let v = match k {
        0 if ax == 0.0 => gamma_real(1.0 + 1.0 / alpha) * t.powf(-1.0 / alpha) / PI,
        0 => cosine_transform(damp, ax, cfg)? / (2.0 * PI),
        1 => -sine_transform(|kappa| kappa * damp(kappa), ax, cfg)? / (2.0 * PI),
        _ => -cosine_transform(|kappa| kappa * kappa * damp(kappa), ax, cfg)? / (2.0 * PI),
    };
    Ok(sign * v)
}

/// `∂_x^k` of `(1/π) Σ_{j≥1} (-1)^{j+1} Γ(αj+1) sin(παj/2) t^j / (j! x^{αj+1})`,
/// or `None` when the terms stop shrinking before reaching double precision.
fn tail_series(d: &StableDensity, k: u32, x: f64) -> Option<f64> {
    let StableDensity { alpha, t } = *d;
    let (ln_x, ln_t) = (x.ln(), t.ln());
    let mut sum = 0.0f64;
    let mut last = f64::INFINITY;
    let mut quiet = 0;
    for j in 1..=SERIES_TERMS {
        let jf = j as f64;
        let p = alpha * jf + 1.0;
        // d^k/dx^k x^{-p} = (-1)^k p (p+1)…(p+k-1) x^{-p-k}
        let falling: f64 = (0..k).map(|i| -(p + i as f64)).product();
        let ln_mag = ln_gamma_real(p) - ln_gamma_real(jf + 1.0) + jf * ln_t - (p + k as f64) * ln_x;
        let mag = ln_mag.exp() * falling.abs();
        if mag > last && mag > 1e-17 * sum.abs() {
            return None;
        }
        last = mag;
        let s = sin_pi(0.5 * alpha * jf);
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 } * falling.signum();
        let term = sign * s * mag / PI;
        sum += term;
        if mag <= 1e-17 * sum.abs() {
            quiet += 1;
            if quiet >= 2 {
                return Some(sum);
            }
        } else {
            quiet = 0;
        }
    }
    None
}

/// `P(x; t)`: closed forms at α = 1 and α = 2, the convergent or asymptotic
/// power series far out, and the cosine integral otherwise.
pub fn stable_pdf(d: &StableDensity, x: f64, cfg: &QuadConfig) -> Result<f64> {
    pdf_derivative(d, 0, x, cfg)
}

/// `∂_x P(x; t)`.
pub fn stable_pdf_derivative(d: &StableDensity, x: f64, cfg: &QuadConfig) -> Result<f64> {
    pdf_derivative(d, 1, x, cfg)
}

/// `∂_x² P(x; t)`.
pub fn stable_pdf_second_derivative(d: &StableDensity, x: f64, cfg: &QuadConfig) -> Result<f64> {
    pdf_derivative(d, 2, x, cfg)
}

/// `∂_t P` from self-similarity:
/// `-(1/α) t^{-1-1/α} [𝒫(ξ) + ξ 𝒫'(ξ)]`, `ξ = x t^{-1/α}`, which equals
/// `-(P + x ∂_x P) / (α t)`.
pub fn stable_pdf_time_derivative(d: &StableDensity, x: f64, cfg: &QuadConfig) -> Result<f64> {
    let p = stable_pdf(d, x, cfg)?;
    let px = if x == 0.0 {
        0.0
    } else {
        stable_pdf_derivative(d, x, cfg)?
    };
    Ok(-(p + x * px) / (d.alpha * d.t))
}

/// `∫ P dx` over the line: quadrature on `|x| ≤ X` plus the tail series
/// integrated term by term beyond `X`, with `X` doubled until that series
/// converges. For α = 2 the Gaussian is integrated directly.
pub fn stable_normalization(d: &StableDensity, cfg: &QuadConfig) -> Result<f64> {
    let pdf = |x: f64| stable_pdf(d, x, cfg);
    if d.alpha == 2.0 {
        let v = integrate(|x: f64| pdf(x).unwrap_or(f64::NAN), 0.0, f64::INFINITY, cfg)?.value;
        return Ok(2.0 * v);
    }
    let mut cut = SERIES_FROM * d.scale();
    let tail = loop {
        if let Some(v) = integrated_tail(d, cut) {
            break v;
        }
        cut *= 2.0;
        if cut > 1e4 * d.scale() {
            return Err(Error::NoConvergence {
                stage: "stable tail series",
                estimate: f64::NAN,
                error: f64::NAN,
                tolerance: 1e-17,
            });
        }
    };
    let slot = crate::func::ErrorSlot::new();
    let body = integrate(|x: f64| slot.catch(pdf(x)), 0.0, cut, cfg);
    let body = slot.finish(body)?.value;
    Ok(2.0 * (body + tail))
}

/// `∫_X^∞` of the large-`|x|` series.
fn integrated_tail(d: &StableDensity, cut: f64) -> Option<f64> {
    let StableDensity { alpha, t } = *d;
    let mut sum = 0.0f64;
    let mut last = f64::INFINITY;
    let mut quiet = 0;
    for j in 1..=SERIES_TERMS {
        let jf = j as f64;
        let p = alpha * jf;
        let ln_mag =
            ln_gamma_real(p + 1.0) - ln_gamma_real(jf + 1.0) + jf * t.ln() - p * cut.ln() - p.ln();
        let mag = ln_mag.exp();
        if mag > last && mag > 1e-17 * sum.abs() {
            return None;
        }
        last = mag;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * sin_pi(0.5 * p) * mag / PI;
        if mag <= 1e-17 * sum.abs() {
            quiet += 1;
            if quiet >= 2 {
                return Some(sum);
            }
        } else {
            quiet = 0;
        }
    }
    None
}

/// One row of a diffusion-equation residual table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub x: f64,
    pub dt: f64,
    pub lp: f64,
    pub residual: f64,
}

/// `∂_t P` and `L P` at each point, the latter by the chosen route; points
/// are evaluated in parallel and returned in input order.
pub fn sfde_rows(
    alpha: f64,
    t: f64,
    points: &[f64],
    route: RouteId,
    cfg: &QuadConfig,
    spec: &ContourSpec,
) -> Result<Vec<ResidualRow>> {
    let d = StableDensity::new(alpha, t)?;
    if alpha >= 2.0 {
        return Err(Error::out_of_range(
            "alpha",
            alpha,
            "(0, 2) for the fractional Laplacian",
        ));
    }
    let ord = FracOrder::new(alpha, 1)?;
    let f = d.radial(*cfg);
    points
        .par_iter()
        .map(|&x| {
            let dt = stable_pdf_time_derivative(&d, x, cfg)?;
            let lp = evaluate(route, &f, ord, x, cfg, spec)?;
            Ok(ResidualRow {
                x,
                dt,
                lp,
                residual: (dt - lp).abs(),
            })
        })
        .collect()
}

/// `max |∂_t P - L P|` over the points.
pub fn sfde_residual(
    alpha: f64,
    t: f64,
    points: &[f64],
    route: RouteId,
    cfg: &QuadConfig,
    spec: &ContourSpec,
) -> Result<f64> {
    let rows = sfde_rows(alpha, t, points, route, cfg, spec)?;
    Ok(rows.iter().map(|r| r.residual).fold(0.0, f64::max))
}

/// Both sides of `∂_t M(F′P)(1-s) = -(2π)^α M(F′P)(1-s+α)` at one `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkthroughSample {
    pub s_re: f64,
    pub s_im: f64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub discrepancy: f64,
}

/// Evolution law of the Mellin image of `F′P(κ) = e^{-(2πκ)^α t}` sampled
/// on `Re s = 1/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkthroughRecord {
    pub alpha: f64,
    pub t: f64,
    pub samples: Vec<WalkthroughSample>,
    pub max_discrepancy: f64,
}

/// Heights `Im s` sampled by [`mellin_sfde_walkthrough`].
pub const WALKTHROUGH_HEIGHTS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];

/// `M(F′P)(z) = (2π)^{-z} t^{-z/α} Γ(z/α) / α`.
fn mellin_fprime(alpha: f64, t: f64, z: Complex) -> Result<Complex> {
    let ln = -z * (2.0 * PI).ln() - z * (t.ln() / alpha);
    Ok(ln.exp() * gamma(z / alpha)? / alpha)
}

/// Checks the first-order evolution of the Mellin image of `F′P`.
///
/// The left side differentiates `∫ κ^{z-1} e^{-(2πκ)^α t} dκ` in `t` under
/// the integral and integrates numerically in `ln κ`; the right side is the
/// Gamma closed form at the shifted argument.
pub fn mellin_sfde_walkthrough(alpha: f64, t: f64, cfg: &QuadConfig) -> Result<WalkthroughRecord> {
    StableDensity::new(alpha, t)?;
    let rate = (2.0 * PI).powf(alpha);
    let mut samples = Vec::with_capacity(WALKTHROUGH_HEIGHTS.len());
    for &im in &WALKTHROUGH_HEIGHTS {
        let s = Complex::new(0.5, im);
        let z = 1.0 - s;
        // κ = e^u: κ^z · (-(2πκ)^α) e^{-(2πκ)^α t}, combined in one exponent
        let lhs = integrate(
            |u: f64| {
                -((z + alpha) * u + alpha * (2.0 * PI).ln() - rate * t * (alpha * u).exp()).exp()
            },
            f64::NEG_INFINITY,
            f64::INFINITY,
            cfg,
        )?
        .value;
        let rhs = -rate * mellin_fprime(alpha, t, z + alpha)?;
        let discrepancy = (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
        samples.push(WalkthroughSample {
            s_re: s.re,
            s_im: s.im,
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            discrepancy,
        });
    }
    let max_discrepancy = samples.iter().map(|s| s.discrepancy).fold(0.0, f64::max);
    Ok(WalkthroughRecord {
        alpha,
        t,
        samples,
        max_discrepancy,
    })
}
