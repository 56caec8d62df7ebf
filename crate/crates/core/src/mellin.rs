//! Mellin transforms: images with their strips, the forward transform, the
//! fractional-Laplacian and Riesz multipliers, and inversion along a
//! vertical contour.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::fraclap::RadialFunction;
use crate::func::{complex_fn, ComplexFn, RealFn};
use crate::quadrature::{
    contour::contour_integral_detailed, exp_sinh, integrate, ContourSpec, QuadConfig,
};
use crate::specfun::{cos_pi_complex, gamma_ratio, sin_pi_complex, Complex};

/// Relative size of the imaginary part tolerated in a real-valued inversion.
pub const IMAGINARY_TOLERANCE: f64 = 1e-8;

/// `s ↦ M f(s)` together with its strip of convergence.
#[derive(Clone)]
pub struct MellinImage {
    eval: ComplexFn,
    lo: f64,
    hi: f64,
    continued: bool,
    continuation_floor: f64,
}

impl fmt::Debug for MellinImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MellinImage")
            .field("strip", &(self.lo, self.hi))
            .field("continued", &self.continued)
            .field("continuation_floor", &self.continuation_floor)
            .finish()
    }
}

impl MellinImage {
    /// Image valid on the open strip `lo < Re s < hi`.
    pub fn new(eval: ComplexFn, lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::StripConflict {
                reason: format!("empty strip ({lo}, {hi})"),
            });
        }
        Ok(MellinImage {
            eval,
            lo,
            hi,
            continued: false,
            continuation_floor: lo,
        })
    }

    /// Marks the evaluator as a closed form valid to the left of the strip.
    ///
    /// Left of the strip the continuation may only have poles at
    /// `0, -2, -4, …` (which the Laplacian multiplier cancels) for
    /// `Re s > floor`.
    pub fn continued(mut self, floor: f64) -> Self {
        self.continued = true;
        self.continuation_floor = floor.min(self.lo);
        self
    }

    /// Numerical image of a profile that is finite at the origin and has the given tail.
    pub fn numeric(profile: RealFn, hi: f64, cfg: QuadConfig) -> Result<Self> {
        let eval = complex_fn(move |s| forward_profile(&profile, s, &cfg));
        MellinImage::new(eval, 0.0, hi)
    }

    pub fn eval(&self, s: Complex) -> Result<Complex> {
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::NonFinite {
                stage: "Mellin image",
            });
        }
        (self.eval)(s)
    }

    pub fn strip(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn is_continued(&self) -> bool {
        self.continued
    }

    pub fn continuation_floor(&self) -> f64 {
        self.continuation_floor
    }

    /// Whether the evaluator may be used at `Re s = re`.
    pub fn admits(&self, re: f64) -> bool {
        let lo = if self.continued {
            self.continuation_floor
        } else {
            self.lo
        };
        re > lo && re < self.hi
    }
}

/// Fractional order `α ∈ (0, 2)` in dimension `n`, with `m = ⌈α⌉`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    pub alpha: f64,
    pub n: u32,
    pub m: u32,
}

impl FracOrder {
    pub fn new(alpha: f64, n: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::out_of_range("alpha", alpha, "(0, 2)"));
        }
        if n == 0 {
            return Err(Error::out_of_range("n", 0.0, "[1, inf)"));
        }
        Ok(FracOrder {
            alpha,
            n,
            m: alpha.ceil() as u32,
        })
    }
}

/// `∫₀^∞ f(r) r^{s-1} dr` for a radial function.
pub fn forward(f: &RadialFunction, s: Complex, cfg: &QuadConfig) -> Result<Complex> {
    let lo = f.mellin.as_ref().map_or(0.0, |m| m.strip().0);
    let hi = f.decay.mellin_upper();
    if !(s.re > lo && s.re < hi) {
        return Err(Error::OutsideStrip { re: s.re, lo, hi });
    }
    forward_profile(&f.profile, s, cfg)
}

fn forward_profile(profile: &RealFn, s: Complex, cfg: &QuadConfig) -> Result<Complex> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::NonFinite {
            stage: "mellin forward",
        });
    }
    let sm1 = s - 1.0;
    // r^{s-1} = exp((s-1) ln r), written out so the map keeps full precision near r = 0
    exp_sinh(|r: f64| (sm1 * r.ln()).exp() * profile(r), 0.0, cfg).map(|e| e.value)
}

/// Laplacian Mellin multiplier:
/// `m(s) = -2^α Γ(s/2) Γ((n-s+α)/2) / (Γ((n-s)/2) Γ((s-α)/2))`,
/// so that `M(Lf)(s) = m(s) M f(s-α)`.
pub fn laplacian_multiplier(s: Complex, ord: FracOrder) -> Result<Complex> {
    let a = ord.alpha;
    let n = ord.n as f64;
    let ratio = gamma_ratio(
        &[s / 2.0, (n - s + a) / 2.0],
        &[(n - s) / 2.0, (s - a) / 2.0],
    )?;
    Ok(-(2f64.powf(a)) * ratio)
}

/// One-dimensional Riesz multiplier
/// `-Γ(s) cos(πs/2) / (Γ(s-α) cos(π(s-α)/2))`.
pub fn riesz_multiplier(s: Complex, alpha: f64) -> Result<Complex> {
    let den = cos_pi_complex((s - alpha) / 2.0);
    if den.norm() <= 4.0 * f64::EPSILON {
        return Err(Error::CosineZero { re: s.re, im: s.im });
    }
    let num = cos_pi_complex(s / 2.0);
    Ok(-gamma_ratio(&[s], &[s - alpha])? * num / den)
}

/// Trigonometric factor `-sin(π(s-α)/2) / sin(πs/2)` linking the Mellin
/// images of the Riesz and one-sided derivatives.
pub fn caputo_rl_bridge_factor(s: Complex, alpha: f64) -> Result<Complex> {
    let den = sin_pi_complex(s / 2.0);
    if den.norm() <= 4.0 * f64::EPSILON {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    Ok(-sin_pi_complex((s - alpha) / 2.0) / den)
}

/// Mellin factor of the Caputo derivative, `Γ(1-s+α)/Γ(1-s)`: for a
/// function whose first `m` derivatives vanish at the origin,
/// `M(𝔻^α f)(s) = Γ(1-s+α)/Γ(1-s) · M f(s-α)`.
pub fn caputo_mellin_factor(s: Complex, alpha: f64) -> Result<Complex> {
    gamma_ratio(&[1.0 - s + alpha], &[1.0 - s])
}

/// Mellin convolution `∫₀^∞ f(ξ) g(x/ξ) dξ/ξ`, whose image is `M f · M g`.
pub fn mellin_convolution(
    f: impl Fn(f64) -> f64 + Sync,
    g: impl Fn(f64) -> f64 + Sync,
    x: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::out_of_range("x", x, "(0, inf)"));
    }
    integrate(
        |u: f64| {
            let xi = u.exp();
            f(xi) * g(x / xi)
        },
        f64::NEG_INFINITY,
        f64::INFINITY,
        cfg,
    )
    .map(|e| e.value)
}

/// Abscissa for inverting `m(s) M f(s-α)`: the midpoint of the widest piece
/// of `(0, n)` intersected with the shifted strip, or with the continued
/// region when the strip misses, once removable points `s = α - 2k` are set
/// aside.
pub fn choose_abscissa(image: &MellinImage, ord: FracOrder) -> Result<f64> {
    let a = ord.alpha;
    let n = ord.n as f64;
    let (lo, hi) = image.strip();
    let (mut l, h) = ((lo + a).max(0.0), (hi + a).min(n));
    if l >= h {
        if !image.is_continued() {
            return Err(Error::StripConflict {
                reason: format!(
                    "shifted strip ({}, {}) misses (0, {n}) and the image has no continuation",
                    lo + a,
                    hi + a
                ),
            });
        }
        l = (image.continuation_floor() + a).max(0.0);
        if l >= h {
            return Err(Error::StripConflict {
                reason: format!(
                    "continued image admits no line inside (0, {n}) after the shift by {a}"
                ),
            });
        }
    }
    let mut cuts = vec![l];
    let mut k = 0.0;
    while a - 2.0 * k > l {
        if a - 2.0 * k < h {
            cuts.push(a - 2.0 * k);
        }
        k += 1.0;
    }
    cuts.push(h);
    cuts.sort_by(f64::total_cmp);
    let (best_l, best_h) = cuts
        .windows(2)
        .map(|w| (w[0], w[1]))
        .max_by(|x, y| (x.1 - x.0).total_cmp(&(y.1 - y.0)))
        .expect("at least one piece");
    Ok(0.5 * (best_l + best_h))
}

fn check_abscissa(image: &MellinImage, ord: FracOrder, c: f64) -> Result<()> {
    let n = ord.n as f64;
    if !(c > 0.0 && c < n) {
        return Err(Error::OutsideStrip {
            re: c,
            lo: 0.0,
            hi: n,
        });
    }
    if !image.admits(c - ord.alpha) {
        let (lo, hi) = image.strip();
        return Err(Error::OutsideStrip {
            re: c - ord.alpha,
            lo,
            hi,
        });
    }
    Ok(())
}

/// `(Lf)(r)` by inverting `m(s) M f(s-α)` on the line `Re s = c`.
///
/// At `r = 0` the value is the residue of `m(s) M f(s-α)` at `s = 0`,
/// obtained from a circular contour.
pub fn apply_multiplier_and_invert(
    f: &RadialFunction,
    ord: FracOrder,
    r: f64,
    spec: &ContourSpec,
) -> Result<f64> {
    let numeric;
    let image = match &f.mellin {
        Some(m) => m,
        None => {
            numeric = MellinImage::numeric(
                f.profile.clone(),
                f.decay.mellin_upper(),
                QuadConfig::default(),
            )?;
            &numeric
        }
    };
    let g = |s: Complex| -> Result<Complex> {
        Ok(laplacian_multiplier(s, ord)? * image.eval(s - ord.alpha)?)
    };
    invert_real(g, image, ord, r, spec)
}

/// Real inverse of an image `g` whose only singularity between the
/// origin and the contour may be a simple pole at `s = 0`.
pub(crate) fn invert_real(
    g: impl Fn(Complex) -> Result<Complex> + Sync,
    image: &MellinImage,
    ord: FracOrder,
    r: f64,
    spec: &ContourSpec,
) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::NonFinite {
            stage: "Mellin inversion",
        });
    }
    let r = r.abs();
    spec.validate()?;
    let c = match spec.abscissa {
        Some(c) => {
            check_abscissa(image, ord, c)?;
            c
        }
        None => choose_abscissa(image, ord)?,
    };
    if r == 0.0 {
        let floor = if image.is_continued() {
            image.continuation_floor()
        } else {
            image.strip().0
        };
        let nearest = floor + ord.alpha;
        if nearest >= 0.0 {
            return Err(Error::StripConflict {
                reason: format!("value at the origin needs the image analytic up to Re s = 0, but it ends at {nearest}"),
            });
        }
        let mut radius = 0.5 * c.min(1.0);
        if nearest.is_finite() {
            radius = radius.min(0.5 * nearest.abs());
        }
        return residue_on_circle(&g, radius, spec.target_tol);
    }
    let ln_r = r.ln();
    let err = std::sync::Mutex::new(None);
    let integrand = |s: Complex| match g(s) {
        Ok(v) => v * (-s * ln_r).exp(),
        Err(e) => {
            err.lock().expect("poisoned").get_or_insert(e);
            Complex::new(f64::NAN, f64::NAN)
        }
    };
    let spec = ContourSpec {
        abscissa: Some(c),
        ..*spec
    };
    let outcome = contour_integral_detailed(integrand, &spec);
    if let Some(e) = err.into_inner().expect("poisoned") {
        return Err(e);
    }
    let (value, magnitude) = outcome?;
    real_part(value, magnitude)
}

fn real_part(value: Complex, magnitude: f64) -> Result<f64> {
    if value.im.abs() > IMAGINARY_TOLERANCE * value.re.abs() && value.im.abs() > 1e-12 * magnitude {
        return Err(Error::ResidualImaginary {
            re: value.re,
            im: value.im,
        });
    }
    Ok(value.re)
}

/// `Res_{s=0} g` from the trapezoidal rule on `|s| = ρ`, doubling the node
/// count until successive values agree.
fn residue_on_circle(
    g: &(impl Fn(Complex) -> Result<Complex> + Sync),
    radius: f64,
    tol: f64,
) -> Result<f64> {
    let mut nodes = 32usize;
    let mut previous: Option<Complex> = None;
    while nodes <= 1 << 14 {
        let mut acc = Complex::new(0.0, 0.0);
        let mut mag = 0.0;
        for k in 0..nodes {
            let theta = 2.0 * PI * (k as f64 + 0.5) / nodes as f64;
            let z = Complex::from_polar(radius, theta);
            let v = g(z)? * z;
            acc += v;
            mag += v.norm();
        }
        acc /= nodes as f64;
        mag /= nodes as f64;
        if !(acc.re.is_finite() && acc.im.is_finite()) {
            return Err(Error::NonFinite {
                stage: "residue at the origin",
            });
        }
        if let Some(p) = previous {
            let diff = (acc - p).norm();
            if diff <= tol * acc.norm() || diff <= 64.0 * f64::EPSILON * mag {
                return real_part(acc, mag);
            }
        }
        previous = Some(acc);
        nodes *= 2;
    }
    let v = previous.unwrap_or_default();
    Err(Error::NoConvergence {
        stage: "residue at the origin",
        estimate: v.norm(),
        error: f64::NAN,
        tolerance: tol,
    })
}
