//! The fractional Laplacian `L = -(-Δ)^{α/2}` of radial functions, evaluated
//! by independent routes (heat semigroup, Fourier multiplier, singular
//! integral, Mellin contour, Riesz potential of the second derivative)
//! and compared pointwise.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{real_fn, RealFn};
use crate::mellin::{apply_multiplier_and_invert, FracOrder, MellinImage};
use crate::quadrature::{
    cosine_transform, exp_sinh, geometric_breaks, integrate, integrate_with_breaks, power_weighted,
    sine_transform, ContourSpec, QuadConfig,
};
use crate::specfun::{gamma_real, ln_gamma_real, recip_gamma_real, Decay};

/// Radial profile `r ↦ f(r)` on `ℝⁿ`; the value at `x` is `f(|x|)`.
#[derive(Clone)]
pub struct RadialFunction {
    pub profile: RealFn,
    pub n: u32,
    pub mellin: Option<MellinImage>,
    /// Radial Fourier image `κ ↦ F f(κ)` with `F f(κ) = ∫ f(|x|) e^{iκ·x} dx`.
    pub fourier_profile: Option<RealFn>,
    /// Second derivative of the profile.
    pub d2: Option<RealFn>,
    pub decay: Decay,
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialFunction")
            .field("n", &self.n)
            .field("mellin", &self.mellin)
            .field("fourier_profile", &self.fourier_profile.is_some())
            .field("d2", &self.d2.is_some())
            .field("decay", &self.decay)
            .finish()
    }
}

impl RadialFunction {
    pub fn new(profile: RealFn, n: u32, decay: Decay) -> Self {
        RadialFunction {
            profile,
            n,
            mellin: None,
            fourier_profile: None,
            d2: None,
            decay,
        }
    }

    pub fn with_mellin(mut self, image: MellinImage) -> Self {
        self.mellin = Some(image);
        self
    }

    pub fn with_fourier(mut self, image: RealFn) -> Self {
        self.fourier_profile = Some(image);
        self
    }

    pub fn with_d2(mut self, d2: RealFn) -> Self {
        self.d2 = Some(d2);
        self
    }

    /// Value of the even extension at `x`.
    pub fn at(&self, x: f64) -> f64 {
        (self.profile)(x.abs())
    }

    /// Second derivative of the profile at `r`, by central differences when
    /// no closed form is attached.
    pub fn second_derivative(&self, r: f64) -> f64 {
        match &self.d2 {
            Some(d2) => d2(r),
            None => {
                let h = 1e-3 * r.abs().max(1.0);
                (self.at(r + h) - 2.0 * self.at(r) + self.at(r - h)) / (h * h)
            }
        }
    }

    /// Checks the decay tag against samples at `r = 10, 20` (factor-10 band).
    pub fn check_decay(&self) -> Result<()> {
        if matches!(self.decay, Decay::None) {
            return Ok(());
        }
        let observed = (self.profile)(20.0) / (self.profile)(10.0);
        let model = self.decay.model(20.0) / self.decay.model(10.0);
        let ratio = observed / model;
        if !(0.1..=10.0).contains(&ratio) {
            return Err(Error::out_of_range("decay ratio", ratio, "[0.1, 10]"));
        }
        Ok(())
    }
}

/// Operator routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteId {
    #[serde(rename = "heat")]
    HeatSemigroup,
    #[serde(rename = "fourier")]
    FourierMultiplier,
    #[serde(rename = "singular")]
    SingularIntegral,
    #[serde(rename = "mellin")]
    MellinContour,
    #[serde(rename = "riesz-inverse")]
    RieszPotentialInverse,
}

impl RouteId {
    pub const ALL: [RouteId; 5] = [
        RouteId::HeatSemigroup,
        RouteId::FourierMultiplier,
        RouteId::SingularIntegral,
        RouteId::MellinContour,
        RouteId::RieszPotentialInverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RouteId::HeatSemigroup => "heat",
            RouteId::FourierMultiplier => "fourier",
            RouteId::SingularIntegral => "singular",
            RouteId::MellinContour => "mellin",
            RouteId::RieszPotentialInverse => "riesz-inverse",
        }
    }

    /// Whether the route can evaluate order `ord` in its dimension.
    pub fn applicable(self, ord: FracOrder) -> bool {
        match self {
            RouteId::HeatSemigroup | RouteId::SingularIntegral => ord.n == 1,
            RouteId::FourierMultiplier => ord.n == 1 || ord.n == 3,
            RouteId::MellinContour => true,
            RouteId::RieszPotentialInverse => ord.n == 1 && ord.alpha > 1.0,
        }
    }
}

impl fmt::Display for RouteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RouteId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        RouteId::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown route '{s}' (expected heat, fourier, singular, mellin or riesz-inverse)"))
    }
}

fn require_dim(
    f: &RadialFunction,
    ord: FracOrder,
    allowed: &[u32],
    what: &'static str,
) -> Result<()> {
    if f.n != ord.n {
        return Err(Error::out_of_range(
            "n",
            ord.n as f64,
            "the function's dimension",
        ));
    }
    if !allowed.contains(&ord.n) {
        return Err(Error::DimensionUnsupported { n: ord.n, what });
    }
    Ok(())
}

fn require_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite {
            stage: "evaluation point",
        })
    }
}

/// Heat-semigroup route,
/// `Lu(x) = (-1/Γ(-α/2)) ∫₀^∞ (e^{tΔ}u(x) - u(x)) t^{-1-α/2} dt` (n = 1).
///
/// Up to `t = 1` the integral runs in `ln t`. With `u''` attached, the
/// increment is written as `∫₀^t e^{τΔ}u'' dτ` and the order of
/// integration swapped, which avoids cancellation; `e^{τΔ}u''(x)` is taken
/// as `u''(x)` below `τ = 1e-14`. Without it, the increment is a Gaussian
/// average of the second difference, replaced by `t u''(x)` below
/// `t = 1e-8`. Beyond `t = 1` the heat convolution is integrated directly
/// and `u(x)` contributes in closed form.
pub fn heat_semigroup_route(
    f: &RadialFunction,
    ord: FracOrder,
    x: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    require_dim(f, ord, &[1], "the heat-semigroup route")?;
    require_finite(x)?;
    if !f.decay.integrable() {
        return Err(Error::NotIntegrable);
    }
    let a = ord.alpha;
    let h = a / 2.0;
    let ax = x.abs();
    let ux = f.at(x);
    const T0: f64 = 1e-8;
    const T0_SMOOTH: f64 = 1e-14;
    const Z: f64 = 9.0;
    // the second difference cancels to about eps |u(x)|
    let inner_abs = (cfg.abs_tol * 1e-3).max(f64::EPSILON * ux.abs());
    let inner_cfg = QuadConfig {
        rel_tol: (cfg.rel_tol * 1e-2).max(1e-14),
        abs_tol: inner_abs,
        ..*cfg
    };

    let gauss_average = |t: f64, g: &(dyn Fn(f64) -> f64 + Sync)| -> Result<f64> {
        let sigma = (2.0 * t).sqrt();
        let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
        integrate_with_breaks(
            |y: f64| norm * (-0.5 * (y / sigma) * (y / sigma)).exp() * g(y),
            0.0,
            Z * sigma,
            &[ax],
            &inner_cfg,
        )
        .map(|e| e.value)
    };
    let middle = match &f.d2 {
        // e^{tΔ}u - u = ∫₀^t e^{τΔ}u'' dτ; swapping the order of integration
        // leaves ∫₀^1 (e^{τΔ}u'')(x) (τ^{-h} - 1)/h dτ, free of cancellation
        Some(d2) => {
            let smoothed =
                |tau: f64| gauss_average(tau, &|y| d2((x + y).abs()) + d2((x - y).abs()));
            let near = d2(ax) * (T0_SMOOTH.powf(1.0 - h) / (1.0 - h) - T0_SMOOTH) / h;
            let rest = integrate_fallible(
                |v: f64| Ok(smoothed(v.exp())? * (-h * v).exp_m1() / h * v.exp()),
                T0_SMOOTH.ln(),
                0.0,
                cfg,
            )?;
            near + rest
        }
        // e^{tΔ}u(x) - u(x) = ∫₀^∞ K_t(y) [u(x+y) + u(x-y) - 2u(x)] dy
        None => {
            let local = f.second_derivative(ax) * T0.powf(1.0 - h) / (1.0 - h);
            let increment = |t: f64| gauss_average(t, &|y| f.at(x + y) + f.at(x - y) - 2.0 * ux);
            local
                + integrate_fallible(
                    |v: f64| Ok(increment(v.exp())? * (-h * v).exp()),
                    T0.ln(),
                    0.0,
                    cfg,
                )?
        }
    };

    // e^{tΔ}u(x) = ∫₀^∞ u(y) [K_t(x-y) + K_t(x+y)] dy for t ≥ 1
    let heat = |t: f64| -> Result<f64> {
        let norm = 1.0 / (4.0 * PI * t).sqrt();
        integrate_with_breaks(
            |y: f64| {
                let k =
                    (-(x - y) * (x - y) / (4.0 * t)).exp() + (-(x + y) * (x + y) / (4.0 * t)).exp();
                norm * k * (f.profile)(y)
            },
            0.0,
            f64::INFINITY,
            &[ax],
            &inner_cfg,
        )
        .map(|e| e.value)
    };
    let tail = exp_sinh_fallible(|v: f64| Ok(heat(v.exp())? * (-h * v).exp()), cfg)? - ux / h;

    let prefactor = -recip_gamma_real(-h);
    Ok(prefactor * (middle + tail))
}

fn integrate_fallible(
    g: impl Fn(f64) -> Result<f64> + Sync,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    let err = std::sync::Mutex::new(None);
    let out = integrate(
        |v: f64| match g(v) {
            Ok(y) => y,
            Err(e) => {
                err.lock().expect("poisoned").get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        cfg,
    );
    if let Some(e) = err.into_inner().expect("poisoned") {
        return Err(e);
    }
    out.map(|e| e.value)
}

fn exp_sinh_fallible(g: impl Fn(f64) -> Result<f64> + Sync, cfg: &QuadConfig) -> Result<f64> {
    let err = std::sync::Mutex::new(None);
    let out = exp_sinh(
        |v: f64| match g(v) {
            Ok(y) => y,
            Err(e) => {
                err.lock().expect("poisoned").get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        cfg,
    );
    if let Some(e) = err.into_inner().expect("poisoned") {
        return Err(e);
    }
    out.map(|e| e.value)
}

/// Radial Fourier image `F f(κ)`, from the attached closed form or by
/// quadrature (cosine transform for n = 1, sine kernel for n = 3).
pub fn fourier_image(f: &RadialFunction, kappa: f64, cfg: &QuadConfig) -> Result<f64> {
    if let Some(img) = &f.fourier_profile {
        return Ok(img(kappa));
    }
    match f.n {
        1 => cosine_transform(|r| (f.profile)(r), kappa, cfg),
        3 => {
            if kappa == 0.0 {
                let v = integrate(|r: f64| r * r * (f.profile)(r), 0.0, f64::INFINITY, cfg)?.value;
                Ok(4.0 * PI * v)
            } else {
                let v = sine_transform(|r| r * (f.profile)(r), kappa, cfg)?;
                Ok(2.0 * PI * v / kappa)
            }
        }
        n => Err(Error::DimensionUnsupported {
            n,
            what: "the radial Fourier image",
        }),
    }
}

/// Frequency beyond which a quadrature-computed image is at its noise
/// floor: the first power of two where two consecutive samples fall below a
/// hundredth of the tolerance at `κ = 0`, returned with that floor.
/// Closed-form images are never cut.
fn numeric_image_cutoff(f: &RadialFunction, cfg: &QuadConfig) -> Result<(f64, Option<f64>)> {
    if f.fourier_profile.is_some() {
        return Ok((f64::INFINITY, None));
    }
    let floor = 1e-2 * cfg.tolerance(fourier_image(f, 0.0, cfg)?);
    let mut k = 1.0;
    let mut quiet = 0;
    while k < 1e12 {
        if fourier_image(f, k, cfg)?.abs() <= floor {
            quiet += 1;
            if quiet == 2 {
                return Ok((0.5 * k, Some(floor)));
            }
        } else {
            quiet = 0;
        }
        k *= 2.0;
    }
    Ok((f64::INFINITY, Some(floor)))
}

/// Fourier-multiplier route: inverse radial transform of `-|κ|^α F f(κ)`
/// (n = 1 or 3). An image computed by quadrature is set to zero beyond
/// the frequency where it reaches its noise floor.
pub fn fourier_route(f: &RadialFunction, ord: FracOrder, x: f64, cfg: &QuadConfig) -> Result<f64> {
    require_dim(f, ord, &[1, 3], "the Fourier route")?;
    require_finite(x)?;
    let a = ord.alpha;
    let r = x.abs();
    let (cutoff, floor) = numeric_image_cutoff(f, cfg)?;
    // the outer transform cannot resolve below the image noise integrated up to the cutoff
    let outer = match floor {
        Some(fl) => QuadConfig {
            abs_tol: cfg.abs_tol.max(fl * (1.0 + cutoff).powf(1.0 + a)),
            ..*cfg
        },
        None => *cfg,
    };
    let cfg_outer = &outer;
    let err = std::sync::Mutex::new(None);
    let image = |k: f64| {
        if k > cutoff {
            return 0.0;
        }
        match fourier_image(f, k, cfg) {
            Ok(v) => v,
            Err(e) => {
                err.lock().expect("poisoned").get_or_insert(e);
                f64::NAN
            }
        }
    };
    let out = if ord.n == 1 {
        cosine_transform(|k| k.powf(a) * image(k), r, cfg_outer).map(|v| -v / (2.0 * PI))
    } else if r == 0.0 {
        integrate(
            |k: f64| k.powf(2.0 + a) * image(k),
            0.0,
            f64::INFINITY,
            cfg_outer,
        )
        .map(|e| -e.value / (2.0 * PI * PI))
    } else {
        sine_transform(|k| k.powf(1.0 + a) * image(k), r, cfg_outer)
            .map(|v| -v / (4.0 * PI * PI * r))
    };
    if let Some(e) = err.into_inner().expect("poisoned") {
        return Err(e);
    }
    out
}

/// Regularised singular-integral route (n = 1):
/// `(Γ(1+α)/π) sin(πα/2) ∫₀^∞ [u(x+z) - 2u(x) + u(x-z)] z^{-1-α} dz`.
///
/// On `(0, δ]` the second difference is replaced by
/// `u''(x) z² + u''''(x) z⁴ / 12`, with `u''''` from central differences of
/// `u''`; on `(δ, Z]` the integral runs in `ln z`; beyond `Z` the `-2u(x)`
/// term is integrated in closed form.
pub fn singular_integral_route(
    f: &RadialFunction,
    ord: FracOrder,
    x: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    require_dim(f, ord, &[1], "the singular-integral route")?;
    require_finite(x)?;
    let a = ord.alpha;
    let ax = x.abs();
    let ux = f.at(x);
    let delta = 1e-3 * ax.max(1.0);
    let big = 1f64.max(2.0 * delta);
    // second difference ≈ u''z² + u''''z⁴/12 on (0, δ]; u'''' by central differences of u''
    let step = 1e-2 * ax.max(1.0);
    let d4 = (f.second_derivative((ax + step).abs()) - 2.0 * f.second_derivative(ax)
        + f.second_derivative((ax - step).abs()))
        / (step * step);
    let local = f.second_derivative(ax) * delta.powf(2.0 - a) / (2.0 - a)
        + d4 * delta.powf(4.0 - a) / (12.0 * (4.0 - a));
    let kink: Vec<f64> = if ax > 0.0 { vec![ax.ln()] } else { Vec::new() };
    let near = integrate_with_breaks(
        |w: f64| {
            let z = w.exp();
            (f.at(x + z) - 2.0 * ux + f.at(x - z)) * (-a * w).exp()
        },
        delta.ln(),
        big.ln(),
        &kink,
        cfg,
    )?
    .value;
    let far = integrate_with_breaks(
        |z: f64| (f.at(x + z) + f.at(x - z)) * z.powf(-1.0 - a),
        big,
        f64::INFINITY,
        &[ax],
        cfg,
    )?
    .value
        - 2.0 * ux * big.powf(-a) / a;
    let c = riesz_derivative_constant(a);
    Ok(c * (local + near + far))
}

/// `Γ(1+α) sin(πα/2) / π`.
pub fn riesz_derivative_constant(alpha: f64) -> f64 {
    gamma_real(1.0 + alpha) * (PI * alpha / 2.0).sin() / PI
}

/// `γ_n(α) = Γ((n-α)/2) / (2^α π^{n/2} Γ(α/2))` for `0 < α < n`.
pub fn gamma_n(n: u32, alpha: f64) -> Result<f64> {
    let nf = n as f64;
    if !(alpha > 0.0 && alpha < nf) {
        return Err(Error::out_of_range("alpha", alpha, "(0, n)"));
    }
    let ln = ln_gamma_real((nf - alpha) / 2.0)
        - ln_gamma_real(alpha / 2.0)
        - alpha * 2f64.ln()
        - 0.5 * nf * PI.ln();
    Ok(ln.exp())
}

/// Riesz potential on the line,
/// `I^α u(x) = γ₁(α) ∫ u(x+z) |z|^{α-1} dz`, `0 < α < 1`.
///
/// With this normalisation `I^α` has Fourier symbol `|κ|^{-α}`, so
/// `L I^α u = -u`.
pub fn riesz_potential(f: &RadialFunction, alpha: f64, x: f64, cfg: &QuadConfig) -> Result<f64> {
    if f.n != 1 {
        return Err(Error::DimensionUnsupported {
            n: f.n,
            what: "the Riesz potential",
        });
    }
    require_finite(x)?;
    let gamma = gamma_n(1, alpha)?;
    if !f.decay.integrable() {
        return Err(Error::NotIntegrable);
    }
    riesz_potential_of(|y| f.at(y), alpha, x, gamma, cfg)
}

/// `γ ∫ u(y) |x-y|^{α-1} dy` for even `u`, folded onto `y > 0`.
///
/// Away from `y = |x|` the integrand is sampled at exact arguments of `u`,
/// however large `|x|` is; on the window `|y - |x|| < |x|/2` it is written
/// in the offset `w = |y - |x||` so the singular point sits at an exact
/// origin. There, and at `x = 0`, `u(x) w^{α-1}` is integrated in closed
/// form: for small `α` the kernel's mass reaches below the smallest doubles.
fn riesz_potential_of(
    u: impl Fn(f64) -> f64 + Sync,
    alpha: f64,
    x: f64,
    gamma: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    let p = alpha - 1.0;
    // u(y) k, with a vanishing u never multiplying an infinite kernel
    let weighted = |uy: f64, k: f64| if uy == 0.0 { 0.0 } else { uy * k };
    let singular = |d: f64, w: f64| power_weighted(d, w, p);
    let ax = x.abs();
    if ax == 0.0 {
        // u(0) y^p is integrated in closed form on [0, 1]
        let u0 = u(0.0);
        let near = integrate(|y: f64| singular(u(y) - u0, y), 0.0, 1.0, cfg)?.value;
        let far = integrate(|y: f64| weighted(u(y), y.powf(p)), 1.0, f64::INFINITY, cfg)?.value;
        return Ok(gamma * 2.0 * (near + u0 / alpha + far));
    }
    let folded = |y: f64| weighted(u(y), (ax - y).abs().powf(p) + (ax + y).powf(p));
    let h = 0.5 * ax;
    let left = integrate_with_breaks(folded, 0.0, h, &geometric_breaks(h), cfg)?.value;
    let right = integrate_with_breaks(folded, ax + h, f64::INFINITY, &[1.0], cfg)?.value;
    // u(x) w^p on the window is integrated in closed form
    let ux = u(ax);
    let window = integrate(
        |w: f64| {
            let (lo, hi) = (u(ax - w), u(ax + w));
            singular(lo + hi - 2.0 * ux, w)
                + weighted(lo, (2.0 * ax - w).powf(p))
                + weighted(hi, (2.0 * ax + w).powf(p))
        },
        0.0,
        h,
        cfg,
    )?
    .value;
    Ok(gamma * (left + window + 2.0 * ux * h.powf(alpha) / alpha + right))
}

/// `Lf = I^{2-α}[f'']` on the line, for `1 < α < 2`.
pub fn riesz_potential_inverse_route(
    f: &RadialFunction,
    ord: FracOrder,
    x: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    require_dim(f, ord, &[1], "the Riesz-potential route")?;
    require_finite(x)?;
    if ord.alpha <= 1.0 {
        return Err(Error::out_of_range(
            "alpha",
            ord.alpha,
            "(1, 2) for the Riesz-potential route",
        ));
    }
    let beta = 2.0 - ord.alpha;
    let gamma = gamma_n(1, beta)?;
    riesz_potential_of(|y| f.second_derivative(y.abs()), beta, x, gamma, cfg)
}

/// Mellin-contour route: delegates to [`apply_multiplier_and_invert`] at `r = |x|`.
pub fn mellin_route(f: &RadialFunction, ord: FracOrder, x: f64, spec: &ContourSpec) -> Result<f64> {
    if f.n != ord.n {
        return Err(Error::out_of_range(
            "n",
            ord.n as f64,
            "the function's dimension",
        ));
    }
    require_finite(x)?;
    apply_multiplier_and_invert(f, ord, x.abs(), spec)
}

/// Evaluates one route, tagging any failure with the route.
pub fn evaluate(
    route: RouteId,
    f: &RadialFunction,
    ord: FracOrder,
    x: f64,
    cfg: &QuadConfig,
    spec: &ContourSpec,
) -> Result<f64> {
    let out = match route {
        RouteId::HeatSemigroup => heat_semigroup_route(f, ord, x, cfg),
        RouteId::FourierMultiplier => fourier_route(f, ord, x, cfg),
        RouteId::SingularIntegral => singular_integral_route(f, ord, x, cfg),
        RouteId::MellinContour => mellin_route(f, ord, x, spec),
        RouteId::RieszPotentialInverse => riesz_potential_inverse_route(f, ord, x, cfg),
    };
    out.map_err(|e| match e {
        Error::Route { .. } => e,
        other => Error::Route {
            route,
            source: Box::new(other),
        },
    })
}

/// Relative discrepancy with denominator `max(|a|, |b|, 1e-12)`.
pub fn relative_discrepancy(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-12)
}

/// Values of one route at every point of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteValues {
    pub route: RouteId,
    pub values: Vec<f64>,
}

/// Per-point route values and their worst pairwise discrepancy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub points: Vec<f64>,
    pub routes: Vec<RouteValues>,
    pub pairwise_max_rel_err: f64,
}

impl EvalReport {
    pub fn new(routes: &[RouteId]) -> Self {
        EvalReport {
            points: Vec::new(),
            routes: routes
                .iter()
                .map(|&route| RouteValues {
                    route,
                    values: Vec::new(),
                })
                .collect(),
            pairwise_max_rel_err: 0.0,
        }
    }

    /// Appends one point with one value per route, in route order.
    pub fn append(&mut self, x: f64, values: &[f64]) -> Result<()> {
        if values.len() != self.routes.len() {
            return Err(Error::out_of_range(
                "values",
                values.len() as f64,
                "one per route",
            ));
        }
        self.points.push(x);
        for (rv, &v) in self.routes.iter_mut().zip(values) {
            rv.values.push(v);
        }
        self.pairwise_max_rel_err = self.recompute_max_rel_err();
        Ok(())
    }

    /// Worst pairwise discrepancy at point index `i`.
    pub fn max_rel_err_at(&self, i: usize) -> f64 {
        let mut worst = 0.0f64;
        for (j, a) in self.routes.iter().enumerate() {
            for b in &self.routes[j + 1..] {
                worst = worst.max(relative_discrepancy(a.values[i], b.values[i]));
            }
        }
        worst
    }

    /// Worst pairwise discrepancy recomputed from the stored values.
    pub fn recompute_max_rel_err(&self) -> f64 {
        (0..self.points.len())
            .map(|i| self.max_rel_err_at(i))
            .fold(0.0, f64::max)
    }

    pub fn values_of(&self, route: RouteId) -> Option<&[f64]> {
        self.routes
            .iter()
            .find(|r| r.route == route)
            .map(|r| r.values.as_slice())
    }
}

/// Evaluates every (point, route) cell in parallel and assembles the report
/// in point order.
pub fn equivalence_report(
    f: &RadialFunction,
    ord: FracOrder,
    points: &[f64],
    routes: &[RouteId],
    cfg: &QuadConfig,
    spec: &ContourSpec,
) -> Result<EvalReport> {
    if routes.is_empty() {
        return Err(Error::Missing { what: "route list" });
    }
    let cells: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (0..routes.len()).map(move |j| (i, j)))
        .collect();
    let values: Vec<Result<f64>> = cells
        .par_iter()
        .map(|&(i, j)| evaluate(routes[j], f, ord, points[i], cfg, spec))
        .collect();
    let mut report = EvalReport::new(routes);
    let mut it = values.into_iter();
    for &x in points {
        let row = (0..routes.len())
            .map(|_| it.next().expect("one value per cell"))
            .collect::<Result<Vec<f64>>>()?;
        report.append(x, &row)?;
    }
    Ok(report)
}

/// Radial function from a closure with no attached images.
pub fn radial(
    profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
    n: u32,
    decay: Decay,
) -> RadialFunction {
    RadialFunction::new(real_fn(profile), n, decay)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::test_function;

    fn gaussian() -> RadialFunction {
        test_function("gaussian").unwrap().to_radial(1)
    }

    fn ord(a: f64) -> FracOrder {
        FracOrder::new(a, 1).unwrap()
    }

    const ANCHOR: f64 = -1.128_379_167_095_512_6;

    #[test]
    fn anchor_value_on_every_route() {
        let cfg = QuadConfig::default();
        let spec = ContourSpec::default();
        let f = gaussian();
        for route in [
            RouteId::HeatSemigroup,
            RouteId::FourierMultiplier,
            RouteId::SingularIntegral,
            RouteId::MellinContour,
        ] {
            let v = evaluate(route, &f, ord(1.0), 0.0, &cfg, &spec).unwrap();
            assert!((v - ANCHOR).abs() < 1e-6, "{route}: {v}");
        }
    }

    #[test]
    fn gamma_n_value_and_range() {
        assert!((gamma_n(1, 0.5).unwrap() - 0.398_942_280_401_432_7).abs() < 1e-14);
        // the symbol |κ|^{-α} normalisation
        for a in [0.2, 0.5, 0.8] {
            let expect = 1.0 / (2.0 * gamma_real(a) * (PI * a / 2.0).cos());
            assert!((gamma_n(1, a).unwrap() - expect).abs() < 1e-13);
        }
        assert!(gamma_n(1, 1.2).is_err());
        let f = gaussian();
        assert!(matches!(
            riesz_potential(&f, 1.2, 0.0, &QuadConfig::default()),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn riesz_potential_of_gaussian_at_origin() {
        // I^α e^{-x²}(0) = γ₁(α) Γ(α/2)
        let f = gaussian();
        let v = riesz_potential(&f, 0.5, 0.0, &QuadConfig::default()).unwrap();
        let exact = gamma_n(1, 0.5).unwrap() * gamma_real(0.25);
        assert!((v - exact).abs() < 1e-10 * exact, "{v} vs {exact}");
    }

    #[test]
    fn riesz_inverse_route_close_to_order_two() {
        // the potential has order 1e-3 here
        let f = gaussian();
        let cfg = QuadConfig::default();
        for x in [0.0, 1.0, 5.0] {
            let a = riesz_potential_inverse_route(&f, ord(1.999), x, &cfg).unwrap();
            let b = fourier_route(&f, ord(1.999), x, &cfg).unwrap();
            assert!(relative_discrepancy(a, b) < 1e-8, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn fourier_route_with_a_numeric_image() {
        let closed = gaussian();
        let mut numeric = gaussian();
        numeric.fourier_profile = None;
        let cfg = QuadConfig::default();
        for x in [0.0, 1.0, 3.0] {
            let a = fourier_route(&closed, ord(1.5), x, &cfg).unwrap();
            let b = fourier_route(&numeric, ord(1.5), x, &cfg).unwrap();
            assert!(relative_discrepancy(a, b) < 1e-8, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn heat_route_rejects_non_integrable_input() {
        let f = radial(|_| 1.0, 1, Decay::None);
        assert!(matches!(
            heat_semigroup_route(&f, ord(1.0), 0.0, &QuadConfig::default()),
            Err(Error::NotIntegrable)
        ));
    }

    #[test]
    fn dimension_checks() {
        let f3 = test_function("gaussian").unwrap().to_radial(3);
        let o3 = FracOrder::new(1.0, 3).unwrap();
        let cfg = QuadConfig::default();
        assert!(matches!(
            heat_semigroup_route(&f3, o3, 0.0, &cfg),
            Err(Error::DimensionUnsupported { .. })
        ));
        assert!(matches!(
            singular_integral_route(&f3, o3, 0.0, &cfg),
            Err(Error::DimensionUnsupported { .. })
        ));
        let f2 = test_function("gaussian").unwrap().to_radial(2);
        let o2 = FracOrder::new(1.0, 2).unwrap();
        assert!(matches!(
            fourier_route(&f2, o2, 0.0, &cfg),
            Err(Error::DimensionUnsupported { .. })
        ));
    }

    #[test]
    fn three_dimensional_gaussian_image_at_zero() {
        let f3 = test_function("gaussian").unwrap().to_radial(3);
        let closed = fourier_image(&f3, 0.0, &QuadConfig::default()).unwrap();
        assert!((closed - PI.powf(1.5)).abs() < 1e-13);
        let numeric = radial(|r| (-r * r).exp(), 3, Decay::Gaussian(1.0));
        for k in [0.0, 1.3] {
            let v = fourier_image(&numeric, k, &QuadConfig::default()).unwrap();
            let exact = PI.powf(1.5) * (-k * k / 4.0).exp();
            assert!((v - exact).abs() < 1e-10, "{k}: {v}");
        }
    }

    #[test]
    fn cauchy_values_across_routes() {
        let f = test_function("cauchy").unwrap().to_radial(1);
        let cfg = QuadConfig::default();
        let spec = ContourSpec::default();
        let v = fourier_route(&f, ord(1.0), 0.0, &cfg).unwrap();
        assert!((v + 1.0 / PI).abs() < 1e-9);
        let v = singular_integral_route(&f, ord(1.0), 1.0, &cfg).unwrap();
        assert!(v.abs() < 1e-9, "{v}");
        let expect = 8.0 / (100.0 * PI);
        for route in [
            RouteId::FourierMultiplier,
            RouteId::SingularIntegral,
            RouteId::MellinContour,
            RouteId::HeatSemigroup,
        ] {
            let v = evaluate(route, &f, ord(1.0), 3.0, &cfg, &spec).unwrap();
            assert!((v - expect).abs() < 1e-7, "{route}: {v}");
        }
    }

    #[test]
    fn report_bookkeeping() {
        let mut r = EvalReport::new(&[RouteId::FourierMultiplier]);
        r.append(0.0, &[1.0]).unwrap();
        assert_eq!(r.pairwise_max_rel_err, 0.0);
        let mut r = EvalReport::new(&[RouteId::FourierMultiplier, RouteId::MellinContour]);
        r.append(0.0, &[1.0, 1.1]).unwrap();
        r.append(1.0, &[0.0, 1e-14]).unwrap();
        assert!((r.pairwise_max_rel_err - 0.1 / 1.1).abs() < 1e-15);
        assert!((r.max_rel_err_at(1) - 0.01).abs() < 1e-15);
        assert!(r.append(2.0, &[1.0]).is_err());
    }

    #[test]
    fn route_names_round_trip() {
        for r in RouteId::ALL {
            assert_eq!(r.to_string().parse::<RouteId>().unwrap(), r);
        }
        assert_eq!(
            " Mellin ".parse::<RouteId>().unwrap(),
            RouteId::MellinContour
        );
        assert!("laplace".parse::<RouteId>().is_err());
    }

    #[test]
    fn route_errors_are_tagged() {
        let f = radial(|_| 1.0, 1, Decay::None);
        let e = evaluate(
            RouteId::HeatSemigroup,
            &f,
            ord(1.0),
            0.0,
            &QuadConfig::default(),
            &ContourSpec::default(),
        )
        .unwrap_err();
        assert!(matches!(
            e,
            Error::Route {
                route: RouteId::HeatSemigroup,
                ..
            }
        ));
        assert!(!e.is_numeric());
    }
}
