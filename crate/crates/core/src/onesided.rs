//! One-sided fractional calculus on the half-line and its link to the
//! symmetric (Riesz) derivative through the E-kernel.
//!
//! For an even function `φ(|x|)` the Riesz derivative is a Mellin
//! convolution of the Caputo derivative of `φ` with
//! `E(ξ) = (2/π) sin(πα/2) / (1 - ξ²) - cos(πα/2) ξ δ(ξ - 1)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fraclap::RadialFunction;
use crate::func::{real_fn, ErrorSlot, RealFn};
use crate::quadrature::{
    geometric_breaks, integrate, integrate_with_breaks, power_weighted, principal_value, QuadConfig,
};
use crate::specfun::{cos_pi, recip_gamma_real, sin_pi, sin_pi_complex, Complex, TestFunction};

/// A function on `t > 0` with derivatives and their limits at `0⁺`.
#[derive(Clone)]
pub struct HalfLineFunction {
    pub profile: RealFn,
    /// `derivatives[k]` is the derivative of order `k + 1`.
    pub derivatives: Vec<RealFn>,
    /// `initial_values[j] = f^{(j)}(0⁺)`.
    pub initial_values: Vec<f64>,
}

impl std::fmt::Debug for HalfLineFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HalfLineFunction")
            .field("derivatives", &self.derivatives.len())
            .field("initial_values", &self.initial_values)
            .finish()
    }
}

impl HalfLineFunction {
    pub fn new(profile: RealFn, derivatives: Vec<RealFn>, initial_values: Vec<f64>) -> Self {
        HalfLineFunction {
            profile,
            derivatives,
            initial_values,
        }
    }

    /// `Σ c_k t^k` with every derivative up to the degree (at least two).
    pub fn polynomial(coeffs: &[f64]) -> Self {
        let order = coeffs.len().max(3);
        let mut polys = vec![coeffs.to_vec()];
        for _ in 1..order {
            let last = polys.last().expect("non-empty");
            let next: Vec<f64> = last
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect();
            polys.push(next);
        }
        let horner =
            |p: Vec<f64>| real_fn(move |t| p.iter().rev().fold(0.0, |acc, &c| acc * t + c));
        let initial_values = polys
            .iter()
            .map(|p| p.first().copied().unwrap_or(0.0))
            .collect();
        let mut fns = polys.into_iter().map(horner);
        let profile = fns.next().expect("profile");
        HalfLineFunction {
            profile,
            derivatives: fns.collect(),
            initial_values,
        }
    }

    /// The profile of a corpus entry restricted to the half-line.
    pub fn from_test_function(t: &TestFunction) -> Self {
        let initial_values = vec![(t.profile)(0.0), (t.first_derivative)(0.0)];
        HalfLineFunction {
            profile: t.profile.clone(),
            derivatives: vec![t.first_derivative.clone(), t.second_derivative.clone()],
            initial_values,
        }
    }

    /// Derivative of order `k`; order 0 is the profile.
    pub fn derivative(&self, k: usize) -> Result<&RealFn> {
        if k == 0 {
            return Ok(&self.profile);
        }
        self.derivatives.get(k - 1).ok_or(Error::Missing {
            what: "derivative of the required order",
        })
    }

    /// Compares each derivative with a central difference of the one below
    /// at `t = 0.5, 1, 2`.
    pub fn check_derivatives(&self) -> Result<()> {
        let h = 1e-4;
        for k in 1..=self.derivatives.len() {
            let lower = self.derivative(k - 1)?;
            let upper = self.derivative(k)?;
            for t in [0.5, 1.0, 2.0] {
                let fd = (lower(t + h) - lower(t - h)) / (2.0 * h);
                let d = upper(t);
                if (fd - d).abs() > 1e-6 * d.abs().max(1.0) {
                    return Err(Error::out_of_range(
                        "derivative mismatch",
                        (fd - d).abs(),
                        "[0, 1e-6]",
                    ));
                }
            }
        }
        Ok(())
    }
}

fn check_order(alpha: f64, t: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::out_of_range("alpha", alpha, "(0, inf)"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::out_of_range("t", t, "(0, inf)"));
    }
    Ok(())
}

/// `J^α g(t) = (1/Γ(α)) ∫₀^t (t-τ)^{α-1} g(τ) dτ`.
///
/// The range is split at `t/2`; the half next to `τ = t` is integrated in
/// `u = t - τ` so both pieces carry their singular point at the origin,
/// where `g(t) u^{α-1}` is integrated in closed form.
/// Given an antiderivative `G` with its value at `0⁺`, the half next to the
/// origin integrates `((1 - τ/t)^{α-1} - 1) g(τ)` and adds
/// `G(t/2) - G(0⁺)`, so a vanishing mean of `g` costs no precision at
/// large `t`.
fn rl_integral_of(
    g: &(impl Fn(f64) -> f64 + Sync + ?Sized),
    primitive: Option<(&RealFn, f64)>,
    alpha: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    let half = 0.5 * t;
    let breaks = geometric_breaks(half);
    // g(t) u^{α-1} is integrated in closed form
    let gt = g(t);
    let near_t = integrate(
        |u: f64| power_weighted(g(t - u) - gt, u, alpha - 1.0),
        0.0,
        half,
        cfg,
    )?
    .value
        + gt * half.powf(alpha) / alpha;
    let near_0 = match primitive {
        Some((big_g, g0)) => {
            // the bracket is O(τ/t): integrate it times t
            let excess = integrate_with_breaks(
                |tau: f64| t * ((alpha - 1.0) * (-tau / t).ln_1p()).exp_m1() * g(tau),
                0.0,
                half,
                &breaks,
                cfg,
            )?
            .value;
            t.powf(alpha - 1.0) * (excess / t + (big_g(half) - g0))
        }
        None => {
            integrate_with_breaks(
                |tau: f64| (t - tau).powf(alpha - 1.0) * g(tau),
                0.0,
                half,
                &breaks,
                cfg,
            )?
            .value
        }
    };
    Ok(recip_gamma_real(alpha) * (near_t + near_0))
}

/// Riemann–Liouville integral `J^α f(t)`.
pub fn rl_integral(f: &HalfLineFunction, alpha: f64, t: f64, cfg: &QuadConfig) -> Result<f64> {
    check_order(alpha, t)?;
    rl_integral_of(&*f.profile, None, alpha, t, cfg)
}

/// Caputo derivative `𝔻^α f = J^{m-α} f^{(m)}`, `m = ⌈α⌉`.
pub fn caputo(f: &HalfLineFunction, alpha: f64, t: f64, cfg: &QuadConfig) -> Result<f64> {
    check_order(alpha, t)?;
    let m = alpha.ceil();
    let dm = f.derivative(m as usize)?;
    if m == alpha {
        return Ok(dm(t));
    }
    let k = m as usize;
    let below = if k == 1 {
        &f.profile
    } else {
        f.derivative(k - 1)?
    };
    let primitive = f.initial_values.get(k - 1).map(|&g0| (below, g0));
    rl_integral_of(&**dm, primitive, m - alpha, t, cfg)
}

/// Riemann–Liouville derivative from the Caputo derivative and the
/// initial values: `𝒟^α f = 𝔻^α f + Σ_{j<m} f^{(j)}(0⁺) t^{j-α} / Γ(j-α+1)`.
pub fn riemann_liouville(
    f: &HalfLineFunction,
    alpha: f64,
    t: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    check_order(alpha, t)?;
    let m = alpha.ceil() as usize;
    if f.initial_values.len() < m {
        return Err(Error::Missing {
            what: "initial values up to order m - 1",
        });
    }
    let base = caputo(f, alpha, t, cfg)?;
    let boundary: f64 = (0..m)
        .filter(|&j| f.initial_values[j] != 0.0)
        .map(|j| {
            let p = j as f64 - alpha;
            f.initial_values[j] * t.powf(p) * recip_gamma_real(p + 1.0)
        })
        .sum();
    Ok(base + boundary)
}

/// The kernel `E(ξ)` for order `α ∈ (0, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EKernel {
    pub alpha: f64,
}

impl EKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::out_of_range("alpha", alpha, "(0, 2]"));
        }
        Ok(EKernel { alpha })
    }

    /// `(2/π) sin(πα/2)`.
    pub fn smooth_weight(&self) -> f64 {
        2.0 / PI * sin_pi(0.5 * self.alpha)
    }

    /// `(2/π) sin(πα/2) / (1 - ξ²)`.
    pub fn smooth_part(&self, xi: f64) -> f64 {
        self.smooth_weight() / (1.0 - xi * xi)
    }

    /// Coefficient `-cos(πα/2)` of `ξ δ(ξ - 1)`.
    pub fn delta_weight(&self) -> f64 {
        -cos_pi(0.5 * self.alpha)
    }

    /// `sin(π(α-s)/2) / sin(πs/2)`.
    pub fn mellin_closed_form(&self, s: Complex) -> Result<Complex> {
        let den = sin_pi_complex(s / 2.0);
        if den.norm() <= 4.0 * f64::EPSILON {
            return Err(Error::Pole { re: s.re, im: s.im });
        }
        Ok(sin_pi_complex((self.alpha - s) / 2.0) / den)
    }

    /// Mellin transform by quadrature: principal value of the smooth part
    /// in `u = ln ξ` plus the delta part, which contributes
    /// `delta_weight · 1^s`. Requires `0 < Re s < 2`.
    pub fn mellin_numeric(&self, s: Complex, cfg: &QuadConfig) -> Result<Complex> {
        if !(s.re > 0.0 && s.re < 2.0) || !s.im.is_finite() {
            return Err(Error::OutsideStrip {
                re: s.re,
                lo: 0.0,
                hi: 2.0,
            });
        }
        let w = self.smooth_weight();
        let (sigma, tau) = (s.re, s.im);
        // ξ^s / (1 - ξ²) with ξ = e^u
        let part = |trig: fn(f64) -> f64| {
            move |u: f64| {
                if u > 0.0 {
                    // 1 - e^{2u} = e^{2u} (e^{-2u} - 1)
                    ((sigma - 2.0) * u).exp() * trig(tau * u) / (-2.0 * u).exp_m1()
                } else {
                    (sigma * u).exp() * trig(tau * u) / -(2.0 * u).exp_m1()
                }
            }
        };
        let re = principal_value(part(f64::cos), 0.0, f64::NEG_INFINITY, f64::INFINITY, cfg)?.value;
        let im = principal_value(part(f64::sin), 0.0, f64::NEG_INFINITY, f64::INFINITY, cfg)?.value;
        Ok(Complex::new(w * re + self.delta_weight(), w * im))
    }
}

/// `∫₀^∞ g(ξ) E(|x|/ξ) dξ/ξ`.
///
/// The smooth part is a principal value taken in `v = ln ξ`, where the
/// pole sits at `v = ln|x|` with residue `g(|x|)/2`; the delta part
/// reduces to `-cos(πα/2) g(|x|)`. At `x = 0` only `E(0)` survives.
pub fn ekernel_convolution(
    g: impl Fn(f64) -> Result<f64> + Sync,
    alpha: f64,
    x: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    let kernel = EKernel::new(alpha)?;
    if !x.is_finite() {
        return Err(Error::NonFinite {
            stage: "ekernel_convolution",
        });
    }
    let ax = x.abs();
    let w = kernel.smooth_weight();
    let slot = ErrorSlot::new();
    // ξ = e^v leaves the representable range only where the weight has vanished
    let g = |xi: f64| {
        if xi > 0.0 && xi.is_finite() {
            g(xi)
        } else {
            Ok(0.0)
        }
    };
    if ax == 0.0 {
        let out = integrate(
            |v: f64| slot.catch(g(v.exp())),
            f64::NEG_INFINITY,
            f64::INFINITY,
            cfg,
        );
        return slot.finish(out).map(|e| w * e.value);
    }
    let point = g(ax)?;
    let delta = kernel.delta_weight() * point;
    if w == 0.0 {
        return Ok(delta);
    }
    let v0 = ax.ln();
    let out = principal_value(
        |v: f64| slot.catch(g(v.exp())) / -(-2.0 * (v - v0)).exp_m1(),
        v0,
        f64::NEG_INFINITY,
        f64::INFINITY,
        cfg,
    );
    let smooth = slot.finish(out)?.value;
    Ok(w * smooth + delta)
}

/// E-kernel convolution of the Caputo derivative of `f`.
pub fn caputo_kernel_form(
    f: &HalfLineFunction,
    alpha: f64,
    x: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    ekernel_convolution(|xi| caputo(f, alpha, xi, cfg), alpha, x, cfg)
}

/// E-kernel convolution of the Riemann–Liouville derivative of `f`.
pub fn rl_kernel_form(f: &HalfLineFunction, alpha: f64, x: f64, cfg: &QuadConfig) -> Result<f64> {
    ekernel_convolution(|xi| riemann_liouville(f, alpha, xi, cfg), alpha, x, cfg)
}

/// `PV ∫ φ(|y|) / (x - y) dy` over the line.
pub fn hilbert_integral(f: &RadialFunction, x: f64, cfg: &QuadConfig) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite {
            stage: "hilbert_integral",
        });
    }
    principal_value(
        |y: f64| f.at(y) / (x - y),
        x,
        f64::NEG_INFINITY,
        f64::INFINITY,
        cfg,
    )
    .map(|e| e.value)
}

/// `-(1/π) d/dx PV ∫ φ(|y|) / (x - y) dy`, the first-order symmetric
/// derivative of an even profile.
///
/// The outer derivative is a central difference at steps 0.2, 0.1, 0.05 and
/// 0.025 combined by Richardson extrapolation.
pub fn hilbert_derivative(f: &RadialFunction, x: f64, cfg: &QuadConfig) -> Result<f64> {
    if f.n != 1 {
        return Err(Error::DimensionUnsupported {
            n: f.n,
            what: "the Hilbert form",
        });
    }
    const STEPS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
    let mut table = Vec::with_capacity(STEPS.len());
    for h in STEPS {
        let d = (hilbert_integral(f, x + h, cfg)? - hilbert_integral(f, x - h, cfg)?) / (2.0 * h);
        table.push(d);
    }
    // central differences expand in h²; each halving gains a factor 4^k
    let mut factor = 4.0;
    while table.len() > 1 {
        table = table
            .windows(2)
            .map(|p| p[1] + (p[1] - p[0]) / (factor - 1.0))
            .collect();
        factor *= 4.0;
    }
    Ok(-table[0] / PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraclap::singular_integral_route;
    use crate::mellin::FracOrder;
    use crate::specfun::test_function;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    fn sqrt_pi() -> f64 {
        PI.sqrt()
    }

    #[test]
    fn power_rule_for_the_integral() {
        let one = HalfLineFunction::polynomial(&[1.0]);
        let t = HalfLineFunction::polynomial(&[0.0, 1.0]);
        assert!((rl_integral(&one, 0.5, 1.0, &cfg()).unwrap() - 2.0 / sqrt_pi()).abs() < 1e-10);
        assert!((rl_integral(&t, 1.0, 2.0, &cfg()).unwrap() - 2.0).abs() < 1e-12);
        let expected = 4.0 / (3.0 * sqrt_pi());
        assert!((rl_integral(&t, 0.5, 1.0, &cfg()).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn caputo_examples() {
        let t = HalfLineFunction::polynomial(&[0.0, 1.0]);
        let one = HalfLineFunction::polynomial(&[1.0]);
        let t2 = HalfLineFunction::polynomial(&[0.0, 0.0, 1.0]);
        assert!((caputo(&t, 0.5, 1.0, &cfg()).unwrap() - 2.0 / sqrt_pi()).abs() < 1e-10);
        assert_eq!(caputo(&one, 0.5, 1.0, &cfg()).unwrap(), 0.0);
        assert!((caputo(&t2, 1.5, 1.0, &cfg()).unwrap() - 4.0 / sqrt_pi()).abs() < 1e-10);
    }

    #[test]
    fn orders_just_below_an_integer() {
        // the kernel of J^{1e-3} keeps mass below the smallest doubles
        let t2 = HalfLineFunction::polynomial(&[0.0, 0.0, 1.0]);
        for alpha in [0.999, 1.999] {
            for t in [0.05f64, 3.0] {
                let exact = 2.0 * recip_gamma_real(3.0 - alpha) * t.powf(2.0 - alpha);
                let v = caputo(&t2, alpha, t, &cfg()).unwrap();
                assert!(
                    (v - exact).abs() < 1e-10 * exact,
                    "alpha={alpha} t={t}: {v}"
                );
            }
        }
    }

    #[test]
    fn riemann_liouville_examples() {
        let one = HalfLineFunction::polynomial(&[1.0]);
        let t = HalfLineFunction::polynomial(&[0.0, 1.0]);
        assert!(
            (riemann_liouville(&one, 0.5, 1.0, &cfg()).unwrap() - 1.0 / sqrt_pi()).abs() < 1e-12
        );
        assert!((riemann_liouville(&t, 0.5, 1.0, &cfg()).unwrap() - 2.0 / sqrt_pi()).abs() < 1e-10);
    }

    #[test]
    fn quadratic_follows_the_power_rule() {
        // 𝒟^α t^k = Γ(k+1)/Γ(k+1-α) t^{k-α}
        let f = HalfLineFunction::polynomial(&[1.0, 1.0, 1.0]);
        for alpha in [0.3, 1.7] {
            for t in [0.5f64, 2.0] {
                let exact: f64 = [(0.0, 1.0), (1.0, 1.0), (2.0, 2.0)]
                    .iter()
                    .map(|&(k, fact)| fact * t.powf(k - alpha) * recip_gamma_real(k + 1.0 - alpha))
                    .sum();
                let got = riemann_liouville(&f, alpha, t, &cfg()).unwrap();
                assert!(
                    (got - exact).abs() < 1e-8 * exact.abs().max(1.0),
                    "α={alpha} t={t}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn derivative_bookkeeping() {
        let f = HalfLineFunction::polynomial(&[1.0, 1.0, 1.0]);
        assert_eq!(f.initial_values, vec![1.0, 1.0, 2.0]);
        assert!(f.check_derivatives().is_ok());
        let bump = HalfLineFunction::from_test_function(&test_function("bump").unwrap());
        assert!(bump.check_derivatives().is_ok());
        assert_eq!(bump.initial_values, vec![0.0, 0.0]);
        let bad = HalfLineFunction::new(real_fn(|t| t * t), vec![real_fn(|t| t)], vec![0.0]);
        assert!(bad.check_derivatives().is_err());
        assert!(matches!(
            caputo(&bad, 1.5, 1.0, &cfg()),
            Err(Error::Missing { .. })
        ));
    }

    #[test]
    fn rejects_bad_orders() {
        let one = HalfLineFunction::polynomial(&[1.0]);
        assert!(rl_integral(&one, 0.0, 1.0, &cfg()).is_err());
        assert!(rl_integral(&one, 0.5, -1.0, &cfg()).is_err());
        assert!(EKernel::new(2.5).is_err());
        assert!(EKernel::new(0.0).is_err());
    }

    #[test]
    fn kernel_mellin_identity() {
        for alpha in [0.5, 1.0, 1.5] {
            let k = EKernel::new(alpha).unwrap();
            for im in [0.0, 1.0, 3.0] {
                let s = Complex::new(0.5, im);
                let num = k.mellin_numeric(s, &cfg()).unwrap();
                let exact = k.mellin_closed_form(s).unwrap();
                assert!(
                    (num - exact).norm() < 1e-8,
                    "α={alpha} s={s}: {num} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn kernel_at_two_is_pure_delta() {
        let k = EKernel::new(2.0).unwrap();
        assert_eq!(k.smooth_weight(), 0.0);
        assert_eq!(k.delta_weight(), 1.0);
        let bump = test_function("bump").unwrap();
        let f = HalfLineFunction::from_test_function(&bump);
        for x in [0.5, 1.5] {
            let v = caputo_kernel_form(&f, 2.0, x, &cfg()).unwrap();
            assert!((v - (bump.second_derivative)(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_form_matches_singular_route() {
        let bump = test_function("bump").unwrap();
        let f = HalfLineFunction::from_test_function(&bump);
        let radial = bump.to_radial(1);
        let alpha = 0.5;
        let ord = FracOrder::new(alpha, 1).unwrap();
        let x = 1.0;
        let lhs = singular_integral_route(&radial, ord, x, &cfg()).unwrap();
        let rhs = caputo_kernel_form(&f, alpha, x, &cfg()).unwrap();
        assert!((lhs - rhs).abs() <= 1e-6 * lhs.abs(), "{lhs} vs {rhs}");
    }

    #[test]
    fn hilbert_form_on_cauchy() {
        let c = test_function("cauchy").unwrap().to_radial(1);
        let at0 = hilbert_derivative(&c, 0.0, &cfg()).unwrap();
        assert!((at0 + 1.0 / PI).abs() < 1e-6, "{at0}");
        let at1 = hilbert_derivative(&c, 1.0, &cfg()).unwrap();
        assert!(at1.abs() < 1e-6, "{at1}");
        // PV ∫ φ(y)/(x-y) dy = x/(1+x²) for the Cauchy density
        let h = hilbert_integral(&c, 2.0, &cfg()).unwrap();
        assert!((h - 0.4).abs() < 1e-10, "{h}");
    }
}
