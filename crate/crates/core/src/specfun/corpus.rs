//! Analytic test functions with closed-form derivatives, Mellin images and
//! radial Fourier images.

use std::f64::consts::PI;

use crate::error::Error;
use crate::fraclap::RadialFunction;
use crate::func::{complex_fn, real_fn, RealFn};
use crate::mellin::MellinImage;
use crate::specfun::{gamma, sin_pi_complex, Complex};

/// Large-`r` behaviour of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `r^{-p}`
    Power(f64),
    /// `e^{-a r}`
    Exponential(f64),
    /// `e^{-a r²}`
    Gaussian(f64),
    /// Not integrable on the line.
    None,
}

impl Decay {
    /// Model tail `r ↦ decay(r)` up to a constant.
    pub fn model(self, r: f64) -> f64 {
        match self {
            Decay::Power(p) => r.powf(-p),
            Decay::Exponential(a) => (-a * r).exp(),
            Decay::Gaussian(a) => (-a * r * r).exp(),
            Decay::None => 1.0,
        }
    }

    /// Whether `∫ |f| dx` over the line is finite.
    pub fn integrable(self) -> bool {
        match self {
            Decay::Power(p) => p > 1.0,
            Decay::Exponential(a) | Decay::Gaussian(a) => a > 0.0,
            Decay::None => false,
        }
    }

    /// Upper end of the Mellin convergence strip implied by the tail.
    pub fn mellin_upper(self) -> f64 {
        match self {
            Decay::Power(p) => p,
            Decay::Exponential(_) | Decay::Gaussian(_) => f64::INFINITY,
            Decay::None => 0.0,
        }
    }
}

/// A radial profile with everything the operator routes may consume.
#[derive(Clone)]
pub struct TestFunction {
    pub name: &'static str,
    pub profile: RealFn,
    pub first_derivative: RealFn,
    pub second_derivative: RealFn,
    pub mellin_image: Option<MellinImage>,
    pub fourier_image_1d: Option<RealFn>,
    pub fourier_image_3d: Option<RealFn>,
    pub decay: Decay,
    /// Whether the even extension `x ↦ f(|x|)` is smooth at the origin.
    pub smooth_at_origin: bool,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("decay", &self.decay)
            .finish()
    }
}

impl TestFunction {
    /// The same profile viewed as a radial function on `ℝⁿ`.
    pub fn to_radial(&self, n: u32) -> RadialFunction {
        let fourier = match n {
            1 => self.fourier_image_1d.clone(),
            3 => self.fourier_image_3d.clone(),
            _ => None,
        };
        RadialFunction {
            profile: self.profile.clone(),
            n,
            mellin: self.mellin_image.clone(),
            fourier_profile: fourier,
            d2: Some(self.second_derivative.clone()),
            decay: self.decay,
        }
    }
}

/// `poly · e^{-r²}`, zero once the exponential underflows.
fn damped(poly: f64, r: f64) -> f64 {
    let e = (-r * r).exp();
    if e == 0.0 {
        0.0
    } else {
        poly * e
    }
}

fn gaussian() -> TestFunction {
    TestFunction {
        name: "gaussian",
        profile: real_fn(|r| damped(1.0, r)),
        first_derivative: real_fn(|r| damped(-2.0 * r, r)),
        second_derivative: real_fn(|r| damped(4.0 * r * r - 2.0, r)),
        mellin_image: Some(
            MellinImage::new(
                complex_fn(|s| Ok(gamma(s / 2.0)? / 2.0)),
                0.0,
                f64::INFINITY,
            )
            .expect("valid strip")
            .continued(f64::NEG_INFINITY),
        ),
        fourier_image_1d: Some(real_fn(|k| PI.sqrt() * (-k * k / 4.0).exp())),
        fourier_image_3d: Some(real_fn(|k| PI.powf(1.5) * (-k * k / 4.0).exp())),
        decay: Decay::Gaussian(1.0),
        smooth_at_origin: true,
    }
}

fn exponential() -> TestFunction {
    TestFunction {
        name: "exponential",
        profile: real_fn(|r| (-r).exp()),
        first_derivative: real_fn(|r| -(-r).exp()),
        second_derivative: real_fn(|r| (-r).exp()),
        mellin_image: Some(
            MellinImage::new(complex_fn(gamma), 0.0, f64::INFINITY)
                .expect("valid strip")
                .continued(-1.0),
        ),
        fourier_image_1d: Some(real_fn(|k| 2.0 / (1.0 + k * k))),
        fourier_image_3d: Some(real_fn(|k| 8.0 * PI / ((1.0 + k * k) * (1.0 + k * k)))),
        decay: Decay::Exponential(1.0),
        smooth_at_origin: false,
    }
}

fn lorentz_image(scale: f64) -> MellinImage {
    let eval = complex_fn(move |s: Complex| {
        let d = sin_pi_complex(s / 2.0);
        if d.norm() == 0.0 {
            return Err(Error::Pole { re: s.re, im: s.im });
        }
        Ok(scale * (PI / 2.0) / d)
    });
    MellinImage::new(eval, 0.0, 2.0)
        .expect("valid strip")
        .continued(f64::NEG_INFINITY)
}

fn lorentz() -> TestFunction {
    TestFunction {
        name: "lorentz",
        profile: real_fn(|r| 1.0 / (1.0 + r * r)),
        first_derivative: real_fn(|r| -2.0 * r / ((1.0 + r * r) * (1.0 + r * r))),
        second_derivative: real_fn(|r| {
            let u = 1.0 / (1.0 + r * r);
            (6.0 - 8.0 * u) * u * u
        }),
        mellin_image: Some(lorentz_image(1.0)),
        fourier_image_1d: Some(real_fn(|k| PI * (-k).exp())),
        fourier_image_3d: Some(real_fn(|k| 2.0 * PI * PI * (-k).exp() / k)),
        decay: Decay::Power(2.0),
        smooth_at_origin: true,
    }
}

fn cauchy() -> TestFunction {
    TestFunction {
        name: "cauchy",
        profile: real_fn(|r| 1.0 / (PI * (1.0 + r * r))),
        first_derivative: real_fn(|r| -2.0 * r / (PI * (1.0 + r * r) * (1.0 + r * r))),
        second_derivative: real_fn(|r| {
            let u = 1.0 / (1.0 + r * r);
            (6.0 - 8.0 * u) * u * u / PI
        }),
        mellin_image: Some(lorentz_image(1.0 / PI)),
        fourier_image_1d: Some(real_fn(|k| (-k).exp())),
        fourier_image_3d: Some(real_fn(|k| 2.0 * PI * (-k).exp() / k)),
        decay: Decay::Power(2.0),
        smooth_at_origin: true,
    }
}

fn bump() -> TestFunction {
    TestFunction {
        name: "bump",
        profile: real_fn(|r| damped(r * r, r)),
        first_derivative: real_fn(|r| damped(2.0 * r - 2.0 * r.powi(3), r)),
        second_derivative: real_fn(|r| damped(2.0 - 10.0 * r * r + 4.0 * r.powi(4), r)),
        mellin_image: Some(
            MellinImage::new(
                complex_fn(|s| Ok(gamma(s / 2.0 + 1.0)? / 2.0)),
                -2.0,
                f64::INFINITY,
            )
            .expect("valid strip")
            .continued(f64::NEG_INFINITY),
        ),
        fourier_image_1d: Some(real_fn(|k| {
            PI.sqrt() * (0.5 - k * k / 4.0) * (-k * k / 4.0).exp()
        })),
        fourier_image_3d: Some(real_fn(|k| {
            PI.powf(1.5) * (1.5 - k * k / 4.0) * (-k * k / 4.0).exp()
        })),
        decay: Decay::Gaussian(1.0),
        smooth_at_origin: true,
    }
}

/// All corpus entries: gaussian, exponential, lorentz, bump and cauchy.
pub fn test_corpus() -> Vec<TestFunction> {
    vec![gaussian(), exponential(), lorentz(), bump(), cauchy()]
}

/// Looks up a corpus entry by name.
pub fn test_function(name: &str) -> Option<TestFunction> {
    test_corpus().into_iter().find(|t| t.name == name)
}
