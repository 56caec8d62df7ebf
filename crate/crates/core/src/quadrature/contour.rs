//! Integration along a vertical line `Re s = c` in the complex plane.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::GaussLegendre;
use crate::error::{Error, Result};
use crate::specfun::Complex;

/// Truncated vertical contour `c + it`, `t ∈ [-H, H]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// Abscissa `c`. Left unset, callers that know the integrand's strip
    /// choose it; [`contour_integral`] itself requires it.
    pub abscissa: Option<f64>,
    /// Initial truncation height; doubled until the tail test passes.
    pub height: f64,
    /// Largest height tried before giving up on the tail.
    pub max_height: f64,
    /// Initial number of quadrature nodes on `[-H, H]`.
    pub nodes: usize,
    /// Relative change between successive node doublings accepted as converged.
    pub target_tol: f64,
    /// Integrand magnitude at `±iH`, relative to its size near the real
    /// axis, below which the tail is dropped.
    pub tail_cutoff: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            abscissa: None,
            height: 16.0,
            max_height: 8192.0,
            nodes: 256,
            target_tol: 1e-10,
            tail_cutoff: 1e-16,
        }
    }
}

impl ContourSpec {
    pub fn at(c: f64) -> Self {
        ContourSpec {
            abscissa: Some(c),
            ..ContourSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(c) = self.abscissa {
            if !c.is_finite() {
                return Err(Error::NonFinite {
                    stage: "contour abscissa",
                });
            }
        }
        if !(self.height > 0.0 && self.height.is_finite()) {
            return Err(Error::out_of_range("height", self.height, "(0, inf)"));
        }
        if !(self.max_height >= self.height) {
            return Err(Error::out_of_range(
                "max_height",
                self.max_height,
                "[height, inf)",
            ));
        }
        if self.nodes < 64 {
            return Err(Error::out_of_range("nodes", self.nodes as f64, "[64, inf)"));
        }
        if !(self.target_tol > 0.0 && self.target_tol < 1.0) {
            return Err(Error::out_of_range("target_tol", self.target_tol, "(0, 1)"));
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
}

const MAX_NODES: usize = 1 << 20;

/// `(1/2πi) ∫_{c-iH}^{c+iH} g(s) ds = (1/2π) ∫_{-H}^{H} g(c+it) dt`.
///
/// The height is doubled until `|g|` at `±iH` and `±0.9iH` falls below
/// `tail_cutoff` times its size near the real axis; the node count is then
/// doubled until successive composite Gauss–Legendre sums agree.
/// Node evaluations run in parallel and are summed in a fixed order.
pub fn contour_integral(
    g: impl Fn(Complex) -> Complex + Sync,
    spec: &ContourSpec,
) -> Result<Complex> {
    contour_integral_detailed(g, spec).map(|(v, _)| v)
}

/// [`contour_integral`] together with `(1/2π) ∫ |g|`, the scale against
/// which cancellation in the result is judged.
pub(crate) fn contour_integral_detailed(
    g: impl Fn(Complex) -> Complex + Sync,
    spec: &ContourSpec,
) -> Result<(Complex, f64)> {
    spec.validate()?;
    let c = spec.abscissa.ok_or(Error::Missing {
        what: "contour abscissa",
    })?;
    let at = |t: f64| g(Complex::new(c, t));
    let reference = [0.0, 1.0, -1.0]
        .iter()
        .map(|&t| at(t).norm())
        .fold(0.0, f64::max);
    if !reference.is_finite() {
        return Err(Error::NonFinite {
            stage: "contour_integral",
        });
    }
    if reference == 0.0 {
        return Ok((Complex::new(0.0, 0.0), 0.0));
    }
    let mut height = spec.height;
    loop {
        let edge = [height, -height, 0.9 * height, -0.9 * height]
            .iter()
            .map(|&t| at(t).norm())
            .fold(0.0, f64::max);
        if edge.is_finite() && edge <= spec.tail_cutoff * reference {
            break;
        }
        if height * 2.0 > spec.max_height {
            return Err(Error::TailTooFat {
                height,
                magnitude: edge / reference,
            });
        }
        height *= 2.0;
    }
    let rule = GaussLegendre::twenty();
    // scale the node count with the height actually used, leaving room for
    // two doublings
    let mut panels =
        (spec.nodes as f64 * (height / spec.height).ceil()).min((MAX_NODES / 4) as f64) as usize;
    panels = panels.div_ceil(rule.len()).max(4);
    let mut previous: Option<Complex> = None;
    loop {
        let (value, magnitude) = composite(&at, height, panels, rule)?;
        if let Some(prev) = previous {
            let diff = (value - prev).norm();
            let floor = 64.0 * f64::EPSILON * magnitude;
            if diff <= spec.target_tol * value.norm() || diff <= floor {
                return Ok((value, magnitude));
            }
        }
        if panels * rule.len() * 2 > MAX_NODES {
            return Err(Error::NoConvergence {
                stage: "contour_integral",
                estimate: value.norm(),
                error: previous.map_or(f64::NAN, |p| (value - p).norm()),
                tolerance: spec.target_tol * value.norm(),
            });
        }
        previous = Some(value);
        panels *= 2;
    }
}

fn composite(
    at: &(impl Fn(f64) -> Complex + Sync),
    height: f64,
    panels: usize,
    rule: &GaussLegendre,
) -> Result<(Complex, f64)> {
    let width = 2.0 * height / panels as f64;
    let half = 0.5 * width;
    let parts: Vec<(Complex, f64)> = (0..panels)
        .into_par_iter()
        .map(|p| {
            let mid = -height + (p as f64 + 0.5) * width;
            let mut acc = Complex::new(0.0, 0.0);
            let mut mag = 0.0;
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let v = at(mid + half * x);
                acc += v * (w * half);
                mag += v.norm() * w * half;
            }
            (acc, mag)
        })
        .collect();
    let mut total = Complex::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for (v, m) in parts {
        total += v;
        magnitude += m;
    }
    if !(total.re.is_finite() && total.im.is_finite()) {
        return Err(Error::NonFinite {
            stage: "contour_integral",
        });
    }
    Ok((total / (2.0 * PI), magnitude / (2.0 * PI)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{gamma, sin_pi_complex};

    #[test]
    fn exponential_pair() {
        let v = contour_integral(|s| gamma(s).unwrap(), &ContourSpec::at(1.0)).unwrap();
        assert!((v.re - (-1f64).exp()).abs() < 1e-10);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn lorentz_pair_at_three() {
        let r: f64 = 3.0;
        let g = |s: Complex| (PI / 2.0) / sin_pi_complex(s / 2.0) * Complex::new(r, 0.0).powc(-s);
        let v = contour_integral(g, &ContourSpec::at(1.0)).unwrap();
        assert!((v.re - 0.1).abs() < 1e-10, "{v}");
    }

    #[test]
    fn tiny_initial_height_grows() {
        let spec = ContourSpec {
            height: 1e-3,
            ..ContourSpec::at(1.0)
        };
        let v = contour_integral(|s| gamma(s).unwrap(), &spec).unwrap();
        assert!((v.re - (-1f64).exp()).abs() < 1e-10, "{v}");
    }

    #[test]
    fn missing_abscissa_and_fat_tail() {
        let spec = ContourSpec::default();
        assert!(matches!(
            contour_integral(|s| s, &spec),
            Err(Error::Missing { .. })
        ));
        let r = contour_integral(|_s| Complex::new(1.0, 0.0), &ContourSpec::at(0.5));
        assert!(matches!(r, Err(Error::TailTooFat { .. })));
    }

    #[test]
    fn spec_validation() {
        let bad = ContourSpec {
            nodes: 10,
            ..ContourSpec::at(0.5)
        };
        assert!(bad.validate().is_err());
        let bad = ContourSpec {
            height: -1.0,
            ..ContourSpec::at(0.5)
        };
        assert!(bad.validate().is_err());
    }
}
