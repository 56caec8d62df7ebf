//! Complex Gamma family and the analytic test-function corpus.
//!
//! `log_gamma` is the analytic continuation of ln Γ from the positive real
//! axis (real there, branch cut along the negative real axis), the same
//! convention as `mpmath.loggamma`. It is computed with the Stirling series
//! after an upward recurrence shift for Re z ≥ 1/2 and with the reflection
//! formula, plus an explicit 2πi branch correction, to the left of that.

mod corpus;

pub use corpus::{test_corpus, test_function, Decay, TestFunction};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

/// B_{2k} / (2k (2k-1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Below this modulus the argument is shifted upward before Stirling.
const STIRLING_MIN_MODULUS: f64 = 10.0;

fn is_pole(z: Complex) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn check_finite(z: Complex, stage: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { stage })
    }
}

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    let (r, sign) = if r > 1.0 { (r - 1.0, -1.0) } else { (r, 1.0) };
    let v = if r == 0.0 || r == 1.0 {
        0.0
    } else if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else {
        (PI * (1.0 - r)).sin()
    };
    sign * v
}

/// cos(πx) with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// sin(πz) for complex z, accurate near the real zeros.
pub fn sin_pi_complex(z: Complex) -> Complex {
    let (s, c) = (sin_pi(z.re), cos_pi(z.re));
    let y = PI * z.im;
    Complex::new(s * y.cosh(), c * y.sinh())
}

/// cos(πz) for complex z.
pub fn cos_pi_complex(z: Complex) -> Complex {
    let (s, c) = (sin_pi(z.re), cos_pi(z.re));
    let y = PI * z.im;
    Complex::new(c * y.cosh(), -s * y.sinh())
}

/// Principal logarithm of sin(πz), safe for large |Im z|.
fn log_sin_pi(z: Complex) -> Complex {
    if z.im.abs() < 20.0 {
        return sin_pi_complex(z).ln();
    }
    // sin(πz) = ±(i/2) e^{∓iπz} (1 - e^{±2iπz}) for Im z ≷ 0
    let (y, sgn) = (z.im.abs(), z.im.signum());
    let tail = Complex::new(0.0, sgn * 2.0 * PI * z.re).exp() * (-2.0 * PI * y).exp();
    let mut l = Complex::new(
        PI * y - std::f64::consts::LN_2,
        -sgn * PI * z.re + sgn * PI / 2.0,
    ) + (Complex::new(1.0, 0.0) - tail).ln();
    l.im = wrap_to_pi(l.im);
    l
}

fn wrap_to_pi(a: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut w = a.rem_euclid(two_pi);
    if w > PI {
        w -= two_pi;
    }
    w
}

fn log_gamma_stirling(z: Complex) -> Complex {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex::new(0.0, 0.0);
    for &c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series * inv
}

fn log_gamma_right(z: Complex) -> Complex {
    if z.norm() >= STIRLING_MIN_MODULUS {
        return log_gamma_stirling(z);
    }
    let shift = (STIRLING_MIN_MODULUS - z.re).ceil().max(0.0) as usize;
    let mut logs = Complex::new(0.0, 0.0);
    for k in 0..shift {
        logs += (z + k as f64).ln();
    }
    log_gamma_stirling(z + shift as f64) - logs
}

/// Principal-branch ln Γ(z).
///
/// Errors with [`Error::Pole`] at z ∈ {0, −1, −2, …} and with
/// [`Error::NonFinite`] on NaN or infinite input.
pub fn log_gamma(z: Complex) -> Result<Complex> {
    check_finite(z, "log_gamma")?;
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.re >= 0.5 {
        return Ok(log_gamma_right(z));
    }
    let reflected = log_gamma_right(Complex::new(1.0, 0.0) - z);
    if z.im == 0.0 {
        let s = sin_pi(z.re);
        let re = LN_PI - s.abs().ln() - reflected.re;
        let im = -PI * (-z.re).ceil();
        return Ok(Complex::new(re, im));
    }
    let k = z.im.signum() * (0.5 * z.re + 0.25).floor();
    Ok(Complex::new(LN_PI, 2.0 * PI * k) - log_sin_pi(z) - reflected)
}

/// Γ(z) = exp(ln Γ(z)).
pub fn gamma(z: Complex) -> Result<Complex> {
    Ok(log_gamma(z)?.exp())
}

/// Γ(x) for real x; ±∞ at the poles.
pub fn gamma_real(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.round() {
        return f64::INFINITY;
    }
    if x >= 0.5 {
        if x == x.round() && x <= 21.0 {
            return (1..x as u64).map(|k| k as f64).product();
        }
        return log_gamma_right(Complex::new(x, 0.0)).re.exp();
    }
    PI / (sin_pi(x) * gamma_real(1.0 - x))
}

/// 1/Γ(x) for real x; zero at the poles of Γ.
pub fn recip_gamma_real(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if x >= 0.5 {
        return 1.0 / gamma_real(x);
    }
    sin_pi(x) * gamma_real(1.0 - x) / PI
}

/// ln|Γ(x)| for real x > 0.
pub fn ln_gamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    log_gamma_right(Complex::new(x, 0.0)).re
}

/// Π Γ(num) / Π Γ(den), evaluated through log-Gamma differences.
///
/// Poles are allowed only when they pair up between numerator and
/// denominator; each paired pole contributes the ratio of the residues
/// Res Γ(−k) = (−1)^k / k!. Any unpaired pole is an [`Error::Pole`].
pub fn gamma_ratio(num: &[Complex], den: &[Complex]) -> Result<Complex> {
    let mut acc = Complex::new(0.0, 0.0);
    let mut num_poles = Vec::new();
    let mut den_poles = Vec::new();
    for &z in num {
        check_finite(z, "gamma_ratio")?;
        if is_pole(z) {
            num_poles.push(z);
        } else {
            acc += log_gamma(z)?;
        }
    }
    for &z in den {
        check_finite(z, "gamma_ratio")?;
        if is_pole(z) {
            den_poles.push(z);
        } else {
            acc -= log_gamma(z)?;
        }
    }
    if num_poles.len() != den_poles.len() {
        let z = num_poles
            .first()
            .or(den_poles.first())
            .copied()
            .unwrap_or_default();
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    let residue_log = |z: Complex| {
        let k = -z.re;
        Complex::new(-ln_gamma_real(k + 1.0), PI * k)
    };
    for (&a, &b) in num_poles.iter().zip(&den_poles) {
        acc += residue_log(a) - residue_log(b);
    }
    Ok(acc.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    // mpmath.loggamma at 40 digits.
    const LOG_GAMMA_ORACLE: [(f64, f64, f64, f64); 12] = [
        (1.0, 1.0, -0.650_923_199_301_856_3, -0.301_640_320_467_533_2),
        (0.5, 0.0, 0.572_364_942_924_700_1, 0.0),
        (3.7, -2.2, 0.726_446_751_624_426_5, -2.718_064_292_441_145_7),
        (0.1, 0.05, 2.139_350_425_865_159_3, -0.484_796_616_245_221_7),
        (-2.3, 4.1, -9.659_880_582_402_592, -3.599_202_335_184_487_4),
        (-7.6, -0.3, -8.975_959_446_761_6, 24.739_766_412_899_994),
        (-0.5, 0.0, 1.265_512_123_484_645_4, -3.141_592_653_589_793),
        (-3.5, 0.0, -1.309_006_684_993_042, -12.566_370_614_359_172),
        (25.0, 40.0, 29.849_018_814_915_747, 138.947_572_548_000_83),
        (0.5, 30.0, -46.204_951_270_642_226, 72.037_310_428_805_79),
        (-10.2, 15.5, -53.504_180_774_686_93, 6.732_578_683_167_521),
        (2.0, -49.0, -70.212_142_829_369_98, -144.033_283_063_040_87),
    ];

    #[test]
    fn log_gamma_matches_high_precision_oracle() {
        for &(x, y, re, im) in &LOG_GAMMA_ORACLE {
            let got = log_gamma(c(x, y)).unwrap();
            let err = (got - c(re, im)).norm();
            assert!(
                err <= 1e-13 * c(re, im).norm().max(1.0),
                "z = {x}+{y}i: {got} vs {re}+{im}i"
            );
        }
    }

    #[test]
    fn log_gamma_trivial_points() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-14 * 0.5 * PI.ln());
        let g = gamma(c(1.0, 1.0)).unwrap();
        assert!(rel(g, c(0.498_015_668_118_356, -0.154_949_828_301_810_7)) < 1e-13);
    }

    #[test]
    fn log_gamma_rejects_poles_and_nan() {
        for k in 0..5 {
            assert!(matches!(
                log_gamma(c(-(k as f64), 0.0)),
                Err(Error::Pole { .. })
            ));
        }
        assert!(matches!(
            log_gamma(c(f64::NAN, 0.0)),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn gamma_ratio_examples() {
        assert!(
            rel(
                gamma_ratio(&[c(2.0, 0.0)], &[c(2.0, 0.0)]).unwrap(),
                c(1.0, 0.0)
            ) < 1e-15
        );
        let r = gamma_ratio(
            &[c(0.25, 0.0), c(0.75, 0.0)],
            &[c(0.25, 0.0), c(-0.25, 0.0)],
        )
        .unwrap();
        assert!(rel(r, c(-0.25, 0.0)) < 1e-14, "{r}");
        assert!(
            rel(
                gamma_ratio(&[c(3.0, 0.0)], &[c(1.0, 0.0)]).unwrap(),
                c(2.0, 0.0)
            ) < 1e-14
        );
    }

    #[test]
    fn gamma_ratio_pairs_poles() {
        // Γ(z-1)/Γ(z) = 1/(z-1) → -1/2 at z = -1
        let r = gamma_ratio(&[c(-2.0, 0.0)], &[c(-1.0, 0.0)]).unwrap();
        assert!(rel(r, c(-0.5, 0.0)) < 1e-14, "{r}");
        assert!(gamma_ratio(&[c(1.0, 0.0)], &[c(-1.0, 0.0)]).is_err());
        assert!(gamma_ratio(&[c(0.0, 0.0)], &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn real_gamma_helpers() {
        assert_eq!(gamma_real(5.0), 24.0);
        assert!((gamma_real(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-14 * 2.0 * PI.sqrt());
        assert_eq!(recip_gamma_real(-2.0), 0.0);
        assert!((recip_gamma_real(-0.5) * gamma_real(-0.5) - 1.0).abs() < 1e-14);
        assert!((sin_pi(1.0)).abs() == 0.0 && (cos_pi(0.5)).abs() == 0.0);
    }

    #[test]
    fn large_imaginary_part_does_not_overflow() {
        let z = c(-3.3, 400.0);
        let l = log_gamma(z).unwrap();
        let r = log_gamma(c(1.0, 0.0) - z).unwrap();
        // Γ(z)Γ(1-z) = π / sin(πz): compare moduli in log form
        let lhs = (l + r).re;
        let rhs = LN_PI - log_sin_pi(z).re;
        assert!((lhs - rhs).abs() < 1e-10 * rhs.abs());
    }
}
