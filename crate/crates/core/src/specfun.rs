//! Complex log-gamma, digamma and the continuous gamma phase.
//!
//! Both functions shift the argument upward with the functional equation
//! until `Re w >= SHIFT_THRESHOLD`, then apply the Stirling / de Moivre
//! asymptotic series. Every shift term is a principal logarithm of a number
//! with positive real part when `Re z > 0`, so the imaginary part of
//! `log_gamma` is the analytically continued phase and never wraps.

use crate::error::{domain, Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type Complex = Complex64;

/// Largest |Im z| accepted by the gamma-family routines.
pub const MAX_IMAG: f64 = 1.0e4;

const SHIFT_THRESHOLD: f64 = 10.0;

/// B_{2n} for n = 1..10.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

fn check_argument(z: Complex) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("gamma-family argument"));
    }
    if z.im.abs() > MAX_IMAG {
        return Err(Error::Overflow(z.im.abs()));
    }
    if z.re < -MAX_IMAG {
        return Err(domain(format!("Re z = {} is below the supported range", z.re)));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::GammaPole(z.re));
    }
    Ok(())
}

fn finite(w: Complex, what: &'static str) -> Result<Complex> {
    if w.re.is_finite() && w.im.is_finite() {
        Ok(w)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Number of unit shifts needed to bring `Re z` above the asymptotic threshold.
fn shift_count(z: Complex) -> usize {
    if z.re >= SHIFT_THRESHOLD {
        0
    } else {
        (SHIFT_THRESHOLD - z.re).ceil() as usize
    }
}

/// `log Γ(z)` on the branch continuous in the right half-plane.
pub fn log_gamma(z: Complex) -> Result<Complex> {
    check_argument(z)?;
    let n = shift_count(z);
    let mut shift = Complex::new(0.0, 0.0);
    for j in 0..n {
        shift += (z + j as f64).ln();
    }
    let w = z + n as f64;

    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex::new(0.0, 0.0);
    let mut power = inv;
    for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
        let m = 2.0 * (i + 1) as f64;
        series += power * (b / (m * (m - 1.0)));
        power *= inv2;
    }
    let stirling = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series;
    finite(stirling - shift, "log_gamma")
}

/// `Ψ(z) = Γ'(z)/Γ(z)`.
pub fn digamma(z: Complex) -> Result<Complex> {
    check_argument(z)?;
    let n = shift_count(z);
    let mut shift = Complex::new(0.0, 0.0);
    for j in 0..n {
        shift += (z + j as f64).inv();
    }
    let w = z + n as f64;

    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex::new(0.0, 0.0);
    let mut power = inv2;
    for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
        let m = 2.0 * (i + 1) as f64;
        series += power * (b / m);
        power *= inv2;
    }
    finite(w.ln() - 0.5 * inv - series - shift, "digamma")
}

/// Continuous phase of `Γ(z)`, i.e. `Im log Γ(z)`, for `Re z > 0`.
pub fn arg_gamma(z: Complex) -> Result<f64> {
    if !(z.re > 0.0) {
        return Err(domain(format!("arg_gamma requires Re z > 0, got {}", z.re)));
    }
    Ok(log_gamma(z)?.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn log_gamma_spot_values() {
        let one = log_gamma(c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(one.re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(one.im, 0.0, epsilon = 1e-14);

        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(half.re, PI.sqrt().ln(), epsilon = 1e-13);

        // |Γ(1+i)|² = π / sinh π
        let z = log_gamma(c(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(z.re, 0.5 * (PI / PI.sinh()).ln(), epsilon = 1e-13);
        assert_abs_diff_eq!(z.re, -0.650918, epsilon = 1e-5);
        assert_abs_diff_eq!(z.im, -0.30164, epsilon = 1e-5);
    }

    #[test]
    fn digamma_spot_values() {
        assert_abs_diff_eq!(digamma(c(1.0, 0.0)).unwrap().re, -EULER_GAMMA, epsilon = 1e-14);
        assert_abs_diff_eq!(digamma(c(2.0, 0.0)).unwrap().re, 1.0 - EULER_GAMMA, epsilon = 1e-14);
        let gauss = -EULER_GAMMA - PI / 2.0 - 3.0 * 2f64.ln();
        let quarter = digamma(c(0.25, 0.0)).unwrap();
        assert_abs_diff_eq!(quarter.re, gauss, epsilon = 1e-13);
        assert_abs_diff_eq!(quarter.re, -4.2274535334, epsilon = 1e-9);
        assert_eq!(quarter.im, 0.0);

        // Leading asymptotic terms ln z - 1/(2z) - 1/(12 z²).
        let z = c(0.25, 7.0673626);
        let approx = z.ln() - 0.5 / z - 1.0 / (12.0 * z * z);
        let got = digamma(z).unwrap().re;
        assert_abs_diff_eq!(got, approx.re, epsilon = 1e-3);
        assert_abs_diff_eq!(got, 1.9553, epsilon = 1e-3);
    }

    #[test]
    fn arg_gamma_values() {
        assert_eq!(arg_gamma(c(0.75, 0.0)).unwrap(), 0.0);
        assert_abs_diff_eq!(arg_gamma(c(1.0, 1.0)).unwrap(), -0.30164, epsilon = 1e-5);
        for t in [0.3, 2.0, 17.5, 250.0] {
            let up = arg_gamma(c(0.75, t)).unwrap();
            let down = arg_gamma(c(0.75, -t)).unwrap();
            assert_abs_diff_eq!(up, -down, epsilon = 1e-12 * up.abs().max(1.0));
        }
    }

    #[test]
    fn poles_and_range_errors() {
        for re in [0.0, -1.0, -7.0] {
            assert_eq!(log_gamma(c(re, 0.0)), Err(Error::GammaPole(re)));
            assert_eq!(digamma(c(re, 0.0)), Err(Error::GammaPole(re)));
        }
        assert!(matches!(log_gamma(c(0.5, 2.0e4)), Err(Error::Overflow(_))));
        assert!(matches!(digamma(c(0.5, -1.5e4)), Err(Error::Overflow(_))));
        assert!(matches!(arg_gamma(c(0.0, 1.0)), Err(Error::Domain(_))));
        assert!(matches!(arg_gamma(c(-0.5, 1.0)), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(c(f64::NAN, 0.0)), Err(Error::NonFinite(_))));
    }

    #[test]
    fn left_half_plane_off_poles() {
        // Γ(-1/2) = -2√π; digamma(-1/2) = 2 - γ - 2 ln 2
        let lg = log_gamma(c(-0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(lg.re, (2.0 * PI.sqrt()).ln(), epsilon = 1e-13);
        assert_abs_diff_eq!(lg.im.abs(), PI, epsilon = 1e-13);
        let psi = digamma(c(-0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(psi.re, 2.0 - EULER_GAMMA - 2.0 * 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn phase_continuity_on_quarter_line() {
        let mut prev = arg_gamma(c(0.25, 0.0)).unwrap();
        for i in 1..=20_000 {
            let next = arg_gamma(c(0.25, i as f64 * 0.01)).unwrap();
            assert!((next - prev).abs() < PI / 2.0, "jump at Im z = {}", i as f64 * 0.01);
            prev = next;
        }
        // the continued phase grows without bound instead of staying in (-π, π]
        assert!(prev > 100.0);
    }
}
