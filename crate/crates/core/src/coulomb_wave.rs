//! The repulsive Coulomb equation in the squared oscillator coordinate,
//!
//! ```text
//! φ'' + Q(y) φ = 0,   Q(y) = k² - kε/y - l(l+1)/y²
//! ```
//!
//! which for `l = -1/4` reads `Q(y) = k² - kε/y + 3/(16y²)`.

use crate::error::{domain, Error, Result};
use crate::ode::{integrate, Sampling, Tolerance};
use crate::specfun::{arg_gamma, Complex};
use std::f64::consts::PI;

/// Partial wave number of the inverted-oscillator construction.
pub const DEFAULT_PARTIAL_WAVE: f64 = -0.25;

/// Reduced parameters `(ε, k, l)` of the Coulomb problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombParams {
    eps: f64,
    k: f64,
    l_r: f64,
}

impl CoulombParams {
    pub fn new(eps: f64, k: f64) -> Result<Self> {
        if !eps.is_finite() {
            return Err(Error::NonFinite("eps"));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(domain(format!("k must be positive and finite, got {k}")));
        }
        Ok(Self { eps, k, l_r: DEFAULT_PARTIAL_WAVE })
    }

    /// `k = 1`, the reduced units used throughout.
    pub fn reduced(eps: f64) -> Result<Self> {
        Self::new(eps, 1.0)
    }

    /// Override the partial wave number. `l + 1 > 0` is required so that
    /// the Coulomb phase `arg Γ(l + 1 + iε/2)` is defined.
    pub fn with_partial_wave(mut self, l_r: f64) -> Result<Self> {
        if !(l_r.is_finite() && l_r + 1.0 > 0.0) {
            return Err(domain(format!("partial wave l = {l_r} must satisfy l + 1 > 0")));
        }
        self.l_r = l_r;
        Ok(self)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn l_r(&self) -> f64 {
        self.l_r
    }

    /// The y-independent part of the phase, `-lπ/2 + arg Γ(l + 1 + iε/2)`.
    pub fn coulomb_shift(&self) -> Result<f64> {
        Ok(-self.l_r * PI / 2.0 + arg_gamma(Complex::new(self.l_r + 1.0, 0.5 * self.eps))?)
    }

    /// `Q(y)` without the domain check; callers guarantee `y > 0`.
    pub(crate) fn q(&self, y: f64) -> f64 {
        self.k * self.k - self.k * self.eps / y - self.l_r * (self.l_r + 1.0) / (y * y)
    }
}

/// One point of a solution: position, value, derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSample {
    pub y: f64,
    pub phi: f64,
    pub dphi: f64,
}

/// Frobenius branch at the regular singular point `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `φ ~ y^{l+1}` (`y^{3/4}` for `l = -1/4`).
    Regular,
    /// `φ ~ y^{-l}` (`y^{1/4}` for `l = -1/4`).
    Singular,
}

impl Branch {
    pub fn exponent(self, p: &CoulombParams) -> f64 {
        match self {
            Branch::Regular => p.l_r + 1.0,
            Branch::Singular => -p.l_r,
        }
    }
}

fn check_y(y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("y must be positive and finite, got {y}")))
    }
}

pub fn effective_potential(y: f64, p: &CoulombParams) -> Result<f64> {
    check_y(y)?;
    Ok(p.q(y))
}

/// `θ(y) = ky - (ε/2) ln(2ky) - lπ/2 + arg Γ(l + 1 + iε/2)`.
pub fn phase_argument(y: f64, p: &CoulombParams) -> Result<f64> {
    check_y(y)?;
    Ok(theta(y, p, p.coulomb_shift()?))
}

pub(crate) fn theta(y: f64, p: &CoulombParams, shift: f64) -> f64 {
    p.k * y - 0.5 * p.eps * (2.0 * p.k * y).ln() + shift
}

/// `θ'(y) = k - ε/(2y)`.
pub fn phase_rate(y: f64, p: &CoulombParams) -> Result<f64> {
    check_y(y)?;
    Ok(p.k - 0.5 * p.eps / y)
}

/// `(φ1, φ2) = (sin θ, cos θ)`, the large-y Coulomb pair.
pub fn asymptotic_pair(y: f64, p: &CoulombParams) -> Result<(f64, f64)> {
    let th = phase_argument(y, p)?;
    Ok((th.sin(), th.cos()))
}

/// The asymptotic pair together with its analytic derivatives.
pub fn asymptotic_samples(y: f64, p: &CoulombParams) -> Result<(WaveSample, WaveSample)> {
    let th = phase_argument(y, p)?;
    let rate = p.k - 0.5 * p.eps / y;
    let (s, c) = th.sin_cos();
    Ok((
        WaveSample { y, phi: s, dphi: rate * c },
        WaveSample { y, phi: c, dphi: -rate * s },
    ))
}

/// `a.φ b.φ' - a.φ' b.φ`.
pub fn wronskian(a: &WaveSample, b: &WaveSample) -> Result<f64> {
    if a.y != b.y {
        return Err(Error::AbscissaMismatch(a.y, b.y));
    }
    Ok(a.phi * b.dphi - a.dphi * b.phi)
}

const MAX_SERIES_TERMS: usize = 2000;

/// Evaluate the Frobenius solution `y^s Σ c_n y^n` (with `c_0 = 1`) at `y`.
///
/// The series is summed until it converges. The start is rejected when the
/// partial sums cancel so strongly that `tol` cannot be met.
pub fn frobenius_start(p: &CoulombParams, branch: Branch, y: f64, tol: Tolerance) -> Result<WaveSample> {
    check_y(y)?;
    tol.validate()?;
    let s = branch.exponent(p);
    let (ke, k2) = (p.k * p.eps, p.k * p.k);

    // work with a_n = c_n y^n so nothing overflows
    let (mut a_prev2, mut a_prev) = (0.0, 1.0);
    let (mut sum, mut dsum) = (1.0_f64, s);
    let mut largest = 1.0_f64;
    let mut quiet = 0;
    for n in 1..=MAX_SERIES_TERMS {
        let nf = n as f64;
        let denom = nf * (nf + 2.0 * s - 1.0);
        if denom == 0.0 {
            return Err(domain(format!(
                "Frobenius recurrence for exponent {s} is singular at order {n}"
            )));
        }
        let a = (ke * y * a_prev - k2 * y * y * a_prev2) / denom;
        sum += a;
        dsum += (nf + s) * a;
        largest = largest.max(a.abs()).max((nf + s) * a.abs());
        if a.abs() <= 1e-18 * sum.abs() && a_prev.abs() <= 1e-18 * sum.abs().max(1e-300) {
            quiet += 1;
            if quiet >= 2 {
                let loss = largest * f64::EPSILON / sum.abs().min(dsum.abs()).max(1e-300);
                if loss > tol.rtol {
                    return Err(Error::Tolerance(format!(
                        "Frobenius series at y = {y} loses {loss:e} relative accuracy to cancellation"
                    )));
                }
                let ys = y.powf(s);
                return Ok(WaveSample { y, phi: ys * sum, dphi: ys * dsum / y });
            }
        } else {
            quiet = 0;
        }
        a_prev2 = a_prev;
        a_prev = a;
    }
    Err(Error::Tolerance(format!("Frobenius series did not converge at y = {y}")))
}

/// Integrate from arbitrary initial data `start` to `y_end` (either side).
pub fn propagate(
    p: &CoulombParams,
    start: WaveSample,
    y_end: f64,
    tol: Tolerance,
    sampling: Sampling<'_>,
) -> Result<Vec<WaveSample>> {
    check_y(start.y)?;
    check_y(y_end)?;
    let params = *p;
    let rhs = move |y: f64, u: &[f64; 2]| [u[1], -params.q(y) * u[0]];
    let raw = integrate(rhs, start.y, [start.phi, start.dphi], y_end, tol, sampling, |_, _| Ok(()))?;
    Ok(raw.into_iter().map(|(y, u)| WaveSample { y, phi: u[0], dphi: u[1] }).collect())
}

/// Solve the equation on `[y_start, y_end]` starting from a Frobenius branch.
pub fn integrate_schrodinger(
    p: &CoulombParams,
    y_start: f64,
    y_end: f64,
    branch: Branch,
    tol: Tolerance,
    sampling: Sampling<'_>,
) -> Result<Vec<WaveSample>> {
    check_y(y_start)?;
    if !(y_end > y_start && y_end.is_finite()) {
        return Err(domain(format!("need 0 < y_start < y_end, got [{y_start}, {y_end}]")));
    }
    let start = frobenius_start(p, branch, y_start, tol)?;
    propagate(p, start, y_end, tol, sampling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::arg_gamma;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params(eps: f64, k: f64) -> CoulombParams {
        CoulombParams::new(eps, k).unwrap()
    }

    #[test]
    fn construction() {
        let p = params(1.0, 1.0);
        assert_eq!(p.l_r(), -0.25);
        assert!(CoulombParams::new(1.0, 0.0).is_err());
        assert!(CoulombParams::new(1.0, -2.0).is_err());
        assert!(CoulombParams::new(f64::NAN, 1.0).is_err());
        assert!(p.with_partial_wave(-1.0).is_err());
        assert_eq!(p.with_partial_wave(0.0).unwrap().l_r(), 0.0);
    }

    #[test]
    fn potential_values() {
        let p = params(1.0, 1.0);
        assert_abs_diff_eq!(effective_potential(1.0, &p).unwrap(), 0.1875, epsilon = 1e-15);
        assert_abs_diff_eq!(effective_potential(0.25, &p).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(effective_potential(0.75, &p).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(effective_potential(1e9, &p).unwrap(), 1.0, epsilon = 1e-8);
        let p2 = params(3.0, 2.0);
        let y = 1.7;
        assert_abs_diff_eq!(
            effective_potential(y, &p2).unwrap(),
            4.0 - 6.0 / y + 3.0 / (16.0 * y * y),
            epsilon = 1e-14
        );
        assert!(effective_potential(0.0, &p).is_err());
        assert!(effective_potential(-1.0, &p).is_err());
    }

    #[test]
    fn phase_values() {
        for eps in [0.0, 0.7, 4.0] {
            let p = params(eps, 1.0);
            let expect = 0.5 + PI / 8.0 + arg_gamma(Complex::new(0.75, eps / 2.0)).unwrap();
            assert_abs_diff_eq!(phase_argument(0.5, &p).unwrap(), expect, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(phase_argument(1.0, &params(0.0, 1.0)).unwrap(), 1.3926991, epsilon = 1e-7);
        assert!(phase_argument(0.0, &params(1.0, 1.0)).is_err());
    }

    #[test]
    fn phase_rate_matches_finite_differences() {
        let h = 1e-6;
        for (eps, k) in [(0.5, 1.0), (3.0, 1.0), (7.0, 0.6)] {
            let p = params(eps, k);
            for y in [0.2, 1.0, 3.3, 9.0] {
                let fd = (phase_argument(y + h, &p).unwrap() - phase_argument(y - h, &p).unwrap()) / (2.0 * h);
                assert_abs_diff_eq!(fd, phase_rate(y, &p).unwrap(), epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn asymptotic_pair_values() {
        let (s, c) = asymptotic_pair(1.0, &params(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(s, 0.98419, epsilon = 1e-4);
        assert_abs_diff_eq!(c, 0.17716, epsilon = 1e-4);
        for (y, eps) in [(0.3, 0.2), (2.0, 5.0), (8.0, 9.9)] {
            let (a, b) = asymptotic_pair(y, &params(eps, 1.3)).unwrap();
            assert_abs_diff_eq!(a * a + b * b, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn asymptotic_wronskian_is_minus_phase_rate() {
        let p = params(2.5, 1.4);
        let mut values = Vec::new();
        for i in 1..=100 {
            let y = 0.1 * i as f64;
            let (a, b) = asymptotic_samples(y, &p).unwrap();
            let w = wronskian(&a, &b).unwrap();
            assert_abs_diff_eq!(w, -(p.k() - p.eps() / (2.0 * y)), epsilon = 1e-10);
            values.push(w);
        }
        let spread = values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 1.0, "asymptotic pair must not look like an exact solution pair");
    }

    #[test]
    fn wronskian_basics() {
        let a = WaveSample { y: 1.0, phi: 0.3, dphi: -2.0 };
        assert_eq!(wronskian(&a, &a).unwrap(), 0.0);
        let b = WaveSample { y: 1.5, ..a };
        assert_eq!(wronskian(&a, &b), Err(Error::AbscissaMismatch(1.0, 1.5)));
    }

    #[test]
    fn indicial_exponents() {
        let p = params(1.0, 1.0);
        for branch in [Branch::Regular, Branch::Singular] {
            let s = branch.exponent(&p);
            assert_abs_diff_eq!(s * (s - 1.0) + 3.0 / 16.0, 0.0, epsilon = 1e-15);
        }
        assert_eq!(Branch::Regular.exponent(&p), 0.75);
        assert_eq!(Branch::Singular.exponent(&p), 0.25);
    }

    #[test]
    fn frobenius_start_leading_behaviour() {
        let p = params(2.0, 1.0);
        let y = 1e-6;
        let reg = frobenius_start(&p, Branch::Regular, y, Tolerance::default()).unwrap();
        assert_relative_eq!(reg.phi, y.powf(0.75) * (1.0 + 2.0 * y / 1.5), max_relative = 1e-11);
        let sing = frobenius_start(&p, Branch::Singular, y, Tolerance::default()).unwrap();
        assert_relative_eq!(sing.dphi, 0.25 * y.powf(-0.75) * (1.0 + 5.0 * 2.0 * y / 0.5), max_relative = 1e-9);
        // W = (3/4 - 1/4) ... with sign: φ_r φ_s' - φ_r' φ_s → 1/4 - 3/4
        assert_relative_eq!(wronskian(&reg, &sing).unwrap(), -0.5, max_relative = 1e-9);
    }

    #[test]
    fn frobenius_start_rejects_far_points() {
        let p = params(10.0, 2.0);
        let res = frobenius_start(&p, Branch::Singular, 40.0, Tolerance::new(1e-12));
        assert!(matches!(res, Err(Error::Tolerance(_))));
        // integer exponent gap makes the second series undefined
        let p0 = params(0.0, 1.0).with_partial_wave(0.0).unwrap();
        assert!(frobenius_start(&p0, Branch::Singular, 1e-3, Tolerance::default()).is_err());
    }

    #[test]
    fn bad_intervals() {
        let p = params(1.0, 1.0);
        let tol = Tolerance::default();
        assert!(integrate_schrodinger(&p, 0.0, 1.0, Branch::Regular, tol, Sampling::Steps).is_err());
        assert!(integrate_schrodinger(&p, 2.0, 1.0, Branch::Regular, tol, Sampling::Steps).is_err());
        assert!(integrate_schrodinger(&p, 1e-3, 1.0, Branch::Regular, Tolerance::new(0.0), Sampling::Steps).is_err());
    }

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn branch_wronskian_constant_for_moderate_eps() {
        let ys = grid(0.1, 10.0, 100);
        for (eps, k) in [(0.1, 1.0), (1.0, 0.5), (2.5, 1.7), (4.0, 1.0), (5.0, 2.0)] {
            let p = params(eps, k);
            let tol = Tolerance::new(1e-12);
            let reg = integrate_schrodinger(&p, 1e-3, 10.0, Branch::Regular, tol, Sampling::Grid(&ys)).unwrap();
            let sing = integrate_schrodinger(&p, 1e-3, 10.0, Branch::Singular, tol, Sampling::Grid(&ys)).unwrap();
            for (a, b) in reg.iter().zip(&sing) {
                assert_relative_eq!(wronskian(a, b).unwrap(), -0.5, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn samples_satisfy_the_equation() {
        let p = params(3.0, 1.0);
        let h = 1e-3;
        let ys = grid(0.1, 10.0, 9901);
        let sol = integrate_schrodinger(&p, 1e-3, 10.0, Branch::Regular, Tolerance::default(), Sampling::Grid(&ys)).unwrap();
        let scale = sol.iter().map(|s| (p.q(s.y) * s.phi).abs()).fold(0.0, f64::max);
        for w in sol.windows(3) {
            let second = (w[2].dphi - w[0].dphi) / (2.0 * h);
            let residual = second + p.q(w[1].y) * w[1].phi;
            assert!(residual.abs() < 1e-4 * scale, "residual {residual} at y = {}", w[1].y);
            // dphi is the derivative of phi
            let first = (w[2].phi - w[0].phi) / (2.0 * h);
            assert!((first - w[1].dphi).abs() < 1e-4 * scale);
        }
    }

    #[test]
    fn step_sampling_starts_at_frobenius_point() {
        let p = params(1.0, 1.0);
        let sol = integrate_schrodinger(&p, 1e-3, 2.0, Branch::Singular, Tolerance::default(), Sampling::Steps).unwrap();
        assert_eq!(sol[0].y, 1e-3);
        assert_eq!(sol.last().unwrap().y, 2.0);
        assert!(sol.windows(2).all(|w| w[0].y < w[1].y));
    }

    #[test]
    fn large_y_amplitude_settles() {
        let p = params(1.0, 1.0);
        let ys = [50.0, 100.0];
        let sol = integrate_schrodinger(&p, 1e-3, 100.0, Branch::Regular, Tolerance::new(1e-11), Sampling::Grid(&ys)).unwrap();
        let amp = |s: &WaveSample| {
            let rate = phase_rate(s.y, &p).unwrap();
            (s.phi * s.phi + (s.dphi / rate).powi(2)).sqrt()
        };
        let (a50, a100) = (amp(&sol[0]), amp(&sol[1]));
        assert!(((a100 - a50) / a50).abs() < 1e-2, "{a50} vs {a100}");
    }
}
