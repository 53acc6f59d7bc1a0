//! Densities of critical-line zeta zeros and of the repulsive Coulomb
//! problem with partial wave `l = -1/4`.
//!
//! * `n_Z(ε) = -ln π / 2π + Re Ψ(1/4 + iε/2) / 2π`
//! * `n_C(ε) = -F'(ε) / 2π + Re Ψ(1/4 + iε/2) / 2π`, with
//!   `F(ε) = π/2 - atan(cosech πε)`
//!
//! The two curves differ by `ln π / 2π - sech(πε) / 2`: a constant shift
//! plus an exponentially small term.

use crate::error::{domain, Error, Result};
use crate::par::{map_ordered, Execution};
use crate::specfun::{digamma, log_gamma, Complex};
use std::f64::consts::PI;

/// `ln π / 2π`, the limit of the density gap as ε → ∞.
pub const LN_PI_OVER_TWO_PI: f64 = 0.182_189_419_837_953_13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    Zeta,
    Coulomb,
    Milne,
    /// Sliding-window counts of actual zeros.
    ZetaEmpirical,
}

/// A density sampled on a strictly increasing abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    epsilons: Vec<f64>,
    values: Vec<f64>,
    kind: DensityKind,
}

impl DensityCurve {
    pub fn new(kind: DensityKind, epsilons: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if epsilons.len() != values.len() {
            return Err(domain(format!(
                "{} abscissae but {} values",
                epsilons.len(),
                values.len()
            )));
        }
        if epsilons.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(domain("density abscissae must be strictly increasing"));
        }
        Ok(Self { epsilons, values, kind })
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.epsilons.iter().copied().zip(self.values.iter().copied())
    }
}

fn check_finite(eps: f64) -> Result<()> {
    if eps.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("eps"))
    }
}

fn check_positive(eps: f64) -> Result<()> {
    check_finite(eps)?;
    if eps > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("eps must be positive, got {eps}")))
    }
}

fn re_digamma_quarter(eps: f64) -> Result<f64> {
    Ok(digamma(Complex::new(0.25, 0.5 * eps))?.re)
}

/// `n_Z(ε)`; negative for small ε.
pub fn riemann_zero_density(eps: f64) -> Result<f64> {
    check_finite(eps)?;
    Ok(-LN_PI_OVER_TWO_PI + re_digamma_quarter(eps)? / (2.0 * PI))
}

/// `F(ε) = π/2 - atan(cosech πε)`, increasing from 0 to π/2.
pub fn coulomb_phase_function(eps: f64) -> Result<f64> {
    check_positive(eps)?;
    let cosech = 1.0 / (PI * eps).sinh();
    Ok(PI / 2.0 - cosech.atan())
}

/// `F'(ε) = π sech(πε)`.
pub fn coulomb_phase_derivative(eps: f64) -> Result<f64> {
    check_positive(eps)?;
    Ok(PI / (PI * eps).cosh())
}

/// `n_C(ε)`.
pub fn coulomb_density(eps: f64) -> Result<f64> {
    let fp = coulomb_phase_derivative(eps)?;
    Ok((re_digamma_quarter(eps)? - fp) / (2.0 * PI))
}

/// `n_C(ε) - n_Z(ε)`, which equals `ln π / 2π - sech(πε) / 2`.
pub fn density_gap(eps: f64) -> Result<f64> {
    Ok(coulomb_density(eps)? - riemann_zero_density(eps)?)
}

/// Smooth zero-counting function whose derivative is exactly `n_Z`:
/// `Im log Γ(1/4 + iT/2) / π - T ln π / 2π + 1`.
pub fn smooth_zero_count(t: f64) -> Result<f64> {
    check_finite(t)?;
    let phase = log_gamma(Complex::new(0.25, 0.5 * t))?.im;
    Ok(phase / PI - t * PI.ln() / (2.0 * PI) + 1.0)
}

/// Evaluate one of the analytic densities on `epsilons`.
pub fn density_curve(kind: DensityKind, epsilons: &[f64], exec: Execution) -> Result<DensityCurve> {
    let f: fn(f64) -> Result<f64> = match kind {
        DensityKind::Zeta => riemann_zero_density,
        DensityKind::Coulomb => coulomb_density,
        DensityKind::Milne | DensityKind::ZetaEmpirical => {
            return Err(domain(format!("{kind:?} is not a closed-form density of ε")))
        }
    };
    let values = map_ordered(epsilons, exec, |&e| f(e)).into_iter().collect::<Result<Vec<_>>>()?;
    DensityCurve::new(kind, epsilons.to_vec(), values)
}
