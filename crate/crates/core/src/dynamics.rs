//! Canonical form of the Coulomb equation with `y` as time:
//! `q' = p`, `p' = -Q(y) q`, and the Ermakov-Lewis invariant
//! `I = ½[c (q/ρ)² + (ρp - ρ'q)²]` built with a Pinney amplitude `ρ`.

use crate::coulomb_wave::CoulombParams;
use crate::error::{domain, Error, Result};
use crate::milne::{MilneSample, COLLAPSE_FLOOR};
use crate::ode::{integrate, Sampling, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub y: f64,
    pub q: f64,
    pub p: f64,
}

fn check_times(y0: f64, y_end: f64) -> Result<()> {
    if y0 > 0.0 && y_end > 0.0 && y_end.is_finite() && y0 != y_end {
        Ok(())
    } else {
        Err(domain(format!("need distinct positive times, got {y0} -> {y_end}")))
    }
}

/// Integrate the canonical flow from `initial` to `y_end`. Backward
/// integration (`y_end < initial.y`) is allowed.
pub fn hamiltonian_flow(
    initial: PhaseState,
    params: &CoulombParams,
    y_end: f64,
    tol: Tolerance,
    sampling: Sampling<'_>,
) -> Result<Vec<PhaseState>> {
    check_times(initial.y, y_end)?;
    let cp = *params;
    let rhs = move |y: f64, s: &[f64; 2]| [s[1], -cp.q(y) * s[0]];
    let raw = integrate(rhs, initial.y, [initial.q, initial.p], y_end, tol, sampling, |_, _| Ok(()))?;
    Ok(raw.into_iter().map(|(y, s)| PhaseState { y, q: s[0], p: s[1] }).collect())
}

/// Flow and Pinney amplitude advanced together as one system, so the
/// invariant can be evaluated on exactly matching times.
pub fn joint_flow(
    initial: PhaseState,
    amplitude: &MilneSample,
    params: &CoulombParams,
    q_const: f64,
    y_end: f64,
    tol: Tolerance,
    sampling: Sampling<'_>,
) -> Result<Vec<(PhaseState, MilneSample)>> {
    check_times(initial.y, y_end)?;
    if initial.y != amplitude.y {
        return Err(Error::AbscissaMismatch(initial.y, amplitude.y));
    }
    if !(amplitude.rho > 0.0) {
        return Err(domain(format!("rho must be positive, got {}", amplitude.rho)));
    }
    let cp = *params;
    let rhs = move |y: f64, s: &[f64; 4]| {
        let qy = cp.q(y);
        [s[1], -qy * s[0], s[3], -qy * s[2] + q_const / (s[2] * s[2] * s[2])]
    };
    let guard = |y: f64, s: &[f64; 4]| {
        if s[2] < COLLAPSE_FLOOR {
            Err(Error::AmplitudeCollapse { y, rho: s[2] })
        } else {
            Ok(())
        }
    };
    let start = [initial.q, initial.p, amplitude.rho, amplitude.drho];
    let raw = integrate(rhs, initial.y, start, y_end, tol, sampling, guard)?;
    Ok(raw
        .into_iter()
        .map(|(y, s)| (PhaseState { y, q: s[0], p: s[1] }, MilneSample::new(y, s[2], s[3])))
        .collect())
}

/// `I = ½[c (q/ρ)² + (ρp - ρ'q)²]`.
pub fn ermakov_lewis_invariant(state: &PhaseState, amp: &MilneSample, q_const: f64) -> Result<f64> {
    if (state.y - amp.y).abs() > 1e-12 * state.y.abs().max(1.0) {
        return Err(Error::AbscissaMismatch(state.y, amp.y));
    }
    if !(amp.rho > 0.0) {
        return Err(domain(format!("rho must be positive, got {}", amp.rho)));
    }
    let ratio = state.q / amp.rho;
    let cross = amp.rho * state.p - amp.drho * state.q;
    Ok(0.5 * (q_const * ratio * ratio + cross * cross))
}

/// `½p² + ½Q(y)q²`. Not conserved: `Q` depends on time.
pub fn instantaneous_energy(state: &PhaseState, params: &CoulombParams) -> f64 {
    0.5 * state.p * state.p + 0.5 * params.q(state.y) * state.q * state.q
}
