//! Milne phase-amplitude function `n_M = 1/ρ²` of the Coulomb problem.
//!
//! The closed form uses the asymptotic pair `φ1 = sin θ`, `φ2 = cos θ` and
//! superposition constants fixed at `y0 = 1/(2k)`, where `ln(2ky)` vanishes:
//!
//! ```text
//! ρ² = (α φ1 + β φ2)² + φ2² / α²
//! α  = φ1(y0) = sin(θ0),   β = φ1'(y0) = k(1 - ε) cos(θ0)
//! ```
//!
//! An independent integrator for the Pinney equation `ρ'' + Qρ = c/ρ³`
//! is provided for cross-validation.

use crate::coulomb_wave::{theta, CoulombParams};
use crate::error::{domain, Error, Result};
use crate::ode::{integrate, Sampling, Tolerance};
use crate::par::{map_ordered, Execution};

/// `|α|` below this makes the closed form singular.
pub const ALPHA_FLOOR: f64 = 1e-12;

/// Pinney amplitudes below this are reported as a collapse.
pub const COLLAPSE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionConstants {
    pub alpha: f64,
    pub beta: f64,
}

/// One point of a Milne amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilneSample {
    pub y: f64,
    pub rho: f64,
    pub drho: f64,
    pub n_m: f64,
}

impl MilneSample {
    pub fn new(y: f64, rho: f64, drho: f64) -> Self {
        Self { y, rho, drho, n_m: 1.0 / (rho * rho) }
    }
}

/// Constants `(α, β)` of the closed form. `β` carries the factor `k`, which
/// is 1 in reduced units.
pub fn superposition_constants(p: &CoulombParams) -> Result<SuperpositionConstants> {
    let theta0 = 0.5 + p.coulomb_shift()?;
    let (s, c) = theta0.sin_cos();
    if s.abs() < ALPHA_FLOOR {
        return Err(Error::DegenerateAlpha { eps: p.eps(), alpha: s });
    }
    Ok(SuperpositionConstants { alpha: s, beta: p.k() * (1.0 - p.eps()) * c })
}

/// Closed-form amplitude with the ε-dependent pieces evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm {
    params: CoulombParams,
    consts: SuperpositionConstants,
    shift: f64,
}

impl ClosedForm {
    pub fn new(p: &CoulombParams) -> Result<Self> {
        Ok(Self { params: *p, consts: superposition_constants(p)?, shift: p.coulomb_shift()? })
    }

    pub fn constants(&self) -> SuperpositionConstants {
        self.consts
    }

    fn parts(&self, y: f64) -> Result<(f64, f64, f64)> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(domain(format!("y must be positive and finite, got {y}")));
        }
        let (phi1, phi2) = theta(y, &self.params, self.shift).sin_cos();
        let SuperpositionConstants { alpha, beta } = self.consts;
        Ok((alpha * phi1 + beta * phi2, phi2, phi1))
    }

    /// `n_M(y)`.
    pub fn density(&self, y: f64) -> Result<f64> {
        let (u, v, _) = self.parts(y)?;
        let a = self.consts.alpha;
        Ok(1.0 / (u * u + v * v / (a * a)))
    }

    /// `ρ`, `ρ'` and `n_M` at `y`.
    pub fn sample(&self, y: f64) -> Result<MilneSample> {
        let (u, v, phi1) = self.parts(y)?;
        let SuperpositionConstants { alpha, beta } = self.consts;
        let rate = self.params.k() - 0.5 * self.params.eps() / y;
        let du = (alpha * v - beta * phi1) * rate;
        let dv = -phi1 * rate;
        let a2 = alpha * alpha;
        let rho2 = u * u + v * v / a2;
        let rho = rho2.sqrt();
        Ok(MilneSample { y, rho, drho: (u * du + v * dv / a2) / rho, n_m: 1.0 / rho2 })
    }
}

/// `n_M(y, ε)` from the closed form.
pub fn milne_density(y: f64, p: &CoulombParams) -> Result<f64> {
    ClosedForm::new(p)?.density(y)
}

/// `ρ`, `ρ'`, `n_M` from the closed form.
pub fn milne_amplitude(y: f64, p: &CoulombParams) -> Result<MilneSample> {
    ClosedForm::new(p)?.sample(y)
}

/// Axis ranges and resolutions for [`milne_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub y_min: f64,
    pub y_max: f64,
    pub y_count: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    pub eps_count: usize,
}

impl Default for GridSpec {
    /// `[0.1, 10] × [0.1, 10]` on a 100 × 100 lattice.
    fn default() -> Self {
        Self { y_min: 0.1, y_max: 10.0, y_count: 100, eps_min: 0.1, eps_max: 10.0, eps_count: 100 }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let range_ok = |lo: f64, hi: f64| lo > 0.0 && hi > lo && hi.is_finite();
        if !range_ok(self.y_min, self.y_max) {
            return Err(domain(format!("bad y range [{}, {}]", self.y_min, self.y_max)));
        }
        if !range_ok(self.eps_min, self.eps_max) {
            return Err(domain(format!("bad eps range [{}, {}]", self.eps_min, self.eps_max)));
        }
        if self.y_count < 2 || self.eps_count < 2 {
            return Err(domain("grid counts must be at least 2"));
        }
        Ok(())
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }).collect()
}

/// `n_M` over a Cartesian `(ε, y)` lattice, one row per ε.
///
/// Rows whose ε makes `α` degenerate are left out of `eps_axis` and
/// `values` and listed in `skipped_eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct MilneGrid {
    pub y_axis: Vec<f64>,
    pub eps_axis: Vec<f64>,
    /// Row-major, `eps_axis.len() × y_axis.len()`.
    pub values: Vec<f64>,
    pub skipped_eps: Vec<f64>,
}

impl MilneGrid {
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.y_axis.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, &[f64])> + '_ {
        self.eps_axis.iter().copied().zip(self.values.chunks(self.y_axis.len()))
    }
}

pub fn milne_grid(spec: &GridSpec, k: f64) -> Result<MilneGrid> {
    milne_grid_with(spec, k, Execution::default())
}

pub fn milne_grid_with(spec: &GridSpec, k: f64, exec: Execution) -> Result<MilneGrid> {
    spec.validate()?;
    let y_axis = linspace(spec.y_min, spec.y_max, spec.y_count);
    let eps_all = linspace(spec.eps_min, spec.eps_max, spec.eps_count);

    let rows = map_ordered(&eps_all, exec, |&eps| -> Result<Option<Vec<f64>>> {
        let p = CoulombParams::new(eps, k)?;
        let form = match ClosedForm::new(&p) {
            Ok(f) => f,
            Err(Error::DegenerateAlpha { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        y_axis.iter().map(|&y| form.density(y)).collect::<Result<Vec<_>>>().map(Some)
    });

    let mut grid = MilneGrid {
        y_axis,
        eps_axis: Vec::with_capacity(eps_all.len()),
        values: Vec::with_capacity(eps_all.len() * spec.y_count),
        skipped_eps: Vec::new(),
    };
    for (eps, row) in eps_all.into_iter().zip(rows) {
        match row? {
            Some(values) => {
                grid.eps_axis.push(eps);
                grid.values.extend(values);
            }
            None => grid.skipped_eps.push(eps),
        }
    }
    Ok(grid)
}

/// `c = k²`, the Pinney constant matching the closed form's coefficients
/// `(1, 1/α²)` and the asymptotic Wronskian `-αk`.
pub fn default_pinney_constant(p: &CoulombParams) -> f64 {
    p.k() * p.k()
}

/// Integrate `ρ'' + Q(y)ρ = c/ρ³` forward from `start`.
pub fn integrate_pinney(
    p: &CoulombParams,
    q_const: f64,
    start: &MilneSample,
    y_end: f64,
    tol: Tolerance,
    sampling: Sampling<'_>,
) -> Result<Vec<MilneSample>> {
    if !(start.y > 0.0 && y_end > start.y && y_end.is_finite()) {
        return Err(domain(format!("need 0 < y0 < y_end, got [{}, {y_end}]", start.y)));
    }
    if !(start.rho > 0.0) {
        return Err(domain(format!("rho0 must be positive, got {}", start.rho)));
    }
    if !q_const.is_finite() {
        return Err(Error::NonFinite("q_const"));
    }
    let params = *p;
    let rhs = move |y: f64, u: &[f64; 2]| [u[1], -params.q(y) * u[0] + q_const / (u[0] * u[0] * u[0])];
    let guard = |y: f64, u: &[f64; 2]| {
        if u[0] < COLLAPSE_FLOOR {
            Err(Error::AmplitudeCollapse { y, rho: u[0] })
        } else {
            Ok(())
        }
    };
    let raw = integrate(rhs, start.y, [start.rho, start.drho], y_end, tol, sampling, guard)?;
    Ok(raw.into_iter().map(|(y, u)| MilneSample::new(y, u[0], u[1])).collect())
}

/// Pinney trajectory seeded from the closed form at `y0`, compared with the
/// closed form on `grid` (which must start at or after `y0`).
#[derive(Debug, Clone, PartialEq)]
pub struct PinneyComparison {
    pub y0: f64,
    /// `max |ρ_ode - ρ_closed| / ρ_closed` over the grid.
    pub max_relative_gap: f64,
    pub trajectory: Vec<MilneSample>,
    pub closed_form: Vec<MilneSample>,
}

pub fn compare_pinney_closed_form(
    p: &CoulombParams,
    q_const: f64,
    y0: f64,
    grid: &[f64],
    tol: Tolerance,
) -> Result<PinneyComparison> {
    let form = ClosedForm::new(p)?;
    let start = form.sample(y0)?;
    let y_end = *grid.last().ok_or_else(|| domain("empty comparison grid"))?;
    let trajectory = integrate_pinney(p, q_const, &start, y_end, tol, Sampling::Grid(grid))?;
    let closed_form = grid.iter().map(|&y| form.sample(y)).collect::<Result<Vec<_>>>()?;
    let max_relative_gap = trajectory
        .iter()
        .zip(&closed_form)
        .map(|(a, b)| ((a.rho - b.rho) / b.rho).abs())
        .fold(0.0, f64::max);
    Ok(PinneyComparison { y0, max_relative_gap, trajectory, closed_form })
}

/// Number of strict interior local maxima of a sampled sequence.
pub fn count_local_maxima(values: &[f64]) -> usize {
    values.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
}

/// Total phase travelled, `∫ |θ'(y)| dy`, on `[a, b]`.
///
/// `θ' = k - ε/(2y)` changes sign at `y* = ε/(2k)`, so the phase is
/// monotone on each side of it.
pub fn phase_variation(p: &CoulombParams, a: f64, b: f64) -> Result<f64> {
    let shift = p.coulomb_shift()?;
    if !(a > 0.0 && b > a) {
        return Err(domain(format!("bad interval [{a}, {b}]")));
    }
    let th = |y: f64| theta(y, p, shift);
    let turn = 0.5 * p.eps() / p.k();
    Ok(if turn > a && turn < b {
        (th(turn) - th(a)).abs() + (th(b) - th(turn)).abs()
    } else {
        (th(b) - th(a)).abs()
    })
}
