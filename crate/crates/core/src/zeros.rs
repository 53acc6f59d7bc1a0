//! Ordinates of critical-line zeta zeros: text-table ingestion and a
//! sign-change scan of the Riemann-Siegel `Z` function.
//!
//! `ζ(1/2 + it)` is obtained from the alternating Dirichlet eta series with
//! Borwein's convergence acceleration:
//!
//! ```text
//! η(s) ≈ Σ_{k<n} (-1)^k (1 - d_k/d_n) (k+1)^{-s},
//! d_k = n Σ_{i≤k} (n+i-1)! 4^i / ((n-i)! (2i)!)
//! ```
//!
//! whose error decays like `(3 + √8)^{-n}` against a growth of roughly
//! `e^{π|t|}` on the critical line, so `n ≈ 1.8|t| + 30` suffices.

use crate::error::{domain, Error, Result};
use crate::par::{map_ordered, Execution};
use crate::specfun::{arg_gamma, Complex};
use crate::zero_density::{DensityCurve, DensityKind};
use std::f64::consts::{LN_2, PI};
use std::io::{BufRead, Write};

/// Largest height accepted by [`scan_zeros`].
pub const MAX_SCAN_HEIGHT: f64 = 200.0;
/// Largest `|t|` accepted by [`riemann_siegel_z`].
pub const MAX_Z_HEIGHT: f64 = 250.0;
const MAX_GRID_STEP: f64 = 0.05;
const BISECTION_WIDTH: f64 = 1e-9;

/// Strictly increasing zero ordinates, all greater than 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
}

impl ZeroTable {
    pub fn new(ordinates: Vec<f64>) -> Result<Self> {
        let mut previous: Option<f64> = None;
        for (i, &t) in ordinates.iter().enumerate() {
            check_ordinate(t, i + 1, previous)?;
            previous = Some(t);
        }
        Ok(Self { ordinates })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Number of ordinates `<= t`.
    pub fn count_below(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&x| x <= t)
    }

    /// Number of ordinates in the closed interval `[a, b]`.
    pub fn count_between(&self, a: f64, b: f64) -> usize {
        self.count_below(b) - self.ordinates.partition_point(|&x| x < a)
    }
}

fn check_ordinate(t: f64, line: usize, previous: Option<f64>) -> Result<()> {
    if !t.is_finite() || t <= 1.0 {
        return Err(Error::OrdinateRange(t));
    }
    if let Some(prev) = previous {
        if t <= prev {
            return Err(Error::NotIncreasing { line, value: t, previous: prev });
        }
    }
    Ok(())
}

/// Parse one decimal ordinate per line; `#` lines and blank lines are skipped.
pub fn load_zero_table<R: BufRead>(source: R) -> Result<ZeroTable> {
    let mut ordinates = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let t: f64 = text
            .parse()
            .map_err(|_| Error::Parse { line: idx + 1, text: text.to_string() })?;
        check_ordinate(t, idx + 1, ordinates.last().copied())?;
        ordinates.push(t);
    }
    Ok(ZeroTable { ordinates })
}

/// Write a table in the format read by [`load_zero_table`].
pub fn write_zero_table<W: Write>(table: &ZeroTable, mut sink: W) -> Result<()> {
    for t in &table.ordinates {
        writeln!(sink, "{t}")?;
    }
    Ok(())
}

/// Borwein-accelerated eta series with precomputed weights.
#[derive(Debug, Clone)]
pub struct EtaSeries {
    weights: Vec<f64>,
    log_index: Vec<f64>,
    inv_sqrt: Vec<f64>,
}

impl EtaSeries {
    /// Series accurate on `|t| <= height`.
    pub fn for_height(height: f64) -> Self {
        Self::with_terms((1.8 * height.abs()).ceil() as usize + 30)
    }

    pub fn with_terms(n: usize) -> Self {
        let n = n.max(20);
        let nf = n as f64;
        // log of the summands of d_n, via their ratios
        let mut logs = Vec::with_capacity(n + 1);
        let mut acc = 0.0f64;
        logs.push(acc);
        for i in 0..n {
            let fi = i as f64;
            acc += (4.0 * (nf + fi) * (nf - fi)).ln() - ((2.0 * fi + 1.0) * (2.0 * fi + 2.0)).ln();
            logs.push(acc);
        }
        let top = logs.iter().cloned().fold(f64::MIN, f64::max);
        let terms: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = terms.iter().sum();
        // 1 - d_k/d_n as a suffix sum, free of cancellation
        let mut weights = vec![0.0; n];
        let mut suffix = 0.0;
        for k in (0..n).rev() {
            suffix += terms[k + 1];
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            weights[k] = sign * suffix / total;
        }
        let log_index = (1..=n).map(|k| (k as f64).ln()).collect();
        let inv_sqrt = (1..=n).map(|k| 1.0 / (k as f64).sqrt()).collect();
        Self { weights, log_index, inv_sqrt }
    }

    pub fn terms(&self) -> usize {
        self.weights.len()
    }

    /// `η(1/2 + it)`.
    pub fn eta_critical(&self, t: f64) -> Complex {
        let mut sum = Complex::new(0.0, 0.0);
        for ((w, l), r) in self.weights.iter().zip(&self.log_index).zip(&self.inv_sqrt) {
            let (s, c) = (t * l).sin_cos();
            sum += Complex::new(c, -s) * (w * r);
        }
        sum
    }

    /// `ζ(1/2 + it)`.
    pub fn zeta_critical(&self, t: f64) -> Complex {
        // 1 - 2^{1-s} with s = 1/2 + it
        let (s, c) = (t * LN_2).sin_cos();
        let denom = Complex::new(1.0 - 2f64.sqrt() * c, 2f64.sqrt() * s);
        self.eta_critical(t) / denom
    }

    /// `Z(t) = e^{iθ(t)} ζ(1/2 + it)`.
    pub fn z(&self, t: f64) -> Result<f64> {
        let theta = riemann_siegel_theta(t)?;
        let rotated = Complex::from_polar(1.0, theta) * self.zeta_critical(t);
        Ok(rotated.re)
    }
}

/// `θ(t) = arg Γ(1/4 + it/2) - (t/2) ln π`.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    Ok(arg_gamma(Complex::new(0.25, 0.5 * t))? - 0.5 * t * PI.ln())
}

/// Hardy's function `Z(t)`, real for real `t`.
pub fn riemann_siegel_z(t: f64) -> Result<f64> {
    if !(t.abs() <= MAX_Z_HEIGHT) {
        return Err(domain(format!("|t| = {t} is outside [0, {MAX_Z_HEIGHT}]")));
    }
    EtaSeries::for_height(t).z(t)
}

/// Locate zeros on the critical line up to `t_max` as sign changes of `Z`
/// on a grid of spacing `grid_step`, each refined by bisection.
pub fn scan_zeros(t_max: f64, grid_step: f64) -> Result<ZeroTable> {
    scan_zeros_with(t_max, grid_step, Execution::default())
}

pub fn scan_zeros_with(t_max: f64, grid_step: f64, exec: Execution) -> Result<ZeroTable> {
    if !(10.0..=MAX_SCAN_HEIGHT).contains(&t_max) {
        return Err(domain(format!("T_max = {t_max} is outside [10, {MAX_SCAN_HEIGHT}]")));
    }
    if !(grid_step > 0.0 && grid_step <= MAX_GRID_STEP) {
        return Err(domain(format!("grid step {grid_step} must lie in (0, {MAX_GRID_STEP}]")));
    }
    let series = EtaSeries::for_height(t_max);
    let count = (t_max / grid_step).floor() as usize;
    let mut ts: Vec<f64> = (1..=count).map(|i| i as f64 * grid_step).collect();
    if ts.last().is_some_and(|&t| t < t_max) {
        ts.push(t_max);
    }
    let zs = map_ordered(&ts, exec, |&t| series.z(t)).into_iter().collect::<Result<Vec<_>>>()?;

    let brackets: Vec<(f64, f64, f64)> = (0..ts.len() - 1)
        .filter(|&i| zs[i] != 0.0 && zs[i] * zs[i + 1] <= 0.0)
        .map(|i| (ts[i], ts[i + 1], zs[i]))
        .collect();
    let roots = map_ordered(&brackets, exec, |&(a, b, za)| bisect(&series, a, b, za));
    let ordinates = roots.into_iter().collect::<Result<Vec<_>>>()?;
    ZeroTable::new(ordinates)
}

fn bisect(series: &EtaSeries, mut a: f64, mut b: f64, za: f64) -> Result<f64> {
    let sign_a = za.signum();
    while b - a > BISECTION_WIDTH {
        let mid = 0.5 * (a + b);
        let zm = series.z(mid)?;
        if zm == 0.0 {
            return Ok(mid);
        }
        if zm.signum() == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Centered sliding-window density: at each ordinate `t`, the number of
/// ordinates in `[t - w/2, t + w/2]` divided by `w`.
pub fn empirical_density(table: &ZeroTable, window: f64) -> Result<DensityCurve> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    if !(window > 0.0 && window.is_finite()) {
        return Err(domain(format!("window must be positive, got {window}")));
    }
    let half = 0.5 * window;
    let values = table
        .ordinates
        .iter()
        .map(|&t| table.count_between(t - half, t + half) as f64 / window)
        .collect();
    DensityCurve::new(DensityKind::ZetaEmpirical, table.ordinates.clone(), values)
}
