//! Adaptive Dormand-Prince 5(4) integration for small fixed-size systems.
//!
//! Output is either every accepted step or a caller grid. Grid points are
//! hit exactly by shortening the step that would cross them, so sampled
//! values carry no interpolation error.

use crate::error::{Error, Result};

/// Local error tolerance for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Tolerance {
    /// Same relative and absolute tolerance.
    pub fn new(tol: f64) -> Self {
        Self { rtol: tol, atol: tol }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.rtol.is_finite()
            && self.atol.is_finite()
            && self.atol >= 0.0
            && self.rtol >= 10.0 * f64::EPSILON;
        if ok {
            Ok(())
        } else {
            Err(Error::Tolerance(format!(
                "rtol = {:e}, atol = {:e} cannot be met in double precision",
                self.rtol, self.atol
            )))
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-10)
    }
}

/// Which abscissae an integration reports.
#[derive(Debug, Clone, Copy)]
pub enum Sampling<'a> {
    /// The initial point and every accepted step.
    Steps,
    /// Exactly these abscissae, ordered along the direction of integration
    /// and contained in the integration interval.
    Grid(&'a [f64]),
}

const MAX_STEPS: usize = 2_000_000;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (w, k) in terms {
            acc += w * k[i];
        }
        *o += h * acc;
    }
    out
}

fn scaled_norm<const N: usize>(v: &[f64; N], a: &[f64; N], b: &[f64; N], tol: Tolerance) -> f64 {
    let mut sum = 0.0;
    for i in 0..N {
        let sc = tol.atol + tol.rtol * a[i].abs().max(b[i].abs());
        let r = v[i] / sc;
        sum += r * r;
    }
    (sum / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(rhs: &F, t0: f64, y0: &[f64; N], f0: &[f64; N], span: f64, tol: Tolerance) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let dir = span.signum();
    let d0 = scaled_norm(y0, y0, y0, tol);
    let d1 = scaled_norm(f0, y0, y0, tol);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span.abs());
    let y1 = combine(y0, dir * h0, &[(1.0, f0)]);
    let f1 = rhs(t0 + dir * h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = scaled_norm(&diff, y0, y0, tol) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span.abs())
}

/// Integrate `y' = rhs(t, y)` from `t0` to `t_end` (either direction).
///
/// `check` is called on every accepted state and may abort the run.
pub(crate) fn integrate<const N: usize, F, G>(
    rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: Tolerance,
    sampling: Sampling<'_>,
    mut check: G,
) -> Result<Vec<(f64, [f64; N])>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    G: FnMut(f64, &[f64; N]) -> Result<()>,
{
    tol.validate()?;
    if !t0.is_finite() || !t_end.is_finite() || t0 == t_end {
        return Err(Error::Domain(format!("empty or non-finite interval [{t0}, {t_end}]")));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial state"));
    }
    let dir = (t_end - t0).signum();
    let ahead = |a: f64, b: f64| dir * (b - a) > 0.0;

    let targets: Vec<f64> = match sampling {
        Sampling::Steps => Vec::new(),
        Sampling::Grid(g) => {
            for w in g.windows(2) {
                if !ahead(w[0], w[1]) {
                    return Err(Error::Domain("output grid must be strictly ordered along the integration".into()));
                }
            }
            if let (Some(&first), Some(&last)) = (g.first(), g.last()) {
                if ahead(first, t0) || ahead(t_end, last) {
                    return Err(Error::Domain(format!(
                        "output grid [{first}, {last}] leaves the interval [{t0}, {t_end}]"
                    )));
                }
            }
            g.to_vec()
        }
    };
    let record_steps = matches!(sampling, Sampling::Steps);

    check(t0, &y0)?;
    let mut out = Vec::new();
    let mut next_target = 0;
    if record_steps {
        out.push((t0, y0));
    }
    while next_target < targets.len() && targets[next_target] == t0 {
        out.push((t0, y0));
        next_target += 1;
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    let mut h = initial_step(&rhs, t0, &y0, &k1, t_end - t0, tol);
    let mut last_rejected = false;
    let mut steps = 0usize;

    while ahead(t, t_end) {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Tolerance(format!("step budget exhausted at t = {t}")));
        }
        if h < 16.0 * f64::EPSILON * t.abs().max(1e-300) {
            return Err(Error::Tolerance(format!("step size underflow at t = {t}")));
        }

        // land exactly on the next output abscissa or the end point
        let stop = if next_target < targets.len() { targets[next_target] } else { t_end };
        let mut hs = h;
        let mut landing = false;
        if !ahead(t + dir * hs, stop) {
            hs = (stop - t).abs();
            landing = true;
        }
        let hd = dir * hs;

        let k2 = rhs(t + C2 * hd, &combine(&y, hd, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * hd, &combine(&y, hd, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * hd, &combine(&y, hd, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * hd,
            &combine(&y, hd, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + hd,
            &combine(&y, hd, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = combine(&y, hd, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = rhs(t + hd, &y_new);

        let mut err_vec = [0.0; N];
        for i in 0..N {
            err_vec[i] = hd * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = scaled_norm(&err_vec, &y, &y_new, tol);
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            if hs < 16.0 * f64::EPSILON * t.abs().max(1e-300) {
                return Err(Error::NonFinite("integrator state"));
            }
            h = 0.2 * hs;
            last_rejected = true;
            continue;
        }

        if err <= 1.0 {
            t = if landing { stop } else { t + hd };
            y = y_new;
            k1 = k7;
            check(t, &y)?;
            if record_steps {
                out.push((t, y));
            } else if landing && next_target < targets.len() && t == targets[next_target] {
                out.push((t, y));
                next_target += 1;
            }
            let mut fac = 0.9 * err.max(1e-10).powf(-0.2);
            fac = fac.clamp(0.2, 10.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            // a clipped landing step says nothing about the natural step size
            h = if landing { h.max(hs * fac) } else { hs * fac };
            last_rejected = false;
        } else {
            h = hs * (0.9 * err.powf(-0.2)).max(0.2);
            last_rejected = true;
        }
    }
    Ok(out)
}
