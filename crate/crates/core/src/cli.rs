//! Command-line front end. Every command writes delimited text with a header
//! line, either to `--out` or to standard output.
//!
//! Exit codes: 0 success, 1 computation error, 2 usage error.

use crate::coulomb_wave::CoulombParams;
use crate::dynamics::{ermakov_lewis_invariant, instantaneous_energy, joint_flow, PhaseState};
use crate::error::{Error, Result};
use crate::milne::{compare_pinney_closed_form, default_pinney_constant, linspace, milne_grid_with, ClosedForm, GridSpec, MilneGrid};
use crate::ode::{Sampling, Tolerance};
use crate::par::Execution;
use crate::zero_density::{coulomb_density, density_gap, riemann_zero_density, smooth_zero_count};
use crate::zeros::{load_zero_table, scan_zeros_with, write_zero_table, ZeroTable};
use clap::{Args, Parser, Subcommand};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "milne-zeta", version, about = "Zeta-zero densities and the Milne function of the l = -1/4 Coulomb problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate n_Z, n_C and their gap over a range of eps.
    Density(DensityArgs),
    /// Evaluate n_M on a (y, eps) lattice in long format.
    MilneGrid(GridArgs),
    /// Compare the smooth zero count with actual zeros of zeta.
    CompareZeros(CompareArgs),
    /// Pinney trajectories seeded from the closed form versus the closed form.
    PinneyCheck(PinneyArgs),
    /// Canonical flow with its Pinney amplitude and Ermakov-Lewis invariant.
    DynamicsDemo(DemoArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long, default_value_t = 0.1)]
    eps_min: f64,
    #[arg(long, default_value_t = 10.0)]
    eps_max: f64,
    /// Number of rows.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 0.1)]
    y_min: f64,
    #[arg(long, default_value_t = 10.0)]
    y_max: f64,
    #[arg(long, default_value_t = 100)]
    y_count: usize,
    #[arg(long, default_value_t = 0.1)]
    eps_min: f64,
    #[arg(long, default_value_t = 10.0)]
    eps_max: f64,
    #[arg(long, default_value_t = 100)]
    eps_count: usize,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Evaluate rows on the calling thread only.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Read zero ordinates from this table instead of scanning.
    #[arg(long)]
    zeros: Option<PathBuf>,
    #[arg(long, default_value_t = 100.0)]
    t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    grid_step: f64,
    /// Heights at which counts are compared (repeatable).
    #[arg(long = "probe", default_values_t = [20.0, 50.0, 100.0])]
    probes: Vec<f64>,
    /// Also write the zero table used for the comparison.
    #[arg(long)]
    zeros_out: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct PinneyArgs {
    #[arg(long, default_value_t = 2.0)]
    eps: f64,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Seed points (repeatable).
    #[arg(long = "y0", default_values_t = [2.0, 4.0, 8.0])]
    seeds: Vec<f64>,
    #[arg(long, default_value_t = 10.0)]
    y_end: f64,
    /// Comparison points per trajectory.
    #[arg(long, default_value_t = 400)]
    samples: usize,
    /// Right-hand constant of the Pinney equation; k² when omitted.
    #[arg(long)]
    q_const: Option<f64>,
    #[arg(long, default_value_t = 1e-11)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 2.0)]
    eps: f64,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 1.0)]
    q0: f64,
    #[arg(long, default_value_t = 0.0)]
    p0: f64,
    #[arg(long, default_value_t = 1.0)]
    y_start: f64,
    #[arg(long, default_value_t = 10.0)]
    y_end: f64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long)]
    q_const: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn exec(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

/// Number formatting shared by every table: 12 significant digits.
fn num(v: f64) -> String {
    format!("{v:.11e}")
}

/// Write `grid` as `y,eps,n_M` rows ordered by eps, then y.
/// Returns the number of bytes written.
pub fn write_grid<W: Write>(grid: &MilneGrid, sink: W) -> Result<usize> {
    let mut sink = CountingWriter { inner: sink, bytes: 0 };
    writeln!(sink, "y,eps,n_M")?;
    for (eps, row) in grid.rows() {
        for (y, v) in grid.y_axis.iter().zip(row) {
            writeln!(sink, "{},{},{}", num(*y), num(eps), num(*v))?;
        }
    }
    sink.flush()?;
    Ok(sink.bytes)
}

struct CountingWriter<W> {
    inner: W,
    bytes: usize,
}

impl<W: Write> Write for CountingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.bytes += n;
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

fn open_sink<'a>(out: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    })
}

fn check_range(name: &str, lo: f64, hi: f64) -> std::result::Result<(), Failure> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return usage(format!("--{name}-min/--{name}-max must satisfy 0 < min < max, got {lo} and {hi}"));
    }
    Ok(())
}

fn check_tol(tol: f64) -> std::result::Result<Tolerance, Failure> {
    let t = Tolerance::new(tol);
    if t.validate().is_err() || tol <= 0.0 {
        return usage(format!("--tol {tol} is not a usable tolerance"));
    }
    Ok(t)
}

fn density(args: &DensityArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    check_range("eps", args.eps_min, args.eps_max)?;
    if args.steps < 2 {
        return usage("--steps must be at least 2");
    }
    let mut rows = Vec::with_capacity(args.steps);
    for eps in linspace(args.eps_min, args.eps_max, args.steps) {
        rows.push((eps, riemann_zero_density(eps)?, coulomb_density(eps)?, density_gap(eps)?));
    }
    let mut sink = open_sink(&args.output.out, stdout)?;
    let mut body = String::from("eps,n_Z,n_C,gap\n");
    for (e, z, c, g) in rows {
        body.push_str(&format!("{},{},{},{}\n", num(e), num(z), num(c), num(g)));
    }
    sink.write_all(body.as_bytes()).map_err(Error::from)?;
    sink.flush().map_err(Error::from)?;
    Ok(())
}

fn grid(args: &GridArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    check_range("y", args.y_min, args.y_max)?;
    check_range("eps", args.eps_min, args.eps_max)?;
    if args.y_count < 2 || args.eps_count < 2 {
        return usage("--y-count and --eps-count must be at least 2");
    }
    if !(args.k > 0.0 && args.k.is_finite()) {
        return usage("--k must be positive");
    }
    let spec = GridSpec {
        y_min: args.y_min,
        y_max: args.y_max,
        y_count: args.y_count,
        eps_min: args.eps_min,
        eps_max: args.eps_max,
        eps_count: args.eps_count,
    };
    let grid = milne_grid_with(&spec, args.k, exec(args.sequential))?;
    let sink = open_sink(&args.output.out, stdout)?;
    write_grid(&grid, sink)?;
    for eps in &grid.skipped_eps {
        eprintln!("warning: eps = {eps} skipped (degenerate alpha)");
    }
    Ok(())
}

fn compare(args: &CompareArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    if args.probes.iter().any(|t| !(*t > 0.0)) {
        return usage("--probe heights must be positive");
    }
    let table: ZeroTable = match &args.zeros {
        Some(path) => load_zero_table(BufReader::new(File::open(path).map_err(Error::from)?))?,
        None => {
            if !(10.0..=crate::zeros::MAX_SCAN_HEIGHT).contains(&args.t_max) {
                return usage(format!("--t-max must lie in [10, {}]", crate::zeros::MAX_SCAN_HEIGHT));
            }
            if !(args.grid_step > 0.0 && args.grid_step <= 0.05) {
                return usage("--grid-step must lie in (0, 0.05]");
            }
            if let Some(t) = args.probes.iter().find(|&&t| t > args.t_max) {
                return usage(format!("probe {t} lies above --t-max {}", args.t_max));
            }
            scan_zeros_with(args.t_max, args.grid_step, exec(args.sequential))?
        }
    };
    if let Some(path) = &args.zeros_out {
        write_zero_table(&table, BufWriter::new(File::create(path).map_err(Error::from)?))?;
    }
    let mut body = String::from("T,smooth_count,empirical_count,difference\n");
    for &t in &args.probes {
        let smooth = smooth_zero_count(t)?;
        let counted = table.count_below(t);
        body.push_str(&format!("{},{},{},{}\n", num(t), num(smooth), counted, num(smooth - counted as f64)));
    }
    let mut sink = open_sink(&args.output.out, stdout)?;
    sink.write_all(body.as_bytes()).map_err(Error::from)?;
    sink.flush().map_err(Error::from)?;
    Ok(())
}

fn pinney(args: &PinneyArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let tol = check_tol(args.tol)?;
    if args.samples < 2 {
        return usage("--samples must be at least 2");
    }
    if args.seeds.iter().any(|&y0| !(y0 > 0.0 && y0 < args.y_end)) {
        return usage("every --y0 must satisfy 0 < y0 < --y-end");
    }
    let p = CoulombParams::new(args.eps, args.k).map_err(|e| Failure::Usage(e.to_string()))?;
    let q_const = args.q_const.unwrap_or_else(|| default_pinney_constant(&p));
    let mut body = String::from("y0,max_relative_gap\n");
    for &y0 in &args.seeds {
        let grid = linspace(y0, args.y_end, args.samples);
        let cmp = compare_pinney_closed_form(&p, q_const, y0, &grid, tol)?;
        body.push_str(&format!("{},{}\n", num(y0), num(cmp.max_relative_gap)));
    }
    let mut sink = open_sink(&args.output.out, stdout)?;
    sink.write_all(body.as_bytes()).map_err(Error::from)?;
    sink.flush().map_err(Error::from)?;
    Ok(())
}

fn demo(args: &DemoArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let tol = check_tol(args.tol)?;
    if !(args.y_start > 0.0 && args.y_end > args.y_start) {
        return usage("need 0 < --y-start < --y-end");
    }
    if args.samples < 2 {
        return usage("--samples must be at least 2");
    }
    let p = CoulombParams::new(args.eps, args.k).map_err(|e| Failure::Usage(e.to_string()))?;
    let q_const = args.q_const.unwrap_or_else(|| default_pinney_constant(&p));
    let amp = ClosedForm::new(&p)?.sample(args.y_start)?;
    let init = PhaseState { y: args.y_start, q: args.q0, p: args.p0 };
    let grid = linspace(args.y_start, args.y_end, args.samples);
    let traj = joint_flow(init, &amp, &p, q_const, args.y_end, tol, Sampling::Grid(&grid))?;
    let mut body = String::from("y,q,p,rho,drho,invariant,energy\n");
    for (s, a) in &traj {
        let inv = ermakov_lewis_invariant(s, a, q_const)?;
        let energy = instantaneous_energy(s, &p);
        body.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            num(s.y),
            num(s.q),
            num(s.p),
            num(a.rho),
            num(a.drho),
            num(inv),
            num(energy)
        ));
    }
    let mut sink = open_sink(&args.output.out, stdout)?;
    sink.write_all(body.as_bytes()).map_err(Error::from)?;
    sink.flush().map_err(Error::from)?;
    Ok(())
}

/// Run the CLI with explicit streams; returns the process exit code.
pub fn run_with<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Density(a) => density(a, stdout),
        Command::MilneGrid(a) => grid(a, stdout),
        Command::CompareZeros(a) => compare(a, stdout),
        Command::PinneyCheck(a) => pinney(a, stdout),
        Command::DynamicsDemo(a) => demo(a, stdout),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

/// Run the CLI against the process's standard streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut err = std::io::stderr();
    run_with(argv, &mut out, &mut err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("milne-zeta").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn density_rows() {
        let (code, out, _) = run_capture(&["density", "--eps-min", "0.1", "--eps-max", "10", "--steps", "100"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "eps,n_Z,n_C,gap");
        assert_eq!(lines.len(), 101);
        let first: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(first[0], 0.1);
        assert!((first[3] - (first[2] - first[1])).abs() < 1e-11);
    }

    #[test]
    fn usage_errors_exit_two() {
        for args in [
            &["density", "--eps-min", "10", "--eps-max", "1"][..],
            &["density", "--steps", "1"],
            &["density", "--eps-min", "0"],
            &["milne-grid", "--y-count", "1"],
            &["milne-grid", "--k", "-1"],
            &["compare-zeros", "--t-max", "500"],
            &["compare-zeros", "--grid-step", "0.5"],
            &["compare-zeros", "--probe", "150"],
            &["pinney-check", "--y0", "12"],
            &["dynamics-demo", "--tol", "0"],
            &["no-such-command"],
            &["density", "--eps-min", "abc"],
        ] {
            let (code, _, err) = run_capture(args);
            assert_eq!(code, 2, "{args:?}");
            assert!(!err.is_empty());
        }
    }

    #[test]
    fn computation_error_exits_one() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "21.0\n14.0\n").unwrap();
        let (code, _, err) = run_capture(&["compare-zeros", "--zeros", path.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn grid_writer_format() {
        let spec = GridSpec { y_min: 1.0, y_max: 2.0, y_count: 2, eps_min: 0.5, eps_max: 3.0, eps_count: 2 };
        let grid = crate::milne::milne_grid(&spec, 1.0).unwrap();
        let mut buf = Vec::new();
        let n = write_grid(&grid, &mut buf).unwrap();
        assert_eq!(n, buf.len());
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "y,eps,n_M");
        let cells: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!((cells[0], cells[1]), (1.0, 0.5));
        let second: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!((second[0], second[1]), (2.0, 0.5));
        for (line, v) in lines[1..].iter().zip(&grid.values) {
            let parsed: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
            assert!(((parsed - v) / v).abs() < 5e-12);
        }
    }

    #[test]
    fn compare_zeros_with_table_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zeros.txt");
        std::fs::write(&path, "# first zeros\n14.134725\n21.022040\n25.010858\n").unwrap();
        let (code, out, _) = run_capture(&["compare-zeros", "--zeros", path.to_str().unwrap(), "--probe", "20", "--probe", "26"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "T,smooth_count,empirical_count,difference");
        assert_eq!(lines[1].split(',').nth(2), Some("1"));
        assert_eq!(lines[2].split(',').nth(2), Some("3"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("milne-grid"));
    }
}
