//! The `eurbound` command line.
//!
//! Exit codes: 0 on success or a passing verification, 1 on a failed
//! verification or a runtime failure, 2 on a usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bounds::{crossover_cstar, new_bound, BoundBreakdown};
use crate::error::EurError;
use crate::lp::Overlap;
use crate::oracle::{
    default_witness_dim, grid_min, incomparability_witness, sampled_min, Witness,
    DEFAULT_WITNESS_RESOLUTION,
};
use crate::quantum::{derived_seed, haar_random_pair, overlap_of, verify_bound_mc};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Header of the curve CSV.
pub const CURVE_HEADER: &str = "c,deutsch,maassen_uffink,f,g,h1,bound,branch";
/// Significant digits of every number written by the CLI.
pub const SIGNIFICANT_DIGITS: usize = 12;
/// Agreement required between the grid oracle and the bound above `1/sqrt(2)`.
pub const ORACLE_AGREEMENT: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "eurbound", version, about = "Entropic uncertainty lower bounds from the overlap c")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print every candidate bound and the final bound at one overlap.
    Bound {
        #[arg(long)]
        c: f64,
    },
    /// Write the bound curves over a range of overlaps as CSV.
    Curve {
        #[arg(long)]
        min: f64,
        #[arg(long)]
        max: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute the crossover c* where F(c) takes over from H1(c).
    Crossover {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Debug, Subcommand)]
enum Verify {
    /// Monte Carlo check with Haar-random bases and states.
    Quantum(QuantumArgs),
    /// Compare the bound with the brute-force grid oracle.
    Oracle(OracleArgs),
    /// Search for distributions separating the Maassen-Uffink and
    /// Landau-Pollak relations.
    Witness(WitnessArgs),
}

#[derive(Debug, Args)]
struct QuantumArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    pairs: usize,
    #[arg(long)]
    states: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    c: f64,
    #[arg(long, default_value_t = 10_000)]
    grid: usize,
    /// Also draw this many random distribution pairs (0 disables).
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Dimension of the random distributions.
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[arg(long)]
    c: f64,
    /// Dimension of the witness distributions; defaults to ceil(1/c^2).
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_WITNESS_RESOLUTION)]
    resolution: usize,
}

/// Command failure, mapped onto an exit code.
enum Failure {
    Usage(String),
    Runtime(String),
    Verification,
}

impl From<EurError> for Failure {
    fn from(e: EurError) -> Self {
        match e {
            EurError::Domain(_) | EurError::UnreachableOverlap(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Formats `x` with `sig` significant digits in fixed notation.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return format!("{:.*}", sig - 1, 0.0);
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = |e: i32| (sig as i32 - 1 - e).max(0) as usize;
    let s = format!("{:.*}", decimals(exp), x);
    // rounding can carry into the next power of ten
    let rounded: f64 = s.parse().expect("formatted float parses");
    if rounded.abs() >= 10f64.powi(exp + 1) {
        format!("{:.*}", decimals(exp + 1), x)
    } else {
        s
    }
}

fn num(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

fn overlap_arg(c: f64) -> Result<Overlap, Failure> {
    Overlap::new(c).map_err(|_| Failure::Usage(format!("--c must lie in (0, 1], got {c}")))
}

/// Parses `args` (including the program name) and runs the command, writing
/// normal output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Bound { c } => cmd_bound(c, out),
        Command::Curve { min, max, step, out: path } => cmd_curve(min, max, step, &path, out),
        Command::Crossover { tol } => cmd_crossover(tol, out),
        Command::Verify(Verify::Quantum(a)) => cmd_verify_quantum(&a, out),
        Command::Verify(Verify::Oracle(a)) => cmd_verify_oracle(&a, out),
        Command::Verify(Verify::Witness(a)) => cmd_verify_witness(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
        Err(Failure::Verification) => EXIT_FAILURE,
    }
}

fn write_breakdown(b: &BoundBreakdown, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "c               {}", num(b.c))?;
    writeln!(out, "deutsch         {}", num(b.deutsch))?;
    writeln!(out, "maassen_uffink  {}", num(b.maassen_uffink))?;
    writeln!(out, "f               {}", num(b.f_val))?;
    writeln!(out, "g               {}", num(b.g_val))?;
    for (m, v) in &b.h_m {
        let label = format!("h{m}");
        match v {
            Some(v) => writeln!(out, "{label:<16}{}", num(*v))?,
            None => writeln!(out, "{label:<16}absent")?,
        }
    }
    writeln!(out, "bound           {}", num(b.final_bound))?;
    writeln!(out, "branch          {}", b.active_branch)
}

fn cmd_bound(c: f64, out: &mut dyn Write) -> CmdResult {
    let b = new_bound(overlap_arg(c)?)?;
    write_breakdown(&b, out)?;
    Ok(())
}

/// The overlaps of a curve sweep, each rounded to the printed precision so
/// that a row can be recomputed exactly from its `c` column.
pub fn curve_points(min: f64, max: f64, step: f64) -> Vec<f64> {
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    (0..n)
        .map(|i| {
            let raw = (min + i as f64 * step).min(max);
            num(raw).parse().expect("formatted float parses")
        })
        .collect()
}

/// One CSV row for overlap `c`, without the trailing newline.
pub fn curve_row(c: f64) -> Result<String, EurError> {
    let b = new_bound(Overlap::new(c)?)?;
    let h1 = b.h1().map(num).unwrap_or_default();
    Ok(format!(
        "{},{},{},{},{},{},{},{}",
        num(b.c),
        num(b.deutsch),
        num(b.maassen_uffink),
        num(b.f_val),
        num(b.g_val),
        h1,
        num(b.final_bound),
        b.active_branch
    ))
}

fn cmd_curve(min: f64, max: f64, step: f64, path: &Path, out: &mut dyn Write) -> CmdResult {
    if !(min > 0.0 && min < max && max <= 1.0) {
        return Err(Failure::Usage(format!(
            "need 0 < --min < --max <= 1, got --min {min} --max {max}"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Failure::Usage(format!("--step must be positive, got {step}")));
    }
    let points = curve_points(min, max, step);
    let rows = points
        .iter()
        .map(|&c| curve_row(c))
        .collect::<Result<Vec<_>, _>>()?;
    let file = File::create(path)
        .map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    w.write_all(CURVE_HEADER.as_bytes())?;
    w.write_all(b"\n")?;
    for row in &rows {
        w.write_all(row.as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    writeln!(out, "wrote {} rows to {}", rows.len(), path.display())?;
    Ok(())
}

fn cmd_crossover(tol: f64, out: &mut dyn Write) -> CmdResult {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    let cstar = crossover_cstar(tol)?;
    writeln!(out, "c* = {}", num(cstar))?;
    writeln!(out, "tolerance = {tol:e}")?;
    Ok(())
}

fn cmd_verify_quantum(a: &QuantumArgs, out: &mut dyn Write) -> CmdResult {
    if a.dim < 2 || a.pairs == 0 || a.states == 0 {
        return Err(Failure::Usage(
            "need --dim >= 2, --pairs >= 1 and --states >= 1".into(),
        ));
    }
    let mut all_passed = true;
    let mut min_slack = f64::INFINITY;
    let mut min_lp = f64::INFINITY;
    for k in 0..a.pairs {
        let pair = haar_random_pair(a.dim, derived_seed(a.seed, 2 * k as u64))?;
        let report = verify_bound_mc(&pair, a.states, derived_seed(a.seed, 2 * k as u64 + 1), a.workers)?;
        writeln!(
            out,
            "pair {k}: c = {}, bound = {}, min H(A)+H(B) = {}, min LP slack = {}, {}",
            num(overlap_of(&pair).c()),
            num(report.bound),
            num(report.min_entropy_sum),
            num(report.min_lp_slack),
            if report.passed() { "PASS" } else { "FAIL" }
        )?;
        if let Some(v) = &report.violation {
            writeln!(
                out,
                "  violating state: H(A)+H(B) = {}, LP slack = {}, amplitudes = {:?}",
                num(v.entropy_sum),
                num(v.lp_slack),
                v.state.amplitudes()
            )?;
        }
        all_passed &= report.passed();
        min_slack = min_slack.min(report.min_bound_slack());
        min_lp = min_lp.min(report.min_lp_slack);
    }
    writeln!(out, "min bound slack = {}", num(min_slack))?;
    writeln!(out, "min LP slack = {}", num(min_lp))?;
    writeln!(out, "{}", if all_passed { "PASS" } else { "FAIL" })?;
    if all_passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_verify_oracle(a: &OracleArgs, out: &mut dyn Write) -> CmdResult {
    let ov = overlap_arg(a.c)?;
    let grid = grid_min(ov, a.grid)?;
    let b = new_bound(ov)?;
    writeln!(out, "c = {}", num(ov.c()))?;
    writeln!(out, "grid minimum = {} at P_A = {}, P_B = {}", num(grid.min_value), num(grid.argmin_p_a), num(grid.argmin_p_b))?;
    writeln!(out, "bound = {} ({})", num(b.final_bound), b.active_branch)?;
    let diff = grid.min_value - b.final_bound;
    writeln!(out, "oracle - bound = {}", num(diff))?;
    // below 1/sqrt(2) the constrained minimum sits under the Maassen-Uffink value
    let mut passed = if b.active_branch == crate::bounds::Branch::Mu {
        grid.min_value <= b.final_bound + 1e-6
    } else {
        diff.abs() <= ORACLE_AGREEMENT
    };
    if a.samples > 0 {
        match sampled_min(ov, a.dim, a.samples, a.seed, a.workers)? {
            Some(s) => {
                writeln!(out, "sampled minimum = {} over {} pairs in dimension {}", num(s), a.samples, a.dim)?;
                passed &= s >= grid.min_value - 1e-9;
            }
            None => writeln!(out, "sampled minimum = none accepted")?,
        }
    }
    writeln!(out, "{}", if passed { "PASS" } else { "FAIL" })?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn write_witness(w: &Witness, out: &mut dyn Write) -> io::Result<()> {
    let list = |v: &[f64]| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ");
    writeln!(out, "  p = [{}]", list(w.p.entries()))?;
    writeln!(out, "  q = [{}]", list(w.q.entries()))?;
    writeln!(out, "  arccos sqrt(P_A) + arccos sqrt(P_B) = {}  (arccos c = {})", num(w.lp_lhs), num(w.theta))?;
    writeln!(out, "  H(p) + H(q) = {}  (-2 ln c = {})", num(w.entropy_sum), num(w.mu))
}

fn cmd_verify_witness(a: &WitnessArgs, out: &mut dyn Write) -> CmdResult {
    let ov = overlap_arg(a.c)?;
    let dim = a.dim.unwrap_or_else(|| default_witness_dim(ov));
    match incomparability_witness(ov, dim, a.resolution)? {
        Some(w) => {
            writeln!(out, "MU-allowed, LP-forbidden:")?;
            write_witness(&w.mu_allowed_lp_forbidden, out)?;
            writeln!(out, "LP-allowed, MU-forbidden:")?;
            write_witness(&w.lp_allowed_mu_forbidden, out)?;
            writeln!(out, "PASS")?;
            Ok(())
        }
        None => {
            writeln!(out, "no witness pair found at dimension {dim}, resolution {}", a.resolution)?;
            writeln!(out, "FAIL")?;
            Err(Failure::Verification)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.5, 12), "0.500000000000");
        assert_eq!(format_sig(1.3862943611198906, 12), "1.38629436112");
        assert_eq!(format_sig(0.0, 12), "0.00000000000");
        assert_eq!(format_sig(-0.0, 12), "0.00000000000");
        assert_eq!(format_sig(0.020100671707002933, 12), "0.0201006717070");
        assert_eq!(format_sig(9.9999999999996, 12), "10.0000000000");
        assert_eq!(format_sig(-2.5, 3), "-2.50");
    }

    #[test]
    fn sweep_points() {
        assert_eq!(curve_points(0.5, 1.0, 0.001).len(), 501);
        assert_eq!(curve_points(0.5, 0.6, 0.5), vec![0.5]);
        let p = curve_points(0.5, 1.0, 0.001);
        assert_eq!(*p.last().unwrap(), 1.0);
    }
}
