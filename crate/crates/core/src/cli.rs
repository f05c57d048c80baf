//! Command-line front end: `bound`, `exact`, `montecarlo` and `sweep-asymmetry`.
//!
//! Reports go to stdout as JSON. Exit code 1 means the invocation or the
//! input was rejected, 2 means a computation failed (caps, LP trouble).

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::lyapunov_bound::{analyze_forced, analyze_unforced, LyapunovConfig, SigmaMode};
use crate::mas::{exact_t_star_forced_with, exact_t_star_unforced_with, MasConfig};
use crate::model::{validate, SystemFile, SystemSpec, Thresholds};
use crate::montecarlo::{asymmetry_sweep, builtin_system, run_study, study_csv, sweep_csv, StudyConfig};
use crate::power_series::{bound_m1_forced, bound_m1_unforced};
use crate::tol::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "masbound", version, about = "Bounds on the admissibility index of maximal output admissible sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Upper bounds m1 (power series) and m2 (Lyapunov) on t*.
    Bound(BoundArgs),
    /// Exact t* and the non-redundant admissible set.
    Exact(ExactArgs),
    /// Seeded study of both bounds against exact t* on random systems.
    Montecarlo(MonteCarloArgs),
    /// t*, m1 and m2 over a grid of lower output limits.
    SweepAsymmetry(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    PowerSeries,
    Lyapunov,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SigmaArg {
    Eq25,
    Paper,
}

impl From<SigmaArg> for SigmaMode {
    fn from(s: SigmaArg) -> Self {
        match s {
            SigmaArg::Eq25 => SigmaMode::Eq25,
            SigmaArg::Paper => SigmaMode::Paper,
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// System description (JSON).
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub method: MethodArg,
    /// Constant-input case with the ε-tightened steady-state constraint.
    #[arg(long)]
    pub forced: bool,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum, default_value = "eq25")]
    pub sigma_mode: SigmaArg,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub forced: bool,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Write the H-representation as CSV rows `g1,...,gd,h`.
    #[arg(long)]
    pub emit_polytope: Option<PathBuf>,
    #[arg(long, default_value_t = crate::mas::DEFAULT_ITERATION_CAP)]
    pub iteration_cap: usize,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Per-system CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "eq25")]
    pub sigma_mode: SigmaArg,
    /// Exact t* above this is recorded as capped.
    #[arg(long, default_value_t = 10_000)]
    pub t_star_cap: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Single-output system description; the built-in 3-state system when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long, default_value = "0.1:2:0.1")]
    pub grid: String,
    /// Upper limit; taken from the input file, or 1, when absent.
    #[arg(long)]
    pub y_upper: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "eq25")]
    pub sigma_mode: SigmaArg,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Dimension { .. }
            | Error::NotSquare { .. }
            | Error::NonFinite
            | Error::NotSymmetric { .. }
            | Error::NotPositiveDefinite { .. }
            | Error::Unstable { .. }
            | Error::Unforced
            | Error::EpsilonOutOfRange(_)
            | Error::InvalidBox(_)
            | Error::InvalidArgument(_) => EXIT_INVALID,
            _ => EXIT_NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit code; reports and errors are written to the given streams.
pub fn run_from<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(report) => {
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(command: &Command) -> CliResult<Value> {
    let tol = Tolerances::from_env().map_err(CliError::invalid)?;
    match command {
        Command::Bound(a) => cmd_bound(a),
        Command::Exact(a) => cmd_exact(a, tol),
        Command::Montecarlo(a) => cmd_montecarlo(a, tol),
        Command::SweepAsymmetry(a) => cmd_sweep(a),
    }
}

/// Bounds and exact computations need a stable pair with full observability rank.
const CLI_THRESHOLDS: Thresholds = Thresholds { max_spectral_radius: 1.0, min_obsv_singular_value: 1e-9 };

fn load(path: &Path) -> CliResult<SystemSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let spec = SystemFile::from_json(&text)
        .and_then(SystemFile::into_spec)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let report = validate(&spec.system, &spec.output_box, &CLI_THRESHOLDS)?;
    if !report.stable {
        return Err(CliError::invalid(format!("system is not stable (spectral radius {})", report.spectral_radius)));
    }
    if !report.observable {
        return Err(CliError::invalid(format!(
            "(A, C) is not observable (smallest observability singular value {:e})",
            report.min_obsv_singular_value
        )));
    }
    Ok(spec)
}

fn forced_epsilon(forced: bool, flag: Option<f64>, spec: &SystemSpec) -> CliResult<Option<f64>> {
    if !forced {
        if flag.is_some() {
            return Err(CliError::invalid("--epsilon is only meaningful with --forced"));
        }
        return Ok(None);
    }
    let eps = flag.or(spec.epsilon).ok_or_else(|| CliError::invalid("--forced requires --epsilon"))?;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(CliError::invalid(format!("--epsilon must lie in (0, 1], got {eps}")));
    }
    if !spec.system.is_forced() {
        return Err(CliError::invalid("--forced needs an input matrix \"B\" in the system file"));
    }
    Ok(Some(eps))
}

fn cmd_bound(a: &BoundArgs) -> CliResult<Value> {
    let spec = load(&a.input)?;
    let eps = forced_epsilon(a.forced, a.epsilon, &spec)?;
    let (sys, bx) = (&spec.system, &spec.output_box);
    let start = Instant::now();
    let mut out = serde_json::Map::new();
    out.insert("regime".into(), json!(if eps.is_some() { "forced" } else { "unforced" }));
    out.insert("epsilon".into(), json!(eps));
    if matches!(a.method, MethodArg::PowerSeries | MethodArg::Both) {
        let r = match eps {
            Some(e) => bound_m1_forced(sys, bx, e)?,
            None => bound_m1_unforced(sys, bx)?,
        };
        out.insert("m1".into(), json!(r.m));
        out.insert("power_series".into(), json!(r.diagnostics));
    }
    if matches!(a.method, MethodArg::Lyapunov | MethodArg::Both) {
        let cfg = LyapunovConfig::with_sigma_mode(a.sigma_mode.into());
        let an = match eps {
            Some(e) => analyze_forced(sys, bx, e, &cfg)?,
            None => analyze_unforced(sys, bx, &cfg)?,
        };
        let p: Vec<&[f64]> = (0..an.pair.p.rows()).map(|i| an.pair.p.row(i)).collect();
        out.insert("m2".into(), json!(an.report.m));
        out.insert("sigma_mode".into(), json!(cfg.sigma_mode));
        out.insert("lyapunov".into(), json!(an.report.diagnostics));
        out.insert("P".into(), json!(p));
    }
    out.insert("wall_time_s".into(), json!(start.elapsed().as_secs_f64()));
    Ok(Value::Object(out))
}

fn cmd_exact(a: &ExactArgs, tol: Tolerances) -> CliResult<Value> {
    let spec = load(&a.input)?;
    let eps = forced_epsilon(a.forced, a.epsilon, &spec)?;
    let cfg = MasConfig { iteration_cap: a.iteration_cap, tol, ..MasConfig::default() };
    let res = match eps {
        Some(e) => exact_t_star_forced_with(&spec.system, &spec.output_box, e, &cfg)?,
        None => exact_t_star_unforced_with(&spec.system, &spec.output_box, &cfg)?,
    };
    if let Some(path) = &a.emit_polytope {
        write_atomic(path, &res.polytope.to_csv())?;
    }
    let mut out = serde_json::to_value(res.summary()).expect("summary serializes");
    if let Some(shift) = &res.shift {
        out["coordinates"] = json!("(z0, u) with x0 = z0 + shift * u");
        out["shift"] = json!((0..shift.rows()).map(|i| shift.row(i).to_vec()).collect::<Vec<_>>());
    }
    if let Some(path) = &a.emit_polytope {
        out["polytope_csv"] = json!(path.display().to_string());
    }
    Ok(out)
}

fn cmd_montecarlo(a: &MonteCarloArgs, tol: Tolerances) -> CliResult<Value> {
    if !(a.epsilon > 0.0 && a.epsilon <= 1.0) {
        return Err(CliError::invalid(format!("--epsilon must lie in (0, 1], got {}", a.epsilon)));
    }
    let config = StudyConfig {
        count: a.count as usize,
        master_seed: a.seed,
        epsilon: a.epsilon,
        sigma_mode: a.sigma_mode.into(),
        t_star_cap: a.t_star_cap,
        tol,
        ..StudyConfig::default()
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = a.jobs {
        if j == 0 {
            return Err(CliError::invalid("--jobs must be at least 1"));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| CliError { code: EXIT_NUMERICAL, message: e.to_string() })?;
    let (rows, summary) = pool.install(|| run_study(&config))?;
    if let Some(path) = &a.out {
        write_atomic(path, &study_csv(&rows))?;
    }
    Ok(serde_json::to_value(summary).expect("summary serializes"))
}

/// Parses `start:stop:step` or `v1,v2,...`.
pub fn parse_grid(s: &str) -> std::result::Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("grid: cannot parse {t:?}"));
    let values = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, step] = parts[..] else { return Err(format!("grid {s:?}: expected start:stop:step")) };
        let (a, b, step) = (num(a)?, num(b)?, num(step)?);
        if !(step > 0.0) || b < a {
            return Err(format!("grid {s:?}: need step > 0 and stop ≥ start"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| ((a + k as f64 * step) * 1e12).round() / 1e12).collect()
    } else {
        s.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?
    };
    if values.is_empty() || values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(format!("grid {s:?}: values must be positive"));
    }
    Ok(values)
}

fn cmd_sweep(a: &SweepArgs) -> CliResult<Value> {
    let grid = parse_grid(&a.grid).map_err(CliError::invalid)?;
    let (sys, file_upper) = match &a.input {
        Some(path) => {
            let spec = load(path)?;
            let upper = spec.output_box.upper()[0];
            (spec.system, Some(upper))
        }
        None => (builtin_system(), None),
    };
    let y_u = a.y_upper.or(file_upper).unwrap_or(1.0);
    if !(y_u.is_finite() && y_u > 0.0) {
        return Err(CliError::invalid(format!("--y-upper must be positive, got {y_u}")));
    }
    let rows = asymmetry_sweep(&sys, y_u, &grid, a.sigma_mode.into())?;
    if let Some(path) = &a.out {
        write_atomic(path, &sweep_csv(&rows))?;
    }
    Ok(json!({ "y_upper": y_u, "rows": rows }))
}

/// Writes to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::invalid(format!("{}: {e}", path.display()));
    let name = path.file_name().ok_or_else(|| CliError::invalid(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = std::fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(contents.as_bytes())?;
        f.sync_all()
    });
    if let Err(e) = result.and_then(|_| std::fs::rename(&tmp, path)) {
        let _ = std::fs::remove_file(&tmp);
        return Err(io(e));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("0.1:0.5:0.1").unwrap(), vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        assert_eq!(parse_grid("0.1,1,2").unwrap(), vec![0.1, 1.0, 2.0]);
        assert_eq!(parse_grid("1:1:1").unwrap(), vec![1.0]);
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("0:1:0.5").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_from(["masbound", "montecarlo", "--count", "0"], &mut out, &mut err), EXIT_INVALID);
        assert_eq!(run_from(["masbound", "frobnicate"], &mut out, &mut err), EXIT_INVALID);
        assert_eq!(run_from(["masbound", "--help"], &mut out, &mut err), EXIT_OK);
    }

    #[test]
    fn error_classes() {
        assert_eq!(CliError::from(Error::Unforced).code, EXIT_INVALID);
        assert_eq!(CliError::from(Error::Cycling { pivots: 3 }).code, EXIT_NUMERICAL);
        assert_eq!(CliError::from(Error::IterationCap { what: "x", cap: 1 }).code, EXIT_NUMERICAL);
    }
}
