//! Command-line front end.
//!
//! Config files are flat: one `key = value` per line, `#` starts a comment,
//! blank lines are ignored. Keys are the long flag names with `_` in place of
//! `-` (`omega_c`, `lambda_sq`, `log_grid`, ...). Unknown or repeated keys
//! are errors. Flags given on the command line override file values.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::compare::{log_grid, solve_all, sweep, validate, Axis, Method, SweepOptions, SweepRow};
use crate::error::Error;
use crate::exact::QuadratureSpec;
use crate::gaussian::{CorrelationReport, DiscordOptions};
use crate::model::{Bath, WireParams};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_GRID_POINTS: usize = 60;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_UNPHYSICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qwire",
    version,
    about = "Steady states of a two-node harmonic wire between two heat baths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one parameter point with all four methods; JSON to stdout.
    Steady(PointArgs),
    /// Sweep one parameter; CSV to `--output` or stdout.
    Sweep(SweepArgs),
    /// Check the invariants of every solver at one parameter point.
    Validate(PointArgs),
    /// List the preset scenarios.
    Scenarios,
}

#[derive(Debug, Clone, Default, Args)]
struct PointArgs {
    /// Preset to start from (fig1a ... fig2c, or custom).
    #[arg(long)]
    scenario: Option<String>,
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    omega_c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega_h: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_h: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda_sq: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    cutoff: Option<f64>,
    /// Relative tolerance of the exact-solution quadrature.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute tolerance of the exact-solution quadrature.
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Frequency beyond which the exact integrands are mapped to a finite range.
    #[arg(long)]
    max_omega: Option<f64>,
    /// Node measured for discord and classical correlations (cold or hot).
    #[arg(long)]
    measured: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
struct SweepArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Swept parameter: k, t_c, t_h, omega_h or lambda_sq.
    #[arg(long)]
    axis: Option<String>,
    /// Log-spaced grid `lo:hi:n`.
    #[arg(long, conflicts_with = "grid")]
    log_grid: Option<String>,
    /// Explicit comma-separated grid.
    #[arg(long)]
    grid: Option<String>,
    /// CSV destination; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Worker threads (falls back to QWIRE_JOBS, then all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

/// A fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub params: WireParams,
    pub axis: Axis,
    pub grid: Vec<f64>,
}

/// Frozen preset table: name, ω_c, ω_h, T_c, T_h, default k, sweep range.
pub fn preset(name: &str) -> Option<Scenario> {
    let quasi_resonant = (1.0f64 + 2e-6).sqrt();
    let (omega, t_c, t_h, k, lo, hi) = match name {
        "fig1a" | "fig1c" => ((1.0, 2.0), 2.0, 3.0, 1e-2, 1e-4, 1.0),
        "fig1b" | "fig1d" | "fig2a" | "fig2b" => {
            ((1.0, quasi_resonant), 2.0, 3.0, 1e-4, 1e-6, 1e-1)
        }
        "fig2c" => ((10.0, 10.0), 1.0, 2.0, 1e3, 1e1, 1e5),
        _ => return None,
    };
    Some(Scenario {
        name: name.to_string(),
        params: WireParams {
            omega_c: omega.0,
            omega_h: omega.1,
            k,
            t_c,
            t_h,
            lambda_sq: 1e-3,
            cutoff: 1e3,
        },
        axis: Axis::K,
        grid: log_grid(lo, hi, DEFAULT_GRID_POINTS).expect("valid preset range"),
    })
}

pub const PRESET_NAMES: [&str; 7] = [
    "fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c",
];

#[derive(Debug)]
struct CliError {
    code: i32,
    kind: &'static str,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            kind: "invalid_argument",
            message: message.into(),
        }
    }

    fn solver(e: &Error) -> Self {
        let code = match e {
            Error::InvalidParameter { .. } => EXIT_USAGE,
            Error::NonPhysical { .. } => EXIT_UNPHYSICAL,
            _ => EXIT_SOLVER,
        };
        CliError {
            code,
            kind: if code == EXIT_USAGE {
                "invalid_argument"
            } else {
                "solver_failure"
            },
            message: e.to_string(),
        }
    }

    fn json(&self) -> String {
        json!({"error": {"kind": self.kind, "code": self.code, "message": self.message}})
            .to_string()
    }
}

const CONFIG_KEYS: [&str; 17] = [
    "scenario",
    "omega_c",
    "omega_h",
    "k",
    "t_c",
    "t_h",
    "lambda_sq",
    "cutoff",
    "rel_tol",
    "abs_tol",
    "max_omega",
    "measured",
    "axis",
    "log_grid",
    "grid",
    "output",
    "jobs",
];

/// Parses a config file into raw key-value pairs.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, (String, usize)>, String> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .filter(|(k, v)| !k.is_empty() && !v.is_empty())
            .ok_or_else(|| format!("config line {line_no}: expected `key = value`, got `{raw}`"))?;
        if !CONFIG_KEYS.contains(&key) {
            return Err(format!("config line {line_no}: unknown key `{key}`"));
        }
        if out
            .insert(key.to_string(), (value.to_string(), line_no))
            .is_some()
        {
            return Err(format!("config line {line_no}: duplicate key `{key}`"));
        }
    }
    Ok(out)
}

fn load_config(path: &Path) -> Result<BTreeMap<String, (String, usize)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text).map_err(CliError::usage)
}

fn parse_value<T: std::str::FromStr>(
    key: &str,
    value: &str,
    line: Option<usize>,
) -> Result<T, CliError> {
    value.parse().map_err(|_| {
        let at = line
            .map(|l| format!("config line {l}: "))
            .unwrap_or_default();
        CliError::usage(format!("{at}invalid value `{value}` for `{key}`"))
    })
}

/// Fills unset flags from the config file.
fn merge_point(
    args: &mut PointArgs,
    file: &BTreeMap<String, (String, usize)>,
) -> Result<(), CliError> {
    let num = |key: &str, slot: &mut Option<f64>| -> Result<(), CliError> {
        if slot.is_none() {
            if let Some((v, line)) = file.get(key) {
                *slot = Some(parse_value(key, v, Some(*line))?);
            }
        }
        Ok(())
    };
    num("omega_c", &mut args.omega_c)?;
    num("omega_h", &mut args.omega_h)?;
    num("k", &mut args.k)?;
    num("t_c", &mut args.t_c)?;
    num("t_h", &mut args.t_h)?;
    num("lambda_sq", &mut args.lambda_sq)?;
    num("cutoff", &mut args.cutoff)?;
    num("rel_tol", &mut args.rel_tol)?;
    num("abs_tol", &mut args.abs_tol)?;
    num("max_omega", &mut args.max_omega)?;
    if args.scenario.is_none() {
        args.scenario = file.get("scenario").map(|(v, _)| v.clone());
    }
    if args.measured.is_none() {
        args.measured = file.get("measured").map(|(v, _)| v.clone());
    }
    Ok(())
}

fn config_for(point: &PointArgs) -> Result<BTreeMap<String, (String, usize)>, CliError> {
    match &point.config {
        Some(path) => load_config(path),
        None => Ok(BTreeMap::new()),
    }
}

struct Resolved {
    scenario: Scenario,
    spec: QuadratureSpec,
    measured: Bath,
}

fn resolve_point(args: &PointArgs) -> Result<Resolved, CliError> {
    let name = args.scenario.clone().unwrap_or_else(|| "custom".into());
    let mut scenario = if name == "custom" {
        Scenario {
            name,
            params: WireParams {
                omega_c: f64::NAN,
                omega_h: f64::NAN,
                k: f64::NAN,
                t_c: f64::NAN,
                t_h: f64::NAN,
                lambda_sq: 1e-3,
                cutoff: 1e3,
            },
            axis: Axis::K,
            grid: log_grid(1e-4, 1.0, DEFAULT_GRID_POINTS).expect("valid range"),
        }
    } else {
        preset(&name).ok_or_else(|| {
            CliError::usage(format!(
                "unknown scenario `{name}`; expected one of {} or custom",
                PRESET_NAMES.join(", ")
            ))
        })?
    };
    let p = &mut scenario.params;
    for (slot, value) in [
        (&mut p.omega_c, args.omega_c),
        (&mut p.omega_h, args.omega_h),
        (&mut p.k, args.k),
        (&mut p.t_c, args.t_c),
        (&mut p.t_h, args.t_h),
        (&mut p.lambda_sq, args.lambda_sq),
        (&mut p.cutoff, args.cutoff),
    ] {
        if let Some(v) = value {
            *slot = v;
        }
    }
    for (key, v) in [
        ("omega_c", p.omega_c),
        ("omega_h", p.omega_h),
        ("k", p.k),
        ("t_c", p.t_c),
        ("t_h", p.t_h),
    ] {
        if v.is_nan() {
            return Err(CliError::usage(format!("custom scenario needs `{key}`")));
        }
    }
    p.validate().map_err(|e| CliError::solver(&e))?;

    let mut spec = QuadratureSpec::default();
    if let Some(v) = args.rel_tol {
        spec.rel_tol = v;
    }
    if let Some(v) = args.abs_tol {
        spec.abs_tol = v;
    }
    spec.max_omega = args.max_omega;
    spec.validate(p).map_err(|e| CliError::solver(&e))?;

    let measured = match &args.measured {
        Some(s) => s
            .parse()
            .map_err(|e: Error| CliError::usage(e.to_string()))?,
        None => Bath::Hot,
    };
    Ok(Resolved {
        scenario,
        spec,
        measured,
    })
}

fn parse_log_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "log grid must be `lo:hi:n`, got `{s}`"
        )));
    }
    let lo: f64 = parse_value("log_grid", parts[0], None)?;
    let hi: f64 = parse_value("log_grid", parts[1], None)?;
    let n: usize = parse_value("log_grid", parts[2], None)?;
    log_grid(lo, hi, n).map_err(|e| CliError::usage(e.to_string()))
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let grid = s
        .split(',')
        .map(|v| parse_value::<f64>("grid", v.trim(), None))
        .collect::<Result<Vec<_>, _>>()?;
    if grid.is_empty() {
        return Err(CliError::usage("empty grid"));
    }
    Ok(grid)
}

struct SweepPlan {
    resolved: Resolved,
    output: Option<PathBuf>,
    jobs: Option<usize>,
}

fn resolve_sweep(args: &SweepArgs, env_jobs: Option<String>) -> Result<SweepPlan, CliError> {
    let file = config_for(&args.point)?;
    let mut point = args.point.clone();
    merge_point(&mut point, &file)?;
    let mut resolved = resolve_point(&point)?;

    let from_file = |key: &str| file.get(key).map(|(v, l)| (v.clone(), Some(*l)));
    let axis = args
        .axis
        .clone()
        .map(|v| (v, None))
        .or_else(|| from_file("axis"));
    if let Some((v, line)) = axis {
        resolved.scenario.axis = parse_value("axis", &v, line)?;
    }
    // flags beat the file, and an explicit grid beats a log grid from the file
    let grid = match (&args.grid, &args.log_grid) {
        (Some(g), _) => Some(parse_grid(g)?),
        (None, Some(g)) => Some(parse_log_grid(g)?),
        (None, None) => match (from_file("grid"), from_file("log_grid")) {
            (Some(_), Some((_, l))) => {
                return Err(CliError::usage(format!(
                    "config line {}: `grid` and `log_grid` are mutually exclusive",
                    l.unwrap_or(0)
                )))
            }
            (Some((g, _)), None) => Some(parse_grid(&g)?),
            (None, Some((g, _))) => Some(parse_log_grid(&g)?),
            (None, None) => None,
        },
    };
    if let Some(g) = grid {
        resolved.scenario.grid = g;
    } else if resolved.scenario.axis != Axis::K {
        return Err(CliError::usage(format!(
            "axis `{}` needs an explicit --grid or --log-grid",
            resolved.scenario.axis.name()
        )));
    }

    let output = args
        .output
        .clone()
        .or_else(|| file.get("output").map(|(v, _)| PathBuf::from(v)));
    let jobs = match args.jobs {
        Some(j) => Some(j),
        None => match file.get("jobs") {
            Some((v, l)) => Some(parse_value("jobs", v, Some(*l))?),
            None => match env_jobs {
                Some(v) => Some(parse_value("QWIRE_JOBS", &v, None)?),
                None => None,
            },
        },
    };
    if jobs == Some(0) {
        return Err(CliError::usage("jobs must be at least 1"));
    }
    Ok(SweepPlan {
        resolved,
        output,
        jobs,
    })
}

fn resolve_point_with_config(args: &PointArgs) -> Result<Resolved, CliError> {
    let file = config_for(args)?;
    for key in ["axis", "log_grid", "grid", "output", "jobs"] {
        if let Some((_, line)) = file.get(key) {
            return Err(CliError::usage(format!(
                "config line {line}: `{key}` only applies to sweep"
            )));
        }
    }
    let mut point = args.clone();
    merge_point(&mut point, &file)?;
    resolve_point(&point)
}

/// Writes the resolved configuration to stderr; the sweep axis and grid
/// only when they are used.
fn echo(stderr: &mut dyn Write, resolved: &Resolved, with_grid: bool) {
    let mut scenario = serde_json::to_value(&resolved.scenario).expect("serializable");
    if !with_grid {
        if let Some(obj) = scenario.as_object_mut() {
            obj.remove("axis");
            obj.remove("grid");
        }
    }
    let line = json!({
        "resolved": {
            "scenario": scenario,
            "quadrature": {
                "rel_tol": resolved.spec.rel_tol,
                "abs_tol": resolved.spec.abs_tol,
                "max_omega": resolved.spec.max_omega(&resolved.scenario.params),
            },
            "measured": resolved.measured,
        }
    });
    let _ = writeln!(stderr, "{line}");
}

fn steady(
    args: &PointArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let resolved = resolve_point_with_config(args)?;
    echo(stderr, &resolved, false);
    let params = &resolved.scenario.params;
    let outcomes = solve_all(params, &resolved.spec).map_err(|e| CliError::solver(&e))?;
    let exact = outcomes[3]
        .result
        .as_ref()
        .expect("exact succeeded")
        .covariance;
    let discord = DiscordOptions::default();
    let mut code = EXIT_OK;
    let methods: Vec<serde_json::Value> = outcomes
        .iter()
        .map(|o| match &o.result {
            Ok(r) => {
                if !r.diagnostics.physical {
                    code = code.max(EXIT_UNPHYSICAL);
                }
                let corr =
                    CorrelationReport::compute(&r.covariance, &exact, resolved.measured, &discord);
                match corr {
                    Ok(c) => json!({
                        "method": o.method,
                        "covariance": r.covariance,
                        "heat_currents": r.heat_currents,
                        "diagnostics": r.diagnostics,
                        "correlations": c,
                    }),
                    Err(e) => {
                        code = code.max(EXIT_SOLVER);
                        json!({"method": o.method, "error": e.to_string()})
                    }
                }
            }
            Err(e) => {
                code = code.max(EXIT_SOLVER);
                json!({"method": o.method, "error": e.to_string()})
            }
        })
        .collect();
    let doc = json!({
        "spec_version": SCHEMA_VERSION,
        "scenario": resolved.scenario.name,
        "params": params,
        "quadrature": {
            "rel_tol": resolved.spec.rel_tol,
            "abs_tol": resolved.spec.abs_tol,
            "max_omega": resolved.spec.max_omega(params),
        },
        "discord_measured": resolved.measured,
        "methods": methods,
    });
    writeln!(
        stdout,
        "{}",
        serde_json::to_string_pretty(&doc).expect("serializable")
    )
    .map_err(|e| CliError::usage(format!("cannot write output: {e}")))?;
    if code == EXIT_UNPHYSICAL {
        return Err(CliError {
            code,
            kind: "non_physical",
            message: "a method produced a non-physical covariance".into(),
        });
    }
    if code == EXIT_SOLVER {
        return Err(CliError {
            code,
            kind: "solver_failure",
            message: "at least one method failed; see its `error` entry".into(),
        });
    }
    Ok(code)
}

const METRICS: [&str; 6] = [
    "fidelity_to_exact",
    "qdot_h",
    "mutual_info",
    "discord",
    "classical",
    "log_neg",
];

/// Column prefix of each method in the sweep CSV.
pub fn csv_prefix(method: Method) -> &'static str {
    match method {
        Method::Global => "gme",
        Method::Local => "lme",
        Method::Redfield => "redfield",
        Method::Exact => "exact",
    }
}

pub fn csv_header(axis: Axis) -> String {
    let mut cols = vec![axis.name().to_string(), "secular_margin".to_string()];
    for m in Method::ALL {
        for metric in METRICS {
            cols.push(format!("{}_{metric}", csv_prefix(m)));
        }
    }
    cols.push("exact_quadrature_error".into());
    cols.push("exact_quadrature_rel_tol".into());
    cols.join(",")
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_line(row: &SweepRow) -> String {
    let mut s = format!("{},{}", fmt(row.value), fmt(row.secular_margin));
    for m in &row.methods {
        for v in [
            m.fidelity_to_exact,
            m.qdot_h,
            m.mutual_info,
            m.discord,
            m.classical,
            m.log_neg,
        ] {
            let _ = write!(s, ",{}", fmt(v));
        }
    }
    let _ = write!(
        s,
        ",{},{}",
        fmt(row.quadrature_error),
        fmt(row.quadrature_rel_tol)
    );
    s
}

fn failed_line(value: f64) -> String {
    let n = 2 + 6 * Method::ALL.len() + 2;
    let mut fields = vec![fmt(value)];
    fields.extend(std::iter::repeat_n(fmt(f64::NAN), n - 1));
    fields.join(",")
}

fn run_sweep(
    args: &SweepArgs,
    env_jobs: Option<String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let plan = resolve_sweep(args, env_jobs)?;
    echo(stderr, &plan.resolved, true);
    let scenario = &plan.resolved.scenario;
    let options = SweepOptions {
        quadrature: plan.resolved.spec,
        discord: DiscordOptions::default(),
        measured: plan.resolved.measured,
        jobs: plan.jobs,
    };
    let rows = sweep(&scenario.params, scenario.axis, &scenario.grid, &options)
        .map_err(|e| CliError::solver(&e))?;

    let mut csv = csv_header(scenario.axis);
    csv.push('\n');
    let mut failures = 0usize;
    for (row, &value) in rows.iter().zip(&scenario.grid) {
        match row {
            Ok(r) => {
                csv.push_str(&csv_line(r));
                for (m, msg) in &r.failures {
                    failures += 1;
                    let _ = writeln!(
                        stderr,
                        "{}",
                        json!({"warning": {"value": value, "method": m, "message": msg}})
                    );
                }
            }
            Err(e) => {
                failures += 1;
                csv.push_str(&failed_line(value));
                let _ = writeln!(
                    stderr,
                    "{}",
                    json!({"warning": {"value": value, "message": e.to_string()}})
                );
            }
        }
        csv.push('\n');
    }
    let written = match &plan.output {
        Some(path) => std::fs::write(path, csv.as_bytes()),
        None => stdout.write_all(csv.as_bytes()),
    };
    written.map_err(|e| CliError::usage(format!("cannot write output: {e}")))?;
    if failures > 0 {
        return Err(CliError {
            code: EXIT_SOLVER,
            kind: "solver_failure",
            message: format!("{failures} method evaluations failed; their CSV fields are NaN"),
        });
    }
    Ok(EXIT_OK)
}

fn run_validate(
    args: &PointArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, CliError> {
    let resolved = resolve_point_with_config(args)?;
    echo(stderr, &resolved, false);
    let checks =
        validate(&resolved.scenario.params, &resolved.spec).map_err(|e| CliError::solver(&e))?;
    let doc = json!({
        "spec_version": SCHEMA_VERSION,
        "scenario": resolved.scenario.name,
        "params": resolved.scenario.params,
        "checks": checks,
    });
    writeln!(
        stdout,
        "{}",
        serde_json::to_string_pretty(&doc).expect("serializable")
    )
    .map_err(|e| CliError::usage(format!("cannot write output: {e}")))?;
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    if failed.iter().any(|c| c.physicality) {
        return Err(CliError {
            code: EXIT_UNPHYSICAL,
            kind: "non_physical",
            message: "physicality check failed".into(),
        });
    }
    if let Some(c) = failed.first() {
        return Err(CliError {
            code: EXIT_SOLVER,
            kind: "check_failed",
            message: format!("{} check failed for {}", c.name, c.method.name()),
        });
    }
    Ok(EXIT_OK)
}

fn list_scenarios(stdout: &mut dyn Write) -> Result<i32, CliError> {
    for name in PRESET_NAMES {
        let s = preset(name).expect("listed preset");
        let p = s.params;
        let g = &s.grid;
        writeln!(
            stdout,
            "{name}  omega_c={} omega_h={} t_c={} t_h={} lambda_sq={} cutoff={} k={}  sweep {}:{}:{}:{}",
            p.omega_c,
            p.omega_h,
            p.t_c,
            p.t_h,
            p.lambda_sq,
            p.cutoff,
            p.k,
            s.axis.name(),
            g[0],
            g[g.len() - 1],
            g.len()
        )
        .map_err(|e| CliError::usage(format!("cannot write output: {e}")))?;
    }
    Ok(EXIT_OK)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. `QWIRE_JOBS` is read from the process environment.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var("QWIRE_JOBS").ok(), stdout, stderr)
}

pub fn run_with_env<I, T>(
    args: I,
    env_jobs: Option<String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            let _ = writeln!(stderr, "{}", CliError::usage(first).json());
            return EXIT_USAGE;
        }
    };
    let result = match &cli.command {
        Command::Steady(a) => steady(a, stdout, stderr),
        Command::Sweep(a) => run_sweep(a, env_jobs, stdout, stderr),
        Command::Validate(a) => run_validate(a, stdout, stderr),
        Command::Scenarios => list_scenarios(stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.json());
            e.code
        }
    }
}
