//! Command-line frontend: problem files in, reports and CSV out.
//!
//! A problem file is TOML:
//!
//! ```toml
//! horizon = 3.0
//! grid = 200
//!
//! [ode]
//! a = [6.0, 5.0]        # a1 .. an
//! b = [1.0, 3.0, 2.0]   # b0 .. bn
//!
//! [input]
//! past = "cos 1"
//! future = "ramp"
//!
//! [conditions]
//! kind = "previous"     # or "first"
//! y = [1.0, 0.0]        # highest derivative first
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fmt::{fmt_num, fmt_vec};
use crate::ic::{classify_continuity, recover_state};
use crate::laplace::{laplace_solution, solve_ivp, Conditions, IVProblem};
use crate::ode::LinearODE;
use crate::realization::{
    check_equivalence, markov_matrix, markov_parameters, observability_matrix, observable_canonical,
    StateSpace,
};
use crate::signal::{ConditionStack, Mode, PiecewiseInput, Signal};
use crate::simulate::{simulate_ivp, uniform_grid, Trajectory};
use crate::Tolerances;

/// Environment variable holding tolerance overrides, see
/// [`Tolerances::parse_overrides`].
pub const TOLERANCE_ENV: &str = "LTI_IVP_TOL";

pub const DEFAULT_GRID_POINTS: usize = 200;

#[derive(Debug, Parser)]
#[command(name = "lti-ivp", version, about = "Linear ODE initial value problems with inputs switching at t = 0")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Number of uniform grid points over (0, horizon]
    #[arg(long, global = true)]
    pub grid: Option<usize>,

    /// Time horizon, overriding the file's `horizon`
    #[arg(long, global = true)]
    pub horizon: Option<f64>,

    /// Write the trajectory CSV to this path
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,

    /// Print the parsed problem file in canonical form and stop
    #[arg(long, global = true)]
    pub echo: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form solution through the Laplace transform
    Solve { file: PathBuf },
    /// Map previous conditions to first conditions
    MapIc { file: PathBuf },
    /// Observable canonical realization, observability and Markov matrices
    Realize { file: PathBuf },
    /// ODE/state-space equivalence and output continuity across t = 0
    Check { file: PathBuf },
    /// Time-domain simulation of the equivalent state-space representation
    Simulate { file: PathBuf },
}

impl Command {
    fn file(&self) -> &Path {
        match self {
            Command::Solve { file }
            | Command::MapIc { file }
            | Command::Realize { file }
            | Command::Check { file }
            | Command::Simulate { file } => file,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("invalid field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Solver(#[from] crate::Error),
}

fn field_err(field: &str, message: impl Into<String>) -> CliError {
    CliError::Field {
        field: field.to_string(),
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// file schema

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    pub ode: OdeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ssr: Option<SsrSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeSpec {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub past: Option<SignalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub future: Option<SignalSpec>,
}

/// A signal: one sugar string (`"step"`, `"ramp"`, `"zero"`, `"cos w"`,
/// `"sin w"`, `"exp a"`, each optionally prefixed `"c *"`), or a list of
/// sugar strings and explicit mode records that are summed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignalSpec {
    Sugar(String),
    Terms(Vec<SignalTerm>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignalTerm {
    Sugar(String),
    Mode(ModeRecord),
}

/// `(amp_re + i·amp_im) · t^power · exp((rate_re + i·rate_im)·t)`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeRecord {
    pub amp_re: f64,
    #[serde(default)]
    pub amp_im: f64,
    #[serde(default)]
    pub power: u32,
    #[serde(default)]
    pub rate_re: f64,
    #[serde(default)]
    pub rate_im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionKind {
    Previous,
    First,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionsSpec {
    pub kind: ConditionKind,
    pub y: Vec<f64>,
}

/// Row-major state-space matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SsrSpec {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    #[serde(default)]
    pub d: f64,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem file schema always serializes")
    }

    pub fn ode(&self) -> Result<LinearODE, CliError> {
        let n = self.ode.a.len();
        if n == 0 {
            return Err(field_err("ode.a", "needs at least one coefficient (order n >= 1)"));
        }
        if self.ode.b.len() != n + 1 {
            return Err(field_err(
                "ode.b",
                format!(
                    "expected {} entries (n + 1 with n = {n}), got {}",
                    n + 1,
                    self.ode.b.len()
                ),
            ));
        }
        LinearODE::new(self.ode.a.clone(), self.ode.b.clone()).map_err(|e| field_err("ode.b", e.to_string()))
    }

    fn conditions(&self, n: usize) -> Result<&ConditionsSpec, CliError> {
        let c = self
            .conditions
            .as_ref()
            .ok_or_else(|| field_err("conditions", "missing table"))?;
        if c.y.len() != n {
            return Err(field_err(
                "conditions.y",
                format!("expected {n} entries (order n), got {}", c.y.len()),
            ));
        }
        Ok(c)
    }

    fn signal(&self, which: &str) -> Result<Option<Signal>, CliError> {
        let spec = self.input.as_ref().and_then(|i| match which {
            "past" => i.past.as_ref(),
            _ => i.future.as_ref(),
        });
        spec.map(|s| s.to_signal(&format!("input.{which}")))
            .transpose()
    }

    fn future(&self) -> Result<Signal, CliError> {
        self.signal("future")?
            .ok_or_else(|| field_err("input.future", "missing"))
    }

    /// The problem as the library sees it.
    pub fn problem(&self) -> Result<IVProblem, CliError> {
        let ode = self.ode()?;
        let n = ode.order();
        let cond = self.conditions(n)?;
        let future = self.future()?;
        let past = self.signal("past")?;
        let (conditions, past) = match cond.kind {
            ConditionKind::Previous => {
                let past = past.ok_or_else(|| {
                    field_err("input.past", "required when conditions.kind = \"previous\"")
                })?;
                (Conditions::Previous(ConditionStack::new(cond.y.clone())), past)
            }
            ConditionKind::First => (
                Conditions::First(ConditionStack::new(cond.y.clone())),
                past.unwrap_or_default(),
            ),
        };
        let mut problem = IVProblem::new(ode, PiecewiseInput::new(past, future), conditions)?;
        if let Some(h) = self.horizon {
            problem = problem
                .with_horizon(h)
                .map_err(|e| field_err("horizon", e.to_string()))?;
        }
        Ok(problem)
    }

    pub fn ssr(&self) -> Result<Option<StateSpace>, CliError> {
        self.ssr
            .as_ref()
            .map(|s| StateSpace::from_rows(&s.a, &s.b, &s.c, s.d).map_err(|e| field_err("ssr", e.to_string())))
            .transpose()
    }
}

impl SignalSpec {
    pub fn to_signal(&self, field: &str) -> Result<Signal, CliError> {
        match self {
            SignalSpec::Sugar(s) => parse_sugar(s).map_err(|m| field_err(field, m)),
            SignalSpec::Terms(terms) => {
                let mut modes = Vec::new();
                let mut acc = Signal::zero();
                for (i, t) in terms.iter().enumerate() {
                    match t {
                        SignalTerm::Sugar(s) => {
                            acc = acc.add(&parse_sugar(s).map_err(|m| field_err(&format!("{field}[{i}]"), m))?)
                        }
                        SignalTerm::Mode(m) => modes.push(Mode::new(
                            num_complex::Complex64::new(m.amp_re, m.amp_im),
                            m.power,
                            num_complex::Complex64::new(m.rate_re, m.rate_im),
                        )),
                    }
                }
                let explicit = Signal::from_modes(modes).map_err(|e| field_err(field, e.to_string()))?;
                Ok(acc.add(&explicit))
            }
        }
    }
}

fn parse_sugar(text: &str) -> Result<Signal, String> {
    let (scale, body) = match text.split_once('*') {
        Some((c, rest)) => (
            c.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad coefficient in '{text}'"))?,
            rest.trim(),
        ),
        None => (1.0, text.trim()),
    };
    let mut words = body.split_whitespace();
    let name = words.next().ok_or_else(|| "empty signal".to_string())?;
    let arg = words
        .next()
        .map(|w| w.parse::<f64>().map_err(|_| format!("bad argument in '{text}'")))
        .transpose()?;
    if words.next().is_some() {
        return Err(format!("trailing tokens in '{text}'"));
    }
    let need = |arg: Option<f64>| arg.ok_or_else(|| format!("'{name}' needs a numeric argument"));
    let sig = match name {
        "zero" => Signal::zero(),
        "step" => Signal::step(),
        "ramp" => Signal::ramp(),
        "cos" => Signal::cos(need(arg)?),
        "sin" => Signal::sin(need(arg)?),
        "exp" => Signal::exp(need(arg)?),
        other => {
            return Err(format!(
                "unknown signal '{other}' (expected zero, step, ramp, cos w, sin w, exp a)"
            ))
        }
    };
    if arg.is_some() && matches!(name, "zero" | "step" | "ramp") {
        return Err(format!("'{name}' takes no argument"));
    }
    Ok(sig.scale(scale))
}

// ---------------------------------------------------------------------------
// commands

/// Tolerances from [`TOLERANCE_ENV`], defaults when unset.
pub fn tolerances_from_env() -> Result<Tolerances, CliError> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(spec) => Tolerances::parse_overrides(&spec).map_err(|e| field_err(TOLERANCE_ENV, e.to_string())),
        Err(_) => Ok(Tolerances::default()),
    }
}

/// Runs a parsed command line and returns what goes to stdout.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let path = cli.command.file();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file = ProblemFile::parse(&text)?;
    if cli.echo {
        return Ok(file.to_toml());
    }
    let tol = tolerances_from_env()?;
    match &cli.command {
        Command::Solve { .. } => cmd_solve(cli, &file, &tol),
        Command::MapIc { .. } => cmd_map_ic(&file),
        Command::Realize { .. } => cmd_realize(&file),
        Command::Check { .. } => cmd_check(&file, &tol),
        Command::Simulate { .. } => cmd_simulate(cli, &file, &tol),
    }
}

fn grid_for(cli: &Cli, file: &ProblemFile) -> Result<Option<Vec<f64>>, CliError> {
    let horizon = cli.horizon.or(file.horizon);
    let points = cli.grid.or(file.grid).unwrap_or(DEFAULT_GRID_POINTS);
    if points == 0 {
        return Err(field_err("grid", "must be at least 1"));
    }
    match horizon {
        Some(h) if h > 0.0 && h.is_finite() => Ok(Some(uniform_grid(h, points))),
        Some(h) => Err(field_err("horizon", format!("must be positive, got {h}"))),
        None => Ok(None),
    }
}

fn write_csv(path: &Path, traj: &Trajectory) -> Result<(), CliError> {
    std::fs::write(path, traj.to_csv()).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn cmd_solve(cli: &Cli, file: &ProblemFile, tol: &Tolerances) -> Result<String, CliError> {
    let problem = file.problem()?;
    let sol = laplace_solution(&problem)?;
    let y = solve_ivp(&problem)?;
    let mut out = String::new();
    let _ = writeln!(out, "Y(s) = {}", sol.ys);
    let _ = writeln!(out, "  zero-state: {}", sol.zero_state_part);
    let _ = writeln!(out, "  zero-input: {}", sol.zero_input_part);
    if let Conditions::Previous(_) = problem.conditions {
        let _ = writeln!(out, "Y(0+) = {}", problem.first_conditions()?);
    }
    let _ = writeln!(out, "y(t) = {y}");

    if let Some(path) = &cli.csv {
        let grid = grid_for(cli, file)?
            .ok_or_else(|| field_err("horizon", "needed to write a trajectory (file or --horizon)"))?;
        let n = problem.ode.order();
        let ss = observable_canonical(&problem.ode);
        let mut traj = Trajectory {
            times: Vec::with_capacity(grid.len()),
            states: Vec::with_capacity(grid.len()),
            outputs: Vec::with_capacity(grid.len()),
        };
        for &t in &grid {
            let ys = y.derivative_stack_at(n, t);
            let us = problem.input.future.derivative_stack_at(n, t);
            traj.states.push(recover_state(&ss, &ys, &us, tol)?);
            traj.outputs.push(y.eval(t));
            traj.times.push(t);
        }
        write_csv(path, &traj)?;
        let _ = writeln!(out, "trajectory: {} ({} points)", path.display(), grid.len());
    }
    Ok(out)
}

fn cmd_map_ic(file: &ProblemFile) -> Result<String, CliError> {
    let problem = file.problem()?;
    let Conditions::Previous(y_prev) = &problem.conditions else {
        return Err(field_err(
            "conditions.kind",
            "map-ic needs previous conditions (kind = \"previous\")",
        ));
    };
    let n = problem.ode.order();
    let du = problem.input.jump(n);
    let m = markov_matrix(&problem.ode);
    let dy = ConditionStack::from_vector(&(&m.0 * du.to_vector()));
    let mut out = String::new();
    let _ = writeln!(out, "Y(0-) = {y_prev}");
    let _ = writeln!(out, "U(0-) = {}", problem.input.past.condition_stack(n));
    let _ = writeln!(out, "U(0+) = {}", problem.input.future.condition_stack(n));
    let _ = writeln!(out, "dU = {du}");
    let _ = writeln!(out, "M = {m}");
    let _ = writeln!(out, "dY = M*dU = {dy}");
    let _ = writeln!(out, "Y(0+) = {}", problem.first_conditions()?);
    Ok(out)
}

fn cmd_realize(file: &ProblemFile) -> Result<String, CliError> {
    let ode = file.ode()?;
    let n = ode.order();
    let ss = observable_canonical(&ode);
    let (r, m) = ode.relative_degree();
    let mut out = String::new();
    let _ = writeln!(out, "order n = {n}, relative degree r = {r}, m = {m}");
    let _ = writeln!(out, "G(s) = {}", ode.transfer_function());
    let _ = writeln!(out, "observable canonical realization:");
    let _ = writeln!(out, "{ss}");
    let _ = writeln!(out, "Markov parameters h = {}", fmt_vec(&markov_parameters(&ode, n + 1)));
    let _ = writeln!(out, "O = {}", observability_matrix(&ss));
    let _ = writeln!(out, "M = {}", markov_matrix(&ode));
    Ok(out)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_check(file: &ProblemFile, tol: &Tolerances) -> Result<String, CliError> {
    let ode = file.ode()?;
    let (ss, source) = match file.ssr()? {
        Some(ss) => (ss, "supplied"),
        None => (observable_canonical(&ode), "observable canonical"),
    };
    let report = check_equivalence(&ode, &ss, tol);
    let mut out = String::new();
    let _ = writeln!(out, "realization: {source}");
    let _ = writeln!(
        out,
        "condition 1 (same order): {} (ode n = {}, ssr n = {})",
        yes_no(report.same_order),
        ode.order(),
        ss.order()
    );
    let _ = writeln!(
        out,
        "condition 2 (same transfer function): {} (relative mismatch {})",
        yes_no(report.same_transfer_function),
        fmt_num(report.transfer_mismatch)
    );
    let _ = writeln!(
        out,
        "condition 3 (observable): {} (sigma_min/sigma_max {})",
        yes_no(report.observable),
        fmt_num(report.observability_ratio)
    );
    let failed = report.failed();
    match failed.len() {
        0 => {
            let _ = writeln!(out, "equivalent: yes (3/3)");
        }
        1 => {
            let _ = writeln!(out, "equivalent: no (condition {})", failed[0]);
        }
        _ => {
            let list: Vec<String> = failed.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "equivalent: no (conditions {})", list.join(", "));
        }
    }

    let n = ode.order();
    let past = file.signal("past")?;
    let future = file.signal("future")?;
    match (past, future) {
        (Some(past), Some(future)) => {
            let jump = PiecewiseInput::new(past, future).jump(n);
            let report = classify_continuity(&ode, &jump, tol)?;
            let _ = writeln!(out, "input jump dU = {jump}");
            let _ = writeln!(out, "output jump dY = {}", report.output_jump);
            let _ = writeln!(out, "{report}");
        }
        _ => {
            let _ = writeln!(out, "continuity: skipped (input.past and input.future both needed)");
        }
    }
    Ok(out)
}

fn cmd_simulate(cli: &Cli, file: &ProblemFile, tol: &Tolerances) -> Result<String, CliError> {
    let problem = file.problem()?;
    let grid = grid_for(cli, file)?
        .ok_or_else(|| field_err("horizon", "needed to simulate (file or --horizon)"))?;
    let traj = simulate_ivp(&problem, &grid, tol)?;
    match &cli.csv {
        Some(path) => {
            write_csv(path, &traj)?;
            Ok(format!("trajectory: {} ({} points)\n", path.display(), grid.len()))
        }
        None => Ok(traj.to_csv()),
    }
}
