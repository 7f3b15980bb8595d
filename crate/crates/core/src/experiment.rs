//! JSON-configured experiment runs and the reproduction entry points behind
//! the `fista-lab` binary.
//!
//! A config names a problem family, a solver, a schedule and a list of
//! analyses; unknown keys are rejected.
//!
//! ```json
//! {
//!   "problem": { "family": "feasibility" },
//!   "x0": [5, 0],
//!   "schedule": "bt",
//!   "iterations": 100000,
//!   "s_refs": [[0, 1], [1, 0], [0.5, 0.5]],
//!   "analyses": ["rate_bound", "lyapunov", "salzo"]
//! }
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bcch::{analyze, BcchScenario, ScenarioReport};
use crate::diagnostics::{
    check_momentum_identity, salzo_check, vector_verdict, xi_difference_check, ScalarSeq,
    SpanProjector, DEFAULT_REL_TOL, DEFAULT_WINDOW,
};
use crate::error::{Error, Result};
use crate::families::{self, Quadratic};
use crate::problem::{check_lipschitz, CompositeProblem};
use crate::report::CheckReport;
use crate::schedule::{ryu_bounds_check, validate_schedule, RyuBoundsReport, Schedule, ScheduleReport};
use crate::solver::{audit, fista_run, fmt17, nesterov_run, pgm_run, RunOptions, Trace};
use crate::vector::Vector;

/// Problem family and its parameters.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    /// `1/2 dist^2(., R_+^n) + iota_{<normal, x> = offset}`.
    Feasibility {
        #[serde(default = "default_normal")]
        normal: Vec<f64>,
        #[serde(default = "default_offset")]
        offset: f64,
    },
    /// `1/2 sum d_i (x_i - c_i)^2`.
    Quadratic { diag: Vec<f64>, center: Vec<f64> },
    RandomQuadratic {
        dim: usize,
        seed: u64,
        #[serde(default = "default_min_eig")]
        min_eig: f64,
        #[serde(default = "default_max_eig")]
        max_eig: f64,
    },
    /// `1/2 sum d_i (x_i - c_i)^2 + weight |x|_1`.
    L1Separable {
        diag: Vec<f64>,
        center: Vec<f64>,
        weight: f64,
    },
}

fn default_normal() -> Vec<f64> {
    vec![1.0, 1.0]
}
fn default_offset() -> f64 {
    1.0
}
fn default_min_eig() -> f64 {
    0.1
}
fn default_max_eig() -> f64 {
    1.0
}

impl ProblemSpec {
    pub fn build(&self) -> Result<CompositeProblem> {
        match self {
            ProblemSpec::Feasibility { normal, offset } => {
                families::feasibility(Vector::from(normal.clone()), *offset)
            }
            ProblemSpec::Quadratic { diag, center } => {
                families::quadratic(Quadratic::diagonal(diag, Vector::from(center.clone()))?)
            }
            ProblemSpec::RandomQuadratic {
                dim,
                seed,
                min_eig,
                max_eig,
            } => families::random_quadratic(*dim, *seed, *min_eig, *max_eig),
            ProblemSpec::L1Separable {
                diag,
                center,
                weight,
            } => families::l1_separable(diag, Vector::from(center.clone()), *weight),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    #[default]
    Fista,
    Pgm,
    Nesterov,
}

/// `"bt"`, `"linear"`, or an explicit list `t_0, t_1, ...`.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    Named(String),
    Explicit(Vec<f64>),
}

impl Default for ScheduleSpec {
    fn default() -> Self {
        ScheduleSpec::Named("bt".into())
    }
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<Schedule> {
        match self {
            ScheduleSpec::Named(n) => named_schedule(n, 0),
            ScheduleSpec::Explicit(ts) => Ok(Schedule::explicit(ts.clone())),
        }
    }
}

/// `bt`, `linear`, or `constant-ones` (the latter needs its length).
pub fn named_schedule(name: &str, len: usize) -> Result<Schedule> {
    match name {
        "bt" => Ok(Schedule::beck_teboulle()),
        "linear" => Ok(Schedule::linear()),
        "constant-ones" => Ok(Schedule::explicit(vec![1.0; len.max(2)])),
        other => Err(Error::Config(format!(
            "unknown schedule {other:?}; expected \"bt\", \"linear\" or an explicit array"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedPoint {
    pub point: Vec<f64>,
    pub tol: f64,
}

/// Every analysis a config may request.
pub const ANALYSES: [&str; 12] = [
    "lipschitz",
    "rate_bound",
    "lyapunov",
    "structural",
    "sufficient_decrease",
    "bounded",
    "vanishing_gap",
    "momentum_identity",
    "salzo",
    "xi_difference",
    "span_projection",
    "final_point",
];

/// Analyses that read vectors on every row.
const NEEDS_ALL_SNAPSHOTS: [&str; 4] = ["sufficient_decrease", "momentum_identity", "salzo", "span_projection"];

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub x0: Vec<f64>,
    #[serde(default)]
    pub solver: SolverKind,
    #[serde(default)]
    pub schedule: ScheduleSpec,
    pub iterations: usize,
    #[serde(default)]
    pub s_refs: Vec<Vec<f64>>,
    #[serde(default = "one")]
    pub snapshot_every: usize,
    #[serde(default)]
    pub analyses: Vec<String>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Seed for random probes.
    #[serde(default)]
    pub seed: u64,
    /// Tail window of convergence verdicts.
    #[serde(default = "default_window")]
    pub window: usize,
    /// Verdict tolerance, relative to `max(1, |tail values|)`.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Number of random probes for the sufficient-decrease check.
    #[serde(default = "default_probes")]
    pub probes: usize,
    #[serde(default)]
    pub expected_limit: Option<ExpectedPoint>,
}

fn one() -> usize {
    1
}
fn default_window() -> usize {
    DEFAULT_WINDOW
}
fn default_tol() -> f64 {
    DEFAULT_REL_TOL
}
fn default_probes() -> usize {
    100
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.iterations == 0 {
            return bad("iterations must be >= 1".into());
        }
        if self.snapshot_every == 0 {
            return bad("snapshot_every must be >= 1".into());
        }
        if self.window < 2 {
            return bad("window must be >= 2".into());
        }
        if !(self.tol >= 0.0) {
            return bad("tol must be >= 0".into());
        }
        for a in &self.analyses {
            if !ANALYSES.contains(&a.as_str()) {
                return bad(format!("unknown analysis {a:?}; known: {ANALYSES:?}"));
            }
            if self.snapshot_every > 1 && NEEDS_ALL_SNAPSHOTS.contains(&a.as_str()) {
                return bad(format!(
                    "analysis {a:?} needs vectors on every row; set snapshot_every = 1"
                ));
            }
        }
        if let ScheduleSpec::Named(n) = &self.schedule {
            named_schedule(n, 0)?;
        }
        if self.analyses.iter().any(|a| a == "final_point") && self.expected_limit.is_none() {
            return bad("analysis \"final_point\" needs expected_limit".into());
        }
        Ok(())
    }
}

/// A scalar-sequence scenario run from a config file.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// One of [`crate::bcch::SCENARIO_NAMES`].
    pub scenario: String,
    /// Last index `K`.
    pub last: usize,
    /// `l` for `ex42` / `ex43`.
    #[serde(default)]
    pub limit: Option<f64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

/// Either config kind accepted by `run`; a top-level `scenario` key selects
/// the scalar-sequence kind.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyConfig {
    Experiment(ExperimentConfig),
    Scenario(ScenarioConfig),
}

impl AnyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if value.get("scenario").is_some() {
            let cfg: ScenarioConfig =
                serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
            Ok(AnyConfig::Scenario(cfg))
        } else {
            let cfg: ExperimentConfig =
                serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
            cfg.validate()?;
            Ok(AnyConfig::Experiment(cfg))
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn output_dir(&self) -> Option<&PathBuf> {
        match self {
            AnyConfig::Experiment(c) => c.output_dir.as_ref(),
            AnyConfig::Scenario(c) => c.output_dir.as_ref(),
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        if let AnyConfig::Experiment(c) = self {
            c.seed = seed;
        }
    }
}

/// Runs a scenario config and writes `report.json` into `out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<BcchDemo> {
    let demo = bcch_demo_with(&cfg.scenario, cfg.limit, cfg.last)?;
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("report.json"), serde_json::to_string_pretty(&demo)?)?;
    Ok(demo)
}

/// What one config run produced.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub problem: String,
    pub method: crate::solver::Method,
    pub schedule: String,
    pub iterations: usize,
    pub final_x: Vector,
    pub checks: Vec<CheckReport>,
    /// Requested analyses that could not apply (e.g. unknown optimal value).
    pub skipped: Vec<String>,
    pub pass: bool,
}

impl RunReport {
    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.claim.as_str()).collect()
    }
}

/// Runs one config, writes `trace.csv`, `snapshots.json` and `report.json`
/// into `out_dir`, and returns the report.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunReport> {
    cfg.validate()?;
    let problem = cfg.problem.build().map_err(as_config)?;
    let x0 = Vector::from(cfg.x0.clone());
    x0.ensure_dim(problem.dim()).map_err(as_config)?;
    let s_refs: Vec<Vector> = cfg.s_refs.iter().cloned().map(Vector::from).collect();
    for s in &s_refs {
        s.ensure_dim(problem.dim()).map_err(as_config)?;
    }
    let opts = RunOptions {
        snapshot_every: cfg.snapshot_every,
    };
    let trace = match cfg.solver {
        SolverKind::Pgm => pgm_run(&problem, &x0, cfg.iterations, &s_refs, opts),
        SolverKind::Fista => {
            let mut s = cfg.schedule.build()?;
            fista_run(&problem, &x0, &mut s, cfg.iterations, &s_refs, opts)
        }
        SolverKind::Nesterov => {
            let mut s = cfg.schedule.build()?;
            nesterov_run(&problem, &x0, &mut s, cfg.iterations, &s_refs, opts)
        }
    };
    let trace = match trace {
        Ok(t) => t,
        Err(Error::NonFiniteIterate { k, trace }) => {
            fs::create_dir_all(out_dir)?;
            write_trace(&trace, out_dir)?;
            return Err(Error::NonFiniteIterate { k, trace });
        }
        Err(e @ (Error::InvalidSchedule(_) | Error::InvalidArgument(_))) => return Err(as_config(e)),
        Err(e) => return Err(e),
    };

    let (checks, skipped) = analyses(cfg, &problem, &trace)?;
    let report = RunReport {
        problem: problem.id().to_string(),
        method: trace.method,
        schedule: trace.schedule_id.clone(),
        iterations: cfg.iterations,
        final_x: trace.final_x().clone(),
        pass: checks.iter().all(|c| c.pass),
        checks,
        skipped,
    };
    fs::create_dir_all(out_dir)?;
    write_trace(&trace, out_dir)?;
    fs::write(out_dir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn write_trace(trace: &Trace, out_dir: &Path) -> Result<()> {
    let csv = fs::File::create(out_dir.join("trace.csv"))?;
    let mut w = std::io::BufWriter::new(csv);
    trace.write_csv(&mut w)?;
    w.flush()?;
    fs::write(
        out_dir.join("snapshots.json"),
        serde_json::to_string(&trace.snapshots_json())?,
    )?;
    Ok(())
}

fn relative_tol(seq: &ScalarSeq, window: usize, tol: f64) -> f64 {
    let tail = &seq.values[seq.len().saturating_sub(window)..];
    tol * tail.iter().fold(1f64, |m, v| m.max(v.abs()))
}

fn analyses(
    cfg: &ExperimentConfig,
    problem: &CompositeProblem,
    trace: &Trace,
) -> Result<(Vec<CheckReport>, Vec<String>)> {
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let s_refs = &trace.s_refs;
    let pairs: Vec<(usize, usize)> = (0..s_refs.len())
        .flat_map(|i| (i + 1..s_refs.len()).map(move |j| (i, j)))
        .collect();
    let has_mu = problem.mu().is_some();

    for name in &cfg.analyses {
        match name.as_str() {
            "lipschitz" => {
                let probes = audit::domain_probes(problem, &trace.x0, 1.0 + trace.x0.norm(), 40, cfg.seed)?;
                let mut pts: Vec<Vector> = probes;
                pts.extend(trace.records.iter().filter_map(|r| r.x().cloned()).take(40));
                let sample: Vec<(Vector, Vector)> =
                    pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
                let r = check_lipschitz(problem, &sample)?;
                checks.push(CheckReport::bound("lipschitz", r.max_ratio, r.beta * (1.0 + 1e-8)));
            }
            "rate_bound" => match audit::rate_bound(trace, problem) {
                Some(r) => checks.push(r),
                None => skipped.push("rate_bound: optimal value unknown".into()),
            },
            "lyapunov" if !has_mu || s_refs.is_empty() => {
                skipped.push("lyapunov: needs a known optimal value and s_refs".into())
            }
            "lyapunov" => checks.extend(audit::lyapunov(trace)),
            "structural" => checks.extend(audit::structural(trace)),
            "sufficient_decrease" => {
                let center = problem
                    .solution()
                    .map(|s| s.s_ref.clone())
                    .unwrap_or_else(|| trace.x0.clone());
                let radius = 1.0 + trace.x0.dist(&center);
                let probes = audit::domain_probes(problem, &center, radius, cfg.probes, cfg.seed)?;
                let n = trace.len() - 1;
                let rows: Vec<usize> = (0..100.min(n)).map(|i| i * n / 100.min(n)).collect();
                checks.push(audit::sufficient_decrease(problem, trace, &probes, &rows)?);
                if let Some(r) = audit::sufficient_decrease_along_trace(trace) {
                    checks.push(r);
                }
            }
            "bounded" => checks.push(audit::boundedness(trace)),
            "vanishing_gap" => checks.extend(audit::vanishing_gap(trace)),
            "momentum_identity" => {
                let dirs: Vec<Vector> = if pairs.is_empty() {
                    (0..problem.dim()).map(|i| Vector::basis(problem.dim(), i)).collect()
                } else {
                    pairs.iter().map(|&(i, j)| &s_refs[i] - &s_refs[j]).collect()
                };
                for d in dirs {
                    let mut r = check_momentum_identity(trace, &d)?;
                    r.claim = format!("momentum_identity[d={:?}]", d.as_slice());
                    checks.push(r);
                }
            }
            "salzo" if pairs.is_empty() => skipped.push("salzo: needs two or more s_refs".into()),
            "salzo" => {
                let w: Vec<(Vector, Vector)> =
                    pairs.iter().map(|&(i, j)| (s_refs[i].clone(), s_refs[j].clone())).collect();
                // absolute tolerance per pair from the relative one
                for (&(i, j), (w1, w2)) in pairs.iter().zip(&w) {
                    let seq = crate::diagnostics::inner_product_seq(
                        trace,
                        crate::diagnostics::Which::X,
                        &(w1 - w2),
                    )?;
                    let tol = relative_tol(&seq, cfg.window, cfg.tol);
                    let rep = salzo_check(trace, &[(w1.clone(), w2.clone())], cfg.window, tol)?;
                    checks.push(rep.verdicts[0].report(format!("salzo[s{i},s{j}]")));
                }
            }
            "xi_difference" if !has_mu || pairs.is_empty() => {
                skipped.push("xi_difference: needs a known optimal value and two s_refs".into())
            }
            "xi_difference" => {
                for &(i, j) in &pairs {
                    let v = xi_difference_check(trace, i, j, cfg.window, cfg.tol)?;
                    checks.push(v.report(format!("xi_difference[s{i},s{j}]")));
                }
            }
            "span_projection" => {
                let spanning: Vec<Vector> = if pairs.is_empty() {
                    vec![Vector::basis(problem.dim(), 0)]
                } else {
                    pairs.iter().map(|&(i, j)| &s_refs[i] - &s_refs[j]).collect()
                };
                let p = SpanProjector::new(&spanning)?;
                let projected: Vec<Vector> =
                    trace.states()?.into_iter().map(|s| p.project(&s.x)).collect();
                let scale = projected.iter().rev().take(cfg.window).fold(1f64, |m, v| m.max(v.norm()));
                let v = vector_verdict(&projected, cfg.window, cfg.tol * scale)?;
                checks.push(CheckReport {
                    claim: format!("span_projection[rank={}]", p.rank()),
                    pass: v.converged,
                    residual_or_oscillation: v.tail_oscillation,
                    window: Some(v.window),
                    tol: v.tol,
                    note: Some(format!("limit estimate {:?}", v.limit_estimate.as_slice())),
                });
            }
            "final_point" => {
                let e = cfg.expected_limit.as_ref().expect("validated");
                let target = Vector::from(e.point.clone());
                target.ensure_dim(problem.dim()).map_err(as_config)?;
                checks.push(audit::final_distance(trace, &target, e.tol));
            }
            _ => unreachable!("validated"),
        }
    }
    Ok((checks, skipped))
}

/// Plot data for the first FISTA iterates on the planar feasibility problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Data {
    pub iterates: Vec<Vector>,
    pub segment: [Vector; 2],
}

pub const FIG1_POINTS: usize = 25;

/// First 25 FISTA iterates from `(5, 0)` with the Beck-Teboulle schedule, and
/// the endpoints of the solution segment.
pub fn repro_fig1() -> Result<Fig1Data> {
    let problem = families::feasibility_plane();
    let mut bt = Schedule::beck_teboulle();
    let trace = fista_run(
        &problem,
        &Vector::from([5.0, 0.0]),
        &mut bt,
        FIG1_POINTS - 1,
        &[],
        RunOptions::default(),
    )?;
    let iterates = trace.states()?.into_iter().map(|s| s.x.clone()).collect();
    Ok(Fig1Data {
        iterates,
        segment: [Vector::from([0.0, 1.0]), Vector::from([1.0, 0.0])],
    })
}

impl Fig1Data {
    /// Two whitespace-separated columns; blocks separated by a blank line.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# fista iterates x_0..x_{}", self.iterates.len() - 1)?;
        for x in &self.iterates {
            writeln!(out, "{} {}", fmt17(x[0]), fmt17(x[1]))?;
        }
        writeln!(out)?;
        writeln!(out, "# solution segment endpoints")?;
        for x in &self.segment {
            writeln!(out, "{} {}", fmt17(x[0]), fmt17(x[1]))?;
        }
        Ok(())
    }
}

/// Default verdict settings for scalar-sequence scenarios.
pub const BCCH_WINDOW: usize = 100;
pub const BCCH_TOL: f64 = 1e-2;
pub const BCCH_HURDLE: f64 = 1e3;

#[derive(Debug, Serialize)]
pub struct BcchDemo {
    pub report: ScenarioReport,
    pub checks: Vec<CheckReport>,
}

/// Runs a named scenario to index `last` and checks what it is meant to show.
pub fn bcch_demo(name: &str, last: usize) -> Result<BcchDemo> {
    bcch_demo_with(name, None, last)
}

/// As [`bcch_demo`]; `limit` overrides `l` for `ex42` and `ex43`.
pub fn bcch_demo_with(name: &str, limit: Option<f64>, last: usize) -> Result<BcchDemo> {
    let sc = match (name, limit) {
        ("ex42", Some(l)) => BcchScenario::bounded_oscillation(l),
        ("ex43", Some(l)) => BcchScenario::unbounded_oscillation(l),
        (_, Some(_)) => {
            return Err(Error::Config(format!("scenario {name:?} takes no limit parameter")))
        }
        _ => BcchScenario::by_name(name)?,
    };
    if limit.is_some_and(|l| !l.is_finite()) {
        return Err(Error::Config("limit must be finite".into()));
    }
    if last < sc.start + 2 * BCCH_WINDOW {
        return Err(Error::Config(format!(
            "K = {last} too small for a window of {BCCH_WINDOW}"
        )));
    }
    let report = analyze(&sc, last, BCCH_WINDOW, BCCH_TOL)?;
    let limit = sc.expected_limit.value;
    let mut checks = Vec::new();
    match name {
        "ex42" | "ex43" => {
            checks.push(report.h_verdict.report("h_converges"));
            checks.push(CheckReport::bound(
                "h_limit",
                (report.h_verdict.limit_estimate - limit).abs(),
                BCCH_TOL,
            ));
            let g_osc = report.g_verdict.tail_oscillation;
            checks.push(CheckReport::exceeds("g_not_converged", g_osc, BCCH_TOL));
        }
        "ex44-sinh" => {
            let err = (report.h_last - limit).abs();
            // h_K / limit = prod_{j >= K} (1 + 1/j^2) <= exp(1/(K - 1))
            let bound = limit * ((1.0 / (last as f64 - 1.0)).exp() - 1.0) + 1e-10;
            checks.push(
                CheckReport::bound("h_vs_pi_over_sinh_pi", err, bound)
                    .with_note(format!("h_K = {:.10}, pi/sinh(pi) = {limit:.10}", report.h_last)),
            );
            checks.push(CheckReport::exceeds(
                "h_limit_nonzero",
                report.h_verdict.limit_estimate,
                0.27,
            ));
        }
        "linf-plus" => {
            checks.push(CheckReport::exceeds("h_exceeds_hurdle", report.h_last, BCCH_HURDLE));
        }
        "linf-minus" => {
            checks.push(CheckReport::exceeds("minus_h_exceeds_hurdle", -report.h_last, BCCH_HURDLE));
        }
        _ => {}
    }
    if let Some(r) = report.g_closed_form_residual {
        let scale = report.last as f64 * f64::EPSILON * 16.0;
        checks.push(CheckReport::bound("g_closed_form", r, scale.max(1e-12)));
    }
    Ok(BcchDemo { report, checks })
}

#[derive(Debug, Serialize)]
pub struct ValidateReport {
    pub schedule: String,
    pub conditions: ScheduleReport,
    pub bounds: RyuBoundsReport,
    pub valid: bool,
}

/// Certifies `t_0..=t_K` of a named schedule and its `1 <= t_k - 1 <= k` bounds.
pub fn validate(name: &str, last: usize) -> Result<ValidateReport> {
    if last < 3 {
        return Err(Error::Config("K must be >= 3".into()));
    }
    let mut s = named_schedule(name, last + 1)?;
    let ts = s.prefix(last)?;
    let conditions = validate_schedule(ts)?;
    let bounds = ryu_bounds_check(ts)?;
    Ok(ValidateReport {
        schedule: name.to_string(),
        valid: conditions.is_valid(),
        conditions,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_keys_and_zero_iterations() {
        let ok = r#"{"problem":{"family":"feasibility"},"x0":[5,0],"iterations":10}"#;
        let cfg = ExperimentConfig::from_json(ok).unwrap();
        assert_eq!(cfg.schedule, ScheduleSpec::Named("bt".into()));
        assert_eq!(cfg.solver, SolverKind::Fista);

        let zero = r#"{"problem":{"family":"feasibility"},"x0":[5,0],"iterations":0}"#;
        assert!(matches!(ExperimentConfig::from_json(zero), Err(Error::Config(_))));
        let extra = r#"{"problem":{"family":"feasibility"},"x0":[5,0],"iterations":3,"colour":1}"#;
        assert!(ExperimentConfig::from_json(extra).is_err());
        let extra_param = r#"{"problem":{"family":"feasibility","radius":2},"x0":[5,0],"iterations":3}"#;
        assert!(ExperimentConfig::from_json(extra_param).is_err());
        let unknown = r#"{"problem":{"family":"feasibility"},"x0":[5,0],"iterations":3,"analyses":["magic"]}"#;
        assert!(ExperimentConfig::from_json(unknown).is_err());
        let sparse = r#"{"problem":{"family":"feasibility"},"x0":[5,0],"iterations":3,"snapshot_every":2,"analyses":["salzo"]}"#;
        assert!(ExperimentConfig::from_json(sparse).is_err());
        let sched = r#"{"problem":{"family":"feasibility"},"x0":[5,0],"iterations":3,"schedule":"fast"}"#;
        assert!(ExperimentConfig::from_json(sched).is_err());
        let explicit = r#"{"problem":{"family":"feasibility"},"x0":[5,0],"iterations":2,"schedule":[1,1.5,2]}"#;
        assert_eq!(
            ExperimentConfig::from_json(explicit).unwrap().schedule,
            ScheduleSpec::Explicit(vec![1.0, 1.5, 2.0])
        );
    }

    #[test]
    fn fig1_points() {
        let d = repro_fig1().unwrap();
        assert_eq!(d.iterates.len(), 25);
        assert_eq!(d.iterates[0], Vector::from([5.0, 0.0]));
        assert!(d.iterates[1].dist(&Vector::from([3.0, -2.0])) < 1e-15);
        assert!(d.iterates[2].dist(&Vector::from([2.0, -1.0])) < 1e-15);
        let mut buf = Vec::new();
        d.write(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count(), 27);
    }

    #[test]
    fn validate_named_schedules() {
        assert!(validate("bt", 1000).unwrap().valid);
        assert!(validate("linear", 1000).unwrap().valid);
        let ones = validate("constant-ones", 10).unwrap();
        assert!(!ones.valid);
        assert_eq!(ones.conditions.growth_violations[0].k, 1);
        assert!(validate("bt", 2).is_err());
        assert!(validate("nope", 10).is_err());
    }

    #[test]
    fn scenario_configs() {
        let cfg = AnyConfig::from_json(r#"{"scenario":"ex42","last":1000,"limit":2.5}"#).unwrap();
        let AnyConfig::Scenario(sc) = cfg else { panic!("scenario expected") };
        let dir = std::env::temp_dir().join(format!("fista-lab-scenario-{}", std::process::id()));
        let demo = run_scenario(&sc, &dir).unwrap();
        assert!(demo.checks.iter().all(|c| c.pass));
        assert!((demo.report.h_verdict.limit_estimate - 2.5).abs() < 1e-2);
        assert!(dir.join("report.json").exists());
        std::fs::remove_dir_all(&dir).ok();

        assert!(AnyConfig::from_json(r#"{"scenario":"ex42","last":1000,"phi":3}"#).is_err());
        let sinh_with_limit = ScenarioConfig {
            scenario: "ex44-sinh".into(),
            last: 1000,
            limit: Some(1.0),
            output_dir: None,
        };
        assert!(matches!(run_scenario(&sinh_with_limit, &dir), Err(Error::Config(_))));
        assert!(matches!(
            AnyConfig::from_json(r#"{"problem":{"family":"feasibility"},"x0":[5,0],"iterations":1}"#),
            Ok(AnyConfig::Experiment(_))
        ));
    }

    #[test]
    fn bcch_demo_unknown_and_small() {
        assert!(matches!(bcch_demo("nope", 1000), Err(Error::Config(_))));
        assert!(matches!(bcch_demo("ex42", 50), Err(Error::Config(_))));
    }
}
