//! `qdist` command-line interface.
//!
//! Exit codes: 0 success, 2 malformed input, 3 solver failure, 4 contract
//! violation detected by `verify`. Errors are reported on stderr as a JSON
//! object `{"error": kind, "message": text}`.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::audit::{run_audit, AuditConfig};
use crate::error::{Error, Result};
use crate::io::{self, Cell, CsvTable, RunManifest};
use crate::metrics::{self, MetricsReport};
use crate::plot;
use crate::quantum::{self, PreparationSet, EXACT_TOL};
use crate::sdp::DEFAULT_TOL;
use crate::seesaw::{self, Init, SeesawConfig, Sign};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_CONTRACT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qdist", version, about = "Set and pairwise distinguishability of preparation sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Metrics report for one preparation set
    Metrics(MetricsArgs),
    /// Metrics of random preparation sets, one CSV row per sample
    Scan(ScanArgs),
    /// See-saw search for the largest deviation of either sign
    Seesaw(SeesawArgs),
    /// Scalarised see-saw frontier of (avg_set, avg_pairwise)
    Frontier(FrontierArgs),
    /// Best positive deviation for a range of set sizes
    Scaling(ScalingArgs),
    /// Randomised audit of the realist equality and identity
    Verify(VerifyArgs),
    /// Render a scan/frontier CSV as a scatter or a scaling CSV as bars
    Plot(PlotArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json`
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exemplar {
    Trine,
    #[value(alias = "tetrahedron")]
    Tetra,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub exemplar: Option<Exemplar>,
    /// States JSON file
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Pure,
    Mixed,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Measure::Pure)]
    pub measure: Measure,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SignArg {
    #[value(alias = "positive")]
    Pos,
    #[value(alias = "negative")]
    Neg,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Pos => Sign::Positive,
            SignArg::Neg => Sign::Negative,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub improvement_tol: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Start from Hilbert-Schmidt mixed states instead of Haar pure states
    #[arg(long)]
    pub mixed_init: bool,
}

impl SearchArgs {
    fn config(&self, n: usize, dim: usize, sign: Sign) -> SeesawConfig {
        SeesawConfig {
            restarts: self.restarts,
            max_iters: self.max_iters,
            improvement_tol: self.improvement_tol,
            solver_tol: self.tol,
            seed: self.seed,
            init: if self.mixed_init { Init::Mixed } else { Init::Pure },
            ..SeesawConfig::new(n, dim, sign)
        }
    }
}

#[derive(Args, Debug)]
pub struct SeesawArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = SignArg::Pos)]
    pub sign: SignArg,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Where to write the best preparation set; defaults to `<out>.states.json`
    #[arg(long)]
    pub states_out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct FrontierArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Comma-separated kappa values; defaults to 0 plus 21 geometric values in [0.05, 20]
    #[arg(long, value_delimiter = ',')]
    pub kappas: Option<Vec<f64>>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ScalingArgs {
    #[arg(long, default_value_t = 3)]
    pub n_min: usize,
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    /// Fixed dimension; defaults to n - 1 capped at 4
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    #[arg(long, default_value_t = 2)]
    pub l_min: usize,
    #[arg(long, default_value_t = 12)]
    pub l_max: usize,
    /// Skip the enumeration cross-check
    #[arg(long)]
    pub no_brute_force: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotKind {
    Scatter,
    Bars,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[arg(long = "in", alias = "input")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = PlotKind::Scatter)]
    pub kind: PlotKind,
}

/// Failure of a command: exit code plus a machine-readable description.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Solver { .. } => (EXIT_SOLVER, "solver"),
            Error::OracleMismatch { .. } => (EXIT_SOLVER, "oracle_mismatch"),
            Error::Io(_) => (EXIT_INPUT, "io"),
            Error::Json(_) => (EXIT_INPUT, "json"),
            Error::Csv(_) => (EXIT_INPUT, "csv"),
            _ => (EXIT_INPUT, "input"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl Failure {
    pub fn to_json(&self) -> String {
        json!({ "error": self.kind, "message": self.message, "exit_code": self.code }).to_string()
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("{}", f.to_json());
            f.code
        }
    }
}

pub fn execute(command: Command) -> CmdResult {
    match command {
        Command::Metrics(a) => cmd_metrics(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Seesaw(a) => cmd_seesaw(a),
        Command::Frontier(a) => cmd_frontier(a),
        Command::Scaling(a) => cmd_scaling(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Plot(a) => cmd_plot(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn finish(mut manifest: RunManifest, common: &Common, command: &str, started: Instant, extra: &[PathBuf]) -> Result<()> {
    manifest.duration_seconds = started.elapsed().as_secs_f64();
    manifest.outputs = common
        .out
        .iter()
        .chain(extra)
        .map(|p| p.display().to_string())
        .collect();
    if common.out.is_none() {
        manifest.outputs.insert(0, "<stdout>".into());
    }
    let path = io::manifest_path(common.manifest.as_deref(), common.out.as_deref(), command);
    io::write_json(&path, &manifest)
}

fn exemplar_set(e: Exemplar) -> PreparationSet {
    match e {
        Exemplar::Trine => quantum::trine_states(),
        Exemplar::Tetra => quantum::tetrahedron_states(),
    }
}

fn cmd_metrics(a: MetricsArgs) -> CmdResult {
    let started = Instant::now();
    let set = match (&a.exemplar, &a.input) {
        (Some(e), _) => exemplar_set(*e),
        (None, Some(path)) => io::read_states(path, EXACT_TOL)?,
        (None, None) => return Err(Error::InvalidInput("need --exemplar or --input".into()).into()),
    };
    let report = metrics::deviation(&set, a.tol)?;
    emit(a.common.out.as_deref(), &io::to_json_pretty(&report)?)?;
    let config = json!({
        "exemplar": a.exemplar,
        "input": a.input.as_ref().map(|p| p.display().to_string()),
        "tol": a.tol,
    });
    finish(RunManifest::new("metrics", config, None), &a.common, "metrics", started, &[])?;
    Ok(())
}

/// Random preparation set `sample` of a scan.
pub fn scan_sample(n: usize, dim: usize, measure: Measure, seed: u64, sample: u64) -> Result<PreparationSet> {
    let mut rng = quantum::seeded_rng(quantum::task_seed(seed, sample));
    let states = (0..n)
        .map(|_| match measure {
            Measure::Pure => quantum::haar_random_pure_with(dim, &mut rng),
            Measure::Mixed => quantum::hs_random_mixed_with(dim, &mut rng),
        })
        .collect();
    PreparationSet::new(states)
}

/// Rows of a scan: `(sample_id, report)`; failed samples are logged and skipped.
pub fn scan_reports(n: usize, dim: usize, samples: usize, measure: Measure, seed: u64, tol: f64) -> Result<Vec<(usize, MetricsReport)>> {
    if samples == 0 {
        return Err(Error::InvalidInput("samples must be at least 1".into()));
    }
    if n < 2 || dim < 2 {
        return Err(Error::InvalidInput(format!("need n >= 2 and dim >= 2 (got {n}, {dim})")));
    }
    let mut rows = Vec::with_capacity(samples);
    for id in 0..samples {
        let set = scan_sample(n, dim, measure, seed, id as u64)?;
        match metrics::deviation(&set, tol) {
            Ok(r) => rows.push((id, r)),
            Err(e) => eprintln!("{}", json!({"warning": "sample skipped", "sample_id": id, "message": e.to_string()})),
        }
    }
    Ok(rows)
}

fn cmd_scan(a: ScanArgs) -> CmdResult {
    let started = Instant::now();
    let rows = scan_reports(a.n, a.dim, a.samples, a.measure, a.seed, a.tol)?;
    let mut table = CsvTable::new(vec!["sample_id", "avg_set", "avg_pairwise", "deviation"]);
    for (id, r) in &rows {
        table.push(vec![Cell::from(*id), r.avg_set.into(), r.avg_pairwise.into(), r.deviation.into()]);
    }
    emit(a.common.out.as_deref(), &table.to_string().map_err(Failure::from)?)?;
    let config = json!({
        "n": a.n, "dim": a.dim, "samples": a.samples, "measure": a.measure,
        "seed": a.seed, "tol": a.tol, "rows_written": rows.len(),
    });
    finish(RunManifest::new("scan", config, Some(a.seed)), &a.common, "scan", started, &[])?;
    Ok(())
}

#[derive(Serialize)]
struct SeesawOutput<'a> {
    config: &'a SeesawConfig,
    best_value: f64,
    report: &'a MetricsReport,
    trace: &'a [f64],
    restarts_used: usize,
    failed_restarts: &'a [(usize, String)],
}

fn cmd_seesaw(a: SeesawArgs) -> CmdResult {
    let started = Instant::now();
    let config = a.search.config(a.n, a.dim, a.sign.into());
    let res = seesaw::seesaw_deviation(&config)?;
    let output = SeesawOutput {
        config: &config,
        best_value: res.best_value,
        report: &res.report,
        trace: &res.trace,
        restarts_used: res.restarts_used,
        failed_restarts: &res.failed_restarts,
    };
    emit(a.common.out.as_deref(), &io::to_json_pretty(&output)?)?;
    let states_path = a.states_out.clone().or_else(|| {
        a.common.out.as_ref().map(|o| {
            let mut s = o.as_os_str().to_owned();
            s.push(".states.json");
            PathBuf::from(s)
        })
    });
    let mut extra = Vec::new();
    if let Some(p) = states_path {
        io::write_json(&p, &res.best_preps.to_json())?;
        extra.push(p);
    }
    let manifest = RunManifest::new("seesaw", serde_json::to_value(&config).map_err(Error::from)?, Some(config.seed));
    finish(manifest, &a.common, "seesaw", started, &extra)?;
    Ok(())
}

fn cmd_frontier(a: FrontierArgs) -> CmdResult {
    let started = Instant::now();
    let grid = a.kappas.clone().unwrap_or_else(seesaw::default_kappa_grid);
    let config = a.search.config(a.n, a.dim, Sign::Positive);
    let sweep = seesaw::frontier_sweep(a.n, a.dim, &grid, &config)?;
    for (kappa, orientation, msg) in &sweep.failures {
        eprintln!("{}", json!({"warning": "frontier point failed", "kappa": kappa, "orientation": orientation, "message": msg}));
    }
    let mut table = CsvTable::new(vec!["kappa", "avg_set", "avg_pairwise", "deviation", "restarts_used"]);
    for p in &sweep.points {
        table.push(vec![
            p.kappa.into(),
            p.avg_set.into(),
            p.avg_pairwise.into(),
            p.deviation.into(),
            p.restarts_used.into(),
        ]);
    }
    emit(a.common.out.as_deref(), &table.to_string()?)?;
    let cfg = json!({ "n": a.n, "dim": a.dim, "kappas": grid, "search": serde_json::to_value(&config).map_err(Error::from)? });
    finish(RunManifest::new("frontier", cfg, Some(config.seed)), &a.common, "frontier", started, &[])?;
    Ok(())
}

fn cmd_scaling(a: ScalingArgs) -> CmdResult {
    let started = Instant::now();
    let config = a.search.config(a.n_min.max(3), a.dim.unwrap_or(2), Sign::Positive);
    let fixed = a.dim;
    let run = seesaw::deviation_scaling_with(
        a.n_min,
        a.n_max,
        |n| fixed.unwrap_or_else(|| seesaw::default_scaling_dim(n)),
        &config,
    )?;
    for (n, msg) in &run.failures {
        eprintln!("{}", json!({"warning": "scaling point failed", "n": n, "message": msg}));
    }
    let mut table = CsvTable::new(vec!["n", "dim", "deviation_lb", "restarts_used"]);
    for p in &run.points {
        table.push(vec![p.n.into(), p.dim.into(), p.deviation_lb.into(), p.restarts_used.into()]);
    }
    emit(a.common.out.as_deref(), &table.to_string()?)?;
    let cfg = json!({ "n_min": a.n_min, "n_max": a.n_max, "dim": a.dim, "search": serde_json::to_value(&config).map_err(Error::from)? });
    finish(RunManifest::new("scaling", cfg, Some(config.seed)), &a.common, "scaling", started, &[])?;
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let started = Instant::now();
    if a.samples == 0 || a.n_min < 2 || a.n_min > a.n_max || a.l_min < 1 || a.l_min > a.l_max {
        return Err(Error::InvalidInput("need samples >= 1, 2 <= n_min <= n_max, 1 <= l_min <= l_max".into()).into());
    }
    let config = AuditConfig {
        samples: a.samples,
        seed: a.seed,
        n_range: a.n_min..=a.n_max,
        l_range: a.l_min..=a.l_max,
        brute_force: !a.no_brute_force,
        ..AuditConfig::default()
    };
    let summary = run_audit(&config)?;
    emit(a.common.out.as_deref(), &io::to_json_pretty(&summary)?)?;
    let cfg = serde_json::to_value(&config).map_err(Error::from)?;
    finish(RunManifest::new("verify", cfg, Some(a.seed)), &a.common, "verify", started, &[])?;
    if !summary.passed {
        return Err(Failure {
            code: EXIT_CONTRACT,
            kind: "contract_violation",
            message: format!(
                "residuals exceed contract: equality {:e}, identity {:e}, oracle {:e}",
                summary.max_equality_residual, summary.identity_max_relative_residual, summary.brute_force_max_difference
            ),
        });
    }
    Ok(())
}

fn column(header: &[String], name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::InvalidInput(format!("CSV has no column {name:?}")))
}

fn cmd_plot(a: PlotArgs) -> CmdResult {
    let started = Instant::now();
    let (header, rows) = io::read_numeric_csv(&a.input)?;
    if rows.is_empty() {
        return Err(Error::InvalidInput(format!("{} has no data rows", a.input.display())).into());
    }
    let svg = match a.kind {
        PlotKind::Scatter => {
            let (xs, ys) = (column(&header, "avg_set")?, column(&header, "avg_pairwise")?);
            let points: Vec<(f64, f64)> = rows.iter().map(|r| (r[xs], r[ys])).collect();
            plot::scatter_svg(&points, "average set distinguishability", "average pairwise distinguishability")?
        }
        PlotKind::Bars => {
            let ns = column(&header, "n")?;
            let vs = column(&header, "deviation_lb").or_else(|_| column(&header, "deviation"))?;
            let bars: Vec<(String, f64)> = rows.iter().map(|r| (format!("n={}", r[ns]), r[vs])).collect();
            plot::bars_svg(&bars, "deviation lower bound")?
        }
    };
    std::fs::write(&a.out, svg).map_err(Error::from)?;
    let common = Common {
        out: Some(a.out.clone()),
        manifest: None,
    };
    let cfg = json!({ "input": a.input.display().to_string(), "kind": a.kind });
    finish(RunManifest::new("plot", cfg, None), &common, "plot", started, &[])?;
    Ok(())
}
