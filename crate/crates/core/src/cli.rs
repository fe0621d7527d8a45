//! The `pmhd` command line: `solve`, `sweep`, `bl` and `mms` over a flat
//! configuration file.
//!
//! Exit status is 0 on success, 2 when the input is rejected, 3 when a
//! simulation fails. Every failure also prints one line to standard error
//! of the form `pmhd: error=<kind> exit=<code> message=<text>`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::{load_config, RunConfig, CONFIG_HELP};
use crate::diagnostics::FIELD_NAMES;
use crate::error::{Error, Result};
use crate::experiments::sweep::{BL_DECREASE_FACTOR, FLOOR_RATIO, GLOBAL_FRACTION};
use crate::experiments::{assemble_reports, bl_profile, mms_verify, run_sweep, BlReport, SweepPlan};
use crate::io::{self, Summary, MANIFEST};
use crate::solver::RunRecord;
use crate::state::InitialData;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pmhd", version, about = "Planar MHD vanishing-viscosity laboratory", after_help = CONFIG_HELP)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// Configuration file (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `out_dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; overrides `jobs`.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Print nothing on success.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Integrate one run and write its snapshots and diagnostics.
    Solve,
    /// Viscosity sweep against the limit run: rate and boundary-layer reports.
    Sweep,
    /// Boundary-layer profile of two existing record directories.
    Bl,
    /// Manufactured-solution order verification.
    Mms,
}

/// Failure of a subcommand, classified for the exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Solver(_) => (EXIT_SOLVER, "solver"),
            Error::ConstitutiveViolation { .. } | Error::LinearSolve { .. } => (EXIT_SOLVER, "solver"),
            Error::Io(_) | Error::Csv(_) | Error::Format { .. } => (EXIT_INVALID, "io"),
            _ => (EXIT_INVALID, "validation"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            kind: "validation",
            message: message.into(),
        }
    }

    /// The single stderr line.
    pub fn line(&self) -> String {
        let flat: String = self.message.split_whitespace().collect::<Vec<_>>().join(" ");
        format!("pmhd: error={} exit={} message={}", self.kind, self.code, flat)
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Writes files under one output directory and remembers their names.
struct Output {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Output {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn path(&mut self, name: impl AsRef<Path>) -> PathBuf {
        self.files.push(name.as_ref().to_path_buf());
        self.dir.join(name)
    }

    fn record(&mut self, sub: &str, record: &RunRecord) -> Result<()> {
        for f in io::write_record(&self.dir.join(sub), record)? {
            self.files.push(Path::new(sub).join(f));
        }
        Ok(())
    }

    /// Write `summary.txt` and the manifest listing every file.
    fn finish(mut self, summary: Summary) -> Result<()> {
        let summary_path = self.path("summary.txt");
        summary.write(&summary_path)?;
        let mut manifest = Summary::default();
        for f in &self.files {
            manifest.push("file", f.display());
        }
        manifest.push("file", MANIFEST);
        manifest.write(&self.dir.join(MANIFEST))?;
        Ok(())
    }
}

fn say(quiet: bool, text: &str) {
    if !quiet {
        println!("{text}");
    }
}

fn record_summary(record: &RunRecord) -> Summary {
    let mut s = Summary::default();
    let first = record.initial();
    let last = record.last();
    let mesh = &record.mesh;
    let m0 = crate::diagnostics::total_mass(first, mesh);
    let m1 = crate::diagnostics::total_mass(last, mesh);
    let e0 = crate::diagnostics::total_energy(first, mesh);
    let e1 = crate::diagnostics::total_energy(last, mesh);
    let mon = record.monitors();
    s.push("mu", record.mu);
    s.push("n_cells", mesh.n_cells());
    s.push("t_start", first.t);
    s.push("t_end", last.t);
    s.push("steps", record.step_count());
    s.push("halvings", record.total_halvings());
    s.push("mass_relative_drift", ((m1 - m0) / m0).abs());
    s.push("energy_initial", e0);
    s.push("energy_final", e1);
    s.push("wall_work", record.integrals.bflux);
    s.push("energy_residual", (e1 - e0 - record.integrals.bflux).abs());
    s.push(
        "min_entropy_production",
        record.diagnostics.iter().map(|d| d.entropy_prod).fold(f64::INFINITY, f64::min),
    );
    s.push("min_rho", mon.min_rho);
    s.push("max_rho", mon.max_rho);
    s.push("min_theta", mon.min_theta);
    s.push("max_theta", mon.max_theta);
    s
}

pub fn cmd_solve(cfg: &RunConfig, quiet: bool) -> CmdResult {
    let (mesh, state) = cfg.initial_state()?;
    let solver = cfg.solver(mesh)?;
    let record = solver.solve_from(state)?;
    let mut out = Output::new(&cfg.out_dir)?;
    out.record("record", &record)?;
    let summary = record_summary(&record);
    say(quiet, summary.render().trim_end());
    out.finish(summary)?;
    Ok(())
}

fn mu_dir(mu: f64) -> String {
    format!("mu_{mu:.6e}")
}

fn bl_summary(s: &mut Summary, bl: &BlReport) {
    s.push("bl.exponent", bl.exponent);
    s.push("bl.interior_decreasing", bl.interior_decreasing(BL_DECREASE_FACTOR));
    s.push("bl.global_floor_ok", bl.global_floor_ok(GLOBAL_FRACTION));
    s.push("bl.floor_ratio", bl.floor_ratio());
    s.push("bl.floor_ratio_ok", bl.floor_ratio() >= FLOOR_RATIO);
}

pub fn cmd_sweep(cfg: &RunConfig, quiet: bool) -> CmdResult {
    if cfg.sweep.mu_values.len() < 3 {
        return Err(Failure::invalid(format!(
            "sweep.mu_values: rate fit needs at least 3 viscosities, got {}",
            cfg.sweep.mu_values.len()
        )));
    }
    if !cfg.sweep.include_limit {
        return Err(Failure::invalid(
            "sweep.include_limit: the sweep solves its own limit run; use `bl` for existing records",
        ));
    }
    let (mesh, state) = cfg.initial_state()?;
    let mut plan = SweepPlan::new(
        cfg.sweep.mu_values.clone(),
        mesh,
        cfg.params.clone(),
        InitialData::from_state(&state),
        cfg.boundary_data(),
        cfg.controls.clone(),
    );
    plan.thickness_exponent = cfg.sweep.thickness_exponent;
    let outcome = run_sweep(&plan)?;

    let mut out = Output::new(&cfg.out_dir)?;
    let p = out.path("rate.csv");
    io::write_rate_report(&p, &outcome.rate)?;
    let p = out.path("bl.csv");
    io::write_bl_report(&p, &outcome.bl)?;
    out.record("records/limit", &outcome.limit)?;
    for (mu, rec) in &outcome.cases {
        if let Ok(rec) = rec {
            out.record(&format!("records/{}", mu_dir(*mu)), rec)?;
        }
    }

    let rate = &outcome.rate;
    let mut s = Summary::default();
    s.push("n_cells", mesh.n_cells());
    s.push("cases", cfg.sweep.mu_values.len());
    s.push("failed_cases", rate.failed.len());
    for f in &rate.failed {
        s.push("failed", format!("mu={} reason={}", f.mu, f.reason.replace('\n', " ")));
    }
    match rate.fit {
        Some(fit) => {
            s.push("slope", fit.slope);
            s.push("intercept", fit.intercept);
            s.push("residual", fit.residual);
        }
        None => s.push("notice", rate.notice.clone().unwrap_or_default()),
    }
    s.push("slope_ok", rate.slope_ok());
    for (k, name) in FIELD_NAMES.iter().enumerate() {
        if let Some(v) = rate.field_slopes[k] {
            s.push(format!("slope.{name}"), v);
        }
    }
    bl_summary(&mut s, &outcome.bl);
    say(quiet, s.render().trim_end());
    out.finish(s)?;

    if rate.fit.is_none() {
        let code = if rate.failed.is_empty() { EXIT_INVALID } else { EXIT_SOLVER };
        return Err(Failure {
            code,
            kind: if code == EXIT_SOLVER { "solver" } else { "validation" },
            message: rate.notice.clone().unwrap_or_else(|| "rate fit refused".into()),
        });
    }
    if !rate.failed.is_empty() {
        return Err(Failure {
            code: EXIT_SOLVER,
            kind: "solver",
            message: format!("{} viscosity case(s) failed; see summary.txt", rate.failed.len()),
        });
    }
    Ok(())
}

pub fn cmd_bl(cfg: &RunConfig, quiet: bool) -> CmdResult {
    let (Some(a), Some(b)) = (&cfg.bl.record_mu, &cfg.bl.record_limit) else {
        return Err(Failure::invalid("bl needs both bl.record_mu and bl.record_limit"));
    };
    let record_mu = io::read_record(a)?;
    let record_limit = io::read_record(b)?;
    if record_limit.mu != 0.0 {
        return Err(Failure::invalid(format!(
            "bl.record_limit: expected a mu = 0 record, got mu = {}",
            record_limit.mu
        )));
    }
    let row = bl_profile(&record_mu, &record_limit, cfg.sweep.thickness_exponent)?;
    let report = BlReport {
        exponent: cfg.sweep.thickness_exponent,
        rows: vec![row],
    };
    let (rate, _) = assemble_reports(&record_limit, &[(record_mu.mu, Ok(record_mu))], report.exponent)?;

    let mut out = Output::new(&cfg.out_dir)?;
    let p = out.path("bl.csv");
    io::write_bl_report(&p, &report)?;
    let mut s = Summary::default();
    s.push("mu", row.mu);
    s.push("delta", row.delta);
    s.push("interior_sup", row.interior_sup);
    s.push("global_sup", row.global_sup);
    s.push("mismatch", row.mismatch);
    if let Some(r) = rate.rows.first() {
        s.push("E", r.e);
    }
    s.push("bl.global_floor_ok", report.global_floor_ok(GLOBAL_FRACTION));
    say(quiet, s.render().trim_end());
    out.finish(s)?;
    Ok(())
}

pub fn cmd_mms(cfg: &RunConfig, quiet: bool) -> CmdResult {
    let report = mms_verify(cfg.mms.case, &cfg.mms.resolutions)?;
    let mut out = Output::new(&cfg.out_dir)?;
    let p = out.path("mms.csv");
    io::write_mms_errors(&p, &report)?;
    let mut s = Summary::default();
    s.push("case", report.case);
    s.push("resolutions", report.resolutions.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
    s.push("status", report.status);
    if let Some(o) = report.order() {
        s.push("order", o);
    }
    s.push("expected_order", report.case.expected_order());
    for &k in report.case.active_fields() {
        if let Some(o) = report.orders[k] {
            s.push(format!("order.{}", FIELD_NAMES[k]), o);
        }
        for (r, pair) in report.pairwise.iter().enumerate() {
            if let Some(o) = pair[k] {
                s.push(
                    format!("order.{}.{}-{}", FIELD_NAMES[k], report.resolutions[r], report.resolutions[r + 1]),
                    o,
                );
            }
        }
    }
    s.push("pass", report.meets_expectation());
    say(quiet, s.render().trim_end());
    out.finish(s)?;
    Ok(())
}

fn dispatch(args: &Args) -> CmdResult {
    let mut cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(j) = args.jobs {
        if j == 0 {
            return Err(Failure::invalid("--jobs must be at least 1"));
        }
        cfg.jobs = Some(j);
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        pool = pool.num_threads(j);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match args.command {
        Command::Solve => cmd_solve(&cfg, args.quiet),
        Command::Sweep => cmd_sweep(&cfg, args.quiet),
        Command::Bl => cmd_bl(&cfg, args.quiet),
        Command::Mms => cmd_mms(&cfg, args.quiet),
    })
}

/// Run parsed arguments and return the exit status, reporting failures on
/// standard error.
pub fn run(args: &Args) -> i32 {
    match dispatch(args) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("{}", f.line());
            f.code
        }
    }
}

/// Parse `argv` and run. Usage errors exit with status 2.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Args::try_parse_from(argv) {
        Ok(args) => run(&args),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
