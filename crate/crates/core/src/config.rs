//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, sections are spelled as
//! dotted keys (`solver.t_end = 0.5`). Lists are comma-separated. Unknown
//! and repeated keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::boundary::{BoundaryData, Signal};
use crate::error::{Error, Result};
use crate::experiments::mms::DEFAULT_RESOLUTIONS;
use crate::experiments::{default_mu_values, MmsCase};
use crate::io::read_snapshot;
use crate::mesh::Mesh;
use crate::params::PhysParams;
use crate::presets::Preset;
use crate::solver::{Solver, SolverControls};
use crate::state::{make_state, State};

/// Documented keys and defaults, shown by `pmhd --help`.
pub const CONFIG_HELP: &str = "\
Configuration file keys (key = value, '#' comments, lists comma-separated):

  n_cells                  mesh cells                               200
  preset                   rest | smooth-shear | thermal-bump       smooth-shear
  initial_file             snapshot CSV used as initial data        (none)
  lambda                   bulk viscosity, > 0                      1
  mu                       shear viscosity, >= 0                    0.001
  nu                       magnetic diffusivity, > 0                1
  gamma                    pressure constant, > 0                   1
  kappa1                   conductivity scale, > 0                  1
  q                        conductivity exponent, > 0               2
  out_dir                  output directory                         out
  jobs                     worker threads                           all cores

  solver.cfl               Courant number in (0, 1]                 0.4
  solver.t_end             horizon                                  1
  solver.dt_max            time-step cap                            inf
  solver.snapshot_every    snapshot interval                        0.1
  solver.pos_floor         positivity floor                         1e-12
  solver.max_halvings      retries on positivity loss               20
  solver.theta_picard_iters  conduction sweeps per step             2

  boundary.kind            constant | sinusoid                      constant
  boundary.minus           w at x = 0 (two components)              0, 0
  boundary.plus            w at x = 1 (two components)              0, 0
  boundary.amplitude_minus sinusoid amplitude at x = 0              0, 0
  boundary.amplitude_plus  sinusoid amplitude at x = 1              0, 0
  boundary.omega           sinusoid angular frequency               1

  sweep.mu_values          viscosities, positive and distinct       1e-2, 10^-2.5, ..., 1e-4
  sweep.thickness_exponent layer exponent a in (0, 1/2)             0.4
  sweep.include_limit      solve the mu = 0 run                     true

  bl.record_mu             record directory of the viscous run      (required by bl)
  bl.record_limit          record directory of the mu = 0 run       (required by bl)

  mms.case                 continuity | momentum | transverse |
                           magnetic | temperature | coupled         coupled
  mms.resolutions          at least 3, strictly increasing          100, 200, 400
";

const KEYS: [&str; 31] = [
    "n_cells",
    "preset",
    "initial_file",
    "lambda",
    "mu",
    "nu",
    "gamma",
    "kappa1",
    "q",
    "out_dir",
    "jobs",
    "solver.cfl",
    "solver.t_end",
    "solver.dt_max",
    "solver.snapshot_every",
    "solver.pos_floor",
    "solver.max_halvings",
    "solver.theta_picard_iters",
    "boundary.kind",
    "boundary.minus",
    "boundary.plus",
    "boundary.amplitude_minus",
    "boundary.amplitude_plus",
    "boundary.omega",
    "sweep.mu_values",
    "sweep.thickness_exponent",
    "sweep.include_limit",
    "bl.record_mu",
    "bl.record_limit",
    "mms.case",
    "mms.resolutions",
];

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSource {
    Preset(Preset),
    /// Snapshot CSV; the run continues from the time stored in the file.
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Constant,
    Sinusoid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpec {
    pub kind: BoundaryKind,
    pub minus: [f64; 2],
    pub plus: [f64; 2],
    pub amplitude_minus: [f64; 2],
    pub amplitude_plus: [f64; 2],
    pub omega: f64,
}

impl Default for BoundarySpec {
    fn default() -> Self {
        Self {
            kind: BoundaryKind::Constant,
            minus: [0.0; 2],
            plus: [0.0; 2],
            amplitude_minus: [0.0; 2],
            amplitude_plus: [0.0; 2],
            omega: 1.0,
        }
    }
}

impl BoundarySpec {
    /// Constant walls, or `mean + amplitude * sin(omega t)` per component.
    pub fn build(&self) -> BoundaryData {
        match self.kind {
            BoundaryKind::Constant => BoundaryData::constant(self.minus, self.plus),
            BoundaryKind::Sinusoid => {
                let wave = |mean: [f64; 2], amp: [f64; 2]| {
                    [0, 1].map(|c| Signal::Sinusoid {
                        mean: mean[c],
                        amplitude: amp[c],
                        omega: self.omega,
                        phase: 0.0,
                    })
                };
                BoundaryData {
                    w_minus: wave(self.minus, self.amplitude_minus),
                    w_plus: wave(self.plus, self.amplitude_plus),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub mu_values: Vec<f64>,
    pub thickness_exponent: f64,
    pub include_limit: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BlSettings {
    pub record_mu: Option<PathBuf>,
    pub record_limit: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmsSettings {
    pub case: MmsCase,
    pub resolutions: Vec<usize>,
}

/// A fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n_cells: usize,
    pub initial: InitialSource,
    pub params: PhysParams,
    pub boundary: BoundarySpec,
    pub controls: SolverControls,
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    pub sweep: SweepSettings,
    pub bl: BlSettings,
    pub mms: MmsSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_cells: 200,
            initial: InitialSource::Preset(Preset::SmoothShear),
            params: PhysParams::default(),
            boundary: BoundarySpec::default(),
            controls: SolverControls::default(),
            out_dir: PathBuf::from("out"),
            jobs: None,
            sweep: SweepSettings {
                mu_values: default_mu_values(),
                thickness_exponent: 0.4,
                include_limit: true,
            },
            bl: BlSettings::default(),
            mms: MmsSettings {
                case: MmsCase::Coupled,
                resolutions: DEFAULT_RESOLUTIONS.to_vec(),
            },
        }
    }
}

fn key_err(key: &str, message: impl Into<String>) -> Error {
    Error::ConfigKey {
        key: key.to_owned(),
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| key_err(key, format!("cannot parse `{v}` as {}", std::any::type_name::<T>())))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',').map(|s| parse_num(key, s.trim())).collect()
}

fn parse_pair(key: &str, v: &str) -> Result<[f64; 2]> {
    let list: Vec<f64> = parse_list(key, v)?;
    <[f64; 2]>::try_from(list).map_err(|l| key_err(key, format!("expected two components, got {}", l.len())))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(key_err(key, format!("expected true or false, got `{v}`"))),
    }
}

fn check(key: &str, ok: bool, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(key_err(key, message()))
    }
}

/// Parse and validate a configuration document. Relative paths are kept
/// as written.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigParse {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(Error::ConfigParse {
                line: line_no,
                message: "empty key".into(),
            });
        }
        if !KEYS.contains(&key) {
            return Err(key_err(key, format!("unknown key (line {line_no})")));
        }
        if let Some((first, _)) = entries.insert(key.to_owned(), (line_no, value.to_owned())) {
            return Err(Error::ConfigParse {
                line: line_no,
                message: format!("`{key}` already set on line {first}"),
            });
        }
    }

    let mut cfg = RunConfig::default();
    let get = |k: &str| entries.get(k).map(|(_, v)| v.as_str());

    if let Some(v) = get("n_cells") {
        cfg.n_cells = parse_num("n_cells", v)?;
        check("n_cells", cfg.n_cells >= 2, || "need at least 2 cells".into())?;
    }
    match (get("preset"), get("initial_file")) {
        (Some(_), Some(_)) => {
            return Err(key_err("initial_file", "give either `preset` or `initial_file`, not both"));
        }
        (Some(p), None) => {
            cfg.initial = InitialSource::Preset(p.parse().map_err(|_| key_err("preset", format!("unknown preset `{p}`")))?)
        }
        (None, Some(f)) => {
            let path = PathBuf::from(f);
            check("initial_file", path.is_file(), || format!("no such file `{f}`"))?;
            cfg.initial = InitialSource::File(path);
        }
        (None, None) => {}
    }

    let p = &mut cfg.params;
    for (key, slot) in [
        ("lambda", &mut p.lambda),
        ("mu", &mut p.mu),
        ("nu", &mut p.nu),
        ("gamma", &mut p.gamma),
        ("kappa1", &mut p.kappa1),
        ("q", &mut p.q),
    ] {
        if let Some(v) = get(key) {
            *slot = parse_num(key, v)?;
        }
        let value = *slot;
        if key == "mu" {
            check(key, value >= 0.0 && value.is_finite(), || format!("must be >= 0, got {value}"))?;
        } else {
            check(key, value > 0.0 && value.is_finite(), || format!("must be > 0, got {value}"))?;
        }
    }

    if let Some(v) = get("out_dir") {
        cfg.out_dir = PathBuf::from(v);
    }
    if let Some(v) = get("jobs") {
        let jobs: usize = parse_num("jobs", v)?;
        check("jobs", jobs >= 1, || "must be at least 1".into())?;
        cfg.jobs = Some(jobs);
    }

    let c = &mut cfg.controls;
    for (key, slot) in [
        ("solver.cfl", &mut c.cfl),
        ("solver.t_end", &mut c.t_end),
        ("solver.dt_max", &mut c.dt_max),
        ("solver.snapshot_every", &mut c.snapshot_every),
        ("solver.pos_floor", &mut c.pos_floor),
    ] {
        if let Some(v) = get(key) {
            *slot = parse_num(key, v)?;
        }
    }
    if let Some(v) = get("solver.max_halvings") {
        c.max_halvings = parse_num("solver.max_halvings", v)?;
    }
    if let Some(v) = get("solver.theta_picard_iters") {
        c.theta_picard_iters = parse_num("solver.theta_picard_iters", v)?;
    }
    check("solver.cfl", c.cfl > 0.0 && c.cfl <= 1.0, || format!("must lie in (0, 1], got {}", c.cfl))?;
    check("solver.t_end", c.t_end > 0.0 && c.t_end.is_finite(), || format!("must be > 0, got {}", c.t_end))?;
    check("solver.dt_max", c.dt_max > 0.0, || format!("must be > 0, got {}", c.dt_max))?;
    check("solver.snapshot_every", c.snapshot_every > 0.0, || {
        format!("must be > 0, got {}", c.snapshot_every)
    })?;
    check("solver.pos_floor", c.pos_floor >= 0.0, || format!("must be >= 0, got {}", c.pos_floor))?;
    check("solver.theta_picard_iters", c.theta_picard_iters >= 1, || "must be at least 1".into())?;

    let b = &mut cfg.boundary;
    if let Some(v) = get("boundary.kind") {
        b.kind = match v {
            "constant" => BoundaryKind::Constant,
            "sinusoid" => BoundaryKind::Sinusoid,
            other => return Err(key_err("boundary.kind", format!("expected constant or sinusoid, got `{other}`"))),
        };
    }
    for (key, slot) in [
        ("boundary.minus", &mut b.minus),
        ("boundary.plus", &mut b.plus),
        ("boundary.amplitude_minus", &mut b.amplitude_minus),
        ("boundary.amplitude_plus", &mut b.amplitude_plus),
    ] {
        if let Some(v) = get(key) {
            *slot = parse_pair(key, v)?;
            check(key, slot.iter().all(|x| x.is_finite()), || "components must be finite".into())?;
        }
    }
    if let Some(v) = get("boundary.omega") {
        b.omega = parse_num("boundary.omega", v)?;
        check("boundary.omega", b.omega.is_finite(), || "must be finite".into())?;
    }
    if b.kind == BoundaryKind::Constant {
        for key in ["boundary.amplitude_minus", "boundary.amplitude_plus", "boundary.omega"] {
            check(key, get(key).is_none(), || "only meaningful with boundary.kind = sinusoid".into())?;
        }
    }

    let s = &mut cfg.sweep;
    if let Some(v) = get("sweep.mu_values") {
        s.mu_values = parse_list("sweep.mu_values", v)?;
        check("sweep.mu_values", s.mu_values.iter().all(|m| *m > 0.0 && m.is_finite()), || {
            "viscosities must be positive".into()
        })?;
        let mut sorted = s.mu_values.clone();
        sorted.sort_by(f64::total_cmp);
        check("sweep.mu_values", sorted.windows(2).all(|w| w[0] < w[1]), || {
            "viscosities must be distinct".into()
        })?;
    }
    if let Some(v) = get("sweep.thickness_exponent") {
        s.thickness_exponent = parse_num("sweep.thickness_exponent", v)?;
        check("sweep.thickness_exponent", s.thickness_exponent > 0.0 && s.thickness_exponent < 0.5, || {
            format!("must lie in (0, 1/2), got {}", s.thickness_exponent)
        })?;
    }
    if let Some(v) = get("sweep.include_limit") {
        s.include_limit = parse_bool("sweep.include_limit", v)?;
    }

    for (key, slot) in [("bl.record_mu", &mut cfg.bl.record_mu), ("bl.record_limit", &mut cfg.bl.record_limit)] {
        if let Some(v) = get(key) {
            let path = PathBuf::from(v);
            check(key, path.is_dir(), || format!("no such record directory `{v}`"))?;
            *slot = Some(path);
        }
    }

    if let Some(v) = get("mms.case") {
        cfg.mms.case = v.parse().map_err(|_| key_err("mms.case", format!("unknown case `{v}`")))?;
    }
    if let Some(v) = get("mms.resolutions") {
        cfg.mms.resolutions = parse_list("mms.resolutions", v)?;
        let r = &cfg.mms.resolutions;
        check("mms.resolutions", r.iter().all(|n| *n >= 2) && r.windows(2).all(|w| w[0] < w[1]), || {
            "must be strictly increasing and at least 2".into()
        })?;
    }
    Ok(cfg)
}

/// Read and parse a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

impl RunConfig {
    pub fn boundary_data(&self) -> BoundaryData {
        self.boundary.build()
    }

    /// Mesh and starting state: a preset at `t = 0` on `n_cells` cells, or
    /// the stored snapshot with its own mesh and time.
    pub fn initial_state(&self) -> Result<(Mesh, State)> {
        let bdry = self.boundary_data();
        match &self.initial {
            InitialSource::Preset(p) => {
                let mesh = Mesh::new(self.n_cells)?;
                let state = make_state(&mesh, p.build(&mesh, &bdry), &bdry)?;
                Ok((mesh, state))
            }
            InitialSource::File(path) => read_snapshot(path),
        }
    }

    pub fn solver(&self, mesh: Mesh) -> Result<Solver> {
        Solver::new(mesh, self.params.clone(), self.boundary_data(), self.controls.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_uses_defaults() {
        let cfg = parse_config("n_cells = 64\npreset = rest\n").unwrap();
        assert_eq!(cfg.n_cells, 64);
        assert_eq!(cfg.initial, InitialSource::Preset(Preset::Rest));
        assert_eq!(cfg.controls, SolverControls::default());
        assert_eq!(cfg.params.mu, 1e-3);
        assert_eq!(cfg.boundary, BoundarySpec::default());
        assert_eq!(cfg.mms.resolutions, vec![100, 200, 400]);
    }

    #[test]
    fn negative_viscosity_names_the_key() {
        match parse_config("mu = -1\n") {
            Err(Error::ConfigKey { key, .. }) => assert_eq!(key, "mu"),
            other => panic!("expected key error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected() {
        match parse_config("n_cells = 10\nviscocity = 0.1\n") {
            Err(Error::ConfigKey { key, .. }) => assert_eq!(key, "viscocity"),
            other => panic!("expected key error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_config("# header\nn_cells = 10\njust words\n") {
            Err(Error::ConfigParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_config("mu = 0.1\nmu = 0.2\n") {
            Err(Error::ConfigParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn full_document() {
        let text = "\
n_cells = 800            # fine mesh
preset = smooth-shear
mu = 0
solver.t_end = 0.5
solver.snapshot_every = 0.01
boundary.kind = sinusoid
boundary.minus = 1, 0
boundary.plus = -1, 0
boundary.amplitude_minus = 0.1, 0
boundary.omega = 5.5
sweep.mu_values = 1e-2, 1e-3, 1e-4
sweep.include_limit = false
mms.case = temperature
mms.resolutions = 50, 100, 200
jobs = 4
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.params.mu, 0.0);
        assert_eq!(cfg.controls.t_end, 0.5);
        assert_eq!(cfg.boundary.kind, BoundaryKind::Sinusoid);
        assert_eq!(cfg.sweep.mu_values, vec![1e-2, 1e-3, 1e-4]);
        assert!(!cfg.sweep.include_limit);
        assert_eq!(cfg.mms.case, MmsCase::Temperature);
        assert_eq!(cfg.jobs, Some(4));
        let bd = cfg.boundary_data();
        assert_eq!(bd.minus(0.0), [1.0, 0.0]);
        assert!((bd.minus(0.25)[0] - (1.0 + 0.1 * (5.5f64 * 0.25).sin())).abs() < 1e-15);
    }

    #[test]
    fn range_violations_name_their_keys() {
        for (doc, key) in [
            ("solver.cfl = 2", "solver.cfl"),
            ("sweep.thickness_exponent = 0.5", "sweep.thickness_exponent"),
            ("sweep.mu_values = 1e-2, 1e-2, 1e-3", "sweep.mu_values"),
            ("mms.resolutions = 100, 50, 200", "mms.resolutions"),
            ("initial_file = /no/such/file.csv", "initial_file"),
            ("boundary.minus = 1", "boundary.minus"),
            ("boundary.omega = 2", "boundary.omega"),
            ("n_cells = 1", "n_cells"),
        ] {
            match parse_config(doc) {
                Err(Error::ConfigKey { key: k, .. }) => assert_eq!(k, key, "{doc}"),
                other => panic!("{doc}: expected key error, got {other:?}"),
            }
        }
    }
}
