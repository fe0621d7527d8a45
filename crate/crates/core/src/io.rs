//! Plain-text output formats: snapshot and diagnostics CSVs, report CSVs,
//! `key=value` summaries, and run-record directories.
//!
//! Floating-point columns are written with 17 significant digits, which
//! round-trips every `f64` exactly.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::{BlReport, MmsReport, RateReport};
use crate::mesh::{Mesh, ScalarField, Vec2Field};
use crate::solver::{RunRecord, SpaceTimeIntegrals, StepDiagnostics};
use crate::state::State;

pub const SNAPSHOT_HEADER: [&str; 8] = ["x", "rho", "u", "w1", "w2", "b1", "b2", "theta"];
pub const DIAGNOSTICS_HEADER: [&str; 8] = [
    "t",
    "dt",
    "mass",
    "total_energy",
    "entropy_prod",
    "min_rho",
    "min_theta",
    "bflux",
];
pub const RATE_HEADER: [&str; 7] = ["mu", "E", "E_rho", "E_u", "E_w", "E_b", "E_theta"];
pub const BL_HEADER: [&str; 5] = ["mu", "delta", "interior_sup", "global_sup", "mismatch"];
pub const MANIFEST: &str = "manifest.txt";

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

fn write_rows(path: &Path, preamble: Option<&str>, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut buf = Vec::new();
    if let Some(line) = preamble {
        writeln!(buf, "{line}")?;
    }
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
    }
    fs::write(path, buf)?;
    Ok(())
}

/// Snapshot CSV with a leading `# t=<time>` line.
pub fn write_snapshot(path: &Path, state: &State, mesh: &Mesh) -> Result<()> {
    if !state.is_on(mesh) {
        return Err(Error::Invalid("snapshot state does not match the mesh".into()));
    }
    let rows = (0..mesh.n_nodes()).map(|i| {
        let w = state.w.at(i);
        let b = state.b.at(i);
        [mesh.x(i), state.rho[i], state.u[i], w[0], w[1], b[0], b[1], state.theta[i]]
            .iter()
            .map(|v| num(*v))
            .collect()
    });
    write_rows(path, Some(&format!("# t={}", state.t)), &SNAPSHOT_HEADER, rows)
}

/// Read a snapshot back; the mesh is inferred from the row count and the
/// node coordinates are checked against it.
pub fn read_snapshot(path: &Path) -> Result<(Mesh, State)> {
    let text = fs::read_to_string(path)?;
    let (first, rest) = text.split_once('\n').ok_or_else(|| format_err(path, "empty file"))?;
    let t: f64 = first
        .trim()
        .strip_prefix("# t=")
        .ok_or_else(|| format_err(path, "missing `# t=` line"))?
        .parse()
        .map_err(|_| format_err(path, format!("bad time line `{first}`")))?;

    let mut reader = csv::Reader::from_reader(rest.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != SNAPSHOT_HEADER {
        return Err(format_err(path, format!("unexpected header {header:?}")));
    }
    let mut cols: [Vec<f64>; 8] = Default::default();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != 8 {
            return Err(format_err(path, format!("row {} has {} columns", line + 1, record.len())));
        }
        for (c, field) in record.iter().enumerate() {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| format_err(path, format!("row {}: bad number `{field}`", line + 1)))?;
            cols[c].push(v);
        }
    }
    let nodes = cols[0].len();
    if nodes < 3 {
        return Err(format_err(path, format!("need at least 3 nodes, got {nodes}")));
    }
    let mesh = Mesh::new(nodes - 1)?;
    for (i, x) in cols[0].iter().enumerate() {
        if (x - mesh.x(i)).abs() > 1e-12 {
            return Err(format_err(path, format!("node {i} at x = {x} is not on a uniform mesh")));
        }
    }
    let [_, rho, u, w1, w2, b1, b2, theta] = cols;
    let state = State {
        t,
        rho: ScalarField::new(rho),
        u: ScalarField::new(u),
        w: Vec2Field::new(ScalarField::new(w1), ScalarField::new(w2)),
        b: Vec2Field::new(ScalarField::new(b1), ScalarField::new(b2)),
        theta: ScalarField::new(theta),
    };
    Ok((mesh, state))
}

pub fn write_diagnostics(path: &Path, diagnostics: &[StepDiagnostics]) -> Result<()> {
    let rows = diagnostics.iter().map(|d| {
        [d.t, d.dt, d.mass, d.total_energy, d.entropy_prod, d.min_rho, d.min_theta, d.bflux]
            .iter()
            .map(|v| num(*v))
            .collect()
    });
    write_rows(path, None, &DIAGNOSTICS_HEADER, rows)
}

/// Read a diagnostics CSV. The halving count is not part of the format
/// and comes back as zero.
pub fn read_diagnostics(path: &Path) -> Result<Vec<StepDiagnostics>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != DIAGNOSTICS_HEADER {
        return Err(format_err(path, format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let v = record
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| format_err(path, e.to_string()))?;
        if v.len() != 8 {
            return Err(format_err(path, format!("row has {} columns", v.len())));
        }
        out.push(StepDiagnostics {
            t: v[0],
            dt: v[1],
            mass: v[2],
            total_energy: v[3],
            entropy_prod: v[4],
            min_rho: v[5],
            min_theta: v[6],
            bflux: v[7],
            halvings: 0,
        });
    }
    Ok(out)
}

pub fn write_rate_report(path: &Path, report: &RateReport) -> Result<()> {
    let rows = report.rows.iter().map(|r| {
        std::iter::once(r.mu)
            .chain(std::iter::once(r.e))
            .chain(r.e_fields)
            .map(num)
            .collect()
    });
    write_rows(path, None, &RATE_HEADER, rows)
}

pub fn write_bl_report(path: &Path, report: &BlReport) -> Result<()> {
    let rows = report.rows.iter().map(|r| {
        [r.mu, r.delta, r.interior_sup, r.global_sup, r.mismatch]
            .iter()
            .map(|v| num(*v))
            .collect()
    });
    write_rows(path, None, &BL_HEADER, rows)
}

/// `resolution,h,err_rho,err_u,err_w,err_b,err_theta`
pub fn write_mms_errors(path: &Path, report: &MmsReport) -> Result<()> {
    let header = ["resolution", "h", "err_rho", "err_u", "err_w", "err_b", "err_theta"];
    let rows = report.resolutions.iter().zip(&report.errors).map(|(n, e)| {
        let mut row = vec![n.to_string(), num(1.0 / *n as f64)];
        row.extend(e.iter().map(|v| num(*v)));
        row
    });
    write_rows(path, None, &header, rows)
}

/// Ordered `key=value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary(pub Vec<(String, String)>);

impl Summary {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Self {
        Summary(
            text.lines()
                .filter_map(|l| l.split_once('='))
                .map(|(k, v)| (k.trim().to_owned(), v.trim().to_owned()))
                .collect(),
        )
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render())?;
        Ok(())
    }
}

fn snapshot_name(k: usize) -> String {
    format!("snapshot_{k:05}.csv")
}

/// Write a run record as a directory of snapshot CSVs, a diagnostics CSV
/// and a manifest. Returns the written file names (manifest last).
pub fn write_record(dir: &Path, record: &RunRecord) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for (k, s) in record.snapshots.iter().enumerate() {
        let name = snapshot_name(k);
        write_snapshot(&dir.join(&name), s, &record.mesh)?;
        files.push(PathBuf::from(name));
    }
    write_diagnostics(&dir.join("diagnostics.csv"), &record.diagnostics)?;
    files.push(PathBuf::from("diagnostics.csv"));

    let mut m = Summary::default();
    m.push("mu", record.mu);
    m.push("n_cells", record.mesh.n_cells());
    m.push("snapshots", record.snapshots.len());
    m.push("steps", record.step_count());
    let i = &record.integrals;
    m.push("integral.u_x_sq", i.u_x_sq);
    m.push("integral.w_x_sq", i.w_x_sq);
    m.push("integral.b_x_sq", i.b_x_sq);
    m.push("integral.theta_x_sq", i.theta_x_sq);
    m.push("integral.entropy_production", i.entropy_production);
    m.push("integral.bflux", i.bflux);
    for f in &files {
        m.push("file", f.display());
    }
    m.push("file", MANIFEST);
    m.write(&dir.join(MANIFEST))?;
    files.push(PathBuf::from(MANIFEST));
    Ok(files)
}

/// Read a directory written by [`write_record`].
pub fn read_record(dir: &Path) -> Result<RunRecord> {
    let manifest_path = dir.join(MANIFEST);
    let m = Summary::parse(&fs::read_to_string(&manifest_path)?);
    let field = |key: &str| -> Result<f64> {
        m.get(key)
            .ok_or_else(|| format_err(&manifest_path, format!("missing `{key}`")))?
            .parse()
            .map_err(|_| format_err(&manifest_path, format!("bad value for `{key}`")))
    };
    let mu = field("mu")?;
    let n_cells = field("n_cells")? as usize;
    let count = field("snapshots")? as usize;
    let mesh = Mesh::new(n_cells)?;

    let mut snapshots = Vec::with_capacity(count);
    for k in 0..count {
        let path = dir.join(snapshot_name(k));
        let (m2, s) = read_snapshot(&path)?;
        if m2 != mesh {
            return Err(format_err(&path, "snapshot mesh differs from the manifest"));
        }
        snapshots.push(s);
    }
    if snapshots.is_empty() {
        return Err(format_err(&manifest_path, "record has no snapshots"));
    }
    let diagnostics = read_diagnostics(&dir.join("diagnostics.csv"))?;
    Ok(RunRecord {
        mesh,
        mu,
        snapshots,
        diagnostics,
        integrals: SpaceTimeIntegrals {
            u_x_sq: field("integral.u_x_sq")?,
            w_x_sq: field("integral.w_x_sq")?,
            b_x_sq: field("integral.b_x_sq")?,
            theta_x_sq: field("integral.theta_x_sq")?,
            entropy_production: field("integral.entropy_production")?,
            bflux: field("integral.bflux")?,
        },
    })
}
