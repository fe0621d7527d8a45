//! Viscosity sweeps: one limit run, several viscous runs, and the two
//! reports comparing them.

use rayon::prelude::*;

use super::bl::{bl_profile, check_aligned, BlReport};
use super::rate::{rate_fit, LineFit};
use crate::boundary::BoundaryData;
use crate::diagnostics::{diff_norms_update, DiffNorms};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::params::PhysParams;
use crate::solver::{RunRecord, Solver, SolverControls};
use crate::state::InitialData;

/// Accepted slope window for the fitted rate.
pub const SLOPE_RANGE: (f64, f64) = (0.2, 1.2);
/// Largest accepted RMS residual of the log-log fit.
pub const MAX_RESIDUAL: f64 = 0.15;
/// Each interior sup must be at most this fraction of the previous one.
pub const BL_DECREASE_FACTOR: f64 = 0.9;
/// The global sup must stay above this fraction of the wall mismatch.
pub const GLOBAL_FRACTION: f64 = 0.5;
/// Smallest accepted ratio of the smallest to the largest global sup.
pub const FLOOR_RATIO: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct SweepPlan {
    /// Positive, distinct viscosities.
    pub mu_values: Vec<f64>,
    /// Solve the `mu = 0` baseline as part of the sweep.
    pub include_limit: bool,
    pub mesh: Mesh,
    /// Shared parameters; `mu` is overridden per case.
    pub params: PhysParams,
    pub initial: InitialData,
    pub bdry: BoundaryData,
    pub controls: SolverControls,
    /// Layer thickness exponent `a` in `delta = mu^a`.
    pub thickness_exponent: f64,
}

/// Log-spaced viscosities from `1e-2` down to `1e-4`, half a decade apart.
pub fn default_mu_values() -> Vec<f64> {
    [-2.0, -2.5, -3.0, -3.5, -4.0].iter().map(|e| 10f64.powf(*e)).collect()
}

impl SweepPlan {
    pub fn new(
        mu_values: Vec<f64>,
        mesh: Mesh,
        params: PhysParams,
        initial: InitialData,
        bdry: BoundaryData,
        controls: SolverControls,
    ) -> Self {
        Self {
            mu_values,
            include_limit: true,
            mesh,
            params,
            initial,
            bdry,
            controls,
            thickness_exponent: 0.4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu_values.is_empty() {
            return Err(Error::Invalid("sweep needs at least one viscosity".into()));
        }
        for &mu in &self.mu_values {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(Error::Invalid(format!("sweep viscosities must be positive, got {mu}")));
            }
        }
        let mut sorted = self.mu_values.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("sweep viscosities must be distinct".into()));
        }
        if !(self.thickness_exponent > 0.0 && self.thickness_exponent < 0.5) {
            return Err(Error::Invalid(format!(
                "thickness exponent must lie in (0, 1/2), got {}",
                self.thickness_exponent
            )));
        }
        self.params.validate()?;
        self.controls.validate()
    }

    fn solver(&self, mu: f64) -> Result<Solver> {
        Solver::new(self.mesh, self.params.with_mu(mu), self.bdry.clone(), self.controls.clone())
    }

    pub fn solve_limit(&self) -> Result<RunRecord> {
        self.solver(0.0)?.solve(self.initial.clone())
    }

    pub fn solve_case(&self, mu: f64) -> Result<RunRecord> {
        self.solver(mu)?.solve(self.initial.clone())
    }
}

/// One row of the rate report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub mu: f64,
    /// Composite difference norm against the limit run.
    pub e: f64,
    /// Per-field composites in `rho, u, w, b, theta` order.
    pub e_fields: [f64; 5],
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailedCase {
    pub mu: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RateReport {
    /// Surviving cases sorted by increasing viscosity.
    pub rows: Vec<RateRow>,
    pub failed: Vec<FailedCase>,
    pub fit: Option<LineFit>,
    /// Per-field slopes; `None` where a field's composite is zero or the
    /// fit is otherwise refused.
    pub field_slopes: [Option<f64>; 5],
    /// Why the fit was refused, if it was.
    pub notice: Option<String>,
}

impl RateReport {
    pub fn slope_ok(&self) -> bool {
        self.fit
            .map(|f| f.slope >= SLOPE_RANGE.0 && f.slope <= SLOPE_RANGE.1 && f.residual <= MAX_RESIDUAL)
            .unwrap_or(false)
    }
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub rate: RateReport,
    pub bl: BlReport,
    pub limit: RunRecord,
    /// Every case in plan order, with its record or failure.
    pub cases: Vec<(f64, Result<RunRecord>)>,
}

/// Composite difference norm of `record` against `limit`, sampled at the
/// shared snapshot times with rectangle weights `t_k - t_{k-1}`.
pub fn difference_norms(record: &RunRecord, limit: &RunRecord) -> Result<DiffNorms> {
    check_aligned(record, limit)?;
    let mut acc = DiffNorms::default();
    let mut prev_t = record.snapshots[0].t;
    for (s, r) in record.snapshots.iter().zip(&limit.snapshots) {
        acc = diff_norms_update(acc, s, r, &record.mesh, s.t - prev_t)?;
        prev_t = s.t;
    }
    Ok(acc)
}

/// Build both reports from a limit run and the viscous cases.
pub fn assemble_reports(limit: &RunRecord, cases: &[(f64, Result<RunRecord>)], exponent: f64) -> Result<(RateReport, BlReport)> {
    let mut rate = RateReport::default();
    let mut bl = BlReport {
        exponent,
        rows: Vec::new(),
    };
    for (mu, case) in cases {
        match case {
            Ok(rec) => {
                let norms = difference_norms(rec, limit)?;
                rate.rows.push(RateRow {
                    mu: *mu,
                    e: norms.composite(),
                    e_fields: std::array::from_fn(|k| norms.field_composite(k)),
                });
                bl.rows.push(bl_profile(rec, limit, exponent)?);
            }
            Err(e) => rate.failed.push(FailedCase {
                mu: *mu,
                reason: e.to_string(),
            }),
        }
    }
    rate.rows.sort_by(|a, b| a.mu.total_cmp(&b.mu));
    bl.rows.sort_by(|a, b| b.mu.total_cmp(&a.mu));

    if rate.rows.len() < 3 {
        rate.notice = Some(format!(
            "rate fit needs at least 3 surviving cases, have {}",
            rate.rows.len()
        ));
    } else if rate.rows.iter().any(|r| r.e <= 0.0) {
        rate.notice = Some("degenerate data: some case coincides with the limit run (E = 0)".into());
    } else {
        let pairs: Vec<_> = rate.rows.iter().map(|r| (r.mu, r.e)).collect();
        match rate_fit(&pairs) {
            Ok(fit) => rate.fit = Some(fit),
            Err(e) => rate.notice = Some(e.to_string()),
        }
        for k in 0..5 {
            let pairs: Vec<_> = rate.rows.iter().map(|r| (r.mu, r.e_fields[k])).collect();
            rate.field_slopes[k] = rate_fit(&pairs).ok().map(|f| f.slope);
        }
    }
    Ok((rate, bl))
}

/// Solve the limit run and every case, then assemble the reports. Cases run
/// on the current rayon pool; results do not depend on scheduling.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepOutcome> {
    plan.validate()?;
    if !plan.include_limit {
        return Err(Error::Invalid(
            "run_sweep needs the limit run; use assemble_reports with an existing one".into(),
        ));
    }
    let (limit, cases) = rayon::join(
        || plan.solve_limit(),
        || {
            plan.mu_values
                .par_iter()
                .map(|&mu| (mu, plan.solve_case(mu)))
                .collect::<Vec<_>>()
        },
    );
    let limit = limit?;
    let (rate, bl) = assemble_reports(&limit, &cases, plan.thickness_exponent)?;
    Ok(SweepOutcome { rate, bl, limit, cases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Preset;

    fn small_plan(mu_values: Vec<f64>) -> SweepPlan {
        let mesh = Mesh::new(40).unwrap();
        let bdry = BoundaryData::constant([1.0, 0.0], [-1.0, 0.0]);
        let initial = Preset::SmoothShear.build(&mesh, &bdry);
        let controls = SolverControls {
            t_end: 0.05,
            snapshot_every: 0.01,
            ..SolverControls::default()
        };
        SweepPlan::new(mu_values, mesh, PhysParams::default(), initial, bdry, controls)
    }

    #[test]
    fn limit_against_itself_is_degenerate() {
        let plan = small_plan(vec![1e-2, 1e-3, 1e-4]);
        let limit = plan.solve_limit().unwrap();
        let cases: Vec<_> = plan
            .mu_values
            .iter()
            .map(|&mu| {
                let mut copy = limit.clone();
                copy.mu = mu;
                (mu, Ok(copy))
            })
            .collect();
        let (rate, _) = assemble_reports(&limit, &cases, 0.4).unwrap();
        assert!(rate.rows.iter().all(|r| r.e == 0.0));
        assert!(rate.fit.is_none());
        assert!(rate.notice.unwrap().contains("degenerate"));
    }

    #[test]
    fn sweep_is_deterministic_and_sorted() {
        let plan = small_plan(vec![1e-2, 1e-3, 10f64.powf(-2.5)]);
        let a = run_sweep(&plan).unwrap();
        let b = run_sweep(&plan).unwrap();
        assert_eq!(a.rate, b.rate);
        assert_eq!(a.bl, b.bl);
        assert!(a.rate.rows.windows(2).all(|w| w[0].mu < w[1].mu));
        assert!(a.bl.rows.windows(2).all(|w| w[0].mu > w[1].mu));
        for row in &a.bl.rows {
            assert!(row.interior_sup <= row.global_sup);
        }
        assert!(a.rate.fit.is_some());
    }

    #[test]
    fn too_few_cases_refuse_the_fit() {
        let plan = small_plan(vec![1e-2, 1e-3]);
        let out = run_sweep(&plan).unwrap();
        assert!(out.rate.fit.is_none());
        assert!(out.rate.notice.is_some());
    }

    #[test]
    fn invalid_plans_are_rejected() {
        assert!(small_plan(vec![1e-2, 1e-2, 1e-3]).validate().is_err());
        assert!(small_plan(vec![1e-2, 0.0]).validate().is_err());
        let mut p = small_plan(vec![1e-2]);
        p.thickness_exponent = 0.5;
        assert!(p.validate().is_err());
    }
}
