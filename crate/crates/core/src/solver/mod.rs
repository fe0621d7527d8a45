//! Semi-implicit, operator-split time integration.
//!
//! One step applies the sub-steps in the fixed order
//! density -> longitudinal velocity -> transverse velocity -> magnetic field
//! -> temperature, each reading the fields already advanced before it.
//! Transport and coupling terms are explicit, every diffusion term is
//! implicit (tridiagonal solves). A step that drives the density or the
//! temperature below `pos_floor` is discarded and retried with half the
//! time step.

mod record;
mod substeps;
pub mod tridiag;

use std::sync::Arc;

pub use record::{Monitors, RunRecord, SpaceTimeIntegrals, StepDiagnostics};
pub use substeps::Equation;

use crate::boundary::BoundaryData;
use crate::constitutive::ConductivityLaw;
use crate::diagnostics;
use crate::error::{Error, Result, SolverFailure};
use crate::mesh::Mesh;
use crate::params::PhysParams;
use crate::state::{validate_state, InitialData, State};

/// Source terms appended to the right-hand sides, one per equation in
/// [`Equation`] order. Used by manufactured-solution verification.
pub trait Forcing: Send + Sync {
    fn source(&self, x: f64, t: f64) -> [f64; 7];

    /// Sources at every node of `mesh`.
    fn sample(&self, mesh: &Mesh, t: f64) -> Vec<[f64; 7]> {
        mesh.nodes().into_iter().map(|x| self.source(x, t)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverControls {
    pub cfl: f64,
    pub t_end: f64,
    pub dt_max: f64,
    pub snapshot_every: f64,
    /// Positivity floor separating solver failure from round-off.
    pub pos_floor: f64,
    pub max_halvings: u32,
    pub theta_picard_iters: u32,
}

impl Default for SolverControls {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            t_end: 1.0,
            dt_max: f64::INFINITY,
            snapshot_every: 0.1,
            pos_floor: 1e-12,
            max_halvings: 20,
            theta_picard_iters: 2,
        }
    }
}

impl SolverControls {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Invalid(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Invalid(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !(self.snapshot_every > 0.0) {
            return Err(Error::Invalid(format!(
                "snapshot_every must be positive, got {}",
                self.snapshot_every
            )));
        }
        if !(self.dt_max > 0.0) {
            return Err(Error::Invalid(format!("dt_max must be positive, got {}", self.dt_max)));
        }
        if !(self.pos_floor >= 0.0) {
            return Err(Error::Invalid(format!("pos_floor must be nonnegative, got {}", self.pos_floor)));
        }
        Ok(())
    }
}

/// A configured integrator for one problem instance.
#[derive(Clone)]
pub struct Solver {
    mesh: Mesh,
    params: PhysParams,
    law: ConductivityLaw,
    bdry: BoundaryData,
    controls: SolverControls,
    forcing: Option<Arc<dyn Forcing>>,
}

impl std::fmt::Debug for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solver")
            .field("mesh", &self.mesh)
            .field("params", &self.params)
            .field("law", &self.law)
            .field("bdry", &self.bdry)
            .field("controls", &self.controls)
            .field("forced", &self.forcing.is_some())
            .finish()
    }
}

enum Attempt {
    Accepted(State),
    Positivity {
        field: &'static str,
        node: usize,
        value: f64,
    },
}

impl Solver {
    pub fn new(mesh: Mesh, params: PhysParams, bdry: BoundaryData, controls: SolverControls) -> Result<Self> {
        params.validate()?;
        controls.validate()?;
        Ok(Self {
            law: params.conductivity_law(),
            mesh,
            params,
            bdry,
            controls,
            forcing: None,
        })
    }

    pub fn with_law(mut self, law: ConductivityLaw) -> Self {
        self.law = law;
        self
    }

    pub fn with_forcing(mut self, forcing: Arc<dyn Forcing>) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn law(&self) -> &ConductivityLaw {
        &self.law
    }

    pub fn boundary(&self) -> &BoundaryData {
        &self.bdry
    }

    pub fn controls(&self) -> &SolverControls {
        &self.controls
    }

    /// `min(dt_max, cfl * h / max(|u| + c))` with `c = sqrt(gamma theta + |b|^2 / rho)`.
    pub fn cfl_dt(&self, s: &State) -> Result<f64> {
        if let Some(field) = s.first_non_finite() {
            return Err(Error::solver(s.t, Some(field), "non-finite value in state"));
        }
        let mut speed: f64 = 0.0;
        for i in 0..s.n_nodes() {
            let b = s.b.at(i);
            let c2 = self.params.gamma * s.theta[i] + (b[0] * b[0] + b[1] * b[1]) / s.rho[i];
            if !(c2 >= 0.0) {
                return Err(Error::solver(s.t, Some("rho"), "negative squared wave speed"));
            }
            speed = speed.max(s.u[i].abs() + c2.sqrt());
        }
        let dt = if speed > 0.0 {
            self.controls.cfl * self.mesh.h() / speed
        } else {
            f64::INFINITY
        };
        let dt = dt.min(self.controls.dt_max);
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::solver(s.t, None, format!("no admissible time step (dt = {dt})")));
        }
        Ok(dt)
    }

    pub(crate) fn forcing_sample(&self, t: f64) -> Option<Vec<[f64; 7]>> {
        self.forcing.as_ref().map(|f| f.sample(&self.mesh, t))
    }

    fn attempt(&self, s: &State, dt: f64) -> Result<Attempt> {
        let src = self.forcing_sample(s.t);
        let src = src.as_deref();
        let floor = self.controls.pos_floor;
        let below = |field: &'static str, v: &[f64]| {
            v.iter()
                .enumerate()
                .find(|(_, x)| !(**x >= floor))
                .map(|(node, x)| Attempt::Positivity { field, node, value: *x })
        };

        let rho = self.substep_continuity_with(s, dt, src);
        if let Some(event) = below("rho", &rho) {
            return Ok(event);
        }
        let mut next = State { rho, ..s.clone() };
        next.u = self.substep_momentum_with(&next, dt, src)?;
        next.w = self.substep_transverse_velocity_with(&next, dt, src)?;
        next.b = self.substep_magnetic_with(&next, dt, src)?;
        let theta = self.substep_temperature_with(&next, dt, src)?;
        if let Some(event) = below("theta", &theta) {
            return Ok(event);
        }
        next.theta = theta;
        next.t = s.t + dt;
        if let Some(field) = next.first_non_finite() {
            return Err(Error::solver(s.t, Some(field), "non-finite value after step"));
        }
        Ok(Attempt::Accepted(next))
    }

    /// Advance one CFL-limited step.
    pub fn step(&self, s: &State) -> Result<(State, StepDiagnostics)> {
        self.step_capped(s, f64::INFINITY)
    }

    /// Advance one step of length at most `cap`, halving on positivity events.
    pub fn step_capped(&self, s: &State, cap: f64) -> Result<(State, StepDiagnostics)> {
        let mut dt = self.cfl_dt(s)?.min(cap);
        let mut last_event = None;
        for halvings in 0..=self.controls.max_halvings {
            match self.attempt(s, dt)? {
                Attempt::Accepted(next) => {
                    let diag = self.diagnose(&next, dt, halvings)?;
                    return Ok((next, diag));
                }
                Attempt::Positivity { field, node, value } => {
                    last_event = Some((field, node, value));
                    dt *= 0.5;
                }
            }
        }
        let (field, node, value) = last_event.expect("at least one attempt was made");
        Err(Error::solver(
            s.t,
            Some(field),
            format!(
                "{field} fell below the positivity floor at node {node} (value {value}) after {} halvings",
                self.controls.max_halvings
            ),
        ))
    }

    fn diagnose(&self, s: &State, dt: f64, halvings: u32) -> Result<StepDiagnostics> {
        let entropy_prod = diagnostics::entropy_production(s, &self.mesh, &self.params, &self.law)?;
        debug_assert!(entropy_prod >= 0.0);
        Ok(StepDiagnostics {
            t: s.t,
            dt,
            mass: diagnostics::total_mass(s, &self.mesh),
            total_energy: diagnostics::total_energy(s, &self.mesh),
            entropy_prod,
            min_rho: s.rho.min(),
            min_theta: s.theta.min(),
            bflux: diagnostics::boundary_flux(s, &self.mesh, self.params.mu),
            halvings,
        })
    }

    /// Integrate from the initial data at `t = 0` to `t_end`.
    ///
    /// In limit mode the wall values of `w` are free, so initial data need
    /// not match the boundary data there.
    pub fn solve(&self, initial: InitialData) -> Result<RunRecord> {
        self.solve_from(initial.into_state(0.0))
    }

    /// Integrate from an arbitrary valid state (e.g. a reloaded snapshot)
    /// to `t_end`. Snapshot targets are the multiples of `snapshot_every`,
    /// so a restart from a snapshot reproduces the uninterrupted run.
    pub fn solve_from(&self, state: State) -> Result<RunRecord> {
        if !state.is_on(&self.mesh) {
            return Err(Error::Invalid("state does not match the solver mesh".into()));
        }
        let violations = validate_state(&state, &self.params, &self.bdry);
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        let t_end = self.controls.t_end;
        if !(state.t < t_end) {
            return Err(Error::Invalid(format!(
                "start time {} is not before t_end {t_end}",
                state.t
            )));
        }

        let every = self.controls.snapshot_every;
        let mut k = (state.t / every).floor() as u64 + 1;
        let target_at = |k: u64| (k as f64 * every).min(t_end);
        // skip targets that round to the start time itself
        while target_at(k) <= state.t {
            k += 1;
        }

        let mut record = RunRecord::new(self.mesh, self.params.mu, state.clone());
        let mut cur = state;
        while cur.t < t_end {
            let target = target_at(k);
            let cap = target - cur.t;
            let (mut next, diag) = self.step_capped(&cur, cap).map_err(|e| match e {
                Error::Solver(mut f) => {
                    f.last_good = Some(cur.clone());
                    Error::Solver(f)
                }
                other => Error::Solver(Box::new(SolverFailure {
                    t: cur.t,
                    field: None,
                    reason: other.to_string(),
                    last_good: Some(cur.clone()),
                })),
            })?;
            let landed = diag.dt == cap;
            if landed {
                next.t = target;
            }
            record.push_step(&next, diag);
            if landed {
                record.snapshots.push(next.clone());
                k += 1;
            }
            cur = next;
        }
        Ok(record)
    }
}
