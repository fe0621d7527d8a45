use crate::diagnostics::gradient;
use crate::mesh::Mesh;
use crate::state::State;

/// Per-step diagnostics of an accepted step, evaluated on the new state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub t: f64,
    pub dt: f64,
    pub mass: f64,
    pub total_energy: f64,
    pub entropy_prod: f64,
    pub min_rho: f64,
    pub min_theta: f64,
    /// `mu (w . w_x)` at `x = 1` minus `x = 0`.
    pub bflux: f64,
    /// Number of time-step halvings needed to accept this step.
    pub halvings: u32,
}

/// Space-time integrals over `(0,1) x (0,t)`, trapezoid in space and
/// rectangle in time at step resolution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpaceTimeIntegrals {
    pub u_x_sq: f64,
    pub w_x_sq: f64,
    pub b_x_sq: f64,
    pub theta_x_sq: f64,
    pub entropy_production: f64,
    /// Time integral of the wall flux `mu (w . w_x)|_0^1`.
    pub bflux: f64,
}

/// Trajectory of one run: snapshots at the requested cadence (always
/// including the start and `t_end`), per-step diagnostics, and
/// accumulated space-time integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub mesh: Mesh,
    pub mu: f64,
    pub snapshots: Vec<State>,
    pub diagnostics: Vec<StepDiagnostics>,
    pub integrals: SpaceTimeIntegrals,
}

/// Observed extremes of density and temperature over a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monitors {
    pub min_rho: f64,
    pub max_rho: f64,
    pub min_theta: f64,
    pub max_theta: f64,
}

impl RunRecord {
    pub(crate) fn new(mesh: Mesh, mu: f64, initial: State) -> Self {
        Self {
            mesh,
            mu,
            snapshots: vec![initial],
            diagnostics: Vec::new(),
            integrals: SpaceTimeIntegrals::default(),
        }
    }

    pub(crate) fn push_step(&mut self, s: &State, diag: StepDiagnostics) {
        let h = self.mesh.h();
        let sq = |v: &[f64]| {
            let g = gradient(v, h);
            self.mesh.integrate(&g.iter().map(|x| x * x).collect::<Vec<_>>())
        };
        let dt = diag.dt;
        let acc = &mut self.integrals;
        acc.u_x_sq += dt * sq(&s.u);
        acc.w_x_sq += dt * (sq(&s.w.c1) + sq(&s.w.c2));
        acc.b_x_sq += dt * (sq(&s.b.c1) + sq(&s.b.c2));
        acc.theta_x_sq += dt * sq(&s.theta);
        acc.entropy_production += dt * diag.entropy_prod;
        acc.bflux += dt * diag.bflux;
        self.diagnostics.push(diag);
    }

    pub fn step_count(&self) -> usize {
        self.diagnostics.len()
    }

    pub fn initial(&self) -> &State {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &State {
        self.snapshots.last().expect("a record always holds its initial state")
    }

    pub fn total_halvings(&self) -> u64 {
        self.diagnostics.iter().map(|d| d.halvings as u64).sum()
    }

    pub fn monitors(&self) -> Monitors {
        let mut m = Monitors {
            min_rho: f64::INFINITY,
            max_rho: f64::NEG_INFINITY,
            min_theta: f64::INFINITY,
            max_theta: f64::NEG_INFINITY,
        };
        for s in &self.snapshots {
            m.min_rho = m.min_rho.min(s.rho.min());
            m.max_rho = m.max_rho.max(s.rho.max());
            m.min_theta = m.min_theta.min(s.theta.min());
            m.max_theta = m.max_theta.max(s.theta.max());
        }
        for d in &self.diagnostics {
            m.min_rho = m.min_rho.min(d.min_rho);
            m.min_theta = m.min_theta.min(d.min_theta);
        }
        m
    }
}
