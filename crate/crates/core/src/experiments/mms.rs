//! Order-of-accuracy verification against manufactured solutions.
//!
//! Single-equation cases advance one field with its own sub-step while
//! every other field is reset to the exact solution at the start of each
//! step; the coupled case runs the full forced step. All cases use
//! `dt = h^2 / 2` (rounded so the horizon is hit exactly), which makes the
//! first-order splitting error second order in `h`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use super::manufactured::{Manufactured, MmsForcing, Profile, Space, Time};
use super::rate::rate_fit;
use crate::boundary::BoundaryData;
use crate::diagnostics::FIELD_NAMES;
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::params::PhysParams;
use crate::solver::{Solver, SolverControls};
use crate::state::State;

/// Default refinement ladder.
pub const DEFAULT_RESOLUTIONS: [usize; 3] = [100, 200, 400];
/// Errors below this are treated as round-off.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmsCase {
    Continuity,
    Momentum,
    Transverse,
    Magnetic,
    Temperature,
    Coupled,
}

impl MmsCase {
    pub const ALL: [MmsCase; 6] = [
        MmsCase::Continuity,
        MmsCase::Momentum,
        MmsCase::Transverse,
        MmsCase::Magnetic,
        MmsCase::Temperature,
        MmsCase::Coupled,
    ];

    /// Indices into [`FIELD_NAMES`] of the fields this case advances.
    pub fn active_fields(self) -> &'static [usize] {
        match self {
            MmsCase::Continuity => &[0],
            MmsCase::Momentum => &[1],
            MmsCase::Transverse => &[2],
            MmsCase::Magnetic => &[3],
            MmsCase::Temperature => &[4],
            MmsCase::Coupled => &[0, 1, 2, 3, 4],
        }
    }

    /// Order the scheme is expected to reach on this case.
    pub fn expected_order(self) -> f64 {
        match self {
            MmsCase::Momentum | MmsCase::Magnetic | MmsCase::Temperature => 1.9,
            MmsCase::Coupled => 0.9,
            MmsCase::Continuity | MmsCase::Transverse => 0.9,
        }
    }
}

impl FromStr for MmsCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MmsCase::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown mms case `{s}`")))
    }
}

impl fmt::Display for MmsCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MmsCase::Continuity => "continuity",
            MmsCase::Momentum => "momentum",
            MmsCase::Transverse => "transverse",
            MmsCase::Magnetic => "magnetic",
            MmsCase::Temperature => "temperature",
            MmsCase::Coupled => "coupled",
        })
    }
}

/// A case, the solution it is checked against, and the horizon.
#[derive(Debug, Clone)]
pub struct MmsProblem {
    pub case: MmsCase,
    pub solution: Manufactured,
    pub t_end: f64,
}

fn mms_params() -> PhysParams {
    PhysParams {
        lambda: 0.5,
        mu: 0.1,
        nu: 0.5,
        gamma: 1.0,
        kappa1: 0.5,
        q: 2.0,
        conductivity_override: None,
    }
}

impl MmsProblem {
    /// Smooth trigonometric fields compatible with the wall conditions:
    /// `u`, `b` vanish and `theta_x` vanishes at both walls, `w` is
    /// constant there. Cases without transport use `u = 0`; the
    /// temperature case also freezes `w` and drops `b`, leaving pure
    /// nonlinear conduction.
    pub fn standard(case: MmsCase) -> Self {
        let ct = Time::Cos(1.0);
        let mut solution = Manufactured {
            rho: Profile::constant(1.0).term(0.2, Space::Cos(1.0), Time::Cos(2.0)),
            u: Profile::default().term(0.3, Space::Sin(1.0), ct),
            w: [
                Profile::constant(0.5).term(0.4, Space::Sin(1.0), ct),
                Profile::constant(-0.2).term(0.3, Space::Sin(2.0), Time::One),
            ],
            b: [
                Profile::default().term(0.3, Space::Sin(1.0), ct),
                Profile::default().term(0.2, Space::Sin(2.0), Time::One),
            ],
            theta: Profile::constant(1.0).term(0.3, Space::Cos(1.0), ct),
            params: mms_params(),
        };
        match case {
            MmsCase::Magnetic => solution.u = Profile::default(),
            MmsCase::Temperature => {
                solution.u = Profile::default();
                solution.w = [Profile::constant(0.5), Profile::constant(-0.2)];
                solution.b = [Profile::default(), Profile::default()];
            }
            _ => {}
        }
        Self { case, solution, t_end: 0.1 }
    }

    /// A constant state with zero sources, which every case reproduces to
    /// round-off.
    pub fn constant(case: MmsCase) -> Self {
        Self {
            case,
            solution: Manufactured {
                rho: Profile::constant(1.2),
                u: Profile::default(),
                w: [Profile::constant(0.5), Profile::constant(-0.2)],
                b: [Profile::default(), Profile::default()],
                theta: Profile::constant(0.8),
                params: mms_params(),
            },
            t_end: 0.1,
        }
    }

    fn boundary(&self) -> BoundaryData {
        let w = |x: f64| [self.solution.w[0].value(x, 0.0), self.solution.w[1].value(x, 0.0)];
        BoundaryData::constant(w(0.0), w(1.0))
    }

    /// L2 errors at `t_end` on `n_cells` cells; zero for fields the case
    /// does not advance.
    pub fn errors(&self, n_cells: usize) -> Result<[f64; 5]> {
        let mesh = Mesh::new(n_cells)?;
        let h = mesh.h();
        let steps = (self.t_end / (0.5 * h * h)).ceil() as usize;
        let dt = self.t_end / steps as f64;
        let forcing = Arc::new(MmsForcing::new(self.solution.clone(), mesh));
        let controls = SolverControls {
            t_end: self.t_end,
            ..SolverControls::default()
        };
        let solver = Solver::new(mesh, self.solution.params.clone(), self.boundary(), controls)?
            .with_forcing(forcing.clone());

        let mut s = self.solution.state(&mesh, 0.0);
        for k in 0..steps {
            let t = k as f64 * dt;
            s = if self.case == MmsCase::Coupled {
                let (mut next, _) = solver.step_capped(&s, dt)?;
                next.t = (k + 1) as f64 * dt;
                next
            } else {
                self.advance_one(&solver, &forcing, &mesh, &s, t, dt)?
            };
        }
        let exact = self.solution.state(&mesh, self.t_end);
        let all = l2_errors(&s, &exact, &mesh);
        let mut out = [0.0; 5];
        for &k in self.case.active_fields() {
            out[k] = all[k];
        }
        Ok(out)
    }

    fn advance_one(
        &self,
        solver: &Solver,
        forcing: &MmsForcing,
        mesh: &Mesh,
        s: &State,
        t: f64,
        dt: f64,
    ) -> Result<State> {
        use crate::solver::Forcing;
        let mut frozen = self.solution.state(mesh, t);
        let src = forcing.sample(mesh, t);
        let src = Some(&src[..]);
        match self.case {
            MmsCase::Continuity => {
                frozen.rho = s.rho.clone();
                frozen.rho = solver.substep_continuity_with(&frozen, dt, src);
            }
            MmsCase::Momentum => {
                frozen.u = s.u.clone();
                frozen.u = solver.substep_momentum_with(&frozen, dt, src)?;
            }
            MmsCase::Transverse => {
                frozen.w = s.w.clone();
                frozen.w = solver.substep_transverse_velocity_with(&frozen, dt, src)?;
            }
            MmsCase::Magnetic => {
                frozen.b = s.b.clone();
                frozen.b = solver.substep_magnetic_with(&frozen, dt, src)?;
            }
            MmsCase::Temperature => {
                frozen.theta = s.theta.clone();
                frozen.theta = solver.substep_temperature_with(&frozen, dt, src)?;
            }
            MmsCase::Coupled => unreachable!("the coupled case uses the full step"),
        }
        frozen.t = t + dt;
        if let Some(field) = frozen.first_non_finite() {
            return Err(Error::solver(t, Some(field), "non-finite value in verification run"));
        }
        Ok(frozen)
    }
}

fn l2_errors(s: &State, exact: &State, mesh: &Mesh) -> [f64; 5] {
    let sq = |a: &[f64], b: &[f64]| {
        mesh.integrate(&a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).collect::<Vec<_>>())
    };
    [
        sq(&s.rho, &exact.rho).sqrt(),
        sq(&s.u, &exact.u).sqrt(),
        (sq(&s.w.c1, &exact.w.c1) + sq(&s.w.c2, &exact.w.c2)).sqrt(),
        (sq(&s.b.c1, &exact.b.c1) + sq(&s.b.c2, &exact.b.c2)).sqrt(),
        sq(&s.theta, &exact.theta).sqrt(),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmsStatus {
    /// Every active error is at round-off.
    Exact,
    /// Some active error failed to decrease under refinement.
    NonMonotone,
    Converging,
}

impl fmt::Display for MmsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MmsStatus::Exact => "exact",
            MmsStatus::NonMonotone => "non-monotone",
            MmsStatus::Converging => "converging",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MmsReport {
    pub case: MmsCase,
    pub resolutions: Vec<usize>,
    /// `errors[r][field]`, L2 at the horizon.
    pub errors: Vec<[f64; 5]>,
    /// Least-squares order per field over all resolutions.
    pub orders: [Option<f64>; 5],
    /// Orders between consecutive resolutions, per field.
    pub pairwise: Vec<[Option<f64>; 5]>,
    pub status: MmsStatus,
}

impl MmsReport {
    /// Smallest least-squares order over the active fields.
    pub fn order(&self) -> Option<f64> {
        self.case
            .active_fields()
            .iter()
            .map(|&k| self.orders[k])
            .try_fold(f64::INFINITY, |acc, o| o.map(|o| acc.min(o)))
    }

    pub fn meets_expectation(&self) -> bool {
        self.status == MmsStatus::Exact
            || (self.status == MmsStatus::Converging
                && self.order().is_some_and(|o| o >= self.case.expected_order()))
    }

    pub fn field_name(k: usize) -> &'static str {
        FIELD_NAMES[k]
    }
}

fn check_resolutions(resolutions: &[usize]) -> Result<()> {
    if resolutions.len() < 3 {
        return Err(Error::Invalid(format!(
            "order verification needs at least 3 resolutions, got {}",
            resolutions.len()
        )));
    }
    if resolutions.windows(2).any(|w| w[0] >= w[1]) || resolutions[0] < 2 {
        return Err(Error::Invalid("resolutions must be strictly increasing and at least 2".into()));
    }
    Ok(())
}

/// Run a problem at every resolution (in parallel) and report observed
/// orders.
pub fn mms_verify_problem(problem: &MmsProblem, resolutions: &[usize]) -> Result<MmsReport> {
    check_resolutions(resolutions)?;
    let errors = resolutions
        .par_iter()
        .map(|&n| problem.errors(n))
        .collect::<Result<Vec<_>>>()?;
    let active = problem.case.active_fields();
    let hs: Vec<f64> = resolutions.iter().map(|&n| 1.0 / n as f64).collect();

    let exact = active.iter().all(|&k| errors.iter().all(|e| e[k] < EXACT_TOL));
    let monotone = active
        .iter()
        .all(|&k| errors.windows(2).all(|w| w[1][k] < w[0][k]));
    let status = if exact {
        MmsStatus::Exact
    } else if monotone {
        MmsStatus::Converging
    } else {
        MmsStatus::NonMonotone
    };

    let mut orders = [None; 5];
    for &k in active {
        let pairs: Vec<_> = hs.iter().zip(&errors).map(|(h, e)| (*h, e[k])).collect();
        orders[k] = rate_fit(&pairs).ok().map(|f| f.slope);
    }
    let pairwise = (1..errors.len())
        .map(|r| {
            let mut o = [None; 5];
            for &k in active {
                let (a, b) = (errors[r - 1][k], errors[r][k]);
                if a > 0.0 && b > 0.0 {
                    o[k] = Some((a / b).ln() / (hs[r - 1] / hs[r]).ln());
                }
            }
            o
        })
        .collect();
    Ok(MmsReport {
        case: problem.case,
        resolutions: resolutions.to_vec(),
        errors,
        orders,
        pairwise,
        status,
    })
}

/// Verify a case against its standard manufactured solution.
pub fn mms_verify(case: MmsCase, resolutions: &[usize]) -> Result<MmsReport> {
    mms_verify_problem(&MmsProblem::standard(case), resolutions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_names_round_trip() {
        for c in MmsCase::ALL {
            assert_eq!(c.to_string().parse::<MmsCase>().unwrap(), c);
        }
        assert!("energy".parse::<MmsCase>().is_err());
    }

    #[test]
    fn constant_state_is_exact() {
        for c in MmsCase::ALL {
            let rep = mms_verify_problem(&MmsProblem::constant(c), &[8, 16, 32]).unwrap();
            assert_eq!(rep.status, MmsStatus::Exact, "{c}");
            assert!(rep.meets_expectation());
        }
    }

    #[test]
    fn resolutions_are_checked() {
        assert!(mms_verify(MmsCase::Continuity, &[10, 20]).is_err());
        assert!(mms_verify(MmsCase::Continuity, &[10, 20, 20]).is_err());
    }

    #[test]
    fn coarse_continuity_converges() {
        let rep = mms_verify(MmsCase::Continuity, &[20, 40, 80]).unwrap();
        assert_eq!(rep.status, MmsStatus::Converging);
        assert!(rep.order().unwrap() > 0.8, "{:?}", rep);
    }
}
