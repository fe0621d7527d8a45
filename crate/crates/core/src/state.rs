//! Simulation state, initial data, and their validation.

use std::fmt;

use crate::boundary::BoundaryData;
use crate::error::{Error, Result};
use crate::mesh::{Mesh, ScalarField, Vec2Field};
use crate::params::PhysParams;

/// Absolute tolerance for matching wall values of `w` against the boundary data.
pub const WALL_MATCH_TOL: f64 = 1e-12;

/// Wall weight `omega(x) = min(x, 1 - x)` on `[0, 1]`.
pub fn weight_omega(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("omega is defined on [0, 1]", x));
    }
    Ok(x.min(1.0 - x))
}

/// The five unknowns sampled at the mesh nodes at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    pub rho: ScalarField,
    pub u: ScalarField,
    pub w: Vec2Field,
    pub b: Vec2Field,
    pub theta: ScalarField,
}

impl State {
    pub fn n_nodes(&self) -> usize {
        self.rho.len()
    }

    pub fn is_on(&self, mesh: &Mesh) -> bool {
        self.rho.is_on(mesh)
            && self.u.is_on(mesh)
            && self.w.is_on(mesh)
            && self.b.is_on(mesh)
            && self.theta.is_on(mesh)
    }

    pub fn all_finite(&self) -> bool {
        self.t.is_finite()
            && self.rho.all_finite()
            && self.u.all_finite()
            && self.w.all_finite()
            && self.b.all_finite()
            && self.theta.all_finite()
    }

    /// Name of the first field holding a non-finite value, if any.
    pub fn first_non_finite(&self) -> Option<&'static str> {
        [
            ("rho", self.rho.all_finite()),
            ("u", self.u.all_finite()),
            ("w", self.w.all_finite()),
            ("b", self.b.all_finite()),
            ("theta", self.theta.all_finite()),
        ]
        .into_iter()
        .find(|(_, ok)| !ok)
        .map(|(name, _)| name)
    }

    /// Largest nodal deviation over all fields (time excluded).
    pub fn max_abs_diff(&self, other: &State) -> f64 {
        let pairs: [(&[f64], &[f64]); 7] = [
            (&self.rho, &other.rho),
            (&self.u, &other.u),
            (&self.w.c1, &other.w.c1),
            (&self.w.c2, &other.w.c2),
            (&self.b.c1, &other.b.c1),
            (&self.b.c2, &other.b.c2),
            (&self.theta, &other.theta),
        ];
        pairs
            .iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Initial fields `(rho0, u0, w0, b0, theta0)` on a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub rho0: ScalarField,
    pub u0: ScalarField,
    pub w0: Vec2Field,
    pub b0: Vec2Field,
    pub theta0: ScalarField,
}

impl InitialData {
    pub fn from_state(s: &State) -> Self {
        Self {
            rho0: s.rho.clone(),
            u0: s.u.clone(),
            w0: s.w.clone(),
            b0: s.b.clone(),
            theta0: s.theta.clone(),
        }
    }

    pub(crate) fn into_state(self, t: f64) -> State {
        State {
            t,
            rho: self.rho0,
            u: self.u0,
            w: self.w0,
            b: self.b0,
            theta: self.theta0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NonFinite,
    Positivity,
    Endpoint,
}

/// One broken state invariant at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub field: &'static str,
    pub node: usize,
    pub value: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::NonFinite => "non-finite value",
            ViolationKind::Positivity => "positivity violated",
            ViolationKind::Endpoint => "wall condition violated",
        };
        write!(f, "{what} in `{}` at node {} (value {})", self.field, self.node, self.value)
    }
}

/// Build the `t = 0` state, checking positivity and wall compatibility.
pub fn make_state(mesh: &Mesh, data: InitialData, bdry: &BoundaryData) -> Result<State> {
    let state = data.into_state(0.0);
    if !state.is_on(mesh) {
        return Err(Error::Invalid(format!(
            "initial data length does not match mesh with {} nodes",
            mesh.n_nodes()
        )));
    }
    let v = check(&state, bdry, true, 0.0);
    if v.is_empty() {
        Ok(state)
    } else {
        Err(Error::Validation(v))
    }
}

/// All invariant violations of `state`, with strict positivity.
///
/// Wall values of `w` are compared against `bdry` only when `mu > 0`.
pub fn validate_state(state: &State, params: &PhysParams, bdry: &BoundaryData) -> Vec<Violation> {
    check(state, bdry, !params.is_limit(), 0.0)
}

/// Like [`validate_state`], but positivity is measured against `floor`.
pub fn validate_state_with_floor(
    state: &State,
    params: &PhysParams,
    bdry: &BoundaryData,
    floor: f64,
) -> Vec<Violation> {
    check(state, bdry, !params.is_limit(), floor)
}

fn check(state: &State, bdry: &BoundaryData, check_w_walls: bool, floor: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = state.n_nodes();
    if n == 0 {
        return out;
    }
    let last = n - 1;

    for (field, values) in [("rho", &state.rho), ("theta", &state.theta)] {
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                out.push(Violation { kind: ViolationKind::NonFinite, field, node: i, value: v });
            } else if v <= floor {
                out.push(Violation { kind: ViolationKind::Positivity, field, node: i, value: v });
            }
        }
    }
    for (field, comps) in [
        ("u", vec![&state.u]),
        ("w", state.w.components().to_vec()),
        ("b", state.b.components().to_vec()),
    ] {
        for i in 0..n {
            if let Some(bad) = comps.iter().map(|c| c[i]).find(|v| !v.is_finite()) {
                out.push(Violation { kind: ViolationKind::NonFinite, field, node: i, value: bad });
            }
        }
    }

    for i in [0, last] {
        let u = state.u[i];
        if u.is_finite() && u != 0.0 {
            out.push(Violation { kind: ViolationKind::Endpoint, field: "u", node: i, value: u });
        }
        let b = state.b.at(i);
        if b.iter().all(|v| v.is_finite()) && b != [0.0, 0.0] {
            out.push(Violation {
                kind: ViolationKind::Endpoint,
                field: "b",
                node: i,
                value: b[0].hypot(b[1]),
            });
        }
        if check_w_walls {
            let target = if i == 0 { bdry.minus(state.t) } else { bdry.plus(state.t) };
            let w = state.w.at(i);
            let gap = (w[0] - target[0]).hypot(w[1] - target[1]);
            if w.iter().all(|v| v.is_finite()) && gap > WALL_MATCH_TOL {
                out.push(Violation { kind: ViolationKind::Endpoint, field: "w", node: i, value: gap });
            }
        }
    }
    out
}
