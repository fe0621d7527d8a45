//! Closed-form manufactured solutions and their compensating sources.
//!
//! Every field is a finite sum of separable terms
//! `coef * S(x) * T(t)` with `S` one of `1`, `sin(k pi x)`, `cos(k pi x)`
//! and `T` one of `1`, `cos(omega t)`, so all derivatives the sources need
//! are available in closed form.

use std::f64::consts::PI;

use crate::mesh::{Mesh, Vec2Field};
use crate::params::PhysParams;
use crate::solver::Forcing;
use crate::state::State;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Space {
    One,
    /// `sin(k pi x)`
    Sin(f64),
    /// `cos(k pi x)`
    Cos(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Time {
    One,
    /// `cos(omega t)`
    Cos(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub space: Space,
    pub time: Time,
}

/// Value and the derivatives the sources need.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub x: f64,
    pub xx: f64,
    pub t: f64,
}

impl Space {
    /// `(S, S', S'')`
    fn jet(self, x: f64) -> [f64; 3] {
        match self {
            Space::One => [1.0, 0.0, 0.0],
            Space::Sin(k) => {
                let a = k * PI;
                let (s, c) = (a * x).sin_cos();
                [s, a * c, -a * a * s]
            }
            Space::Cos(k) => {
                let a = k * PI;
                let (s, c) = (a * x).sin_cos();
                [c, -a * s, -a * a * c]
            }
        }
    }
}

impl Time {
    /// `(T, T')`
    fn jet(self, t: f64) -> [f64; 2] {
        match self {
            Time::One => [1.0, 0.0],
            Time::Cos(w) => {
                let (s, c) = (w * t).sin_cos();
                [c, -w * s]
            }
        }
    }
}

fn combine(coef: f64, s: [f64; 3], tm: [f64; 2]) -> Jet {
    Jet {
        v: coef * s[0] * tm[0],
        x: coef * s[1] * tm[0],
        xx: coef * s[2] * tm[0],
        t: coef * s[0] * tm[1],
    }
}

fn add(a: Jet, b: Jet) -> Jet {
    Jet {
        v: a.v + b.v,
        x: a.x + b.x,
        xx: a.xx + b.xx,
        t: a.t + b.t,
    }
}

/// A sum of separable terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Profile(pub Vec<Term>);

impl Profile {
    pub fn constant(c: f64) -> Self {
        Profile(vec![Term {
            coef: c,
            space: Space::One,
            time: Time::One,
        }])
    }

    pub fn term(mut self, coef: f64, space: Space, time: Time) -> Self {
        self.0.push(Term { coef, space, time });
        self
    }

    pub fn jet(&self, x: f64, t: f64) -> Jet {
        self.0
            .iter()
            .map(|term| combine(term.coef, term.space.jet(x), term.time.jet(t)))
            .fold(Jet::default(), add)
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        self.jet(x, t).v
    }
}

/// A manufactured solution for all five fields together with the physical
/// parameters its sources are computed for. Conductivity is the power law
/// `kappa1 theta^q`; a conductivity override in `params` is ignored.
#[derive(Debug, Clone)]
pub struct Manufactured {
    pub rho: Profile,
    pub u: Profile,
    pub w: [Profile; 2],
    pub b: [Profile; 2],
    pub theta: Profile,
    pub params: PhysParams,
}

/// Field jets at one point, in the order of [`Manufactured`].
struct Jets {
    rho: Jet,
    u: Jet,
    w: [Jet; 2],
    b: [Jet; 2],
    theta: Jet,
}

impl Manufactured {
    /// Exact state at time `t` on `mesh`.
    pub fn state(&self, mesh: &Mesh, t: f64) -> State {
        let f = |p: &Profile| mesh.sample(|x| p.value(x, t));
        State {
            t,
            rho: f(&self.rho),
            u: f(&self.u),
            w: Vec2Field::new(f(&self.w[0]), f(&self.w[1])),
            b: Vec2Field::new(f(&self.b[0]), f(&self.b[1])),
            theta: f(&self.theta),
        }
    }

    fn jets(&self, x: f64, t: f64) -> Jets {
        Jets {
            rho: self.rho.jet(x, t),
            u: self.u.jet(x, t),
            w: [self.w[0].jet(x, t), self.w[1].jet(x, t)],
            b: [self.b[0].jet(x, t), self.b[1].jet(x, t)],
            theta: self.theta.jet(x, t),
        }
    }

    fn source_from(&self, j: &Jets) -> [f64; 7] {
        let p = &self.params;
        let (rho, u, th) = (j.rho, j.u, j.theta);
        let mut out = [0.0; 7];

        out[0] = rho.t + rho.x * u.v + rho.v * u.x;

        let b_bx = j.b[0].v * j.b[0].x + j.b[1].v * j.b[1].x;
        let px = p.gamma * (rho.x * th.v + rho.v * th.x) + b_bx;
        out[1] = u.t + u.v * u.x + px / rho.v - p.lambda * u.xx / rho.v;

        for c in 0..2 {
            let (w, b) = (j.w[c], j.b[c]);
            out[2 + c] = w.t + u.v * w.x - b.x / rho.v - p.mu * w.xx / rho.v;
            out[4 + c] = b.t + u.x * b.v + u.v * b.x - w.x - p.nu * b.xx;
        }

        let kappa = p.kappa1 * th.v.powf(p.q);
        let dkappa = p.kappa1 * p.q * th.v.powf(p.q - 1.0);
        let conduction = dkappa * th.x * th.x + kappa * th.xx;
        let dissipation = p.lambda * u.x * u.x
            + p.mu * (j.w[0].x * j.w[0].x + j.w[1].x * j.w[1].x)
            + p.nu * (j.b[0].x * j.b[0].x + j.b[1].x * j.b[1].x);
        out[6] = th.t + u.v * th.x + p.gamma * th.v * u.x - (conduction + dissipation) / rho.v;
        out
    }

    /// Sources in equation order: continuity, momentum, `w1`, `w2`, `b1`,
    /// `b2`, temperature.
    pub fn source(&self, x: f64, t: f64) -> [f64; 7] {
        self.source_from(&self.jets(x, t))
    }

    fn profiles(&self) -> [&Profile; 7] {
        [&self.rho, &self.u, &self.w[0], &self.w[1], &self.b[0], &self.b[1], &self.theta]
    }
}

/// [`Forcing`] for a manufactured solution, with the spatial factors of
/// every term tabulated on one mesh.
#[derive(Debug, Clone)]
pub struct MmsForcing {
    solution: Manufactured,
    mesh: Mesh,
    /// `tables[field][term][node]`
    tables: Vec<Vec<Vec<[f64; 3]>>>,
}

impl MmsForcing {
    pub fn new(solution: Manufactured, mesh: Mesh) -> Self {
        let nodes = mesh.nodes();
        let tables = solution
            .profiles()
            .iter()
            .map(|p| {
                p.0.iter()
                    .map(|term| nodes.iter().map(|&x| term.space.jet(x)).collect())
                    .collect()
            })
            .collect();
        Self { solution, mesh, tables }
    }

    pub fn solution(&self) -> &Manufactured {
        &self.solution
    }
}

impl Forcing for MmsForcing {
    fn source(&self, x: f64, t: f64) -> [f64; 7] {
        self.solution.source(x, t)
    }

    fn sample(&self, mesh: &Mesh, t: f64) -> Vec<[f64; 7]> {
        if *mesh != self.mesh {
            return mesh.nodes().into_iter().map(|x| self.source(x, t)).collect();
        }
        let profiles = self.solution.profiles();
        let times: Vec<Vec<[f64; 2]>> = profiles
            .iter()
            .map(|p| p.0.iter().map(|term| term.time.jet(t)).collect())
            .collect();
        (0..mesh.n_nodes())
            .map(|i| {
                let mut jets = [Jet::default(); 7];
                for (f, jet) in jets.iter_mut().enumerate() {
                    for (k, term) in profiles[f].0.iter().enumerate() {
                        *jet = add(*jet, combine(term.coef, self.tables[f][k][i], times[f][k]));
                    }
                }
                self.solution.source_from(&Jets {
                    rho: jets[0],
                    u: jets[1],
                    w: [jets[2], jets[3]],
                    b: [jets[4], jets[5]],
                    theta: jets[6],
                })
            })
            .collect()
    }
}
