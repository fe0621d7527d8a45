//! The five split sub-steps. Each one advances a single field over `dt`
//! and reads the others from the state it is handed, so the step driver
//! controls which fields are already updated.

use super::{tridiag, Solver};
use crate::constitutive::conductivity;
use crate::diagnostics::gradient;
use crate::error::{Error, Result};
use crate::mesh::{ScalarField, Vec2Field};
use crate::state::State;

/// Index of each equation in a forcing vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Continuity = 0,
    Momentum = 1,
    W1 = 2,
    W2 = 3,
    B1 = 4,
    B2 = 5,
    Temperature = 6,
}

/// First-order upwind derivative of `f` at node `i` for advection speed `a`.
/// Falls back to one-sided differences at the walls.
fn upwind1(f: &[f64], i: usize, a: f64, h: f64) -> f64 {
    let last = f.len() - 1;
    if i == 0 {
        (f[1] - f[0]) / h
    } else if i == last {
        (f[last] - f[last - 1]) / h
    } else if a >= 0.0 {
        (f[i] - f[i - 1]) / h
    } else {
        (f[i + 1] - f[i]) / h
    }
}

/// Second-order upwind-biased derivative, first order on the nodes next to
/// the walls where the three-point stencil does not fit.
fn upwind2(f: &[f64], i: usize, a: f64, h: f64) -> f64 {
    let last = f.len() - 1;
    if a >= 0.0 {
        if i >= 2 {
            (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * h)
        } else {
            upwind1(f, i, a, h)
        }
    } else if i + 2 <= last {
        (-3.0 * f[i] + 4.0 * f[i + 1] - f[i + 2]) / (2.0 * h)
    } else {
        upwind1(f, i, a, h)
    }
}

/// Upwind face fluxes `a_f * q_upwind` for `a_f = (u_i + u_{i+1}) / 2`.
fn upwind_face_flux(u: &[f64], q: &[f64]) -> Vec<f64> {
    (0..u.len() - 1)
        .map(|f| {
            let uf = 0.5 * (u[f] + u[f + 1]);
            if uf >= 0.0 {
                uf * q[f]
            } else {
                uf * q[f + 1]
            }
        })
        .collect()
}

impl Solver {
    /// Explicit upwind finite-volume update of the density.
    ///
    /// Wall faces carry no flux and the wall nodes own half cells, so the
    /// trapezoid mass changes only through the forcing.
    pub fn substep_continuity(&self, s: &State, dt: f64) -> ScalarField {
        self.substep_continuity_with(s, dt, self.forcing_sample(s.t).as_deref())
    }

    pub(crate) fn substep_continuity_with(&self, s: &State, dt: f64, src: Option<&[[f64; 7]]>) -> ScalarField {
        let mesh = &self.mesh;
        let n = mesh.n_cells();
        let flux = upwind_face_flux(&s.u, &s.rho);
        let mut rho = s.rho.clone();
        for i in 0..=n {
            let right = if i < n { flux[i] } else { 0.0 };
            let left = if i > 0 { flux[i - 1] } else { 0.0 };
            rho[i] -= dt / mesh.volume(i) * (right - left);
            if let Some(src) = src {
                rho[i] += dt * src[i][Equation::Continuity as usize];
            }
        }
        rho
    }

    /// Longitudinal velocity: explicit convection and total-pressure
    /// gradient, implicit viscous diffusion, `u = 0` at both walls.
    ///
    /// Expects `s.rho` to be the density already advanced this step.
    pub fn substep_momentum(&self, s: &State, dt: f64) -> Result<ScalarField> {
        self.substep_momentum_with(s, dt, self.forcing_sample(s.t).as_deref())
    }

    pub(crate) fn substep_momentum_with(&self, s: &State, dt: f64, src: Option<&[[f64; 7]]>) -> Result<ScalarField> {
        let h = self.mesh.h();
        let n = self.mesh.n_cells();
        let gamma = self.params.gamma;
        let total_p: Vec<f64> = (0..=n)
            .map(|i| {
                let b = s.b.at(i);
                gamma * s.rho[i] * s.theta[i] + 0.5 * (b[0] * b[0] + b[1] * b[1])
            })
            .collect();

        let m = n - 1;
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for i in 1..n {
            let u = s.u[i];
            let rho = s.rho[i];
            let mut star = u
                - dt * (u * upwind2(&s.u, i, u, h) + (total_p[i + 1] - total_p[i - 1]) / (2.0 * h * rho));
            if let Some(src) = src {
                star += dt * src[i][Equation::Momentum as usize];
            }
            let a = dt * self.params.lambda / (rho * h * h);
            let j = i - 1;
            lower[j] = -a;
            diag[j] = 1.0 + 2.0 * a;
            upper[j] = -a;
            rhs[j] = star;
        }
        let inner = tridiag::solve(&lower, &diag, &upper, &rhs)?;
        let mut out = ScalarField::new(vec![0.0; n + 1]);
        out[1..n].copy_from_slice(&inner);
        Ok(out)
    }

    /// Transverse velocity: explicit upwind transport and magnetic tension
    /// `b_x / rho`, then implicit `(mu / rho) w_xx` with the wall data.
    ///
    /// With `mu = 0` no wall condition exists: every node, walls included,
    /// follows the explicit update, and the boundary data is never read.
    pub fn substep_transverse_velocity(&self, s: &State, dt: f64) -> Result<Vec2Field> {
        self.substep_transverse_velocity_with(s, dt, self.forcing_sample(s.t).as_deref())
    }

    pub(crate) fn substep_transverse_velocity_with(&self, s: &State, dt: f64, src: Option<&[[f64; 7]]>) -> Result<Vec2Field> {
        let h = self.mesh.h();
        let n = self.mesh.n_cells();
        let mu = self.params.mu;
        let t_new = s.t + dt;
        let mut out = s.w.clone();

        for (c, (w, b)) in s.w.components().into_iter().zip(s.b.components()).enumerate() {
            let explicit = |i: usize| -> f64 {
                let u = s.u[i];
                // one-sided closure at the walls pairs with the centered
                // interior stencil as a summation-by-parts operator
                let bx = if i == 0 {
                    (b[1] - b[0]) / h
                } else if i == n {
                    (b[n] - b[n - 1]) / h
                } else {
                    (b[i + 1] - b[i - 1]) / (2.0 * h)
                };
                let mut v = w[i] - dt * u * upwind1(w, i, u, h) + dt * bx / s.rho[i];
                if let Some(src) = src {
                    v += dt * src[i][Equation::W1 as usize + c];
                }
                v
            };

            let target: &mut ScalarField = if c == 0 { &mut out.c1 } else { &mut out.c2 };
            if mu == 0.0 {
                for i in 0..=n {
                    target[i] = explicit(i);
                }
                continue;
            }

            let g0 = self.bdry.minus(t_new)[c];
            let g1 = self.bdry.plus(t_new)[c];
            let m = n - 1;
            let mut lower = vec![0.0; m];
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for i in 1..n {
                let a = dt * mu / (s.rho[i] * h * h);
                let j = i - 1;
                lower[j] = -a;
                diag[j] = 1.0 + 2.0 * a;
                upper[j] = -a;
                rhs[j] = explicit(i);
                if i == 1 {
                    rhs[j] += a * g0;
                }
                if i == n - 1 {
                    rhs[j] += a * g1;
                }
            }
            let inner = tridiag::solve(&lower, &diag, &upper, &rhs)?;
            target[0] = g0;
            target[1..n].copy_from_slice(&inner);
            target[n] = g1;
        }
        Ok(out)
    }

    /// Transverse magnetic field: explicit upwind flux of `u b` and source
    /// `w_x`, implicit `nu b_xx`, `b = 0` at both walls.
    ///
    /// Expects `s.w` to be the transverse velocity already advanced this step.
    pub fn substep_magnetic(&self, s: &State, dt: f64) -> Result<Vec2Field> {
        self.substep_magnetic_with(s, dt, self.forcing_sample(s.t).as_deref())
    }

    pub(crate) fn substep_magnetic_with(&self, s: &State, dt: f64, src: Option<&[[f64; 7]]>) -> Result<Vec2Field> {
        let h = self.mesh.h();
        let n = self.mesh.n_cells();
        let a = dt * self.params.nu / (h * h);
        let mut out = Vec2Field::zeros(&self.mesh);
        for (c, (b, w)) in s.b.components().into_iter().zip(s.w.components()).enumerate() {
            let flux = upwind_face_flux(&s.u, b);
            let m = n - 1;
            let lower = vec![-a; m];
            let diag = vec![1.0 + 2.0 * a; m];
            let upper = vec![-a; m];
            let rhs: Vec<f64> = (1..n)
                .map(|i| {
                    let mut v = b[i] - dt / h * (flux[i] - flux[i - 1])
                        + dt * (w[i + 1] - w[i - 1]) / (2.0 * h);
                    if let Some(src) = src {
                        v += dt * src[i][Equation::B1 as usize + c];
                    }
                    v
                })
                .collect();
            let inner = tridiag::solve(&lower, &diag, &upper, &rhs)?;
            out.components_mut()[c][1..n].copy_from_slice(&inner);
        }
        Ok(out)
    }

    /// Temperature: explicit upwind transport, compression work and
    /// dissipation sources from the already-advanced `u`, `w`, `b`; then
    /// implicit conduction with lagged face conductivities refreshed
    /// `theta_picard_iters` times. Zero heat flux at both walls.
    pub fn substep_temperature(&self, s: &State, dt: f64) -> Result<ScalarField> {
        self.substep_temperature_with(s, dt, self.forcing_sample(s.t).as_deref())
    }

    pub(crate) fn substep_temperature_with(&self, s: &State, dt: f64, src: Option<&[[f64; 7]]>) -> Result<ScalarField> {
        let mesh = &self.mesh;
        let h = mesh.h();
        let n = mesh.n_cells();
        let p = &self.params;
        let ux = gradient(&s.u, h);
        let w1 = gradient(&s.w.c1, h);
        let w2 = gradient(&s.w.c2, h);
        let b1 = gradient(&s.b.c1, h);
        let b2 = gradient(&s.b.c2, h);

        let star: Vec<f64> = (0..=n)
            .map(|i| {
                let th = s.theta[i];
                let u = s.u[i];
                let dissipation = p.lambda * ux[i] * ux[i]
                    + p.mu * (w1[i] * w1[i] + w2[i] * w2[i])
                    + p.nu * (b1[i] * b1[i] + b2[i] * b2[i]);
                let mut v = th - dt * u * upwind1(&s.theta, i, u, h) - dt * p.gamma * th * ux[i]
                    + dt * dissipation / s.rho[i];
                if let Some(src) = src {
                    v += dt * src[i][Equation::Temperature as usize];
                }
                v
            })
            .collect();

        let mut iterate: Vec<f64> = s.theta.to_vec();
        for _ in 0..self.controls.theta_picard_iters.max(1) {
            // face conductivities at the arithmetic-mean face state
            // a nonpositive iterate is handed back as-is; the step driver
            // treats it as a positivity event and halves dt
            if iterate.iter().any(|v| !(*v > 0.0)) {
                break;
            }
            let kf = (0..n)
                .map(|f| {
                    let th = 0.5 * (iterate[f] + iterate[f + 1]);
                    let rho = 0.5 * (s.rho[f] + s.rho[f + 1]);
                    conductivity(&self.law, rho, th)
                })
                .collect::<Result<Vec<f64>>>()?;
            let mut lower = vec![0.0; n + 1];
            let mut diag = vec![0.0; n + 1];
            let mut upper = vec![0.0; n + 1];
            let mut rhs = vec![0.0; n + 1];
            for i in 0..=n {
                let mass = s.rho[i] * mesh.volume(i);
                let kl = if i > 0 { dt * kf[i - 1] / h } else { 0.0 };
                let kr = if i < n { dt * kf[i] / h } else { 0.0 };
                lower[i] = -kl;
                upper[i] = -kr;
                diag[i] = mass + kl + kr;
                rhs[i] = mass * star[i];
            }
            iterate = tridiag::solve(&lower, &diag, &upper, &rhs)?;
            if iterate.iter().any(|v| !v.is_finite()) {
                return Err(Error::solver(s.t, Some("theta"), "non-finite temperature in conduction sweep"));
            }
        }
        Ok(ScalarField::new(iterate))
    }
}
