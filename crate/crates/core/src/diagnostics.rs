//! Discrete functionals of a state: conserved quantities, entropy
//! production, weighted gradient norms, and the difference-norm
//! accumulator used by the viscosity sweeps.
//!
//! All spatial integrals use trapezoid quadrature on the mesh nodes.
//! Gradients are centered in the interior and second-order one-sided at the
//! walls, the same stencil the solver uses for its dissipation sources.

use crate::constitutive::{conductivity, total_energy_density, ConductivityLaw};
use crate::error::{Error, Result};
use crate::mesh::{Mesh, ScalarField, Vec2Field};
use crate::params::PhysParams;
use crate::state::{weight_omega, State};

/// Nodal first derivative: centered inside, one-sided second order at walls.
pub fn gradient(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 3, "gradient needs at least three nodes");
    let mut g = vec![0.0; n];
    g[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    for i in 1..n - 1 {
        g[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    g[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    g
}

/// Borrowed scalar or two-component field.
#[derive(Debug, Clone, Copy)]
pub enum FieldView<'a> {
    Scalar(&'a [f64]),
    Vector(&'a Vec2Field),
}

impl<'a> FieldView<'a> {
    fn components(&self) -> Vec<&'a [f64]> {
        match *self {
            FieldView::Scalar(v) => vec![v],
            FieldView::Vector(v) => vec![&v.c1[..], &v.c2[..]],
        }
    }

    fn len(&self) -> usize {
        self.components()[0].len()
    }

    /// Pointwise magnitude at node `i`.
    fn magnitude(&self, i: usize) -> f64 {
        match *self {
            FieldView::Scalar(v) => v[i].abs(),
            FieldView::Vector(v) => v.c1[i].hypot(v.c2[i]),
        }
    }
}

impl<'a> From<&'a ScalarField> for FieldView<'a> {
    fn from(f: &'a ScalarField) -> Self {
        FieldView::Scalar(f)
    }
}

impl<'a> From<&'a [f64]> for FieldView<'a> {
    fn from(f: &'a [f64]) -> Self {
        FieldView::Scalar(f)
    }
}

impl<'a> From<&'a Vec2Field> for FieldView<'a> {
    fn from(f: &'a Vec2Field) -> Self {
        FieldView::Vector(f)
    }
}

pub fn total_mass(state: &State, mesh: &Mesh) -> f64 {
    mesh.integrate(&state.rho)
}

pub fn total_energy(state: &State, mesh: &Mesh) -> f64 {
    let density: Vec<f64> = (0..state.n_nodes())
        .map(|i| {
            total_energy_density(
                state.rho[i],
                state.u[i],
                state.w.at(i),
                state.b.at(i),
                state.theta[i],
            )
        })
        .collect();
    mesh.integrate(&density)
}

/// Nodal entropy-production integrand
/// `(lambda u_x^2 + mu |w_x|^2 + nu |b_x|^2) / theta + kappa theta_x^2 / theta^2`.
pub fn entropy_production_density(
    state: &State,
    mesh: &Mesh,
    params: &PhysParams,
    law: &ConductivityLaw,
) -> Result<Vec<f64>> {
    let h = mesh.h();
    let ux = gradient(&state.u, h);
    let w1 = gradient(&state.w.c1, h);
    let w2 = gradient(&state.w.c2, h);
    let b1 = gradient(&state.b.c1, h);
    let b2 = gradient(&state.b.c2, h);
    let tx = gradient(&state.theta, h);
    (0..state.n_nodes())
        .map(|i| {
            let th = state.theta[i];
            let kappa = conductivity(law, state.rho[i], th)?;
            let viscous = params.lambda * ux[i] * ux[i]
                + params.mu * (w1[i] * w1[i] + w2[i] * w2[i])
                + params.nu * (b1[i] * b1[i] + b2[i] * b2[i]);
            Ok(viscous / th + kappa * tx[i] * tx[i] / (th * th))
        })
        .collect()
}

pub fn entropy_production(
    state: &State,
    mesh: &Mesh,
    params: &PhysParams,
    law: &ConductivityLaw,
) -> Result<f64> {
    Ok(mesh.integrate(&entropy_production_density(state, mesh, params, law)?))
}

/// Wall flux `mu * (w . w_x)` evaluated at `x = 1` minus `x = 0`.
pub fn boundary_flux(state: &State, mesh: &Mesh, mu: f64) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    let h = mesh.h();
    let n = state.n_nodes() - 1;
    let mut left = 0.0;
    let mut right = 0.0;
    for c in state.w.components() {
        let d0 = (-3.0 * c[0] + 4.0 * c[1] - c[2]) / (2.0 * h);
        let dn = (3.0 * c[n] - 4.0 * c[n - 1] + c[n - 2]) / (2.0 * h);
        left += c[0] * d0;
        right += c[n] * dn;
    }
    mu * (right - left)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightPower {
    /// `sqrt(omega)`
    Half,
    /// `omega`
    One,
}

/// `|| omega^p d/dx field ||_{L2}` with `p` one half or one.
pub fn weighted_grad_norm<'a>(field: impl Into<FieldView<'a>>, mesh: &Mesh, p: WeightPower) -> f64 {
    let field = field.into();
    let h = mesh.h();
    let mut integrand = vec![0.0; mesh.n_nodes()];
    for comp in field.components() {
        for (acc, g) in integrand.iter_mut().zip(gradient(comp, h)) {
            *acc += g * g;
        }
    }
    for (i, v) in integrand.iter_mut().enumerate() {
        let omega = weight_omega(mesh.x(i)).expect("mesh nodes lie in [0, 1]");
        *v *= match p {
            WeightPower::Half => omega,
            WeightPower::One => omega * omega,
        };
    }
    mesh.integrate(&integrand).sqrt()
}

/// Sup of the nodal magnitude over nodes with `delta <= x <= 1 - delta`.
pub fn interior_sup<'a>(diff: impl Into<FieldView<'a>>, mesh: &Mesh, delta: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::domain("interior margin must lie in [0, 1/2)", delta));
    }
    let diff = diff.into();
    debug_assert_eq!(diff.len(), mesh.n_nodes());
    Ok((0..mesh.n_nodes())
        .filter(|&i| {
            let x = mesh.x(i);
            x >= delta && x <= 1.0 - delta
        })
        .map(|i| diff.magnitude(i))
        .fold(0.0, f64::max))
}

/// Field order used in per-field breakdowns.
pub const FIELD_NAMES: [&str; 5] = ["rho", "u", "w", "b", "theta"];

/// Running difference norms between a viscous run and the limit run.
///
/// `linf_l2` is the running maximum over sampled times of the composite
/// `L2(0,1)` norm of the five differences; `l2qt_grads` accumulates the
/// squared space-time `L2` norm of the gradient differences of `u`, `b`,
/// `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiffNorms {
    pub linf_l2: f64,
    pub l2qt_grads: f64,
    /// Per-field running max of the `L2(0,1)` difference, in [`FIELD_NAMES`] order.
    pub field_linf_l2: [f64; 5],
    /// Per-field accumulated squared gradient differences (zero for rho and w).
    pub field_l2qt_grads: [f64; 5],
    pub samples: usize,
}

impl DiffNorms {
    /// Composite rate norm `linf_l2 + sqrt(l2qt_grads)`.
    pub fn composite(&self) -> f64 {
        self.linf_l2 + self.l2qt_grads.sqrt()
    }

    pub fn field_composite(&self, k: usize) -> f64 {
        self.field_linf_l2[k] + self.field_l2qt_grads[k].sqrt()
    }
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Fold one aligned pair of states into the accumulator; `dt` is the time
/// weight of this sample (rectangle rule).
pub fn diff_norms_update(acc: DiffNorms, s: &State, s_bar: &State, mesh: &Mesh, dt: f64) -> Result<DiffNorms> {
    if !s.is_on(mesh) || !s_bar.is_on(mesh) {
        return Err(Error::Alignment("states are not on the given mesh".into()));
    }
    let scale = s.t.abs().max(1.0);
    if (s.t - s_bar.t).abs() > 1e-12 * scale {
        return Err(Error::Alignment(format!(
            "state times differ: {} vs {}",
            s.t, s_bar.t
        )));
    }
    if !(dt >= 0.0) {
        return Err(Error::Alignment(format!("negative time weight {dt}")));
    }
    let h = mesh.h();
    let l2sq = |d: Vec<f64>| mesh.integrate(&d.iter().map(|v| v * v).collect::<Vec<_>>());
    let grad_l2sq = |a: &[f64], b: &[f64]| l2sq(sub(&gradient(a, h), &gradient(b, h)));

    let l2 = [
        l2sq(sub(&s.rho, &s_bar.rho)),
        l2sq(sub(&s.u, &s_bar.u)),
        l2sq(sub(&s.w.c1, &s_bar.w.c1)) + l2sq(sub(&s.w.c2, &s_bar.w.c2)),
        l2sq(sub(&s.b.c1, &s_bar.b.c1)) + l2sq(sub(&s.b.c2, &s_bar.b.c2)),
        l2sq(sub(&s.theta, &s_bar.theta)),
    ];
    let grads = [
        0.0,
        grad_l2sq(&s.u, &s_bar.u),
        0.0,
        grad_l2sq(&s.b.c1, &s_bar.b.c1) + grad_l2sq(&s.b.c2, &s_bar.b.c2),
        grad_l2sq(&s.theta, &s_bar.theta),
    ];

    let mut out = acc;
    out.linf_l2 = out.linf_l2.max(l2.iter().sum::<f64>().sqrt());
    out.l2qt_grads += dt * grads.iter().sum::<f64>();
    for k in 0..5 {
        out.field_linf_l2[k] = out.field_linf_l2[k].max(l2[k].sqrt());
        out.field_l2qt_grads[k] += dt * grads[k];
    }
    out.samples += 1;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryData;
    use crate::state::{make_state, InitialData};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn rest(mesh: &Mesh) -> State {
        make_state(
            mesh,
            InitialData {
                rho0: ScalarField::constant(mesh, 1.0),
                u0: ScalarField::zeros(mesh),
                w0: Vec2Field::zeros(mesh),
                b0: Vec2Field::zeros(mesh),
                theta0: ScalarField::constant(mesh, 1.0),
            },
            &BoundaryData::zero(),
        )
        .unwrap()
    }

    #[test]
    fn mass_examples() {
        let m = Mesh::new(20).unwrap();
        let mut s = rest(&m);
        assert!((total_mass(&s, &m) - 1.0).abs() < 1e-15);
        s.rho = m.sample(|x| 1.0 + x);
        assert!((total_mass(&s, &m) - 1.5).abs() < 1e-15);

        for n in [10, 20] {
            let m = Mesh::new(n).unwrap();
            let mut s = rest(&m);
            s.rho = ScalarField::constant(&m, 2.0);
            assert_eq!(total_mass(&s, &m), 2.0);
        }
    }

    #[test]
    fn energy_examples() {
        let m = Mesh::new(10).unwrap();
        let mut s = rest(&m);
        assert!((total_energy(&s, &m) - 1.0).abs() < 1e-15);
        // u = 1 on interior nodes only: 1 + (1/2) * (1 - h)
        s.u = m.sample(|_| 1.0);
        s.u[0] = 0.0;
        s.u[10] = 0.0;
        assert!((total_energy(&s, &m) - (1.5 - 0.5 * m.h())).abs() < 1e-14);
    }

    #[test]
    fn entropy_production_rest_is_zero() {
        let m = Mesh::new(16).unwrap();
        let p = PhysParams::default();
        let v = entropy_production(&rest(&m), &m, &p, &p.conductivity_law()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn entropy_production_converges_to_exact_integral() {
        // u = sin(pi x), theta = 1, lambda = 1: integral of pi^2 cos^2(pi x) = pi^2 / 2
        let p = PhysParams { lambda: 1.0, mu: 0.0, nu: 1.0, ..PhysParams::default() };
        let law = p.conductivity_law();
        let exact = PI * PI / 2.0;
        let mut prev = f64::INFINITY;
        for n in [20, 40, 80, 160] {
            let m = Mesh::new(n).unwrap();
            let mut s = rest(&m);
            s.u = m.sample(|x| (PI * x).sin());
            let err = (entropy_production(&s, &m, &p, &law).unwrap() - exact).abs();
            assert!(err < prev / 3.0, "n={n}: {err} vs {prev}");
            prev = err;
        }
        assert!(prev < 2e-3);
    }

    #[test]
    fn weighted_norm_examples() {
        let m = Mesh::new(64).unwrap();
        let c = ScalarField::constant(&m, 3.0);
        assert_eq!(weighted_grad_norm(&c, &m, WeightPower::Half), 0.0);

        // d/dx x = 1: sqrt(int omega) = 1/2 and sqrt(int omega^2) = sqrt(1/12)
        let mut e_half = Vec::new();
        let mut e_one = Vec::new();
        for n in [16, 32, 64, 128] {
            let m = Mesh::new(n).unwrap();
            let f = m.sample(|x| x);
            e_half.push((weighted_grad_norm(&f, &m, WeightPower::Half) - 0.5).abs());
            e_one.push((weighted_grad_norm(&f, &m, WeightPower::One) - (1.0f64 / 12.0).sqrt()).abs());
        }
        assert!(e_half.iter().all(|e| *e < 1e-12));
        assert!(e_one.windows(2).all(|p| p[1] < p[0] / 3.0), "{e_one:?}");
        assert!(e_one[3] < 1e-4);
    }

    #[test]
    fn interior_sup_examples() {
        let m = Mesh::new(20).unwrap();
        assert_eq!(interior_sup(&ScalarField::zeros(&m), &m, 0.1).unwrap(), 0.0);
        let mut spike = ScalarField::zeros(&m);
        spike[0] = 1.0;
        assert_eq!(interior_sup(&spike, &m, 0.1).unwrap(), 0.0);
        assert_eq!(interior_sup(&spike, &m, 0.0).unwrap(), 1.0);
        let omega = m.sample(|x| weight_omega(x).unwrap());
        assert_eq!(interior_sup(&omega, &m, 0.25).unwrap(), 0.5);
        assert!(interior_sup(&omega, &m, 0.5).is_err());
    }

    #[test]
    fn diff_norms_examples() {
        let m = Mesh::new(200).unwrap();
        let s = rest(&m);
        let acc = diff_norms_update(DiffNorms::default(), &s, &s, &m, 0.1).unwrap();
        assert_eq!(acc.linf_l2, 0.0);
        assert_eq!(acc.l2qt_grads, 0.0);

        let mut s1 = s.clone();
        s1.u = m.sample(|x| (PI * x).sin());
        let acc1 = diff_norms_update(DiffNorms::default(), &s1, &s, &m, 0.0).unwrap();
        assert!((acc1.linf_l2 - 0.5f64.sqrt()).abs() < 1e-12);

        // second sample with half the amplitude: max stays, gradient terms add
        let mut s2 = s.clone();
        s2.u = m.sample(|x| 0.5 * (PI * x).sin());
        let g1 = diff_norms_update(DiffNorms::default(), &s1, &s, &m, 0.2).unwrap().l2qt_grads;
        let g2 = diff_norms_update(DiffNorms::default(), &s2, &s, &m, 0.3).unwrap().l2qt_grads;
        let acc2 = diff_norms_update(acc1, &s2, &s, &m, 0.3).unwrap();
        assert_eq!(acc2.linf_l2, acc1.linf_l2);
        assert!((acc2.l2qt_grads - g2).abs() < 1e-15);
        let acc3 = diff_norms_update(
            diff_norms_update(DiffNorms::default(), &s1, &s, &m, 0.2).unwrap(),
            &s2,
            &s,
            &m,
            0.3,
        )
        .unwrap();
        assert!((acc3.l2qt_grads - (g1 + g2)).abs() < 1e-12);
    }

    #[test]
    fn diff_norms_rejects_misaligned_states() {
        let m = Mesh::new(10).unwrap();
        let s = rest(&m);
        let mut later = s.clone();
        later.t = 0.5;
        assert!(matches!(
            diff_norms_update(DiffNorms::default(), &s, &later, &m, 0.1),
            Err(Error::Alignment(_))
        ));
        let other = rest(&Mesh::new(12).unwrap());
        assert!(diff_norms_update(DiffNorms::default(), &s, &other, &m, 0.1).is_err());
    }

    proptest! {
        #[test]
        fn interior_sup_monotone_in_delta(vals in proptest::collection::vec(-5.0f64..5.0, 21), d1 in 0.0f64..0.49, d2 in 0.0f64..0.49) {
            let m = Mesh::new(20).unwrap();
            let f = ScalarField::new(vals);
            let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            prop_assert!(interior_sup(&f, &m, hi).unwrap() <= interior_sup(&f, &m, lo).unwrap());
        }

        #[test]
        fn half_weight_dominates_full_weight(vals in proptest::collection::vec(-5.0f64..5.0, 17)) {
            let m = Mesh::new(16).unwrap();
            let f = ScalarField::new(vals);
            prop_assert!(weighted_grad_norm(&f, &m, WeightPower::Half) >= weighted_grad_norm(&f, &m, WeightPower::One));
        }

        #[test]
        fn entropy_production_nonnegative(
            u in proptest::collection::vec(-2.0f64..2.0, 9),
            th in proptest::collection::vec(0.1f64..3.0, 11),
            w in proptest::collection::vec(-2.0f64..2.0, 11),
        ) {
            let m = Mesh::new(10).unwrap();
            let mut s = rest(&m);
            s.u[1..10].copy_from_slice(&u);
            s.theta = ScalarField::new(th);
            s.w.c1 = ScalarField::new(w);
            let p = PhysParams::default();
            let dens = entropy_production_density(&s, &m, &p, &p.conductivity_law()).unwrap();
            prop_assert!(dens.iter().all(|v| *v >= 0.0));
        }

        #[test]
        fn diff_norms_identity_on_equal_states(theta in proptest::collection::vec(0.1f64..3.0, 11), dt in 0.0f64..1.0) {
            let m = Mesh::new(10).unwrap();
            let mut s = rest(&m);
            s.theta = ScalarField::new(theta);
            let acc = DiffNorms { linf_l2: 0.3, l2qt_grads: 0.7, ..DiffNorms::default() };
            let out = diff_norms_update(acc, &s, &s, &m, dt).unwrap();
            prop_assert_eq!(out.linf_l2, acc.linf_l2);
            prop_assert_eq!(out.l2qt_grads, acc.l2qt_grads);
        }
    }
}
