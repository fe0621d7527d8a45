//! Uniform node grid on `[0, 1]` and the nodal field containers.

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

/// Uniform node grid on the unit interval with nodes `x_i = i * h`.
///
/// Every field lives on the `n_cells + 1` nodes. The two wall nodes own
/// half-width control volumes, so trapezoid quadrature and the
/// conservative updates in the solver share the same weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    n_cells: usize,
    h: f64,
}

impl Mesh {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::Invalid(format!(
                "mesh needs at least 2 cells, got {n_cells}"
            )));
        }
        Ok(Self {
            n_cells,
            h: 1.0 / n_cells as f64,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Position of node `i`. The last node is pinned to exactly 1.
    pub fn x(&self, i: usize) -> f64 {
        if i == self.n_cells {
            1.0
        } else {
            i as f64 * self.h
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_nodes()).map(|i| self.x(i)).collect()
    }

    /// Control-volume width of node `i` (trapezoid weight).
    pub fn volume(&self, i: usize) -> f64 {
        if i == 0 || i == self.n_cells {
            0.5 * self.h
        } else {
            self.h
        }
    }

    /// Trapezoid quadrature of nodal values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_nodes());
        let n = self.n_cells;
        let interior: f64 = values[1..n].iter().sum();
        self.h * (interior + 0.5 * (values[0] + values[n]))
    }

    /// Sample a function of position at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField::new(self.nodes().into_iter().map(f).collect())
    }
}

/// One real value per mesh node.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalarField(Vec<f64>);

impl ScalarField {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn constant(mesh: &Mesh, value: f64) -> Self {
        Self(vec![value; mesh.n_nodes()])
    }

    pub fn zeros(mesh: &Mesh) -> Self {
        Self::constant(mesh, 0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn is_on(&self, mesh: &Mesh) -> bool {
        self.0.len() == mesh.n_nodes()
    }
}

impl Deref for ScalarField {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for ScalarField {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for ScalarField {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Two-component transverse field, e.g. `w = (w1, w2)` or `b = (b1, b2)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vec2Field {
    pub c1: ScalarField,
    pub c2: ScalarField,
}

impl Vec2Field {
    pub fn new(c1: ScalarField, c2: ScalarField) -> Self {
        Self { c1, c2 }
    }

    pub fn zeros(mesh: &Mesh) -> Self {
        Self::new(ScalarField::zeros(mesh), ScalarField::zeros(mesh))
    }

    pub fn constant(mesh: &Mesh, value: [f64; 2]) -> Self {
        Self::new(
            ScalarField::constant(mesh, value[0]),
            ScalarField::constant(mesh, value[1]),
        )
    }

    pub fn len(&self) -> usize {
        self.c1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c1.is_empty()
    }

    pub fn at(&self, i: usize) -> [f64; 2] {
        [self.c1[i], self.c2[i]]
    }

    pub fn set(&mut self, i: usize, v: [f64; 2]) {
        self.c1[i] = v[0];
        self.c2[i] = v[1];
    }

    /// Nodal Euclidean magnitude.
    pub fn magnitude(&self) -> ScalarField {
        self.c1
            .iter()
            .zip(self.c2.iter())
            .map(|(a, b)| a.hypot(*b))
            .collect::<Vec<_>>()
            .into()
    }

    pub fn components(&self) -> [&ScalarField; 2] {
        [&self.c1, &self.c2]
    }

    pub fn components_mut(&mut self) -> [&mut ScalarField; 2] {
        [&mut self.c1, &mut self.c2]
    }

    pub fn all_finite(&self) -> bool {
        self.c1.all_finite() && self.c2.all_finite()
    }

    pub fn is_on(&self, mesh: &Mesh) -> bool {
        self.c1.is_on(mesh) && self.c2.is_on(mesh)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_nodes_span_unit_interval() {
        let m = Mesh::new(7).unwrap();
        let x = m.nodes();
        assert_eq!(x.len(), 8);
        assert_eq!(x[0], 0.0);
        assert_eq!(x[7], 1.0);
        assert!(x.windows(2).all(|p| p[1] > p[0]));
        assert!(m.h() > 0.0);
    }

    #[test]
    fn rejects_degenerate_mesh() {
        assert!(Mesh::new(0).is_err());
        assert!(Mesh::new(1).is_err());
    }

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let m = Mesh::new(10).unwrap();
        let f = m.sample(|x| 1.0 + x);
        assert!((m.integrate(&f) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn volumes_sum_to_one() {
        let m = Mesh::new(13).unwrap();
        let total: f64 = (0..m.n_nodes()).map(|i| m.volume(i)).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }
}
