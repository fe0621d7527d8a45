//! Named initial conditions. Every preset blends the transverse velocity
//! between the wall data at `t = 0`, so it is compatible with any
//! [`BoundaryData`] by construction.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::boundary::BoundaryData;
use crate::error::Error;
use crate::mesh::{Mesh, ScalarField, Vec2Field};
use crate::state::InitialData;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Uniform density and temperature, no motion, no field.
    Rest,
    /// Smooth nonuniform data in every field.
    SmoothShear,
    /// Quiescent gas with a Gaussian temperature bump.
    ThermalBump,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "rest" => Ok(Preset::Rest),
            "smooth-shear" => Ok(Preset::SmoothShear),
            "thermal-bump" => Ok(Preset::ThermalBump),
            other => Err(Error::Invalid(format!("unknown preset `{other}`"))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Rest => "rest",
            Preset::SmoothShear => "smooth-shear",
            Preset::ThermalBump => "thermal-bump",
        })
    }
}

/// `w-(0) + (w+(0) - w-(0)) (1 - cos(pi x)) / 2`, matching both walls.
fn wall_blend(mesh: &Mesh, bdry: &BoundaryData) -> Vec2Field {
    let a = bdry.minus(0.0);
    let b = bdry.plus(0.0);
    let s = |x: f64| 0.5 * (1.0 - (PI * x).cos());
    Vec2Field::new(
        mesh.sample(|x| a[0] + (b[0] - a[0]) * s(x)),
        mesh.sample(|x| a[1] + (b[1] - a[1]) * s(x)),
    )
}

impl Preset {
    pub fn build(self, mesh: &Mesh, bdry: &BoundaryData) -> InitialData {
        let blend = wall_blend(mesh, bdry);
        match self {
            Preset::Rest => InitialData {
                rho0: ScalarField::constant(mesh, 1.0),
                u0: ScalarField::zeros(mesh),
                w0: blend,
                b0: Vec2Field::zeros(mesh),
                theta0: ScalarField::constant(mesh, 1.0),
            },
            Preset::SmoothShear => {
                let mut w0 = blend;
                for (i, x) in mesh.nodes().into_iter().enumerate() {
                    w0.c2[i] += 0.5 * (PI * x).sin();
                }
                let mut u0 = mesh.sample(|x| 0.1 * (2.0 * PI * x).sin());
                let mut b0 = Vec2Field::new(
                    mesh.sample(|x| 0.2 * (PI * x).sin()),
                    mesh.sample(|x| 0.1 * (2.0 * PI * x).sin()),
                );
                // sin(k pi) is only ~1e-16 at x = 1; walls must be exactly zero
                let n = mesh.n_cells();
                u0[0] = 0.0;
                u0[n] = 0.0;
                b0.set(0, [0.0; 2]);
                b0.set(n, [0.0; 2]);
                InitialData {
                    rho0: mesh.sample(|x| 1.0 + 0.2 * (PI * x).cos()),
                    u0,
                    w0,
                    b0,
                    theta0: mesh.sample(|x| 1.0 + 0.1 * (2.0 * PI * x).cos()),
                }
            }
            Preset::ThermalBump => InitialData {
                rho0: ScalarField::constant(mesh, 1.0),
                u0: ScalarField::zeros(mesh),
                w0: blend,
                b0: Vec2Field::zeros(mesh),
                theta0: mesh.sample(|x| 1.0 + 0.5 * (-100.0 * (x - 0.5) * (x - 0.5)).exp()),
            },
        }
    }
}
