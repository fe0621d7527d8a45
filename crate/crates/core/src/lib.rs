//! A one-dimensional laboratory for the planar magnetohydrodynamics system
//! with temperature-dependent heat conductivity.
//!
//! The crate integrates the five-field system (density, longitudinal
//! velocity, transverse velocity, transverse magnetic field, temperature)
//! on `[0, 1]` for any shear viscosity `mu >= 0`, and provides the tooling
//! needed to study the vanishing shear viscosity limit numerically:
//!
//! * [`solver`]: operator-split semi-implicit time stepping, including the
//!   `mu = 0` limit system where the transverse velocity carries no
//!   boundary condition.
//! * [`diagnostics`]: mass, total energy, entropy production, weighted
//!   gradient norms and difference-norm accumulators.
//! * [`experiments`]: viscosity sweeps with log-log rate fits, boundary
//!   layer profiling and manufactured-solution order verification.
//! * [`config`] and [`cli`]: the flat `key = value` run configuration and
//!   the `pmhd` subcommands.

pub mod boundary;
pub mod cli;
pub mod config;
pub mod constitutive;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod mesh;
pub mod params;
pub mod presets;
pub mod solver;
pub mod state;

pub use boundary::{BoundaryData, Signal};
pub use constitutive::ConductivityLaw;
pub use error::{Error, Result};
pub use mesh::{Mesh, ScalarField, Vec2Field};
pub use params::PhysParams;
pub use solver::{RunRecord, Solver, SolverControls, StepDiagnostics};
pub use state::{make_state, validate_state, weight_omega, InitialData, State, Violation};
