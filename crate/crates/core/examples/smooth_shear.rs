//! One viscous run between counter-moving walls, printing the monitors
//! that a long run is usually judged by.

use planar_mhd::diagnostics::{total_energy, total_mass};
use planar_mhd::presets::Preset;
use planar_mhd::*;

fn main() -> Result<()> {
    let mesh = Mesh::new(200)?;
    let bdry = BoundaryData::constant([1.0, 0.0], [-1.0, 0.0]);
    let params = PhysParams::default().with_mu(1e-3);
    let controls = SolverControls {
        t_end: 1.0,
        snapshot_every: 0.25,
        ..SolverControls::default()
    };
    let solver = Solver::new(mesh, params, bdry.clone(), controls)?;
    let record = solver.solve(Preset::SmoothShear.build(&mesh, &bdry))?;

    println!("{:>6} {:>14} {:>14} {:>10} {:>10}", "t", "mass", "energy", "min rho", "min theta");
    for s in &record.snapshots {
        println!(
            "{:6.2} {:14.10} {:14.10} {:10.5} {:10.5}",
            s.t,
            total_mass(s, &mesh),
            total_energy(s, &mesh),
            s.rho.min(),
            s.theta.min()
        );
    }
    let i = &record.integrals;
    println!("steps: {}, halvings: {}", record.step_count(), record.total_halvings());
    println!("entropy produced: {:.6}", i.entropy_production);
    println!("work done by the walls: {:.6}", i.bflux);
    Ok(())
}
