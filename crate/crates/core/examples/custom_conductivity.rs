//! Heat conduction with a user-supplied conductivity. The law must stay
//! above the power-law floor kappa1 * theta^q; dipping below it stops the
//! run with a solver error instead of silently integrating a different
//! model.

use planar_mhd::presets::Preset;
use planar_mhd::*;

fn run(law: ConductivityLaw) -> Result<RunRecord> {
    let mesh = Mesh::new(100)?;
    let bdry = BoundaryData::zero();
    let controls = SolverControls {
        t_end: 0.2,
        snapshot_every: 0.1,
        ..SolverControls::default()
    };
    Solver::new(mesh, PhysParams::default(), bdry.clone(), controls)?
        .with_law(law)
        .solve(Preset::ThermalBump.build(&mesh, &bdry))
}

fn main() -> Result<()> {
    for (name, law) in [
        ("power law", ConductivityLaw::power_law(1.0, 2.0)),
        ("density enhanced", ConductivityLaw::custom(1.0, 2.0, |rho, theta| (1.0 + rho) * theta * theta)),
        ("too weak", ConductivityLaw::custom(1.0, 2.0, |_, theta| 0.5 * theta * theta)),
    ] {
        match run(law) {
            Ok(rec) => println!("{name:>16}: max theta {:.5} at t = {}", rec.last().theta.max(), rec.last().t),
            Err(e) => println!("{name:>16}: {e}"),
        }
    }
    Ok(())
}
