//! Mass is conserved to round-off; the energy balance closes at first
//! order, so the residual shrinks when the mesh (and with it the step) is
//! refined.

use planar_mhd::diagnostics::{total_energy, total_mass};
use planar_mhd::presets::Preset;
use planar_mhd::*;

fn main() -> Result<()> {
    let bdry = BoundaryData::constant([1.0, 0.0], [-1.0, 0.0]);
    let mut previous: Option<f64> = None;
    for n in [100, 200, 400, 800] {
        let mesh = Mesh::new(n)?;
        let controls = SolverControls {
            t_end: 1.0,
            snapshot_every: 1.0,
            ..SolverControls::default()
        };
        let solver = Solver::new(mesh, PhysParams::default().with_mu(1e-3), bdry.clone(), controls)?;
        let rec = solver.solve(Preset::SmoothShear.build(&mesh, &bdry))?;

        let m0 = total_mass(rec.initial(), &mesh);
        let drift = rec.diagnostics.iter().map(|d| ((d.mass - m0) / m0).abs()).fold(0.0, f64::max);
        let residual = (total_energy(rec.last(), &mesh) - total_energy(rec.initial(), &mesh) - rec.integrals.bflux).abs();
        let ratio = previous.map(|p| format!("{:.2}", p / residual)).unwrap_or_else(|| "-".into());
        println!("n = {n:4}  mass drift {drift:.2e}  energy residual {residual:.3e}  drop {ratio}");
        previous = Some(residual);
    }
    Ok(())
}
