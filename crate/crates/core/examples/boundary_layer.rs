//! Boundary layer of the transverse velocity. The limit run keeps its own
//! wall values, the viscous runs are pinned to the wall data, and the gap
//! lives in a layer whose width shrinks with mu.

use planar_mhd::diagnostics::interior_sup;
use planar_mhd::experiments::{bl_profile, SweepPlan};
use planar_mhd::presets::Preset;
use planar_mhd::*;

fn main() -> Result<()> {
    let mesh = Mesh::new(400)?;
    let bdry = BoundaryData::constant([1.0, 0.0], [-1.0, 0.0]);
    let controls = SolverControls {
        t_end: 0.5,
        snapshot_every: 0.05,
        ..SolverControls::default()
    };
    let plan = SweepPlan::new(
        vec![1e-2, 1e-3, 1e-4],
        mesh,
        PhysParams::default(),
        Preset::SmoothShear.build(&mesh, &bdry),
        bdry,
        controls,
    );
    let limit = plan.solve_limit()?;
    let wall = limit.last().w.at(0);
    println!("limit run w at x = 0, t = {}: ({:.4}, {:.4})", limit.last().t, wall[0], wall[1]);

    for &mu in &plan.mu_values {
        let rec = plan.solve_case(mu)?;
        let row = bl_profile(&rec, &limit, plan.thickness_exponent)?;
        println!(
            "mu {mu:.0e}: delta {:.4}  sup outside layer {:.3e}  sup everywhere {:.3}  wall mismatch {:.3}",
            row.delta, row.interior_sup, row.global_sup, row.mismatch
        );

        // the same gap at the final time, on a few fixed margins
        let last = rec.last();
        let mut gap = last.w.clone();
        for i in 0..mesh.n_nodes() {
            let (a, b) = (last.w.at(i), limit.last().w.at(i));
            gap.set(i, [a[0] - b[0], a[1] - b[1]]);
        }
        let margins: Vec<String> = [0.0, 0.01, 0.05, 0.2]
            .iter()
            .map(|&d| Ok(format!("{d}: {:.3e}", interior_sup(&gap, &mesh, d)?)))
            .collect::<Result<_>>()?;
        println!("    final-time sup beyond margin  {}", margins.join("  "));
    }
    Ok(())
}
