//! Write a run to disk, reload a middle snapshot, and continue. Snapshot
//! times sit on a global grid, so the continuation reproduces the original
//! run bit for bit.

use planar_mhd::io::{read_record, read_snapshot, write_record};
use planar_mhd::presets::Preset;
use planar_mhd::*;

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("pmhd-restart-example");
    let mesh = Mesh::new(120)?;
    let bdry = BoundaryData::constant([0.5, 0.5], [0.0, -0.5]);
    let controls = SolverControls {
        t_end: 0.4,
        snapshot_every: 0.1,
        ..SolverControls::default()
    };
    let solver = Solver::new(mesh, PhysParams::default(), bdry.clone(), controls)?;
    let full = solver.solve(Preset::SmoothShear.build(&mesh, &bdry))?;
    let files = write_record(&dir, &full)?;
    println!("wrote {} files to {}", files.len(), dir.display());

    let (_, mid) = read_snapshot(&dir.join("snapshot_00002.csv"))?;
    println!("restarting at t = {}", mid.t);
    let rest = solver.solve_from(mid)?;
    println!("final states identical: {}", rest.last() == full.last());

    let reread = read_record(&dir)?;
    println!("reloaded record: mu = {}, {} snapshots", reread.mu, reread.snapshots.len());
    Ok(())
}
