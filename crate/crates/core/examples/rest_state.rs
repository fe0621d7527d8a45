//! The uniform quiescent state is an exact equilibrium of the scheme:
//! ten thousand steps later it has not moved.

use planar_mhd::presets::Preset;
use planar_mhd::*;

fn main() -> Result<()> {
    let mesh = Mesh::new(100)?;
    let bdry = BoundaryData::zero();
    let solver = Solver::new(mesh, PhysParams::default(), bdry.clone(), SolverControls::default())?;
    let start = make_state(&mesh, Preset::Rest.build(&mesh, &bdry), &bdry)?;

    let mut s = start.clone();
    let mut worst = 0.0f64;
    for k in 1..=10_000 {
        s = solver.step(&s)?.0;
        let mut shifted = s.clone();
        shifted.t = start.t;
        worst = worst.max(shifted.max_abs_diff(&start));
        if k % 2_500 == 0 {
            println!("step {k:>6}  t = {:8.3}  max deviation = {worst:.3e}", s.t);
        }
    }
    Ok(())
}
