//! Vanishing-viscosity study: solve the mu = 0 run and a ladder of viscous
//! runs from the same data, then fit log E against log mu.

use planar_mhd::experiments::{default_mu_values, run_sweep, SweepPlan};
use planar_mhd::presets::Preset;
use planar_mhd::*;

fn main() -> Result<()> {
    let mesh = Mesh::new(400)?;
    let bdry = BoundaryData::constant([1.0, 0.0], [-1.0, 0.0]);
    let controls = SolverControls {
        t_end: 0.5,
        snapshot_every: 0.01,
        ..SolverControls::default()
    };
    let plan = SweepPlan::new(
        default_mu_values(),
        mesh,
        PhysParams::default(),
        Preset::SmoothShear.build(&mesh, &bdry),
        bdry,
        controls,
    );
    let out = run_sweep(&plan)?;

    println!("{:>12} {:>12}   per field (rho u w b theta)", "mu", "E");
    for row in &out.rate.rows {
        let fields: Vec<String> = row.e_fields.iter().map(|e| format!("{e:.2e}")).collect();
        println!("{:12.3e} {:12.4e}   {}", row.mu, row.e, fields.join(" "));
    }
    match &out.rate.fit {
        Some(fit) => println!("E ~ mu^{:.3}  (residual {:.3}, slope ok: {})", fit.slope, fit.residual, out.rate.slope_ok()),
        None => println!("no fit: {}", out.rate.notice.as_deref().unwrap_or("?")),
    }
    Ok(())
}
