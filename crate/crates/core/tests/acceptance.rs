//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use planar_mhd::diagnostics::{total_energy, total_mass};
use planar_mhd::experiments::sweep::{BL_DECREASE_FACTOR, GLOBAL_FRACTION, MAX_RESIDUAL, SLOPE_RANGE};
use planar_mhd::experiments::*;
use planar_mhd::presets::Preset;
use planar_mhd::*;

struct Verdict {
    failures: usize,
}

impl Verdict {
    fn report(&mut self, id: usize, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("criterion {id} {}: {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

/// Every diagnosed step of every run seen so far.
#[derive(Default)]
struct EntropyLedger {
    steps: usize,
    negative: usize,
    min: f64,
}

impl EntropyLedger {
    fn absorb(&mut self, rec: &RunRecord) {
        for d in &rec.diagnostics {
            if self.steps == 0 || d.entropy_prod < self.min {
                self.min = d.entropy_prod;
            }
            self.steps += 1;
            if !(d.entropy_prod >= 0.0) {
                self.negative += 1;
            }
        }
    }
}

fn shear_walls() -> BoundaryData {
    BoundaryData::constant([1.0, 0.0], [-1.0, 0.0])
}

fn shear_run(n: usize, t_end: f64, mu: f64) -> Result<RunRecord> {
    let mesh = Mesh::new(n)?;
    let bdry = shear_walls();
    let controls = SolverControls {
        t_end,
        snapshot_every: t_end,
        ..SolverControls::default()
    };
    let sv = Solver::new(mesh, PhysParams::default().with_mu(mu), bdry.clone(), controls)?;
    sv.solve(Preset::SmoothShear.build(&mesh, &bdry))
}

fn energy_residual(rec: &RunRecord) -> f64 {
    let e0 = total_energy(rec.initial(), &rec.mesh);
    let e1 = total_energy(rec.last(), &rec.mesh);
    (e1 - e0 - rec.integrals.bflux).abs()
}

fn conservation(v: &mut Verdict, ledger: &mut EntropyLedger) {
    let t0 = Instant::now();
    let coarse = shear_run(400, 1.0, 1e-3);
    let secs = t0.elapsed().as_secs_f64();
    let coarse = match coarse {
        Ok(r) => r,
        Err(e) => {
            v.report(1, "mass conservation", false, format!("run failed: {e}"));
            v.report(2, "energy balance", false, "base run failed".into());
            return;
        }
    };
    ledger.absorb(&coarse);
    let m0 = total_mass(coarse.initial(), &coarse.mesh);
    let drift = coarse
        .diagnostics
        .iter()
        .map(|d| ((d.mass - m0) / m0).abs())
        .fold(0.0, f64::max);
    v.report(
        1,
        "mass conservation",
        drift <= 1e-10 && secs <= 60.0,
        format!("max relative drift {drift:.3e} (<= 1e-10), {} steps in {secs:.1} s (<= 60 s)", coarse.step_count()),
    );

    let r400 = energy_residual(&coarse);
    match shear_run(800, 1.0, 1e-3) {
        Ok(fine) => {
            ledger.absorb(&fine);
            let r800 = energy_residual(&fine);
            let ratio = r400 / r800;
            v.report(
                2,
                "energy balance",
                ratio >= 1.8,
                format!("residual {r400:.3e} at n=400, {r800:.3e} at n=800, drop {ratio:.2}x (>= 1.8)"),
            );
        }
        Err(e) => v.report(2, "energy balance", false, format!("refined run failed: {e}")),
    }
}

fn mms(v: &mut Verdict) {
    let t0 = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (case, floor) in [
        (MmsCase::Temperature, 1.9),
        (MmsCase::Magnetic, 1.9),
        (MmsCase::Momentum, 1.9),
        (MmsCase::Coupled, 0.9),
    ] {
        match mms_verify(case, &[100, 200, 400]) {
            Ok(rep) => {
                let order = rep.order().unwrap_or(f64::NAN);
                ok &= order >= floor;
                parts.push(format!("{case} {order:.3} (>= {floor})"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{case} failed: {e}"));
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    ok &= secs <= 300.0;
    v.report(4, "manufactured solution orders", ok, format!("{}; {secs:.1} s (<= 300 s)", parts.join(", ")));
}

fn sweep(v: &mut Verdict, ledger: &mut EntropyLedger) {
    let mesh = Mesh::new(800).unwrap();
    let bdry = shear_walls();
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
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let t0 = Instant::now();
    let outcome = pool.install(|| run_sweep(&plan));
    let secs = t0.elapsed().as_secs_f64();
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            v.report(5, "vanishing-viscosity rate", false, format!("sweep failed: {e}"));
            v.report(6, "boundary layer", false, "sweep failed".into());
            return;
        }
    };
    ledger.absorb(&outcome.limit);
    for (_, rec) in &outcome.cases {
        if let Ok(rec) = rec {
            ledger.absorb(rec);
        }
    }

    let rate = &outcome.rate;
    match &rate.fit {
        Some(fit) => v.report(
            5,
            "vanishing-viscosity rate",
            rate.slope_ok() && rate.failed.is_empty() && secs <= 900.0,
            format!(
                "slope {:.4} in [{}, {}], residual {:.4} (<= {MAX_RESIDUAL}), {} failed cases, {secs:.1} s with 4 jobs (<= 900 s)",
                fit.slope,
                SLOPE_RANGE.0,
                SLOPE_RANGE.1,
                fit.residual,
                rate.failed.len()
            ),
        ),
        None => v.report(
            5,
            "vanishing-viscosity rate",
            false,
            rate.notice.clone().unwrap_or_else(|| "no fit".into()),
        ),
    }

    baseline_refinement(&plan, &outcome);

    let bl = &outcome.bl;
    let interior: Vec<String> = bl.rows.iter().map(|r| format!("{:.3e}", r.interior_sup)).collect();
    let global: Vec<String> = bl
        .rows
        .iter()
        .map(|r| format!("{:.3}/{:.3}", r.global_sup, r.mismatch))
        .collect();
    let ok = bl.rows.len() == plan.mu_values.len()
        && bl.interior_decreasing(BL_DECREASE_FACTOR)
        && bl.global_floor_ok(GLOBAL_FRACTION);
    v.report(
        6,
        "boundary layer",
        ok,
        format!(
            "interior sups [{}] each <= {BL_DECREASE_FACTOR}x previous; global/mismatch [{}] >= {GLOBAL_FRACTION}",
            interior.join(", "),
            global.join(", ")
        ),
    );
}

/// Keep every `stride`-th node so a refined run can be compared on the
/// coarse mesh.
fn restrict(rec: &RunRecord, coarse: Mesh, stride: usize) -> RunRecord {
    let pick = |f: &ScalarField| ScalarField::new(f.values().iter().step_by(stride).copied().collect());
    let pick2 = |f: &Vec2Field| {
        let [a, b] = f.components();
        Vec2Field::new(pick(a), pick(b))
    };
    RunRecord {
        mesh: coarse,
        mu: rec.mu,
        snapshots: rec
            .snapshots
            .iter()
            .map(|s| State {
                t: s.t,
                rho: pick(&s.rho),
                u: pick(&s.u),
                w: pick2(&s.w),
                b: pick2(&s.b),
                theta: pick(&s.theta),
            })
            .collect(),
        diagnostics: Vec::new(),
        integrals: rec.integrals,
    }
}

/// Grid convergence of the mu = 0 baseline, one refinement, measured in the
/// sweep's own difference norm against the smallest E(mu). Informational.
fn baseline_refinement(plan: &SweepPlan, outcome: &SweepOutcome) {
    let fine_mesh = Mesh::new(2 * plan.mesh.n_cells()).unwrap();
    let fine = Solver::new(
        fine_mesh,
        plan.params.with_mu(0.0),
        plan.bdry.clone(),
        plan.controls.clone(),
    )
    .and_then(|sv| sv.solve(Preset::SmoothShear.build(&fine_mesh, &plan.bdry)));
    let smallest = outcome.rate.rows.iter().map(|r| r.e).fold(f64::INFINITY, f64::min);
    match fine.and_then(|f| difference_norms(&restrict(&f, plan.mesh, 2), &outcome.limit)) {
        Ok(norms) => {
            let gap = norms.composite();
            println!(
                "info: baseline refinement n={} -> n={}: difference {gap:.3e}, {:.1}% of smallest E {smallest:.3e} (target < 10%)",
                plan.mesh.n_cells(),
                fine_mesh.n_cells(),
                100.0 * gap / smallest
            );
        }
        Err(e) => println!("info: baseline refinement failed: {e}"),
    }
}

fn limit_independence(v: &mut Verdict, ledger: &mut EntropyLedger) {
    let mesh = Mesh::new(200).unwrap();
    let base = shear_walls();
    let initial = Preset::SmoothShear.build(&mesh, &base);
    let controls = SolverControls {
        t_end: 0.25,
        snapshot_every: 0.05,
        ..SolverControls::default()
    };
    let run = |bdry: BoundaryData| {
        Solver::new(mesh, PhysParams::default().with_mu(0.0), bdry, controls.clone())?.solve(initial.clone())
    };
    let perturbed = BoundaryData {
        w_minus: [
            Signal::Sinusoid { mean: 0.3, amplitude: 2.0, omega: 11.0, phase: 0.5 },
            Signal::Constant(4.0),
        ],
        w_plus: [Signal::Constant(7.0), Signal::Sinusoid { mean: -1.0, amplitude: 0.5, omega: 3.0, phase: 0.0 }],
    };
    match (run(base), run(perturbed)) {
        (Ok(a), Ok(b)) => {
            ledger.absorb(&a);
            ledger.absorb(&b);
            let same = a.snapshots == b.snapshots && a.diagnostics == b.diagnostics;
            v.report(
                7,
                "limit-mode boundary independence",
                same,
                format!("{} snapshots, {} steps compared bitwise", a.snapshots.len(), a.step_count()),
            );
        }
        (a, b) => v.report(
            7,
            "limit-mode boundary independence",
            false,
            format!("run failed: {:?} / {:?}", a.err(), b.err()),
        ),
    }
}

fn rest_fixed_point(v: &mut Verdict, ledger: &mut EntropyLedger) {
    let mesh = Mesh::new(100).unwrap();
    let bdry = BoundaryData::zero();
    let sv = Solver::new(mesh, PhysParams::default(), bdry.clone(), SolverControls::default()).unwrap();
    let start = make_state(&mesh, Preset::Rest.build(&mesh, &bdry), &bdry).unwrap();
    let mut s = start.clone();
    let mut worst = 0.0f64;
    let mut negative = 0;
    for _ in 0..10_000 {
        match sv.step(&s) {
            Ok((next, diag)) => {
                if !(diag.entropy_prod >= 0.0) {
                    negative += 1;
                }
                s = next;
            }
            Err(e) => {
                v.report(8, "rest state fixed point", false, format!("step failed: {e}"));
                return;
            }
        }
        let mut aligned = s.clone();
        aligned.t = start.t;
        worst = worst.max(aligned.max_abs_diff(&start));
    }
    ledger.steps += 10_000;
    ledger.negative += negative;
    v.report(
        8,
        "rest state fixed point",
        worst <= 1e-10,
        format!("max deviation {worst:.3e} over 10000 steps (<= 1e-10), final t = {:.3}", s.t),
    );
}

fn main() -> ExitCode {
    let mut v = Verdict { failures: 0 };
    let mut ledger = EntropyLedger::default();
    let t0 = Instant::now();

    conservation(&mut v, &mut ledger);
    mms(&mut v);
    sweep(&mut v, &mut ledger);
    limit_independence(&mut v, &mut ledger);
    rest_fixed_point(&mut v, &mut ledger);

    v.report(
        3,
        "entropy production nonnegative",
        ledger.steps > 0 && ledger.negative == 0,
        format!(
            "{} negative of {} steps across all runs, smallest {:.3e}",
            ledger.negative, ledger.steps, ledger.min
        ),
    );
    println!("acceptance: {} failure(s), {:.1} s", v.failures, t0.elapsed().as_secs_f64());
    if v.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
