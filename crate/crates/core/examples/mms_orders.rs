//! Manufactured-solution order check for one case.
//!
//!     cargo run --release --example mms_orders -- magnetic 50 100 200

use planar_mhd::experiments::{mms_verify, MmsCase};
use planar_mhd::diagnostics::FIELD_NAMES;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let case: MmsCase = args.next().as_deref().unwrap_or("temperature").parse()?;
    let mut resolutions: Vec<usize> = args.map(|a| a.parse()).collect::<Result<_, _>>()?;
    if resolutions.is_empty() {
        resolutions = vec![50, 100, 200];
    }

    let rep = mms_verify(case, &resolutions)?;
    println!("case {case}: {}", rep.status);
    for (n, errs) in rep.resolutions.iter().zip(&rep.errors) {
        let row: Vec<String> = case.active_fields().iter().map(|&k| format!("{}={:.3e}", FIELD_NAMES[k], errs[k])).collect();
        println!("  n = {n:4}  {}", row.join("  "));
    }
    match rep.order() {
        Some(p) => println!("observed order {p:.3}, expected at least {}", case.expected_order()),
        None => println!("no order: errors are at round-off"),
    }
    Ok(())
}
