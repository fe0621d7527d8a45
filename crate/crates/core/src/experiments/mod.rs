//! Numerical experiments built on the solver: viscosity sweeps with rate
//! fits, boundary-layer profiles, and manufactured-solution order checks.

pub mod bl;
pub mod manufactured;
pub mod mms;
pub mod rate;
pub mod sweep;

pub use bl::{bl_profile, BlReport, BlRow};
pub use mms::{mms_verify, mms_verify_problem, MmsCase, MmsProblem, MmsReport, MmsStatus};
pub use rate::{rate_fit, LineFit};
pub use sweep::{assemble_reports, default_mu_values, difference_norms, run_sweep, RateReport, RateRow, SweepOutcome, SweepPlan};
