//! Boundary-layer profiling: how far from the walls a viscous run agrees
//! with the limit run.

use crate::diagnostics::interior_sup;
use crate::error::{Error, Result};
use crate::mesh::Vec2Field;
use crate::solver::RunRecord;

/// One viscosity case of a boundary-layer profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlRow {
    pub mu: f64,
    /// Layer thickness `mu^a`.
    pub delta: f64,
    /// Max over snapshots of `|w - w_limit|` on `[delta, 1 - delta]`.
    pub interior_sup: f64,
    /// Max over snapshots of `|w - w_limit|` on `[0, 1]`.
    pub global_sup: f64,
    /// Max over snapshots and walls of `|w_wall - w_limit(wall)|`.
    pub mismatch: f64,
}

/// Rows sorted by decreasing viscosity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BlReport {
    pub exponent: f64,
    pub rows: Vec<BlRow>,
}

/// Check that two records were sampled on the same mesh at the same times.
pub(crate) fn check_aligned(a: &RunRecord, b: &RunRecord) -> Result<()> {
    if a.mesh != b.mesh {
        return Err(Error::Alignment(format!(
            "meshes differ: {} vs {} cells",
            a.mesh.n_cells(),
            b.mesh.n_cells()
        )));
    }
    if a.snapshots.len() != b.snapshots.len() {
        return Err(Error::Alignment(format!(
            "snapshot counts differ: {} vs {}",
            a.snapshots.len(),
            b.snapshots.len()
        )));
    }
    for (s, r) in a.snapshots.iter().zip(&b.snapshots) {
        if (s.t - r.t).abs() > 1e-12 * s.t.abs().max(1.0) {
            return Err(Error::Alignment(format!("snapshot times differ: {} vs {}", s.t, r.t)));
        }
    }
    Ok(())
}

/// Profile `record_mu` against the limit run `record_limit` with layer
/// thickness `mu^exponent`.
pub fn bl_profile(record_mu: &RunRecord, record_limit: &RunRecord, exponent: f64) -> Result<BlRow> {
    if !(exponent > 0.0 && exponent < 0.5) {
        return Err(Error::domain("thickness exponent must lie in (0, 1/2)", exponent));
    }
    if !(record_mu.mu > 0.0) {
        return Err(Error::domain("boundary-layer profile needs a positive viscosity", record_mu.mu));
    }
    check_aligned(record_mu, record_limit)?;
    let mesh = &record_mu.mesh;
    let delta = record_mu.mu.powf(exponent);
    let last = mesh.n_cells();

    let mut row = BlRow {
        mu: record_mu.mu,
        delta,
        interior_sup: 0.0,
        global_sup: 0.0,
        mismatch: 0.0,
    };
    for (s, r) in record_mu.snapshots.iter().zip(&record_limit.snapshots) {
        let diff = Vec2Field::new(
            s.w.c1.iter().zip(r.w.c1.iter()).map(|(a, b)| a - b).collect::<Vec<_>>().into(),
            s.w.c2.iter().zip(r.w.c2.iter()).map(|(a, b)| a - b).collect::<Vec<_>>().into(),
        );
        row.interior_sup = row.interior_sup.max(interior_sup(&diff, mesh, delta)?);
        row.global_sup = row.global_sup.max(interior_sup(&diff, mesh, 0.0)?);
        for i in [0, last] {
            let [a, b] = diff.at(i);
            row.mismatch = row.mismatch.max(a.hypot(b));
        }
    }
    Ok(row)
}

impl BlReport {
    /// Each interior sup is at most `factor` times the one at the next
    /// larger viscosity.
    pub fn interior_decreasing(&self, factor: f64) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].interior_sup <= factor * w[0].interior_sup)
    }

    /// Every global sup is at least `fraction` of its boundary mismatch.
    pub fn global_floor_ok(&self, fraction: f64) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.global_sup >= fraction * r.mismatch)
    }

    /// Smallest global sup over the largest one.
    pub fn floor_ratio(&self) -> f64 {
        let max = self.rows.iter().map(|r| r.global_sup).fold(0.0, f64::max);
        let min = self.rows.iter().map(|r| r.global_sup).fold(f64::INFINITY, f64::min);
        if max > 0.0 {
            min / max
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Mesh, ScalarField};
    use crate::solver::RunRecord;
    use crate::state::State;

    fn record(mesh: Mesh, mu: f64, w: &[Vec2Field]) -> RunRecord {
        let snaps: Vec<State> = w
            .iter()
            .enumerate()
            .map(|(k, w)| State {
                t: 0.1 * k as f64,
                rho: ScalarField::constant(&mesh, 1.0),
                u: ScalarField::zeros(&mesh),
                w: w.clone(),
                b: Vec2Field::zeros(&mesh),
                theta: ScalarField::constant(&mesh, 1.0),
            })
            .collect();
        let mut r = RunRecord::new(mesh, mu, snaps[0].clone());
        r.snapshots = snaps;
        r
    }

    #[test]
    fn identical_records_give_zero() {
        let mesh = Mesh::new(20).unwrap();
        let w = vec![Vec2Field::constant(&mesh, [0.3, -0.1]); 3];
        let row = bl_profile(&record(mesh, 1e-3, &w), &record(mesh, 0.0, &w), 0.4).unwrap();
        assert_eq!(row.interior_sup, 0.0);
        assert_eq!(row.global_sup, 0.0);
        assert_eq!(row.mismatch, 0.0);
        assert!((row.delta - 1e-3f64.powf(0.4)).abs() < 1e-15);
    }

    #[test]
    fn wall_only_difference_is_excluded_from_interior() {
        let mesh = Mesh::new(100).unwrap();
        let base = Vec2Field::zeros(&mesh);
        let mut w = base.clone();
        w.set(0, [1.0, 0.0]);
        w.set(100, [0.0, -0.5]);
        let row = bl_profile(
            &record(mesh, 1e-3, &[base.clone(), w]),
            &record(mesh, 0.0, &[base.clone(), base]),
            0.4,
        )
        .unwrap();
        assert_eq!(row.interior_sup, 0.0);
        assert_eq!(row.global_sup, 1.0);
        assert_eq!(row.mismatch, 1.0);
    }

    #[test]
    fn misaligned_records_are_rejected() {
        let mesh = Mesh::new(20).unwrap();
        let w = vec![Vec2Field::zeros(&mesh); 3];
        let short = vec![Vec2Field::zeros(&mesh); 2];
        assert!(matches!(
            bl_profile(&record(mesh, 1e-3, &w), &record(mesh, 0.0, &short), 0.4),
            Err(Error::Alignment(_))
        ));
        let other = Mesh::new(40).unwrap();
        let w2 = vec![Vec2Field::zeros(&other); 3];
        assert!(bl_profile(&record(mesh, 1e-3, &w), &record(other, 0.0, &w2), 0.4).is_err());
        assert!(bl_profile(&record(mesh, 1e-3, &w), &record(mesh, 0.0, &w), 0.5).is_err());
    }

    #[test]
    fn report_checks() {
        let row = |mu, interior, global| BlRow {
            mu,
            delta: 0.0,
            interior_sup: interior,
            global_sup: global,
            mismatch: 1.0,
        };
        let rep = BlReport {
            exponent: 0.4,
            rows: vec![row(1e-2, 0.5, 1.0), row(1e-3, 0.2, 0.9), row(1e-4, 0.1, 0.8)],
        };
        assert!(rep.interior_decreasing(0.9));
        assert!(rep.global_floor_ok(0.5));
        assert!((rep.floor_ratio() - 0.8).abs() < 1e-15);
        let bad = BlReport {
            exponent: 0.4,
            rows: vec![row(1e-2, 0.5, 1.0), row(1e-3, 0.48, 0.2)],
        };
        assert!(!bad.interior_decreasing(0.9));
        assert!(!bad.global_floor_ok(0.5));
    }
}
