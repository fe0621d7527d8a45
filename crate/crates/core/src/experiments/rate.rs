//! Least-squares power-law fits in log-log coordinates.

use crate::error::{Error, Result};

/// `ln E = slope * ln mu + intercept`, with the root-mean-square deviation
/// of the fitted points as `residual`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

/// Ordinary least squares on `(ln mu, ln E)`.
pub fn rate_fit(pairs: &[(f64, f64)]) -> Result<LineFit> {
    if pairs.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 (mu, E) pairs, got {}",
            pairs.len()
        )));
    }
    for &(mu, e) in pairs {
        if !(mu > 0.0) {
            return Err(Error::Fit(format!("mu must be positive, got {mu}")));
        }
        if !(e > 0.0) {
            return Err(Error::Fit(format!(
                "E({mu}) = {e} is not positive (coincides with the baseline or is corrupt)"
            )));
        }
    }
    let mut mus: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    mus.sort_by(f64::total_cmp);
    if mus.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Fit("mu values must be distinct".into()));
    }

    let x: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let n = x.len() as f64;
    let xm = x.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - xm) * (v - xm)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - xm) * (b - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ss: f64 = x
        .iter()
        .zip(&y)
        .map(|(a, b)| {
            let r = b - (slope * a + intercept);
            r * r
        })
        .sum();
    let fit = LineFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
    };
    if !fit.slope.is_finite() || !fit.intercept.is_finite() {
        return Err(Error::Fit("fit produced non-finite coefficients".into()));
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Solve the 2x2 normal equations directly by Cramer's rule.
    fn normal_equations(pairs: &[(f64, f64)]) -> (f64, f64) {
        let (mut s1, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &(mu, e) in pairs {
            let (x, y) = (mu.ln(), e.ln());
            s1 += 1.0;
            sx += x;
            sxx += x * x;
            sy += y;
            sxy += x * y;
        }
        let det = s1 * sxx - sx * sx;
        let intercept = (sy * sxx - sx * sxy) / det;
        let slope = (s1 * sxy - sx * sy) / det;
        (slope, intercept)
    }

    #[test]
    fn quarter_power() {
        let pairs: Vec<_> = [1e-2, 1e-3, 1e-4].iter().map(|&m: &f64| (m, m.powf(0.25))).collect();
        let fit = rate_fit(&pairs).unwrap();
        assert!((fit.slope - 0.25).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn scaled_square_root() {
        let pairs: Vec<_> = [1e-1, 1e-2, 1e-3, 1e-4].iter().map(|&m: &f64| (m, 2.0 * m.sqrt())).collect();
        let fit = rate_fit(&pairs).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!((fit.intercept - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn noisy_data_matches_normal_equations() {
        let noise = [0.13, -0.07, 0.21, -0.18, 0.02, 0.09];
        let pairs: Vec<_> = noise
            .iter()
            .enumerate()
            .map(|(k, eps)| {
                let mu = 10f64.powf(-1.0 - 0.5 * k as f64);
                (mu, 0.7 * mu.powf(0.3) * (1.0 + eps))
            })
            .collect();
        let fit = rate_fit(&pairs).unwrap();
        let (slope, intercept) = normal_equations(&pairs);
        assert!((fit.slope - slope).abs() < 1e-12);
        assert!((fit.intercept - intercept).abs() < 1e-12);
        assert!(fit.residual > 0.0);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(rate_fit(&[(1e-2, 1.0), (1e-3, 0.5)]).is_err());
        assert!(rate_fit(&[(1e-2, 1.0), (1e-3, 0.0), (1e-4, 0.2)]).is_err());
        assert!(rate_fit(&[(1e-2, 1.0), (1e-2, 0.5), (1e-4, 0.2)]).is_err());
    }

    proptest! {
        #[test]
        fn invariant_under_rescaling(
            es in proptest::collection::vec(0.01f64..10.0, 4),
            c in 0.01f64..100.0,
        ) {
            let mus = [1e-1, 1e-2, 1e-3, 1e-4];
            let a: Vec<_> = mus.iter().zip(&es).map(|(m, e)| (*m, *e)).collect();
            let b: Vec<_> = mus.iter().zip(&es).map(|(m, e)| (*m, c * e)).collect();
            let fa = rate_fit(&a).unwrap();
            let fb = rate_fit(&b).unwrap();
            prop_assert!((fa.slope - fb.slope).abs() < 1e-10);
            prop_assert!((fb.intercept - fa.intercept - c.ln()).abs() < 1e-10);
        }
    }
}
