//! Ideal-gas state laws, heat conductivity, and pointwise energy/entropy
//! densities. The specific heat is fixed to 1, so `e = theta`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type ConductivityFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Heat conductivity `kappa(rho, theta)`.
///
/// Any law must stay above the floor `kappa1 * theta^q`. Custom laws are
/// checked at every evaluation.
#[derive(Clone)]
pub enum ConductivityLaw {
    PowerLaw { kappa1: f64, q: f64 },
    Custom {
        kappa1: f64,
        q: f64,
        eval: ConductivityFn,
    },
}

impl ConductivityLaw {
    pub fn power_law(kappa1: f64, q: f64) -> Self {
        ConductivityLaw::PowerLaw { kappa1, q }
    }

    pub fn custom(kappa1: f64, q: f64, eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        ConductivityLaw::Custom {
            kappa1,
            q,
            eval: Arc::new(eval),
        }
    }

    pub fn floor(&self, theta: f64) -> f64 {
        let (kappa1, q) = match self {
            ConductivityLaw::PowerLaw { kappa1, q } | ConductivityLaw::Custom { kappa1, q, .. } => {
                (*kappa1, *q)
            }
        };
        kappa1 * theta.powf(q)
    }

    pub fn is_power_law(&self) -> bool {
        matches!(self, ConductivityLaw::PowerLaw { .. })
    }
}

impl fmt::Debug for ConductivityLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConductivityLaw::PowerLaw { kappa1, q } => f
                .debug_struct("PowerLaw")
                .field("kappa1", kappa1)
                .field("q", q)
                .finish(),
            ConductivityLaw::Custom { kappa1, q, .. } => f
                .debug_struct("Custom")
                .field("kappa1", kappa1)
                .field("q", q)
                .finish_non_exhaustive(),
        }
    }
}

fn positive(what: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(what, v))
    }
}

/// `p = gamma * rho * theta`
pub fn pressure(rho: f64, theta: f64, gamma: f64) -> Result<f64> {
    Ok(gamma * positive("density must be positive", rho)? * positive("temperature must be positive", theta)?)
}

/// `e = theta`
pub fn internal_energy(theta: f64) -> Result<f64> {
    positive("temperature must be positive", theta)
}

pub fn conductivity(law: &ConductivityLaw, rho: f64, theta: f64) -> Result<f64> {
    positive("density must be positive", rho)?;
    positive("temperature must be positive", theta)?;
    match law {
        ConductivityLaw::PowerLaw { kappa1, q } => Ok(kappa1 * theta.powf(*q)),
        ConductivityLaw::Custom { eval, .. } => {
            let kappa = eval(rho, theta);
            let floor = law.floor(theta);
            // NaN fails this comparison too
            if kappa >= floor {
                Ok(kappa)
            } else {
                Err(Error::ConstitutiveViolation {
                    rho,
                    theta,
                    kappa,
                    floor,
                })
            }
        }
    }
}

/// Total energy density `rho * (theta + (u^2 + |w|^2) / 2) + |b|^2 / 2`.
pub fn total_energy_density(rho: f64, u: f64, w: [f64; 2], b: [f64; 2], theta: f64) -> f64 {
    let w2 = w[0] * w[0] + w[1] * w[1];
    let b2 = b[0] * b[0] + b[1] * b[1];
    rho * (theta + 0.5 * (u * u + w2)) + 0.5 * b2
}

/// Entropy density `ln(theta) - gamma * ln(rho)`.
pub fn entropy_density(rho: f64, theta: f64, gamma: f64) -> Result<f64> {
    let rho = positive("density must be positive", rho)?;
    let theta = positive("temperature must be positive", theta)?;
    Ok(theta.ln() - gamma * rho.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    #[test]
    fn pressure_examples() {
        assert_eq!(pressure(2.0, 3.0, 1.0).unwrap(), 6.0);
        assert_eq!(pressure(1.0, 1.0, 5.0 / 3.0).unwrap(), 5.0 / 3.0);
        assert!(matches!(pressure(1.0, 0.0, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn internal_energy_examples() {
        assert_eq!(internal_energy(1.0).unwrap(), 1.0);
        assert_eq!(internal_energy(2.5).unwrap(), 2.5);
        assert!(internal_energy(-1.0).is_err());
    }

    #[test]
    fn conductivity_examples() {
        let law = ConductivityLaw::power_law(1.0, 2.0);
        assert_eq!(conductivity(&law, 1.0, 3.0).unwrap(), 9.0);
        let law = ConductivityLaw::power_law(2.0, 0.5);
        assert_eq!(conductivity(&law, 1.0, 4.0).unwrap(), 4.0);

        let bad = ConductivityLaw::custom(1.0, 2.0, |_, th| 0.5 * th * th);
        assert!(matches!(
            conductivity(&bad, 1.0, 2.0),
            Err(Error::ConstitutiveViolation { .. })
        ));
        let good = ConductivityLaw::custom(1.0, 2.0, |rho, th| th * th + rho);
        assert_eq!(conductivity(&good, 1.0, 2.0).unwrap(), 5.0);
    }

    #[test]
    fn energy_density_examples() {
        assert_eq!(total_energy_density(1.0, 0.0, [0.0; 2], [0.0; 2], 1.0), 1.0);
        assert_eq!(total_energy_density(2.0, 1.0, [1.0, 0.0], [0.0, 2.0], 1.0), 6.0);
        assert_eq!(total_energy_density(1.0, 0.0, [0.0; 2], [1.0, 1.0], 2.0), 3.0);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_density(1.0, 1.0, 1.4).unwrap(), 0.0);
        assert!((entropy_density(1.0, E, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((entropy_density(E, 1.0, 2.0).unwrap() + 2.0).abs() < 1e-15);
        assert!(entropy_density(0.0, 1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn pressure_is_exact_product(rho in 1e-3f64..1e3, theta in 1e-3f64..1e3, gamma in 0.1f64..5.0) {
            prop_assert_eq!(pressure(rho, theta, gamma).unwrap(), gamma * rho * theta);
        }

        #[test]
        fn power_law_monotone_in_theta(k1 in 0.01f64..10.0, q in 0.01f64..6.0, a in 1e-3f64..10.0, d in 1e-6f64..10.0) {
            let law = ConductivityLaw::power_law(k1, q);
            prop_assert!(conductivity(&law, 1.0, a + d).unwrap() > conductivity(&law, 1.0, a).unwrap());
        }

        #[test]
        fn energy_density_rotation_invariant(
            rho in 0.1f64..10.0, u in -5.0f64..5.0, th in 0.1f64..10.0,
            w1 in -5.0f64..5.0, w2 in -5.0f64..5.0, b1 in -5.0f64..5.0, b2 in -5.0f64..5.0,
            angle in 0.0f64..std::f64::consts::TAU,
        ) {
            let (s, c) = angle.sin_cos();
            let rot = |v: [f64; 2]| [c * v[0] - s * v[1], s * v[0] + c * v[1]];
            let e0 = total_energy_density(rho, u, [w1, w2], [b1, b2], th);
            let e1 = total_energy_density(rho, u, rot([w1, w2]), rot([b1, b2]), th);
            prop_assert!((e0 - e1).abs() <= 1e-12 * e0.abs().max(1.0));
            prop_assert!(e0 >= rho * th);
        }
    }
}
