use crate::constitutive::{ConductivityFn, ConductivityLaw};
use crate::error::{Error, Result};

/// Physical coefficients of the planar MHD system.
///
/// `mu = 0` selects the limit system without transverse-velocity diffusion.
/// The specific heat is not a parameter; it is fixed to 1.
#[derive(Debug, Clone)]
pub struct PhysParams {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub gamma: f64,
    pub kappa1: f64,
    pub q: f64,
    pub conductivity_override: Option<ConductivityFnDebug>,
}

/// Newtype so a custom conductivity can sit in a `Debug` struct.
#[derive(Clone)]
pub struct ConductivityFnDebug(pub ConductivityFn);

impl std::fmt::Debug for ConductivityFnDebug {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("<custom conductivity>")
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            mu: 1e-3,
            nu: 1.0,
            gamma: 1.0,
            kappa1: 1.0,
            q: 2.0,
            conductivity_override: None,
        }
    }
}

impl PhysParams {
    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let strictly_positive = [
            ("lambda", self.lambda),
            ("nu", self.nu),
            ("gamma", self.gamma),
            ("kappa1", self.kappa1),
            ("q", self.q),
        ];
        for (name, v) in strictly_positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(Error::Invalid(format!("mu must be nonnegative, got {}", self.mu)));
        }
        Ok(())
    }

    pub fn is_limit(&self) -> bool {
        self.mu == 0.0
    }

    pub fn conductivity_law(&self) -> ConductivityLaw {
        match &self.conductivity_override {
            None => ConductivityLaw::power_law(self.kappa1, self.q),
            Some(f) => ConductivityLaw::Custom {
                kappa1: self.kappa1,
                q: self.q,
                eval: f.0.clone(),
            },
        }
    }
}
