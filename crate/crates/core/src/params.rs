//! Model parameters.

use crate::error::SimError;

/// The five positive model constants.
///
/// * `alpha` — chemotactic sensitivity (flux term alpha/(1+c) grad c)
/// * `rho`   — haptotactic sensitivity (flux term rho grad w)
/// * `lambda`— logistic proliferation rate of p
/// * `mu`    — uptake rate of the diffusible signal c by p
/// * `gamma` — production rate of the bound substrate w
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub alpha: f64,
    pub rho: f64,
    pub lambda: f64,
    pub mu: f64,
    pub gamma: f64,
}

impl Params {
    pub fn new(alpha: f64, rho: f64, lambda: f64, mu: f64, gamma: f64) -> Result<Self, SimError> {
        let p = Params { alpha, rho, lambda, mu, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("rho", self.rho),
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("gamma", self.gamma),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SimError::Invalid(format!("parameter {name} must be strictly positive, got {v}")));
            }
        }
        Ok(())
    }
}

impl Default for Params {
    /// Reference parameter set used by the bundled scenarios. Chosen so that
    /// none of the rate constants min{lambda1, 1, gamma, lambda} degenerates
    /// on the unit interval; every value is overridable from a config file.
    fn default() -> Self {
        Params { alpha: 0.5, rho: 0.5, lambda: 1.0, mu: 1.0, gamma: 1.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_positive_rejects_nonpositive() {
        assert!(Params::new(0.5, 0.5, 1.0, 1.0, 1.0).is_ok());
        assert!(Params::new(0.0, 0.5, 1.0, 1.0, 1.0).is_err());
        assert!(Params::new(0.5, -2.0, 1.0, 1.0, 1.0).is_err());
        assert!(Params::new(0.5, 0.5, 1.0, f64::NAN, 1.0).is_err());
    }
}
