//! Numerical tolerances shared by every module.

use crate::{Error, Result};

/// Environment variable that overrides [`Tolerances::psd`].
pub const TOL_ENV: &str = "WITNESSLAB_TOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Elementwise equality, Hermiticity and trace checks.
    pub eq: f64,
    /// Smallest eigenvalue still accepted as positive semidefinite is `-psd`.
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eq: 1e-10,
            psd: 1e-9,
        }
    }
}

impl Tolerances {
    /// Defaults, with `psd` taken from `WITNESSLAB_TOL` when set.
    pub fn from_env() -> Result<Self> {
        let mut tol = Tolerances::default();
        if let Ok(raw) = std::env::var(TOL_ENV) {
            let psd: f64 = raw
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("{TOL_ENV}={raw:?} is not a number")))?;
            if !(psd.is_finite() && psd >= 0.0) {
                return Err(Error::Domain(format!("{TOL_ENV} must be finite and >= 0")));
            }
            tol.psd = psd;
        }
        Ok(tol)
    }
}
