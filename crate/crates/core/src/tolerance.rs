use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Euclidean norm of pure states and orthonormality of bases.
    pub norm: f64,
    /// Hermiticity defect.
    pub herm: f64,
    /// Idempotency defect of projectors, `P² = P`.
    pub idem: f64,
    /// Smallest admissible eigenvalue is `-psd`; also the Born clamping band.
    pub psd: f64,
    pub trace: f64,
    /// Reconstruction and round-trip errors.
    pub recon: f64,
    /// Frobenius norm of a commutator below which two powers commute.
    pub commutation: f64,
    /// Relation checks (spectra, conditional purity and orthogonality).
    pub relation: f64,
    /// Outcomes with probability at or below this are ignored by relation checks.
    pub prob_floor: f64,
    /// Value agreement for finite PSA isomorphisms.
    pub valuation: f64,
    /// Slack above the classical CHSH bound before a violation is reported.
    pub bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-10,
            herm: 1e-10,
            idem: 1e-10,
            psd: 1e-9,
            trace: 1e-9,
            recon: 1e-8,
            commutation: 1e-9,
            relation: 1e-7,
            prob_floor: 1e-10,
            valuation: 1e-9,
            bound: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("norm", self.norm),
            ("herm", self.herm),
            ("idem", self.idem),
            ("psd", self.psd),
            ("trace", self.trace),
            ("recon", self.recon),
            ("commutation", self.commutation),
            ("relation", self.relation),
            ("prob_floor", self.prob_floor),
            ("valuation", self.valuation),
            ("bound", self.bound),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Validation(format!(
                    "tolerances.{name}: must be a positive finite number, got {v}"
                )));
            }
        }
        Ok(())
    }
}
