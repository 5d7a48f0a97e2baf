//! Intensive and effective relations between the two reduced PSAs of a
//! bipartite state, and the strong / weak / separable classification built
//! on them.

mod effective;
mod family;
mod intensive;
mod report;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::DensityOperator;
use crate::tolerance::Tolerances;

pub use effective::{
    correlated_partner_context, effective_related, AnalyticCheck, EffectiveCertificate, EntryResult, PartnerCheck,
    PartnerContext,
};
pub use family::{ContextFamily, FamilyEntry, Provenance, DEFAULT_FAMILY_SEED, DEFAULT_HAAR_CONTEXTS};
pub use intensive::{
    intensive_related, intensive_related_finite, witness_residual, FiniteIsomorphism, IntensiveWitness,
};
pub use report::{compare_with_standard, ComparisonReport, PptSummary, StandardClass, REPORT_SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "PascalCase")]
pub enum Classification {
    /// Intensively and effectively related.
    Strong,
    /// Intensively related only.
    Weak,
    /// Neither.
    Separable,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Strong => "Strong",
            Classification::Weak => "Weak",
            Classification::Separable => "Separable",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationVerdict {
    pub classification: Classification,
    pub intensive: IntensiveWitness,
    pub effective: EffectiveCertificate,
    pub family_fingerprint: String,
    pub family_size: usize,
    pub tolerances: Tolerances,
}

pub fn classify_entanglement(
    rho: &DensityOperator,
    family: &ContextFamily,
    tol: &Tolerances,
) -> Result<RelationVerdict> {
    let (d1, _) = rho.bipartite_dims()?;
    if family.dim() != d1 {
        return Err(Error::DimensionMismatch {
            context: "context family vs side-1 dimension",
            expected: d1,
            actual: family.dim(),
        });
    }
    let intensive = intensive_related(rho, tol)?;
    let effective = effective_related(rho, family, tol)?;
    let classification = match (intensive.related, effective.related) {
        (true, true) => Classification::Strong,
        (true, false) => Classification::Weak,
        (false, false) => Classification::Separable,
        (false, true) => {
            return Err(Error::Consistency(format!(
                "effective relation without intensive relation contradicts EFFECTIVE RELATIONS ⇒ INTENSIVE RELATIONS \
                 (reduced spectra {:?} vs {:?})",
                intensive.spectrum_1, intensive.spectrum_2
            )))
        }
    };
    Ok(RelationVerdict {
        classification,
        intensive,
        effective,
        family_fingerprint: family.fingerprint().to_string(),
        family_size: family.len(),
        tolerances: *tol,
    })
}
