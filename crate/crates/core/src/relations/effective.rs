use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::family::{ContextFamily, Provenance};
use crate::diagnostics::schmidt;
use crate::error::{Error, Result};
use crate::io::{encode_vector, ComplexPair};
use crate::linalg::{self, ComplexMatrix};
use crate::state::{DensityOperator, PureState};
use crate::tolerance::Tolerances;

/// Side-2 basis whose outcomes are fixed by the side-1 outcomes.
#[derive(Debug, Clone, Serialize)]
pub struct PartnerContext {
    #[serde(serialize_with = "serialize_basis")]
    pub basis: Vec<PureState>,
    /// `pairing[i]`: index in `basis` of the partner of side-1 outcome `i`.
    pub pairing: Vec<usize>,
    pub probabilities: Vec<f64>,
    /// One side-1 outcome is certain, so the correlation holds vacuously.
    pub deterministic: bool,
}

fn serialize_basis<S: serde::Serializer>(basis: &[PureState], s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw: Vec<Vec<ComplexPair>> = basis.iter().map(|v| encode_vector(v.amplitudes())).collect();
    serde::Serialize::serialize(&raw, s)
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PartnerCheck {
    Correlated(PartnerContext),
    Uncorrelated { reason: String },
}

impl PartnerCheck {
    pub fn partner(&self) -> Option<&PartnerContext> {
        match self {
            PartnerCheck::Correlated(p) => Some(p),
            PartnerCheck::Uncorrelated { .. } => None,
        }
    }

    pub fn is_correlated(&self) -> bool {
        matches!(self, PartnerCheck::Correlated(_))
    }
}

/// Unnormalized conditional state `(⟨u| ⊗ I) ρ (|u⟩ ⊗ I)` on side 2.
fn conditional_block(rho: &ComplexMatrix, u: &[Complex64], d1: usize, d2: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d2, d2);
    for a in 0..d1 {
        let ua = u[a].conj();
        if ua.norm_sqr() == 0.0 {
            continue;
        }
        for a2 in 0..d1 {
            let w = ua * u[a2];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            for b in 0..d2 {
                for b2 in 0..d2 {
                    out[(b, b2)] += w * rho[(a * d2 + b, a2 * d2 + b2)];
                }
            }
        }
    }
    out
}

fn top_eigenvector(m: &ComplexMatrix) -> Vec<Complex64> {
    m.eigh().vectors.swap_remove(0)
}

fn finish_partner(
    top: Vec<(usize, Vec<Complex64>)>,
    d1: usize,
    d2: usize,
    probabilities: Vec<f64>,
    deterministic: bool,
) -> Result<PartnerContext> {
    let vectors: Vec<Vec<Complex64>> = top.iter().map(|(_, v)| v.clone()).collect();
    let completed = linalg::complete_basis(&vectors, d2);
    let mut pairing = vec![usize::MAX; d1];
    for (slot, (i, _)) in top.iter().enumerate() {
        pairing[*i] = slot;
    }
    // outcomes that never occur take the remaining partner vectors in order
    for (spare, p) in (top.len()..).zip(pairing.iter_mut().filter(|p| **p == usize::MAX)) {
        *p = spare.min(d2 - 1);
    }
    let basis = completed
        .into_iter()
        .map(PureState::normalized)
        .collect::<Result<Vec<_>>>()?;
    Ok(PartnerContext {
        basis,
        pairing,
        probabilities,
        deterministic,
    })
}

/// Decides whether the outcomes of side-1 basis `c1` are perfectly
/// (anti-)correlated with the outcomes of some side-2 basis: every occurring
/// conditional state must be pure and the conditional states pairwise
/// orthogonal.
pub fn correlated_partner_context(rho: &DensityOperator, c1: &[PureState], tol: &Tolerances) -> Result<PartnerCheck> {
    let (d1, d2) = rho.bipartite_dims()?;
    let vecs: Vec<Vec<Complex64>> = c1.iter().map(|v| v.amplitudes().to_vec()).collect();
    if c1.len() != d1 || vecs.iter().any(|v| v.len() != d1) || linalg::orthonormality_defect(&vecs) > tol.norm.max(1e-9)
    {
        return Err(Error::Unsupported(format!(
            "side-1 context must be an orthonormal basis of dimension {d1}"
        )));
    }
    let blocks: Vec<ComplexMatrix> = vecs
        .iter()
        .map(|u| conditional_block(rho.matrix(), u, d1, d2))
        .collect();
    let probabilities: Vec<f64> = blocks.iter().map(|b| b.trace().re.max(0.0)).collect();

    if let Some(k) = probabilities.iter().position(|&p| p >= 1.0 - tol.relation) {
        let top = top_eigenvector(&blocks[k]);
        return Ok(PartnerCheck::Correlated(finish_partner(
            vec![(k, top)],
            d1,
            d2,
            probabilities,
            true,
        )?));
    }

    let occurring: Vec<usize> = (0..d1).filter(|&i| probabilities[i] > tol.prob_floor).collect();
    let conditionals: Vec<ComplexMatrix> = occurring
        .iter()
        .map(|&i| blocks[i].scale_re(1.0 / probabilities[i]))
        .collect();
    for (&i, sigma) in occurring.iter().zip(&conditionals) {
        let purity = sigma.trace_product(sigma).re;
        if purity < 1.0 - tol.relation {
            return Ok(PartnerCheck::Uncorrelated {
                reason: format!("conditional state for outcome {i} is mixed (purity {purity:.9})"),
            });
        }
    }
    for a in 0..occurring.len() {
        for b in (a + 1)..occurring.len() {
            let overlap = conditionals[a].trace_product(&conditionals[b]).norm();
            if overlap > tol.relation {
                return Ok(PartnerCheck::Uncorrelated {
                    reason: format!(
                        "conditional states for outcomes {} and {} overlap (Tr = {overlap:.3e})",
                        occurring[a], occurring[b]
                    ),
                });
            }
        }
    }
    let top = occurring
        .iter()
        .zip(&conditionals)
        .map(|(&i, s)| (i, top_eigenvector(s)))
        .collect();
    Ok(PartnerCheck::Correlated(finish_partner(
        top,
        d1,
        d2,
        probabilities,
        false,
    )?))
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryResult {
    pub index: usize,
    pub provenance: Provenance,
    pub check: PartnerCheck,
}

/// Closed-form answer for pure joint states: every side-1 basis has a
/// partner iff all Schmidt coefficients are equal.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyticCheck {
    pub schmidt_coefficients: Vec<f64>,
    pub equal_schmidt: bool,
    pub agrees_with_sampled: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EffectiveCertificate {
    pub related: bool,
    pub entries: Vec<EntryResult>,
    pub first_failure: Option<usize>,
    pub analytic: Option<AnalyticCheck>,
    pub family_fingerprint: String,
}

pub fn effective_related(
    rho: &DensityOperator,
    family: &ContextFamily,
    tol: &Tolerances,
) -> Result<EffectiveCertificate> {
    if family.is_empty() {
        return Err(Error::Validation("context family is empty".into()));
    }
    let entries: Vec<EntryResult> = family
        .entries()
        .par_iter()
        .enumerate()
        .map(|(index, e)| {
            Ok(EntryResult {
                index,
                provenance: e.provenance.clone(),
                check: correlated_partner_context(rho, &e.basis, tol)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let first_failure = entries.iter().position(|e| !e.check.is_correlated());
    let related = first_failure.is_none();

    let analytic = if rho.is_pure(&Tolerances {
        trace: tol.relation,
        ..*tol
    }) {
        let (d1, d2) = rho.bipartite_dims()?;
        let psi = PureState::normalized(top_eigenvector(rho.matrix()))?;
        let s = schmidt(&psi, (d1, d2))?;
        let squares: Vec<f64> = s.coefficients.iter().map(|c| c * c).collect();
        let spread =
            squares.iter().copied().fold(f64::MIN, f64::max) - squares.iter().copied().fold(f64::MAX, f64::min);
        // overlaps of conditional states scale with the squared spread
        let equal_schmidt = spread <= tol.relation.sqrt();
        Some(AnalyticCheck {
            schmidt_coefficients: s.coefficients,
            equal_schmidt,
            agrees_with_sampled: equal_schmidt == related,
        })
    } else {
        None
    };

    Ok(EffectiveCertificate {
        related,
        entries,
        first_failure,
        analytic,
        family_fingerprint: family.fingerprint().to_string(),
    })
}
