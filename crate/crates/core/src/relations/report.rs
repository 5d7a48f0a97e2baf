use serde::Serialize;

use super::{classify_entanglement, AnalyticCheck, Classification, ContextFamily, PartnerCheck, Provenance};
use crate::diagnostics::{ppt_check, schmidt, PptVerdict};
use crate::error::Result;
use crate::linalg;
use crate::powers::{build_power_graph_with, psa_from_state, PsaRow, DEFAULT_MAX_NODES};
use crate::state::{computational_basis, fourier_basis, DensityOperator, Projector, PureState};
use crate::tolerance::Tolerances;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Schmidt coefficients below this count as zero when deciding product form.
const SCHMIDT_ZERO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StandardClass {
    Separable,
    Entangled,
    /// PPT in dimensions where PPT does not imply separability.
    Undetermined,
}

#[derive(Debug, Clone, Serialize)]
pub struct PptSummary {
    pub verdict: PptVerdict,
    pub min_eigenvalue: f64,
    /// `"conclusive"` or `"necessary-only"`.
    pub conclusiveness: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct IntensiveSummary {
    pub related: bool,
    pub spectrum_1: Vec<f64>,
    pub spectrum_2: Vec<f64>,
    pub max_deviation: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureSummary {
    pub entry: usize,
    pub provenance: Provenance,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EffectiveSummary {
    pub related: bool,
    pub contexts_checked: usize,
    pub contexts_correlated: usize,
    pub first_failure: Option<FailureSummary>,
    pub analytic: Option<AnalyticCheck>,
}

/// Orthodox diagnostics next to the power-graph classification of one state.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub factor_dims: Vec<usize>,
    pub purity: f64,
    pub is_pure: bool,
    /// `ρ` equals the tensor product of its marginals.
    pub is_product: bool,
    pub ppt: PptSummary,
    pub standard_class: StandardClass,
    pub schmidt_coefficients: Option<Vec<f64>>,
    pub classification: Classification,
    pub intensive: IntensiveSummary,
    pub effective: EffectiveSummary,
    /// Nodes predicted with probability one.
    pub epr_certain_nodes: Vec<usize>,
    /// Born-rule value of every node of the report graph.
    pub psa_table: Vec<PsaRow>,
    pub psa_graph_fingerprint: String,
    pub divergences: Vec<String>,
    pub family_fingerprint: String,
    pub family_size: usize,
    pub tolerances: Tolerances,
}

/// Joint eigenbasis of `rho`, then the computational and Fourier product
/// bases, with repeated rays dropped.
fn report_nodes(rho: &DensityOperator, d1: usize, d2: usize) -> Result<Vec<Projector>> {
    let mut rays: Vec<PureState> = Vec::new();
    let eigen = rho.matrix().eigh().vectors.into_iter().map(PureState::normalized);
    let fourier = fourier_basis(d1)
        .iter()
        .flat_map(|a| fourier_basis(d2).into_iter().map(move |b| a.tensor(&b)))
        .collect::<Vec<_>>();
    let candidates = eigen
        .chain(computational_basis(d1 * d2).into_iter().map(Ok))
        .chain(fourier.into_iter().map(Ok));
    for v in candidates {
        let v = v?;
        if !rays
            .iter()
            .any(|r| linalg::inner(r.amplitudes(), v.amplitudes()).norm() > 1.0 - 1e-9)
        {
            rays.push(v);
        }
    }
    Ok(rays.iter().map(Projector::from_state).collect())
}

fn standard_class(ppt: &PptSummary, is_product: bool, schmidt_coefficients: Option<&[f64]>) -> StandardClass {
    if is_product {
        return StandardClass::Separable;
    }
    if let Some(c) = schmidt_coefficients {
        return if c.iter().filter(|&&x| x > SCHMIDT_ZERO).count() <= 1 {
            StandardClass::Separable
        } else {
            StandardClass::Entangled
        };
    }
    match (ppt.verdict, ppt.conclusiveness) {
        (PptVerdict::Npt, _) => StandardClass::Entangled,
        (PptVerdict::Ppt, "conclusive") => StandardClass::Separable,
        (PptVerdict::Ppt, _) => StandardClass::Undetermined,
    }
}

fn divergences(standard: StandardClass, classification: Classification, is_pure: bool) -> Vec<String> {
    let mut out = Vec::new();
    match (standard, classification) {
        (StandardClass::Separable, Classification::Weak | Classification::Strong) => {
            out.push(format!("standard-separable but classified {classification}"));
        }
        (StandardClass::Entangled, Classification::Separable) => {
            out.push("standard-entangled but classified Separable".to_string());
        }
        (StandardClass::Entangled, Classification::Weak) if is_pure => {
            out.push("standard-entangled pure state but classified Weak".to_string());
        }
        _ => {}
    }
    out
}

pub fn compare_with_standard(
    rho: &DensityOperator,
    family: &ContextFamily,
    tol: &Tolerances,
) -> Result<ComparisonReport> {
    let (d1, d2) = rho.bipartite_dims()?;
    let verdict = classify_entanglement(rho, family, tol)?;

    let ppt_raw = ppt_check(rho, 0, tol)?;
    let ppt = PptSummary {
        verdict: ppt_raw.verdict,
        min_eigenvalue: ppt_raw.min_eigenvalue,
        conclusiveness: if ppt_raw.conclusive {
            "conclusive"
        } else {
            "necessary-only"
        },
    };
    let is_pure = rho.is_pure(tol);
    let schmidt_coefficients = if is_pure {
        let psi = PureState::normalized(rho.matrix().eigh().vectors.swap_remove(0))?;
        Some(schmidt(&psi, (d1, d2))?.coefficients)
    } else {
        None
    };
    let marginals = rho.partial_trace(0)?.tensor(&rho.partial_trace(1)?);
    let is_product = rho.matrix().max_abs_diff(marginals.matrix()) <= tol.recon;
    let standard = standard_class(&ppt, is_product, schmidt_coefficients.as_deref());

    let nodes = report_nodes(rho, d1, d2)?;
    let cap = nodes.len().max(DEFAULT_MAX_NODES);
    let graph = build_power_graph_with(nodes, tol.commutation, cap)?;
    let psa = psa_from_state(rho, &graph, tol)?;

    let effective = &verdict.effective;
    let first_failure = effective.first_failure.map(|k| {
        let e = &effective.entries[k];
        let reason = match &e.check {
            PartnerCheck::Uncorrelated { reason } => reason.clone(),
            PartnerCheck::Correlated(_) => String::new(),
        };
        FailureSummary {
            entry: k,
            provenance: e.provenance.clone(),
            reason,
        }
    });

    Ok(ComparisonReport {
        schema_version: REPORT_SCHEMA_VERSION,
        factor_dims: rho.factor_dims().to_vec(),
        purity: rho.purity(),
        is_pure,
        is_product,
        divergences: divergences(standard, verdict.classification, is_pure),
        ppt,
        standard_class: standard,
        schmidt_coefficients,
        classification: verdict.classification,
        intensive: IntensiveSummary {
            related: verdict.intensive.related,
            spectrum_1: verdict.intensive.spectrum_1.clone(),
            spectrum_2: verdict.intensive.spectrum_2.clone(),
            max_deviation: verdict.intensive.max_deviation,
            note: verdict.intensive.note.clone(),
        },
        effective: EffectiveSummary {
            related: effective.related,
            contexts_checked: effective.entries.len(),
            contexts_correlated: effective.entries.iter().filter(|e| e.check.is_correlated()).count(),
            first_failure,
            analytic: effective.analytic.clone(),
        },
        epr_certain_nodes: psa.certain_nodes(tol.valuation),
        psa_table: psa.rows(),
        psa_graph_fingerprint: graph.fingerprint().to_string(),
        family_fingerprint: verdict.family_fingerprint,
        family_size: verdict.family_size,
        tolerances: *tol,
    })
}
