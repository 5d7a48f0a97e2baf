use serde::Serialize;

use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::powers::Psa;
use crate::state::DensityOperator;
use crate::tolerance::Tolerances;

/// Spectral witness for an intensive relation between the two reduced PSAs.
///
/// Equal spectra are exactly the condition for a unitary `U` with
/// `ρ₂ = U ρ₁ U†`, and `P ↦ U P U†` is then a valuation-preserving
/// isomorphism of the two power graphs.
#[derive(Debug, Clone, Serialize)]
pub struct IntensiveWitness {
    pub related: bool,
    pub spectrum_1: Vec<f64>,
    pub spectrum_2: Vec<f64>,
    /// Largest gap between matched eigenvalues; `None` for unequal dims.
    pub max_deviation: Option<f64>,
    /// `matching[i]` is the side-2 eigenvector paired with side-1 eigenvector
    /// `i` (both spectra sorted descending, so this is the identity).
    pub matching: Vec<usize>,
    #[serde(skip)]
    pub unitary: Option<ComplexMatrix>,
    pub note: Option<String>,
}

pub fn intensive_related(rho: &DensityOperator, tol: &Tolerances) -> Result<IntensiveWitness> {
    let (d1, d2) = rho.bipartite_dims()?;
    let r1 = rho.partial_trace(0)?;
    let r2 = rho.partial_trace(1)?;
    let e1 = r1.matrix().eigh();
    let e2 = r2.matrix().eigh();
    if d1 != d2 {
        return Ok(IntensiveWitness {
            related: false,
            spectrum_1: e1.values,
            spectrum_2: e2.values,
            max_deviation: None,
            matching: Vec::new(),
            unitary: None,
            note: Some(format!(
                "factor dimensions {d1} and {d2} differ; no isomorphism between rank-1 power graphs"
            )),
        });
    }
    let max_deviation = e1
        .values
        .iter()
        .zip(&e2.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let related = max_deviation <= tol.relation;
    let unitary = related.then(|| {
        // U = Σ |f_i⟩⟨e_i|
        let mut u = ComplexMatrix::zeros(d1, d1);
        for (e, f) in e1.vectors.iter().zip(&e2.vectors) {
            u = &u + &ComplexMatrix::outer(f, e);
        }
        u
    });
    Ok(IntensiveWitness {
        related,
        spectrum_1: e1.values,
        spectrum_2: e2.values,
        max_deviation: Some(max_deviation),
        matching: (0..d1).collect(),
        unitary,
        note: None,
    })
}

/// Result of the exact isomorphism search between two finite PSAs.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteIsomorphism {
    pub related: bool,
    /// `mapping[i]` is the node of graph 2 that node `i` of graph 1 maps to.
    pub mapping: Option<Vec<usize>>,
    /// The value multisets already differed, so no search ran.
    pub prefiltered: bool,
    pub search_nodes: u64,
}

impl FiniteIsomorphism {
    fn rejected() -> Self {
        Self {
            related: false,
            mapping: None,
            prefiltered: true,
            search_nodes: 0,
        }
    }
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Backtracking search for a graph isomorphism `τ` with
/// `Ψ₂(τ(P)) = Ψ₁(P)` and adjacency preserved in both directions.
pub fn intensive_related_finite(psa1: &Psa<'_>, psa2: &Psa<'_>, tol: &Tolerances) -> FiniteIsomorphism {
    let (g1, g2) = (psa1.graph(), psa2.graph());
    let n = g1.len();
    if n != g2.len() || g1.edge_count() != g2.edge_count() {
        return FiniteIsomorphism::rejected();
    }
    let eps = tol.valuation;
    let (s1, s2) = (sorted(psa1.values()), sorted(psa2.values()));
    if s1.iter().zip(&s2).any(|(a, b)| (a - b).abs() > eps) {
        return FiniteIsomorphism::rejected();
    }
    let mut deg1: Vec<usize> = (0..n).map(|i| g1.degree(i)).collect();
    let mut deg2: Vec<usize> = (0..n).map(|i| g2.degree(i)).collect();
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| deg1[i] == deg2[j] && (psa1.value(i) - psa2.value(j)).abs() <= eps)
                .collect()
        })
        .collect();
    deg1.sort_unstable();
    deg2.sort_unstable();
    if deg1 != deg2 || candidates.iter().any(Vec::is_empty) {
        return FiniteIsomorphism::rejected();
    }
    // most constrained nodes first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));

    struct State<'a> {
        g1: &'a crate::powers::PowerGraph,
        g2: &'a crate::powers::PowerGraph,
        order: Vec<usize>,
        candidates: Vec<Vec<usize>>,
        mapping: Vec<Option<usize>>,
        used: Vec<bool>,
        visited: u64,
    }

    fn extend(s: &mut State<'_>, depth: usize) -> bool {
        if depth == s.order.len() {
            return true;
        }
        let i = s.order[depth];
        for k in 0..s.candidates[i].len() {
            let j = s.candidates[i][k];
            if s.used[j] {
                continue;
            }
            s.visited += 1;
            let consistent = s.order[..depth].iter().all(|&prev| {
                let pj = s.mapping[prev].expect("mapped earlier");
                s.g1.adjacent(i, prev) == s.g2.adjacent(j, pj)
            });
            if !consistent {
                continue;
            }
            s.mapping[i] = Some(j);
            s.used[j] = true;
            if extend(s, depth + 1) {
                return true;
            }
            s.mapping[i] = None;
            s.used[j] = false;
        }
        false
    }

    let mut state = State {
        g1,
        g2,
        order,
        candidates,
        mapping: vec![None; n],
        used: vec![false; n],
        visited: 0,
    };
    let found = extend(&mut state, 0);
    FiniteIsomorphism {
        related: found,
        mapping: found.then(|| state.mapping.iter().map(|m| m.expect("complete")).collect()),
        prefiltered: false,
        search_nodes: state.visited,
    }
}

/// `‖U ρ₁ U† − ρ₂‖` for a witness unitary.
pub fn witness_residual(rho1: &DensityOperator, rho2: &DensityOperator, unitary: &ComplexMatrix) -> f64 {
    rho1.conjugate_by(unitary).matrix().max_abs_diff(rho2.matrix())
}
