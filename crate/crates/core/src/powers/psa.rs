use serde::Serialize;

use super::{Context, PowerGraph};
use crate::error::{Error, Result};
use crate::io::projector_fingerprint;
use crate::state::{born_with, clamp_probability, DensityOperator};
use crate::tolerance::Tolerances;

/// Potential state of affairs: a potentia in `[0, 1]` for every node.
#[derive(Debug, Clone)]
pub struct Psa<'g> {
    graph: &'g PowerGraph,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PsaRow {
    pub node_index: usize,
    pub vector_fingerprint: String,
    pub potentia: f64,
}

impl<'g> Psa<'g> {
    /// Wraps externally supplied values, clamping inside the `psd` band.
    pub fn new(graph: &'g PowerGraph, values: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if values.len() != graph.len() {
            return Err(Error::DimensionMismatch {
                context: "PSA value count vs graph nodes",
                expected: graph.len(),
                actual: values.len(),
            });
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                if !v.is_finite() {
                    return Err(Error::Validation(format!("PSA value for node {i} is not finite")));
                }
                clamp_probability(v, tol)
                    .map_err(|_| Error::Validation(format!("PSA value {v} for node {i} lies outside [0, 1]")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { graph, values })
    }

    pub fn graph(&self) -> &'g PowerGraph {
        self.graph
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, node: usize) -> f64 {
        self.values[node]
    }

    pub fn context_sum(&self, c: &Context) -> f64 {
        c.nodes.iter().map(|&i| self.values[i]).sum()
    }

    /// Largest `|Σ_C Ψ − 1|` over the identity-resolving contexts given.
    pub fn max_normalization_defect(&self, contexts: &[Context]) -> f64 {
        contexts
            .iter()
            .filter(|c| c.resolves_identity)
            .map(|c| (self.context_sum(c) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Nodes whose potentia is 1 within `tol`.
    pub fn certain_nodes(&self, tol: f64) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i] >= 1.0 - tol)
            .collect()
    }

    pub fn rows(&self) -> Vec<PsaRow> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| PsaRow {
                node_index: i,
                vector_fingerprint: projector_fingerprint(&self.graph.nodes()[i]),
                potentia: v,
            })
            .collect()
    }

    /// CSV dump with header `node_index,vector_fingerprint,potentia`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in self.rows() {
            w.serialize(row).expect("in-memory CSV write");
        }
        String::from_utf8(w.into_inner().expect("flush to Vec")).expect("CSV is UTF-8")
    }
}

/// Born-rule potentia for every node of `g`.
pub fn psa_from_state<'g>(rho: &DensityOperator, g: &'g PowerGraph, tol: &Tolerances) -> Result<Psa<'g>> {
    if !g.is_empty() && g.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "PSA state vs graph dimension",
            expected: g.dim(),
            actual: rho.dim(),
        });
    }
    let values = g
        .nodes()
        .iter()
        .map(|p| born_with(rho, p, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Psa { graph: g, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::random_haar_basis;
    use crate::powers::{build_power_graph, enumerate_maximal_contexts};
    use crate::state::{basis_projectors, bell_state, computational_basis, PureState};

    #[test]
    fn mixed_state_is_flat() {
        let mut nodes = basis_projectors(&computational_basis(2));
        nodes.extend(basis_projectors(&random_haar_basis(2, 3)));
        let g = build_power_graph(nodes, 1e-9).unwrap();
        let tol = Tolerances::default();
        let psa = psa_from_state(&DensityOperator::maximally_mixed(2), &g, &tol).unwrap();
        assert!(psa.values().iter().all(|v| (v - 0.5).abs() < 1e-15));
        let cs = enumerate_maximal_contexts(&g, &tol);
        assert!(psa.max_normalization_defect(&cs) < 2e-9);
    }

    #[test]
    fn basis_state_table() {
        let g = build_power_graph(basis_projectors(&computational_basis(2)), 1e-9).unwrap();
        let rho = DensityOperator::from_ket(&PureState::basis(2, 0));
        let psa = psa_from_state(&rho, &g, &Tolerances::default()).unwrap();
        assert_eq!(psa.values(), &[1.0, 0.0]);
        assert_eq!(psa.certain_nodes(1e-9), vec![0]);
    }

    #[test]
    fn bell_on_product_basis() {
        let g = build_power_graph(basis_projectors(&computational_basis(4)), 1e-9).unwrap();
        let psa = psa_from_state(&bell_state(), &g, &Tolerances::default()).unwrap();
        assert_eq!(psa.values(), &[0.5, 0.0, 0.0, 0.5]);
        let csv = psa.to_csv();
        assert!(csv.starts_with("node_index,vector_fingerprint,potentia\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn dimension_mismatch() {
        let g = build_power_graph(basis_projectors(&computational_basis(3)), 1e-9).unwrap();
        let err = psa_from_state(&bell_state(), &g, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn external_values_are_range_checked() {
        let g = build_power_graph(basis_projectors(&computational_basis(2)), 1e-9).unwrap();
        let tol = Tolerances::default();
        assert!(Psa::new(&g, vec![1.2, -0.2], &tol).is_err());
        assert!(Psa::new(&g, vec![1.0], &tol).is_err());
        assert_eq!(Psa::new(&g, vec![1.0 + 1e-12, 0.0], &tol).unwrap().value(0), 1.0);
    }
}
