//! Power graphs: rank-1 projectors joined by the commutation relation.
//!
//! Nodes stand for immanent powers, contexts are complete subgraphs, and a
//! [`Psa`] assigns each node its Born-rule potentia. Every graph here is a
//! finite sample of the full graph of a Hilbert space, so verdicts derived
//! from it carry the node-set fingerprint.

mod contexts;
mod effective;
mod psa;
mod reconstruct;
mod valuation;

pub use contexts::{enumerate_maximal_contexts, Context};
pub use effective::{sample_effective_valuation, EffectiveValuation};
pub use psa::{psa_from_state, Psa, PsaRow};
pub use reconstruct::{reconstruct_state, Reconstruction};
pub use valuation::{
    find_global_binary_valuation, parity_check, BinaryValuation, KsOutcome, KsReport, ParityCheck, SearchStats,
};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::node_set_fingerprint;
use crate::state::Projector;
use crate::tolerance::Tolerances;

pub const DEFAULT_MAX_NODES: usize = 64;

#[derive(Debug, Clone)]
pub struct PowerGraph {
    nodes: Vec<Projector>,
    adjacency: Vec<Vec<bool>>,
    commutation_tolerance: f64,
    fingerprint: String,
}

impl PowerGraph {
    pub fn nodes(&self) -> &[Projector] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Hilbert-space dimension shared by all nodes (0 for an empty graph).
    pub fn dim(&self) -> usize {
        self.nodes.first().map_or(0, Projector::dim)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i]
            .iter()
            .enumerate()
            .filter(move |&(j, &a)| a && j != i)
            .map(|(j, _)| j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).count()
    }

    pub fn commutation_tolerance(&self) -> f64 {
        self.commutation_tolerance
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn edge_count(&self) -> usize {
        (0..self.len()).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    /// Recomputes every commutator and compares with the stored relation.
    pub fn verify_adjacency(&self) -> bool {
        self.adjacency == compute_adjacency(&self.nodes, self.commutation_tolerance)
    }
}

fn compute_adjacency(nodes: &[Projector], tol: f64) -> Vec<Vec<bool>> {
    let n = nodes.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let commuting: Vec<bool> = pairs
        .par_iter()
        .map(|&(i, j)| nodes[i].matrix().commutator(nodes[j].matrix()).frobenius_norm() <= tol)
        .collect();
    let mut adj = vec![vec![false; n]; n];
    for (i, row) in adj.iter_mut().enumerate() {
        row[i] = true;
    }
    for (&(i, j), &c) in pairs.iter().zip(&commuting) {
        adj[i][j] = c;
        adj[j][i] = c;
    }
    adj
}

/// Builds the commutation graph with the default node cap.
pub fn build_power_graph(projectors: Vec<Projector>, tol: f64) -> Result<PowerGraph> {
    build_power_graph_with(projectors, tol, DEFAULT_MAX_NODES)
}

pub fn build_power_graph_with(projectors: Vec<Projector>, tol: f64, max_nodes: usize) -> Result<PowerGraph> {
    if projectors.len() > max_nodes {
        return Err(Error::Unsupported(format!(
            "power graph has {} nodes, above the cap of {max_nodes}",
            projectors.len()
        )));
    }
    if let Some(first) = projectors.first() {
        let dim = first.dim();
        for p in &projectors {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "power graph node dimension",
                    expected: dim,
                    actual: p.dim(),
                });
            }
            if p.rank() != 1 {
                return Err(Error::Unsupported(format!(
                    "power graph nodes must be rank-1 projectors, got rank {}",
                    p.rank()
                )));
            }
        }
    }
    let eps = Tolerances::default().norm;
    for i in 0..projectors.len() {
        for j in 0..i {
            if projectors[i].matrix().max_abs_diff(projectors[j].matrix()) <= eps {
                return Err(Error::Validation(format!(
                    "power graph: nodes {j} and {i} are the same projector"
                )));
            }
        }
    }
    let adjacency = compute_adjacency(&projectors, tol);
    let fingerprint = node_set_fingerprint(&projectors);
    Ok(PowerGraph {
        nodes: projectors,
        adjacency,
        commutation_tolerance: tol,
        fingerprint,
    })
}
