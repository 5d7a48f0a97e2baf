use serde::Serialize;

use super::PowerGraph;
use crate::linalg::ComplexMatrix;
use crate::tolerance::Tolerances;

/// Complete subgraph of a power graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Context {
    /// Sorted node indices.
    pub nodes: Vec<usize>,
    pub is_maximal: bool,
    /// `Σ Pᵢ = I` over the context.
    pub resolves_identity: bool,
}

impl Context {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }

    /// Wraps an arbitrary node list, checking completeness and identity
    /// resolution; `None` if the nodes are not pairwise adjacent.
    pub fn from_nodes(g: &PowerGraph, mut nodes: Vec<usize>, tol: &Tolerances) -> Option<Self> {
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.iter().any(|&n| n >= g.len()) {
            return None;
        }
        for (k, &i) in nodes.iter().enumerate() {
            if nodes[k + 1..].iter().any(|&j| !g.adjacent(i, j)) {
                return None;
            }
        }
        let resolves_identity = resolves_identity(g, &nodes, tol);
        let is_maximal = (0..g.len()).all(|v| nodes.contains(&v) || nodes.iter().any(|&u| !g.adjacent(u, v)));
        Some(Self {
            nodes,
            is_maximal,
            resolves_identity,
        })
    }
}

fn resolves_identity(g: &PowerGraph, nodes: &[usize], tol: &Tolerances) -> bool {
    let d = g.dim();
    if nodes.is_empty() {
        return false;
    }
    let mut sum = ComplexMatrix::zeros(d, d);
    for &i in nodes {
        sum = &sum + g.nodes()[i].matrix();
    }
    sum.max_abs_diff(&ComplexMatrix::identity(d)) <= tol.recon
}

/// Fixed-width bitset over node indices.
#[derive(Clone, PartialEq, Eq)]
struct NodeSet(Vec<u64>);

impl NodeSet {
    fn empty(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn or(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(k, &w)| (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| k * 64 + b))
    }
}

/// All maximal cliques of `g`, Bron–Kerbosch with Tomita pivoting, in
/// lexicographic order of their sorted node lists.
pub fn enumerate_maximal_contexts(g: &PowerGraph, tol: &Tolerances) -> Vec<Context> {
    let n = g.len();
    if n == 0 {
        return Vec::new();
    }
    let neighbors: Vec<NodeSet> = (0..n)
        .map(|i| {
            let mut s = NodeSet::empty(n);
            for j in g.neighbors(i) {
                s.insert(j);
            }
            s
        })
        .collect();
    let mut cliques = Vec::new();
    bron_kerbosch(
        &neighbors,
        &mut Vec::new(),
        NodeSet::full(n),
        NodeSet::empty(n),
        &mut cliques,
    );
    for c in &mut cliques {
        c.sort_unstable();
    }
    cliques.sort();
    cliques
        .into_iter()
        .map(|nodes| Context {
            resolves_identity: resolves_identity(g, &nodes, tol),
            nodes,
            is_maximal: true,
        })
        .collect()
}

fn bron_kerbosch(neighbors: &[NodeSet], r: &mut Vec<usize>, mut p: NodeSet, mut x: NodeSet, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let union = p.or(&x);
    let pivot = union
        .iter()
        .max_by_key(|&u| (p.and(&neighbors[u]).count(), std::cmp::Reverse(u)))
        .expect("P ∪ X is non-empty");
    let candidates: Vec<usize> = p.and_not(&neighbors[pivot]).iter().collect();
    for v in candidates {
        r.push(v);
        bron_kerbosch(neighbors, r, p.and(&neighbors[v]), x.and(&neighbors[v]), out);
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}
