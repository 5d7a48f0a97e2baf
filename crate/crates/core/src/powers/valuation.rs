use serde::Serialize;

use super::{enumerate_maximal_contexts, Context, PowerGraph};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Global `{0,1}` assignment: exactly one true node in every identity-resolving
/// maximal context, at most one in every other maximal context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryValuation {
    pub values: Vec<u8>,
}

impl BinaryValuation {
    pub fn true_nodes(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] == 1).collect()
    }

    /// Checks the constraints against `contexts`.
    pub fn satisfies(&self, contexts: &[Context]) -> bool {
        contexts.iter().all(|c| {
            let ones = c.nodes.iter().filter(|&&i| self.values[i] == 1).count();
            if c.resolves_identity {
                ones == 1
            } else {
                ones <= 1
            }
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Branching decisions taken.
    pub decisions: u64,
    /// Dead ends reached.
    pub backtracks: u64,
    /// Values fixed by propagation.
    pub propagations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KsOutcome {
    Found {
        valuation: BinaryValuation,
    },
    /// The search tree was exhausted without a satisfying assignment.
    Exhausted,
}

/// Double-counting obstruction: an odd number of identity-resolving
/// contexts, each needing one true node, while every node lies in an even
/// number of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityCheck {
    pub resolving_contexts: usize,
    pub incidence_counts: Vec<usize>,
    pub obstructed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KsReport {
    pub outcome: KsOutcome,
    pub stats: SearchStats,
    pub parity: ParityCheck,
    pub maximal_contexts: usize,
    pub resolving_contexts: usize,
    pub graph_fingerprint: String,
}

pub fn parity_check(node_count: usize, contexts: &[Context]) -> ParityCheck {
    let mut incidence_counts = vec![0; node_count];
    let resolving: Vec<&Context> = contexts.iter().filter(|c| c.resolves_identity).collect();
    for c in &resolving {
        for &i in &c.nodes {
            incidence_counts[i] += 1;
        }
    }
    let obstructed = resolving.len() % 2 == 1 && incidence_counts.iter().all(|k| k % 2 == 0);
    ParityCheck {
        resolving_contexts: resolving.len(),
        incidence_counts,
        obstructed,
    }
}

struct Search<'a> {
    contexts: &'a [Context],
    /// Contexts each node belongs to.
    memberships: Vec<Vec<usize>>,
    neighbors: Vec<Vec<usize>>,
    assignment: Vec<Option<bool>>,
    trail: Vec<usize>,
    stats: SearchStats,
}

impl Search<'_> {
    fn assign(&mut self, node: usize, value: bool) -> bool {
        match self.assignment[node] {
            Some(v) => v == value,
            None => {
                self.assignment[node] = Some(value);
                self.trail.push(node);
                true
            }
        }
    }

    /// Unit propagation to a fixed point; `false` on conflict.
    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(node) = queue.pop() {
            if self.assignment[node] == Some(true) {
                for k in 0..self.neighbors[node].len() {
                    let nb = self.neighbors[node][k];
                    match self.assignment[nb] {
                        Some(true) => return false,
                        Some(false) => {}
                        None => {
                            self.assign(nb, false);
                            self.stats.propagations += 1;
                            queue.push(nb);
                        }
                    }
                }
            }
            for k in 0..self.memberships[node].len() {
                let c = &self.contexts[self.memberships[node][k]];
                if !c.resolves_identity {
                    continue;
                }
                let mut open = None;
                let mut open_count = 0;
                let mut has_true = false;
                for &i in &c.nodes {
                    match self.assignment[i] {
                        Some(true) => has_true = true,
                        Some(false) => {}
                        None => {
                            open_count += 1;
                            open = Some(i);
                        }
                    }
                }
                if has_true {
                    continue;
                }
                match (open_count, open) {
                    (0, _) => return false,
                    (1, Some(i)) => {
                        self.assign(i, true);
                        self.stats.propagations += 1;
                        queue.push(i);
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let n = self.trail.pop().expect("trail longer than mark");
            self.assignment[n] = None;
        }
    }

    fn solve(&mut self) -> bool {
        let Some(node) = self.assignment.iter().position(Option::is_none) else {
            return true;
        };
        for value in [true, false] {
            self.stats.decisions += 1;
            let mark = self.trail.len();
            if self.assign(node, value) && self.propagate(vec![node]) && self.solve() {
                return true;
            }
            self.stats.backtracks += 1;
            self.undo_to(mark);
        }
        false
    }
}

/// Backtracking search for a global binary valuation over the maximal
/// contexts of `g`, trying `true` before `false` in node order.
pub fn find_global_binary_valuation(g: &PowerGraph, tol: &Tolerances) -> Result<KsReport> {
    let contexts = enumerate_maximal_contexts(g, tol);
    let resolving = contexts.iter().filter(|c| c.resolves_identity).count();
    if resolving == 0 {
        return Err(Error::Unsupported(
            "no maximal context resolves the identity; the exactly-one rule has nothing to constrain".into(),
        ));
    }
    let n = g.len();
    let mut memberships = vec![Vec::new(); n];
    for (k, c) in contexts.iter().enumerate() {
        for &i in &c.nodes {
            memberships[i].push(k);
        }
    }
    let mut search = Search {
        contexts: &contexts,
        memberships,
        neighbors: (0..n).map(|i| g.neighbors(i).collect()).collect(),
        assignment: vec![None; n],
        trail: Vec::new(),
        stats: SearchStats::default(),
    };
    let outcome = if search.solve() {
        let values = search
            .assignment
            .iter()
            .map(|v| u8::from(v.expect("complete assignment")))
            .collect();
        let valuation = BinaryValuation { values };
        if !valuation.satisfies(&contexts) {
            return Err(Error::Consistency(
                "search returned an assignment violating a context".into(),
            ));
        }
        KsOutcome::Found { valuation }
    } else {
        KsOutcome::Exhausted
    };
    Ok(KsReport {
        outcome,
        stats: search.stats,
        parity: parity_check(n, &contexts),
        maximal_contexts: contexts.len(),
        resolving_contexts: resolving,
        graph_fingerprint: g.fingerprint().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::random_haar_basis;
    use crate::powers::build_power_graph;
    use crate::state::{basis_projectors, computational_basis, fourier_basis, Projector};

    #[test]
    fn single_basis_has_valuation_with_first_node_true() {
        let g = build_power_graph(basis_projectors(&computational_basis(4)), 1e-9).unwrap();
        let r = find_global_binary_valuation(&g, &Tolerances::default()).unwrap();
        match r.outcome {
            KsOutcome::Found { valuation } => assert_eq!(valuation.values, vec![1, 0, 0, 0]),
            KsOutcome::Exhausted => panic!("single basis must be colourable"),
        }
        assert!(!r.parity.obstructed);
    }

    #[test]
    fn disjoint_bases_are_colourable() {
        let mut nodes = basis_projectors(&computational_basis(3));
        nodes.extend(basis_projectors(&random_haar_basis(3, 11)));
        let g = build_power_graph(nodes, 1e-9).unwrap();
        let r = find_global_binary_valuation(&g, &Tolerances::default()).unwrap();
        let KsOutcome::Found { valuation } = r.outcome else {
            panic!("expected a valuation");
        };
        assert_eq!(valuation.true_nodes().len(), 2);
    }

    #[test]
    fn no_resolving_context_is_unsupported() {
        let nodes = vec![
            Projector::from_state(&computational_basis(3)[0]),
            Projector::from_state(&fourier_basis(3)[1]),
        ];
        let g = build_power_graph(nodes, 1e-9).unwrap();
        assert!(matches!(
            find_global_binary_valuation(&g, &Tolerances::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn parity_on_synthetic_incidence() {
        let ctx = |nodes: Vec<usize>| Context {
            nodes,
            is_maximal: true,
            resolves_identity: true,
        };
        // triangle of three 2-node contexts: odd count, every node twice
        let p = parity_check(3, &[ctx(vec![0, 1]), ctx(vec![1, 2]), ctx(vec![0, 2])]);
        assert!(p.obstructed);
        let p = parity_check(4, &[ctx(vec![0, 1]), ctx(vec![2, 3])]);
        assert!(!p.obstructed);
    }
}
