use serde::Serialize;

use crate::error::{Error, Result};
use crate::haar::random_haar_basis;
use crate::io::node_set_fingerprint;
use crate::linalg::{self, ComplexMatrix};
use crate::state::{basis_projectors, computational_basis, fourier_basis, DensityOperator, Projector, PureState};
use crate::tolerance::Tolerances;

pub const DEFAULT_HAAR_CONTEXTS: usize = 20;
pub const DEFAULT_FAMILY_SEED: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    CanonicalComputational,
    ReducedEigenbasis,
    Fourier,
    Haar {
        seed: u64,
    },
    /// Supplied by the caller.
    Explicit,
}

#[derive(Debug, Clone)]
pub struct FamilyEntry {
    pub basis: Vec<PureState>,
    pub provenance: Provenance,
}

/// Finite list of side-1 orthonormal bases standing in for "every context"
/// of the first power graph.
#[derive(Debug, Clone)]
pub struct ContextFamily {
    entries: Vec<FamilyEntry>,
    dim: usize,
    fingerprint: String,
}

impl ContextFamily {
    pub fn new(entries: Vec<FamilyEntry>, tol: &Tolerances) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(Error::Validation("context family is empty".into()));
        };
        let dim = first.basis.first().map_or(0, PureState::dim);
        for (k, e) in entries.iter().enumerate() {
            if e.basis.len() != dim || e.basis.iter().any(|v| v.dim() != dim) {
                return Err(Error::Validation(format!(
                    "context family entry {k} is not a complete basis of dimension {dim}"
                )));
            }
            let vecs: Vec<_> = e.basis.iter().map(|v| v.amplitudes().to_vec()).collect();
            let defect = linalg::orthonormality_defect(&vecs);
            if defect > tol.norm.max(1e-9) {
                return Err(Error::Validation(format!(
                    "context family entry {k} does not resolve the identity (orthonormality defect {defect:.3e})"
                )));
            }
        }
        let projectors: Vec<Projector> = entries.iter().flat_map(|e| basis_projectors(&e.basis)).collect();
        let fingerprint = node_set_fingerprint(&projectors);
        Ok(Self {
            entries,
            dim,
            fingerprint,
        })
    }

    /// Computational, reduced-eigenbasis and Fourier bases of side 1, then
    /// `haar_count` Haar bases seeded `seed, seed + 1, …`.
    pub fn default_for(rho: &DensityOperator, haar_count: usize, seed: u64, tol: &Tolerances) -> Result<Self> {
        let (d1, _) = rho.bipartite_dims()?;
        let reduced = rho.partial_trace(0)?;
        let eigenbasis = reduced
            .matrix()
            .eigh()
            .vectors
            .into_iter()
            .map(PureState::normalized)
            .collect::<Result<Vec<_>>>()?;
        let mut entries = vec![
            FamilyEntry {
                basis: computational_basis(d1),
                provenance: Provenance::CanonicalComputational,
            },
            FamilyEntry {
                basis: eigenbasis,
                provenance: Provenance::ReducedEigenbasis,
            },
            FamilyEntry {
                basis: fourier_basis(d1),
                provenance: Provenance::Fourier,
            },
        ];
        for k in 0..haar_count {
            let s = seed.wrapping_add(k as u64);
            entries.push(FamilyEntry {
                basis: random_haar_basis(d1, s),
                provenance: Provenance::Haar { seed: s },
            });
        }
        Self::new(entries, tol)
    }

    pub fn entries(&self) -> &[FamilyEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Maps every basis vector through `unitary`, keeping provenance tags.
    pub fn transformed(&self, unitary: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| FamilyEntry {
                basis: e.basis.iter().map(|v| v.apply(unitary)).collect(),
                provenance: e.provenance.clone(),
            })
            .collect();
        Self::new(entries, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::bell_state;

    #[test]
    fn default_family_layout() {
        let tol = Tolerances::default();
        let f = ContextFamily::default_for(&bell_state(), 20, 5, &tol).unwrap();
        assert_eq!(f.len(), 23);
        assert_eq!(f.entries()[0].provenance, Provenance::CanonicalComputational);
        assert_eq!(f.entries()[22].provenance, Provenance::Haar { seed: 24 });
        let again = ContextFamily::default_for(&bell_state(), 20, 5, &tol).unwrap();
        assert_eq!(f.fingerprint(), again.fingerprint());
        let other = ContextFamily::default_for(&bell_state(), 20, 6, &tol).unwrap();
        assert_ne!(f.fingerprint(), other.fingerprint());
    }

    #[test]
    fn rejects_incomplete_entries() {
        let tol = Tolerances::default();
        assert!(ContextFamily::new(Vec::new(), &tol).is_err());
        let partial = FamilyEntry {
            basis: vec![PureState::basis(2, 0), PureState::basis(2, 0)],
            provenance: Provenance::Explicit,
        };
        assert!(ContextFamily::new(vec![partial], &tol).is_err());
    }
}
