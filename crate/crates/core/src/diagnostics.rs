//! Orthodox entanglement diagnostics: Schmidt decomposition, partial
//! transpose, trace distance.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ZERO};
use crate::state::{DensityOperator, PureState};
use crate::tolerance::Tolerances;

/// `v = Σ λᵢ |lᵢ⟩|rᵢ⟩` with `λ` descending.
#[derive(Debug, Clone, Serialize)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    #[serde(skip)]
    pub left_basis: Vec<Vec<Complex64>>,
    #[serde(skip)]
    pub right_basis: Vec<Vec<Complex64>>,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let d1 = self.left_basis.first().map_or(0, Vec::len);
        let d2 = self.right_basis.first().map_or(0, Vec::len);
        let mut v = vec![ZERO; d1 * d2];
        for ((lambda, l), r) in self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis) {
            for (x, t) in v.iter_mut().zip(linalg::kron_vec(l, r)) {
                *x += t * *lambda;
            }
        }
        v
    }

    pub fn schmidt_rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c > tol).count()
    }
}

pub fn schmidt(v: &PureState, split: (usize, usize)) -> Result<SchmidtDecomposition> {
    let (d1, d2) = split;
    if d1 * d2 != v.dim() {
        return Err(Error::DimensionMismatch {
            context: "schmidt split d1*d2",
            expected: v.dim(),
            actual: d1 * d2,
        });
    }
    let amps = v.amplitudes();
    let m = ComplexMatrix::from_vec(d1, d2, amps.to_vec())?;
    let eig = (&m * &m.adjoint()).eigh();
    let k = d1.min(d2);
    let left: Vec<Vec<Complex64>> = eig.vectors[..k].to_vec();
    let mt = m.transpose();
    let mut right: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    let mut coefficients = Vec::with_capacity(k);
    for l in &left {
        let conj: Vec<Complex64> = l.iter().map(|z| z.conj()).collect();
        let mut r = mt.matvec(&conj);
        coefficients.push(linalg::norm(&r));
        for _ in 0..2 {
            for q in &right {
                let proj = linalg::inner(q, &r);
                for (x, y) in r.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        let n = linalg::norm(&r);
        if n > 1e-300 && coefficients.last().is_some_and(|&c| n > 1e-6 * c) {
            right.push(r.into_iter().map(|z| z / n).collect());
        } else {
            let completed = linalg::complete_basis(&right, d2);
            right.push(completed[right.len()].clone());
        }
    }
    Ok(SchmidtDecomposition {
        coefficients,
        left_basis: left,
        right_basis: right,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PptVerdict {
    Ppt,
    Npt,
}

#[derive(Debug, Clone, Serialize)]
pub struct PptResult {
    pub verdict: PptVerdict,
    pub min_eigenvalue: f64,
    /// PPT is necessary and sufficient for separability only when
    /// `d_A · d_B ≤ 6`.
    pub conclusive: bool,
}

/// Partial transpose on the second block of a `d_a ⊗ d_b` matrix.
pub fn partial_transpose_second(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(da * db, da * db);
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    out[(a * db + b, a2 * db + b2)] = m[(a * db + b2, a2 * db + b)];
                }
            }
        }
    }
    out
}

/// Peres–Horodecki test with the factors grouped as `[0..=split_after]` and
/// the rest.
pub fn ppt_check(rho: &DensityOperator, split_after: usize, tol: &Tolerances) -> Result<PptResult> {
    let (da, db) = rho.bipartition(split_after)?;
    let pt = partial_transpose_second(rho.matrix(), da, db);
    let min_eigenvalue = pt.eigenvalues_hermitian().last().copied().unwrap_or(0.0);
    Ok(PptResult {
        verdict: if min_eigenvalue < -tol.psd {
            PptVerdict::Npt
        } else {
            PptVerdict::Ppt
        },
        min_eigenvalue,
        conclusive: da * db <= 6,
    })
}

/// `½ ‖ρ − σ‖₁`.
pub fn trace_distance(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    0.5 * (rho - sigma)
        .eigenvalues_hermitian()
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::state::{bell_state, convex_mix};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn schmidt_of_bell_vector() {
        let v = PureState::normalized(vec![ONE, ZERO, ZERO, ONE]).unwrap();
        let s = schmidt(&v, (2, 2)).unwrap();
        for c in &s.coefficients {
            assert!((c - FRAC_1_SQRT_2).abs() < 1e-14);
        }
        assert!(
            linalg::norm(
                &(0..4)
                    .map(|i| s.reconstruct()[i] - v.amplitudes()[i])
                    .collect::<Vec<_>>()
            ) < 1e-14
        );
    }

    #[test]
    fn schmidt_of_product_vector() {
        let v = PureState::basis(2, 0).tensor(&PureState::basis(2, 1));
        let s = schmidt(&v, (2, 2)).unwrap();
        assert!((s.coefficients[0] - 1.0).abs() < 1e-15);
        assert!(s.coefficients[1].abs() < 1e-15);
        assert!(linalg::orthonormality_defect(&s.right_basis) < 1e-14);
        assert_eq!(s.schmidt_rank(1e-9), 1);
    }

    #[test]
    fn schmidt_rejects_bad_split() {
        let v = PureState::basis(4, 0);
        assert!(matches!(schmidt(&v, (2, 3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn ppt_examples() {
        let tol = Tolerances::default();
        let r = ppt_check(&bell_state(), 0, &tol).unwrap();
        assert_eq!(r.verdict, PptVerdict::Npt);
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!(r.conclusive);

        let p00 = DensityOperator::diagonal(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let p11 = DensityOperator::diagonal(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        let classical = convex_mix(&[(0.5, p00), (0.5, p11)])
            .unwrap()
            .with_factors(vec![2, 2])
            .unwrap();
        assert_eq!(ppt_check(&classical, 0, &tol).unwrap().verdict, PptVerdict::Ppt);
        assert!(ppt_check(&DensityOperator::maximally_mixed(4), 0, &tol).is_err());
    }

    #[test]
    fn ppt_marks_large_splits_inconclusive() {
        let rho = DensityOperator::maximally_mixed(3).tensor(&DensityOperator::maximally_mixed(3));
        let r = ppt_check(&rho, 0, &Tolerances::default()).unwrap();
        assert!(!r.conclusive);
    }
}
