use num_complex::Complex64;

use super::Psa;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::state::DensityOperator;

/// Least-squares state estimate from a PSA.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub state: DensityOperator,
    /// `‖A x − Ψ‖₂` of the unconstrained fit.
    pub residual: f64,
    /// Negative eigenvalue mass removed by the PSD projection.
    pub clipped_weight: f64,
    pub gram_rank: usize,
}

/// Orthonormal (Hilbert–Schmidt) basis of the d² real-dimensional space of
/// Hermitian d×d matrices.
fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(d * d);
    for j in 0..d {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, j)] = Complex64::new(1.0, 0.0);
        basis.push(m);
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut re = ComplexMatrix::zeros(d, d);
            re[(j, k)] = Complex64::new(s, 0.0);
            re[(k, j)] = Complex64::new(s, 0.0);
            basis.push(re);
            let mut im = ComplexMatrix::zeros(d, d);
            im[(j, k)] = Complex64::new(0.0, -s);
            im[(k, j)] = Complex64::new(0.0, s);
            basis.push(im);
        }
    }
    basis
}

/// Recovers `ρ` from its potentia on an informationally complete node set:
/// plain least squares over Hermitian matrices, then eigenvalue clipping at
/// zero and trace renormalization.
pub fn reconstruct_state(psa: &Psa<'_>) -> Result<Reconstruction> {
    let g = psa.graph();
    let d = g.dim();
    let required = d * d;
    if d == 0 {
        return Err(Error::RankDeficit { rank: 0, required: 1 });
    }
    let basis = hermitian_basis(d);
    // design matrix A[i][k] = Tr(G_k P_i), real because both are Hermitian
    let design: Vec<Vec<f64>> = g
        .nodes()
        .iter()
        .map(|p| basis.iter().map(|gk| gk.trace_product(p.matrix()).re).collect())
        .collect();
    let mut normal = ComplexMatrix::zeros(required, required);
    for row in &design {
        for a in 0..required {
            for b in 0..required {
                normal[(a, b)] += Complex64::new(row[a] * row[b], 0.0);
            }
        }
    }
    let eig = normal.eigh();
    let top = eig.values.first().copied().unwrap_or(0.0);
    let rank = eig.values.iter().filter(|&&l| l > 1e-10 * top.max(1e-300)).count();
    if rank < required {
        return Err(Error::RankDeficit { rank, required });
    }
    let rhs: Vec<f64> = (0..required)
        .map(|k| design.iter().zip(psa.values()).map(|(row, v)| row[k] * v).sum())
        .collect();
    let mut x = vec![0.0; required];
    for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
        let coeff: f64 = v.iter().zip(&rhs).map(|(a, b)| a.re * b).sum::<f64>() / lambda;
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += coeff * vi.re;
        }
    }
    let residual = design
        .iter()
        .zip(psa.values())
        .map(|(row, v)| {
            let fit: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
            (fit - v).powi(2)
        })
        .sum::<f64>()
        .sqrt();

    let mut estimate = ComplexMatrix::zeros(d, d);
    for (gk, xk) in basis.iter().zip(&x) {
        estimate = &estimate + &gk.scale_re(*xk);
    }
    let spectral = estimate.eigh();
    let clipped_weight = spectral.values.iter().filter(|&&l| l < 0.0).fold(0.0, |acc, l| acc - l);
    let kept: f64 = spectral.values.iter().map(|l| l.max(0.0)).sum();
    if kept <= 0.0 {
        return Err(Error::Validation(
            "reconstruction has no positive spectral weight".into(),
        ));
    }
    let projected = spectral.reassemble(|l| l.max(0.0) / kept);
    let state = DensityOperator::new(vec![d], projected)?;
    Ok(Reconstruction {
        state,
        residual,
        clipped_weight,
        gram_rank: rank,
    })
}
