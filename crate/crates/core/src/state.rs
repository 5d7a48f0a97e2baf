//! Pure states, density operators and projectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, canonical_phase, ComplexMatrix, ONE, ZERO};
use crate::tolerance::Tolerances;

/// Unit vector in a finite-dimensional Hilbert space. Equality is up to a
/// global phase; [`PureState::canonical`] fixes a representative.
#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::new_with(amplitudes, &Tolerances::default())
    }

    pub fn new_with(amplitudes: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Validation("pure state: zero-dimensional vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("pure state: non-finite amplitude".into()));
        }
        let n = linalg::norm(&amplitudes);
        if (n - 1.0).abs() > tol.norm {
            return Err(Error::Validation(format!(
                "pure state: not normalized, norm deficit 1 - |v| = {:.3e}",
                1.0 - n
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales any non-zero vector to unit length.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = linalg::norm(&amplitudes);
        if !(n.is_finite() && n > 1e-300) {
            return Err(Error::Validation(format!(
                "pure state: cannot normalize vector of norm {n}"
            )));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut a = vec![ZERO; dim];
        a[index] = ONE;
        Self { amplitudes: a }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Representative whose first non-zero amplitude is real and positive.
    pub fn canonical(&self) -> Self {
        Self {
            amplitudes: canonical_phase(&self.amplitudes),
        }
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState {
            amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// Same ray: `|⟨u|v⟩| = 1` within `tol`.
    pub fn same_ray(&self, other: &PureState, tol: f64) -> bool {
        self.dim() == other.dim() && (linalg::inner(&self.amplitudes, &other.amplitudes).norm() - 1.0).abs() <= tol
    }

    pub fn apply(&self, unitary: &ComplexMatrix) -> PureState {
        PureState {
            amplitudes: unitary.matvec(&self.amplitudes),
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace operator on a space that may
/// be factored into subsystems.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    factor_dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(factor_dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        Self::new_with(factor_dims, matrix, &Tolerances::default())
    }

    pub fn new_with(factor_dims: Vec<usize>, matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "matrix: density operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::Shape(format!(
                "factor_dims: must be a non-empty list of positive dimensions, got {factor_dims:?}"
            )));
        }
        let total: usize = factor_dims.iter().product();
        if total != matrix.rows() {
            return Err(Error::Shape(format!(
                "factor_dims: product {total} of {factor_dims:?} does not match matrix dimension {}",
                matrix.rows()
            )));
        }
        let herm = matrix.hermiticity_defect();
        if herm > tol.herm {
            return Err(Error::Validation(format!(
                "density operator is not Hermitian (defect {herm:.3e} > {:.1e})",
                tol.herm
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::Validation(format!(
                "density operator trace is {:.12} + {:.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        let min_eig = matrix.eigenvalues_hermitian().last().copied().unwrap_or(0.0);
        if min_eig < -tol.psd {
            return Err(Error::Validation(format!(
                "density operator is not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self {
            factor_dims,
            matrix: matrix.hermitian_part(),
        })
    }

    /// `ρ = v v†`.
    pub fn from_ket(v: &PureState) -> Self {
        Self {
            factor_dims: vec![v.dim()],
            matrix: ComplexMatrix::outer(v.amplitudes(), v.amplitudes()),
        }
    }

    /// `ρ = v v†` on a factored space.
    pub fn from_ket_factored(v: &PureState, factor_dims: Vec<usize>) -> Result<Self> {
        Self::from_ket(v).with_factors(factor_dims)
    }

    /// Reinterprets the same matrix under a different factorization.
    pub fn with_factors(self, factor_dims: Vec<usize>) -> Result<Self> {
        let total: usize = factor_dims.iter().product();
        if factor_dims.is_empty() || total != self.dim() {
            return Err(Error::Shape(format!(
                "factor_dims: product of {factor_dims:?} does not match dimension {}",
                self.dim()
            )));
        }
        Ok(Self {
            factor_dims,
            matrix: self.matrix,
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            factor_dims: vec![dim],
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(vec![values.len()], ComplexMatrix::diag(values))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    pub fn is_pure(&self, tol: &Tolerances) -> bool {
        self.purity() >= 1.0 - tol.trace
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        self.matrix.eigenvalues_hermitian()
    }

    pub fn rank(&self, tol: &Tolerances) -> usize {
        self.spectrum().iter().filter(|&&l| l > tol.psd).count()
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.factor_dims.clone();
        dims.extend_from_slice(&other.factor_dims);
        DensityOperator {
            factor_dims: dims,
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> DensityOperator {
        DensityOperator {
            factor_dims: self.factor_dims.clone(),
            matrix: (&(unitary * &self.matrix) * &unitary.adjoint()).hermitian_part(),
        }
    }

    /// Dimensions `(d_A, d_B)` when the factors are grouped as `[0..=k]` and
    /// the rest.
    pub fn bipartition(&self, split_after: usize) -> Result<(usize, usize)> {
        if self.factor_dims.len() < 2 || split_after + 1 >= self.factor_dims.len() {
            return Err(Error::Unsupported(format!(
                "bipartite split after factor {split_after} is invalid for factor_dims {:?}",
                self.factor_dims
            )));
        }
        let a: usize = self.factor_dims[..=split_after].iter().product();
        Ok((a, self.dim() / a))
    }

    /// `(d_1, d_2)` for a two-factor operator.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.factor_dims.as_slice() {
            [a, b] => Ok((*a, *b)),
            dims => Err(Error::Unsupported(format!(
                "expected a bipartite state with two factors, got factor_dims {dims:?}"
            ))),
        }
    }

    /// Reduced state on factor `keep`, tracing out every other factor.
    pub fn partial_trace(&self, keep: usize) -> Result<DensityOperator> {
        if self.factor_dims.len() < 2 {
            return Err(Error::Unsupported(format!(
                "partial trace needs at least two factors, got factor_dims {:?}",
                self.factor_dims
            )));
        }
        if keep >= self.factor_dims.len() {
            return Err(Error::Validation(format!(
                "partial trace: factor index {keep} out of range for {} factors",
                self.factor_dims.len()
            )));
        }
        let before: usize = self.factor_dims[..keep].iter().product();
        let kept = self.factor_dims[keep];
        let after: usize = self.factor_dims[keep + 1..].iter().product();
        let mut out = ComplexMatrix::zeros(kept, kept);
        for a in 0..before {
            for c in 0..after {
                for b in 0..kept {
                    let row = (a * kept + b) * after + c;
                    for b2 in 0..kept {
                        let col = (a * kept + b2) * after + c;
                        out[(b, b2)] += self.matrix[(row, col)];
                    }
                }
            }
        }
        Ok(DensityOperator {
            factor_dims: vec![kept],
            matrix: out.hermitian_part(),
        })
    }
}

/// `ρ = v v†`; errors name the norm deficit for non-normalized input.
pub fn density_from_ket(amplitudes: &[Complex64]) -> Result<DensityOperator> {
    Ok(DensityOperator::from_ket(&PureState::new(amplitudes.to_vec())?))
}

/// `Σ tᵢ ρᵢ` for non-negative weights summing to one. The result keeps the
/// factorization of the first component.
pub fn convex_mix(components: &[(f64, DensityOperator)]) -> Result<DensityOperator> {
    convex_mix_with(components, &Tolerances::default())
}

pub fn convex_mix_with(components: &[(f64, DensityOperator)], tol: &Tolerances) -> Result<DensityOperator> {
    let Some((_, first)) = components.first() else {
        return Err(Error::Validation("convex mix: no components".into()));
    };
    if let Some((w, _)) = components.iter().find(|(w, _)| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::Validation(format!(
            "convex mix: weight {w} is negative or not finite"
        )));
    }
    let total: f64 = components.iter().map(|(w, _)| w).sum();
    if (total - 1.0).abs() > tol.trace {
        return Err(Error::Validation(format!(
            "convex mix: weights sum to {total}, expected 1"
        )));
    }
    let dims = first.factor_dims.clone();
    let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
    for (w, rho) in components {
        if rho.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                context: "convex mix component dimension",
                expected: first.dim(),
                actual: rho.dim(),
            });
        }
        acc = &acc + &rho.matrix.scale_re(*w);
    }
    DensityOperator::new_with(dims, acc, tol)
}

/// `(|00⟩ + |11⟩)/√2` as a density operator on `2 ⊗ 2`.
pub fn bell_state() -> DensityOperator {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(i, j)] = Complex64::new(0.5, 0.0);
    }
    DensityOperator {
        factor_dims: vec![2, 2],
        matrix: m,
    }
}

/// Orthogonal projector; the rank-1 constructors also keep the spanning
/// vector in canonical phase.
#[derive(Debug, Clone)]
pub struct Projector {
    matrix: ComplexMatrix,
    rank: usize,
    vector: Option<PureState>,
}

impl Projector {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::new_with(matrix, &Tolerances::default())
    }

    pub fn new_with(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "projector: matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let herm = matrix.hermiticity_defect();
        if herm > tol.herm {
            return Err(Error::Validation(format!(
                "projector is not Hermitian (defect {herm:.3e})"
            )));
        }
        let idem = (&matrix * &matrix).max_abs_diff(&matrix);
        if idem > tol.idem {
            return Err(Error::Validation(format!(
                "projector is not idempotent (defect {idem:.3e})"
            )));
        }
        let rank = matrix.trace().re.round() as usize;
        Ok(Self {
            matrix,
            rank,
            vector: None,
        })
    }

    /// `|v⟩⟨v|` for a unit vector.
    pub fn from_state(v: &PureState) -> Self {
        let v = v.canonical();
        Self {
            matrix: ComplexMatrix::outer(v.amplitudes(), v.amplitudes()),
            rank: 1,
            vector: Some(v),
        }
    }

    pub fn from_vector(amplitudes: &[Complex64]) -> Result<Self> {
        Ok(Self::from_state(&PureState::new(amplitudes.to_vec())?))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Spanning unit vector of a rank-1 projector.
    pub fn vector(&self) -> Option<&PureState> {
        self.vector.as_ref()
    }

    /// `U P U†`.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix) -> Projector {
        match &self.vector {
            Some(v) => Projector::from_state(&v.apply(unitary)),
            None => Projector {
                matrix: (&(unitary * &self.matrix) * &unitary.adjoint()).hermitian_part(),
                rank: self.rank,
                vector: None,
            },
        }
    }
}

/// Born rule `Tr(ρP)`, clamped to `[0, 1]` inside the `psd` band.
pub fn born(rho: &DensityOperator, p: &Projector) -> Result<f64> {
    born_with(rho, p, &Tolerances::default())
}

pub fn born_with(rho: &DensityOperator, p: &Projector, tol: &Tolerances) -> Result<f64> {
    if rho.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            context: "born rule projector dimension",
            expected: rho.dim(),
            actual: p.dim(),
        });
    }
    clamp_probability(rho.matrix().trace_product(p.matrix()).re, tol)
}

pub(crate) fn clamp_probability(value: f64, tol: &Tolerances) -> Result<f64> {
    if value < -tol.psd || value > 1.0 + tol.psd {
        return Err(Error::Validation(format!(
            "Born probability {value} lies outside [0, 1]"
        )));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Rank-1 projectors onto each vector of an orthonormal basis.
pub fn basis_projectors(basis: &[PureState]) -> Vec<Projector> {
    basis.iter().map(Projector::from_state).collect()
}

/// Computational basis of dimension `dim`.
pub fn computational_basis(dim: usize) -> Vec<PureState> {
    (0..dim).map(|i| PureState::basis(dim, i)).collect()
}

/// Discrete Fourier basis `|k⟩ = Σⱼ ωʲᵏ |j⟩ / √d`.
pub fn fourier_basis(dim: usize) -> Vec<PureState> {
    let s = 1.0 / (dim as f64).sqrt();
    (0..dim)
        .map(|k| {
            let amps = (0..dim)
                .map(|j| Complex64::from_polar(s, 2.0 * std::f64::consts::PI * (j * k) as f64 / dim as f64))
                .collect();
            PureState { amplitudes: amps }
        })
        .collect()
}
