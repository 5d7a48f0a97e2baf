//! CHSH evaluation, the classical bound, angle optimization and seeded
//! outcome simulation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ONE, ZERO};
use crate::state::DensityOperator;
use crate::tolerance::Tolerances;

pub const CLASSICAL_BOUND: f64 = 2.0;
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Grid points per angle in the coarse search.
const GRID_POINTS: usize = 64;
/// Refinement stops once no angle moves further than this.
const REFINE_STEP: f64 = 1e-8;
/// Shots drawn per RNG stream.
const CHUNK_SHOTS: u64 = 4096;

pub fn pauli() -> [ComplexMatrix; 3] {
    let i = Complex64::new(0.0, 1.0);
    [
        ComplexMatrix::from_vec(2, 2, vec![ZERO, ONE, ONE, ZERO]).expect("2x2"),
        ComplexMatrix::from_vec(2, 2, vec![ZERO, -i, i, ZERO]).expect("2x2"),
        ComplexMatrix::from_vec(2, 2, vec![ONE, ZERO, ZERO, -ONE]).expect("2x2"),
    ]
}

/// Hermitian observable with spectrum in `{+1, −1}`.
#[derive(Debug, Clone)]
pub struct DichotomicObservable {
    matrix: ComplexMatrix,
}

impl DichotomicObservable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::new_with(matrix, &Tolerances::default())
    }

    pub fn new_with(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "observable: expected a square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let herm = matrix.hermiticity_defect();
        if herm > tol.herm {
            return Err(Error::Validation(format!(
                "observable: not Hermitian (defect {herm:.3e})"
            )));
        }
        let m = matrix.hermitian_part();
        let square_defect = (&m * &m).max_abs_diff(&ComplexMatrix::identity(m.rows()));
        if square_defect > tol.idem {
            return Err(Error::Validation(format!(
                "observable: not dichotomic, |A² − I| = {square_defect:.3e}"
            )));
        }
        Ok(Self { matrix: m })
    }

    /// `a·σ` for a unit Bloch vector `a`.
    pub fn from_bloch(a: [f64; 3]) -> Result<Self> {
        let [x, y, z] = a;
        let len = (x * x + y * y + z * z).sqrt();
        if (len - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "observable: Bloch vector has length {len}, expected 1"
            )));
        }
        let p = pauli();
        let m = &(&p[0].scale_re(x) + &p[1].scale_re(y)) + &p[2].scale_re(z);
        Self::new(m)
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self::from_bloch(bloch(theta, phi)).expect("unit Bloch vector")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Spectral projectors `(I ± A)/2`.
    fn projectors(&self) -> [ComplexMatrix; 2] {
        let id = ComplexMatrix::identity(self.dim());
        [(&id + &self.matrix).scale_re(0.5), (&id - &self.matrix).scale_re(0.5)]
    }
}

fn bloch(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Two observables per side.
#[derive(Debug, Clone)]
pub struct ChshSetting {
    pub a0: DichotomicObservable,
    pub a1: DichotomicObservable,
    pub b0: DichotomicObservable,
    pub b1: DichotomicObservable,
}

impl ChshSetting {
    pub fn new(
        a0: DichotomicObservable,
        a1: DichotomicObservable,
        b0: DichotomicObservable,
        b1: DichotomicObservable,
    ) -> Result<Self> {
        if a0.dim() != a1.dim() || b0.dim() != b1.dim() {
            return Err(Error::DimensionMismatch {
                context: "CHSH observables on one side",
                expected: a0.dim(),
                actual: if a0.dim() != a1.dim() { a1.dim() } else { b1.dim() },
            });
        }
        Ok(Self { a0, a1, b0, b1 })
    }

    pub fn from_matrices(m: [ComplexMatrix; 4], tol: &Tolerances) -> Result<Self> {
        let [a0, a1, b0, b1] = m;
        Self::new(
            DichotomicObservable::new_with(a0, tol)?,
            DichotomicObservable::new_with(a1, tol)?,
            DichotomicObservable::new_with(b0, tol)?,
            DichotomicObservable::new_with(b1, tol)?,
        )
    }

    /// `A0 = Z, A1 = X, B0 = (Z + X)/√2, B1 = (Z − X)/√2`.
    pub fn standard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(
            DichotomicObservable::from_bloch([0.0, 0.0, 1.0]).expect("unit"),
            DichotomicObservable::from_bloch([1.0, 0.0, 0.0]).expect("unit"),
            DichotomicObservable::from_bloch([s, 0.0, s]).expect("unit"),
            DichotomicObservable::from_bloch([-s, 0.0, s]).expect("unit"),
        )
        .expect("qubit observables")
    }

    /// Settings in the order `(A0,B0), (A0,B1), (A1,B0), (A1,B1)`.
    fn pairs(&self) -> [(&DichotomicObservable, &DichotomicObservable); 4] {
        [
            (&self.a0, &self.b0),
            (&self.a0, &self.b1),
            (&self.a1, &self.b0),
            (&self.a1, &self.b1),
        ]
    }

    fn check_against(&self, rho: &DensityOperator) -> Result<()> {
        let (da, db) = rho.bipartite_dims()?;
        if self.a0.dim() != da {
            return Err(Error::DimensionMismatch {
                context: "side-1 observables vs state",
                expected: da,
                actual: self.a0.dim(),
            });
        }
        if self.b0.dim() != db {
            return Err(Error::DimensionMismatch {
                context: "side-2 observables vs state",
                expected: db,
                actual: self.b0.dim(),
            });
        }
        Ok(())
    }
}

fn correlation(rho: &DensityOperator, a: &DichotomicObservable, b: &DichotomicObservable) -> f64 {
    rho.matrix().trace_product(&a.matrix().kron(b.matrix())).re
}

/// `|E(A0,B0) + E(A0,B1) + E(A1,B0) − E(A1,B1)|`.
pub fn chsh_value(rho: &DensityOperator, s: &ChshSetting) -> Result<f64> {
    s.check_against(rho)?;
    let [e00, e01, e10, e11] = s.pairs().map(|(a, b)| correlation(rho, a, b));
    Ok((e00 + e01 + e10 - e11).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVerdict {
    Satisfies,
    Violates,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundCheck {
    pub value: f64,
    pub verdict: BoundVerdict,
    /// `S − 2`.
    pub margin: f64,
    /// `2√2 − S`.
    pub tsirelson_headroom: f64,
}

pub fn classical_bound_check(value: f64, tol: &Tolerances) -> BoundCheck {
    BoundCheck {
        value,
        verdict: if value > CLASSICAL_BOUND + tol.bound {
            BoundVerdict::Violates
        } else {
            BoundVerdict::Satisfies
        },
        margin: value - CLASSICAL_BOUND,
        tsirelson_headroom: TSIRELSON_BOUND - value,
    }
}

/// Bloch angles `(θ, φ)` of the four observables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitAngles {
    pub a0: [f64; 2],
    pub a1: [f64; 2],
    pub b0: [f64; 2],
    pub b1: [f64; 2],
}

impl QubitAngles {
    fn from_flat(x: &[f64; 8]) -> Self {
        Self {
            a0: [x[0], x[1]],
            a1: [x[2], x[3]],
            b0: [x[4], x[5]],
            b1: [x[6], x[7]],
        }
    }

    pub fn setting(&self) -> ChshSetting {
        let obs = |[t, p]: [f64; 2]| DichotomicObservable::from_angles(t, p);
        ChshSetting::new(obs(self.a0), obs(self.a1), obs(self.b0), obs(self.b1)).expect("qubit observables")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimalChsh {
    /// Best value found by the angle search, re-evaluated on the operators.
    pub search_value: f64,
    /// `2√(t₁² + t₂²)` from the correlation matrix.
    pub formula_value: f64,
    pub agree: bool,
    pub angles: QubitAngles,
    pub correlation_matrix: [[f64; 3]; 3],
    pub singular_values: [f64; 3],
}

impl OptimalChsh {
    pub fn setting(&self) -> ChshSetting {
        self.angles.setting()
    }
}

/// `T_ij = Tr(ρ σ_i ⊗ σ_j)`.
pub fn correlation_matrix(rho: &DensityOperator) -> Result<[[f64; 3]; 3]> {
    let (da, db) = rho.bipartite_dims()?;
    if (da, db) != (2, 2) {
        return Err(Error::Unsupported(format!(
            "CHSH optimization needs a 2⊗2 state, got {da}⊗{db}"
        )));
    }
    let p = pauli();
    let mut t = [[0.0; 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = rho.matrix().trace_product(&p[i].kron(&p[j])).re;
        }
    }
    Ok(t)
}

fn singular_values(t: &[[f64; 3]; 3]) -> [f64; 3] {
    let mut tt = ComplexMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            let v: f64 = (0..3).map(|k| t[k][i] * t[k][j]).sum();
            tt[(i, j)] = Complex64::new(v, 0.0);
        }
    }
    let ev = tt.eigenvalues_hermitian();
    [ev[0].max(0.0).sqrt(), ev[1].max(0.0).sqrt(), ev[2].max(0.0).sqrt()]
}

fn mat_vec(t: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| t[i][0] * v[0] + t[i][1] * v[1] + t[i][2] * v[2])
}

fn dot(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Signed CHSH expression `a0·T(b0 + b1) + a1·T(b0 − b1)`.
fn signed_chsh(t: &[[f64; 3]; 3], x: &[f64; 8]) -> f64 {
    let a0 = bloch(x[0], x[1]);
    let a1 = bloch(x[2], x[3]);
    let b0 = bloch(x[4], x[5]);
    let b1 = bloch(x[6], x[7]);
    let tb0 = mat_vec(t, b0);
    let tb1 = mat_vec(t, b1);
    dot(a0, [0, 1, 2].map(|i| tb0[i] + tb1[i])) + dot(a1, [0, 1, 2].map(|i| tb0[i] - tb1[i]))
}

fn grid_value(coord: usize, k: usize) -> f64 {
    // even coordinates are polar angles, odd ones azimuths
    if coord.is_multiple_of(2) {
        std::f64::consts::PI * k as f64 / (GRID_POINTS - 1) as f64
    } else {
        std::f64::consts::TAU * k as f64 / GRID_POINTS as f64
    }
}

/// Exact maximizer of `x[coord]` with the other angles fixed: along one
/// angle the expression is `A sin t + B cos t + C`.
fn line_maximum(t: &[[f64; 3]; 3], x: &[f64; 8], coord: usize) -> f64 {
    let at = |v: f64| {
        let mut y = *x;
        y[coord] = v;
        signed_chsh(t, &y)
    };
    let (f0, f90, f180) = (at(0.0), at(std::f64::consts::FRAC_PI_2), at(std::f64::consts::PI));
    let offset = 0.5 * (f0 + f180);
    let cos_part = 0.5 * (f0 - f180);
    let sin_part = f90 - offset;
    sin_part.atan2(cos_part)
}

/// Coordinate sweeps over the per-angle grid, then exact coordinate ascent
/// until no angle moves by more than the refinement step.
fn angle_search(t: &[[f64; 3]; 3], start: [f64; 8]) -> ([f64; 8], f64) {
    let mut x = start;
    let mut best = signed_chsh(t, &x);
    for _ in 0..8 {
        let before = best;
        for coord in 0..8 {
            for k in 0..GRID_POINTS {
                let mut y = x;
                y[coord] = grid_value(coord, k);
                let v = signed_chsh(t, &y);
                if v > best {
                    best = v;
                    x = y;
                }
            }
        }
        if best - before <= 1e-12 {
            break;
        }
    }
    for _ in 0..10_000 {
        let mut largest_move: f64 = 0.0;
        for coord in 0..8 {
            let mut y = x;
            y[coord] = line_maximum(t, &x, coord);
            let v = signed_chsh(t, &y);
            if v > best {
                let delta = (y[coord] - x[coord]).rem_euclid(std::f64::consts::TAU);
                largest_move = largest_move.max(delta.min(std::f64::consts::TAU - delta));
                best = v;
                x = y;
            }
        }
        if largest_move < REFINE_STEP {
            break;
        }
    }
    (x, best)
}

/// Maximizes CHSH over qubit measurement directions and cross-checks the
/// result against the correlation-matrix closed form.
pub fn optimal_chsh(rho: &DensityOperator) -> Result<OptimalChsh> {
    let t = correlation_matrix(rho)?;
    let sv = singular_values(&t);
    let formula_value = 2.0 * (sv[0] * sv[0] + sv[1] * sv[1]).sqrt();

    let starts: Vec<[f64; 8]> = (0..6)
        .map(|k| {
            let o = 0.37 * k as f64;
            [
                0.3 + o,
                0.1 + o,
                1.9 - o,
                2.2 + o,
                1.1 + o,
                4.0 - o,
                0.7 + 2.0 * o,
                5.1 - o,
            ]
        })
        .collect();
    let (x, _) = starts
        .par_iter()
        .map(|s| angle_search(&t, *s))
        .reduce_with(|a, b| if b.1 > a.1 { b } else { a })
        .expect("non-empty starts");

    let angles = QubitAngles::from_flat(&x);
    let search_value = chsh_value(rho, &angles.setting())?;
    Ok(OptimalChsh {
        search_value,
        formula_value,
        agree: (search_value - formula_value).abs() <= 1e-6,
        angles,
        correlation_matrix: t,
        singular_values: sv,
    })
}

/// Outcome counts in the order `(+1,+1), (+1,−1), (−1,+1), (−1,−1)`.
pub type OutcomeCounts = [u64; 4];

pub const SETTING_LABELS: [&str; 4] = ["A0B0", "A0B1", "A1B0", "A1B1"];
pub const OUTCOME_LABELS: [&str; 4] = ["+1,+1", "+1,-1", "-1,+1", "-1,-1"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunStatistics {
    pub shots: u64,
    pub seed: u64,
    /// One entry per setting, in [`SETTING_LABELS`] order.
    pub counts: [OutcomeCounts; 4],
}

#[derive(Debug, Serialize)]
struct CountRow<'a> {
    setting: &'a str,
    outcome: &'a str,
    count: u64,
}

impl RunStatistics {
    /// Empirical `E(A,B)` for one setting.
    pub fn correlation(&self, setting: usize) -> f64 {
        let [pp, pm, mp, mm] = self.counts[setting];
        (pp as f64 + mm as f64 - pm as f64 - mp as f64) / self.shots as f64
    }

    pub fn empirical_chsh(&self) -> f64 {
        (self.correlation(0) + self.correlation(1) + self.correlation(2) - self.correlation(3)).abs()
    }

    /// Empirical `⟨A⟩` for one setting.
    pub fn marginal_a(&self, setting: usize) -> f64 {
        let [pp, pm, mp, mm] = self.counts[setting];
        (pp as f64 + pm as f64 - mp as f64 - mm as f64) / self.shots as f64
    }

    /// CSV with columns `setting,outcome,count`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for (s, counts) in self.counts.iter().enumerate() {
            for (o, &count) in counts.iter().enumerate() {
                w.serialize(CountRow {
                    setting: SETTING_LABELS[s],
                    outcome: OUTCOME_LABELS[o],
                    count,
                })
                .expect("in-memory CSV write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush to Vec")).expect("CSV is UTF-8")
    }
}

/// Born probabilities of the four joint outcomes for one setting.
fn joint_distribution(rho: &DensityOperator, a: &DichotomicObservable, b: &DichotomicObservable) -> [f64; 4] {
    let pa = a.projectors();
    let pb = b.projectors();
    let mut p = [0.0; 4];
    for (x, pax) in pa.iter().enumerate() {
        for (y, pby) in pb.iter().enumerate() {
            p[2 * x + y] = rho.matrix().trace_product(&pax.kron(pby)).re.max(0.0);
        }
    }
    let total: f64 = p.iter().sum();
    p.map(|v| v / total)
}

fn sample_chunk(probs: &[f64; 4], seed: u64, stream: u64, shots: u64) -> OutcomeCounts {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut counts = [0u64; 4];
    for _ in 0..shots {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut k = 3;
        for (i, &p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                k = i;
                break;
            }
        }
        counts[k] += 1;
    }
    counts
}

/// Draws `shots` joint outcomes per setting from the Born distribution.
/// Chunks use independent ChaCha streams, so counts do not depend on thread
/// scheduling.
pub fn simulate_epr_run(rho: &DensityOperator, s: &ChshSetting, shots: u64, seed: u64) -> Result<RunStatistics> {
    s.check_against(rho)?;
    if shots == 0 {
        return Err(Error::Validation("shots must be at least 1".into()));
    }
    let dists = s.pairs().map(|(a, b)| joint_distribution(rho, a, b));
    let chunks = shots.div_ceil(CHUNK_SHOTS);
    let jobs: Vec<(usize, u64)> = (0..4).flat_map(|k| (0..chunks).map(move |c| (k, c))).collect();
    let partial: Vec<(usize, OutcomeCounts)> = jobs
        .par_iter()
        .map(|&(k, c)| {
            let n = CHUNK_SHOTS.min(shots - c * CHUNK_SHOTS);
            let stream = ((k as u64) << 40) | c;
            (k, sample_chunk(&dists[k], seed, stream, n))
        })
        .collect();
    let mut counts = [[0u64; 4]; 4];
    for (k, c) in partial {
        for (total, add) in counts[k].iter_mut().zip(c) {
            *total += add;
        }
    }
    Ok(RunStatistics { shots, seed, counts })
}
