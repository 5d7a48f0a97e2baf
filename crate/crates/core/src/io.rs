//! JSON encodings shared by every file format: complex numbers are
//! `[re, im]` pairs, matrices are row-major lists of rows.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::state::{DensityOperator, Projector, PureState};
use crate::tolerance::Tolerances;

pub type ComplexPair = [f64; 2];
pub type MatrixRows = Vec<Vec<ComplexPair>>;

pub fn encode_complex(z: Complex64) -> ComplexPair {
    [z.re, z.im]
}

pub fn decode_complex(p: ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn encode_vector(v: &[Complex64]) -> Vec<ComplexPair> {
    v.iter().copied().map(encode_complex).collect()
}

pub fn encode_matrix(m: &ComplexMatrix) -> MatrixRows {
    (0..m.rows()).map(|i| encode_vector(m.row(i))).collect()
}

/// Decodes a row list; `field` names the payload field in diagnostics.
pub fn decode_matrix(rows: &MatrixRows, field: &str) -> Result<ComplexMatrix> {
    let n = rows.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Shape(format!(
            "{field}: row {i} has {} entries but there are {n} rows (matrix must be square)",
            row.len()
        )));
    }
    let data = rows.iter().flatten().copied().map(decode_complex).collect();
    ComplexMatrix::from_vec(n, n, data).map_err(|e| match e {
        Error::Validation(msg) => Error::Validation(format!("{field}: {msg}")),
        other => other,
    })
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// `{"factor_dims":[2,2],"matrix":[[[re,im],...],...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub factor_dims: Vec<usize>,
    pub matrix: MatrixRows,
}

impl StateFile {
    pub fn from_state(rho: &DensityOperator) -> Self {
        Self {
            factor_dims: rho.factor_dims().to_vec(),
            matrix: encode_matrix(rho.matrix()),
        }
    }

    pub fn into_state(self, tol: &Tolerances) -> Result<DensityOperator> {
        let m = decode_matrix(&self.matrix, "matrix")?;
        DensityOperator::new_with(self.factor_dims, m, tol)
    }
}

pub fn parse_state(text: &str, tol: &Tolerances) -> Result<DensityOperator> {
    parse_json::<StateFile>(text, "state file")?.into_state(tol)
}

pub fn state_to_json(rho: &DensityOperator) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(rho)).expect("state serializes")
}

/// Projector-set file: a JSON list of unit vectors.
pub fn parse_projector_set(text: &str, tol: &Tolerances) -> Result<Vec<PureState>> {
    let raw: Vec<Vec<ComplexPair>> = parse_json(text, "projector set")?;
    let Some(first) = raw.first() else {
        return Err(Error::Validation("projector set: no vectors".into()));
    };
    let dim = first.len();
    raw.into_iter()
        .enumerate()
        .map(|(i, v)| {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: "projector set vector dimension",
                    expected: dim,
                    actual: v.len(),
                });
            }
            PureState::new_with(v.into_iter().map(decode_complex).collect(), tol)
                .map_err(|e| Error::Validation(format!("projector set: vector {i}: {e}")))
        })
        .collect()
}

pub fn projector_set_to_json(vectors: &[PureState]) -> String {
    let raw: Vec<Vec<ComplexPair>> = vectors.iter().map(|v| encode_vector(v.amplitudes())).collect();
    serde_json::to_string(&raw).expect("vectors serialize")
}

/// Four 2×2 (or general) Hermitian observables for a CHSH run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsFile {
    pub a0: MatrixRows,
    pub a1: MatrixRows,
    pub b0: MatrixRows,
    pub b1: MatrixRows,
}

pub fn parse_settings(text: &str) -> Result<[ComplexMatrix; 4]> {
    let s: SettingsFile = parse_json(text, "settings file")?;
    Ok([
        decode_matrix(&s.a0, "a0")?,
        decode_matrix(&s.a1, "a1")?,
        decode_matrix(&s.b0, "b0")?,
        decode_matrix(&s.b1, "b1")?,
    ])
}

fn quantize(x: f64) -> i64 {
    (x * 1e10).round() as i64
}

fn digest_hex(hasher: Sha256) -> String {
    hex::encode(hasher.finalize())[..16].to_string()
}

fn feed_components(hasher: &mut Sha256, zs: &[Complex64]) {
    for z in zs {
        hasher.update(quantize(z.re).to_le_bytes());
        hasher.update(quantize(z.im).to_le_bytes());
    }
}

/// Phase-invariant 64-bit fingerprint of a ray, hex encoded.
pub fn vector_fingerprint(v: &PureState) -> String {
    let mut h = Sha256::new();
    feed_components(&mut h, v.canonical().amplitudes());
    digest_hex(h)
}

fn feed_projector(h: &mut Sha256, p: &Projector) {
    h.update((p.dim() as u64).to_le_bytes());
    match p.vector() {
        Some(v) => feed_components(h, v.canonical().amplitudes()),
        None => feed_components(h, p.matrix().as_slice()),
    }
}

/// Order-sensitive fingerprint of a node set.
pub fn node_set_fingerprint(nodes: &[Projector]) -> String {
    let mut h = Sha256::new();
    h.update((nodes.len() as u64).to_le_bytes());
    for p in nodes {
        feed_projector(&mut h, p);
    }
    digest_hex(h)
}

pub fn projector_fingerprint(p: &Projector) -> String {
    let mut h = Sha256::new();
    feed_projector(&mut h, p);
    digest_hex(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::bell_state;

    #[test]
    fn state_round_trip() {
        let text = state_to_json(&bell_state());
        let back = parse_state(&text, &Tolerances::default()).unwrap();
        assert_eq!(back.factor_dims(), &[2, 2]);
        assert!(back.matrix().max_abs_diff(bell_state().matrix()) < 1e-15);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_state("{\"factor_dims\": [2,\n", &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn non_square_payload_names_field() {
        let text = r#"{"factor_dims":[2],"matrix":[[[1,0],[0,0]],[[0,0]]]}"#;
        let err = parse_state(text, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
        assert!(err.to_string().contains("matrix: row 1"), "{err}");
    }

    #[test]
    fn dim_mismatch_names_factor_dims() {
        let text = r#"{"factor_dims":[2,2],"matrix":[[[1,0],[0,0]],[[0,0],[0,0]]]}"#;
        let err = parse_state(text, &Tolerances::default()).unwrap_err();
        assert!(err.to_string().contains("factor_dims"), "{err}");
    }

    #[test]
    fn projector_set_rejects_mixed_dims() {
        let err = parse_projector_set("[[[1,0],[0,0]],[[1,0],[0,0],[0,0]]]", &Tolerances::default()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = parse_projector_set("[[[1,0],[1,0]]]", &Tolerances::default()).unwrap_err();
        assert!(err.to_string().contains("norm deficit"));
    }

    #[test]
    fn fingerprint_ignores_global_phase() {
        let v = PureState::normalized(vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]).unwrap();
        let w = v.canonical();
        assert_eq!(vector_fingerprint(&v), vector_fingerprint(&w));
        assert_eq!(vector_fingerprint(&v).len(), 16);
    }
}
