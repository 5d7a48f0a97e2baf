use std::fmt::Write;
use std::path::Path;

use logos_core::io::{decode_complex, projector_fingerprint, StateFile};
use logos_core::powers::Reconstruction;
use logos_core::{build_power_graph, reconstruct_state, Error, Projector, Psa, PureState, Tolerances};
use serde::{Deserialize, Serialize};

use super::psa::PsaDocument;
use super::{csv_unsupported, load_projectors, to_json};
use crate::args::Format;
use crate::config::{read_text, CliConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
struct CsvRow {
    node_index: usize,
    vector_fingerprint: String,
    potentia: f64,
}

#[derive(Debug, Serialize)]
struct ReconstructReport {
    state: StateFile,
    residual: f64,
    clipped_weight: f64,
    gram_rank: usize,
}

/// Vectors and potentia in node order.
fn from_json(text: &str, tol: &Tolerances) -> CliResult<(Vec<PureState>, Vec<f64>)> {
    let doc: PsaDocument = serde_json::from_str(text).map_err(|e| Error::Parse(format!("PSA file: {e}")))?;
    let mut vectors = Vec::with_capacity(doc.nodes.len());
    let mut values = Vec::with_capacity(doc.nodes.len());
    for (k, node) in doc.nodes.into_iter().enumerate() {
        if node.index != k {
            return Err(Error::Validation(format!("PSA file: node {k} carries index {}", node.index)).into());
        }
        let v = PureState::new_with(node.vector.into_iter().map(decode_complex).collect(), tol)
            .map_err(|e| Error::Validation(format!("PSA file: node {k}: {e}")))?;
        if projector_fingerprint(&Projector::from_state(&v)) != node.fingerprint {
            return Err(Error::Validation(format!("PSA file: node {k}: fingerprint does not match its vector")).into());
        }
        vectors.push(v);
        values.push(node.potentia);
    }
    Ok((vectors, values))
}

fn from_csv(text: &str, projectors: &Path, tol: &Tolerances) -> CliResult<(Vec<PureState>, Vec<f64>)> {
    let vectors = load_projectors(projectors, tol)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<CsvRow> = reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Parse(format!("PSA CSV: {e}")))?;
    if rows.len() != vectors.len() {
        return Err(Error::DimensionMismatch {
            context: "PSA rows vs projector set size",
            expected: vectors.len(),
            actual: rows.len(),
        }
        .into());
    }
    let mut values = vec![0.0; vectors.len()];
    for row in rows {
        let Some(v) = vectors.get(row.node_index) else {
            return Err(Error::Validation(format!("PSA CSV: node_index {} out of range", row.node_index)).into());
        };
        if projector_fingerprint(&Projector::from_state(v)) != row.vector_fingerprint {
            return Err(Error::Validation(format!(
                "PSA CSV: node {} fingerprint {} does not match the projector set",
                row.node_index, row.vector_fingerprint
            ))
            .into());
        }
        values[row.node_index] = row.potentia;
    }
    Ok((vectors, values))
}

pub fn run(psa_path: &Path, projectors: Option<&Path>, cfg: &CliConfig) -> CliResult<String> {
    let tol = &cfg.tolerances;
    let text = read_text(psa_path)?;
    let (vectors, values) = if text.trim_start().starts_with('{') {
        from_json(&text, tol)?
    } else {
        let Some(p) = projectors else {
            return Err(CliError::Usage(
                "reconstruct: a CSV PSA needs --projectors with the projector set it was computed on".into(),
            ));
        };
        from_csv(&text, p, tol)?
    };
    if vectors.is_empty() {
        return Err(Error::Validation("PSA file: no nodes".into()).into());
    }
    let graph = build_power_graph(vectors.iter().map(Projector::from_state).collect(), tol.commutation)?;
    let psa = Psa::new(&graph, values, tol)?;
    let rec = reconstruct_state(&psa)?;
    match cfg.format {
        Format::Json => Ok(to_json(&report(&rec))),
        Format::Csv => Err(csv_unsupported("reconstruct")),
        Format::Text => Ok(render_text(&rec)),
    }
}

fn report(rec: &Reconstruction) -> ReconstructReport {
    ReconstructReport {
        state: StateFile::from_state(&rec.state),
        residual: rec.residual,
        clipped_weight: rec.clipped_weight,
        gram_rank: rec.gram_rank,
    }
}

fn render_text(rec: &Reconstruction) -> String {
    let mut out = String::new();
    let m = rec.state.matrix();
    let _ = writeln!(out, "reconstructed state (dimension {}):", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = m
            .row(i)
            .iter()
            .map(|z| format!("{:>12.9}{:+.9}i", z.re, z.im))
            .collect();
        let _ = writeln!(out, "  [{}]", row.join(", "));
    }
    let _ = writeln!(out, "residual: {:.3e}", rec.residual);
    let _ = writeln!(out, "clipped negative weight: {:.3e}", rec.clipped_weight);
    out
}
