use std::fmt::Write;
use std::path::Path;

use logos_core::io::{encode_vector, projector_fingerprint, ComplexPair};
use logos_core::{build_power_graph, enumerate_maximal_contexts, psa_from_state, Projector, PureState};
use serde::{Deserialize, Serialize};

use super::{load_projectors, load_state, to_json};
use crate::args::Format;
use crate::config::CliConfig;
use crate::error::CliResult;

pub const PSA_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct PsaNode {
    pub index: usize,
    pub fingerprint: String,
    pub vector: Vec<ComplexPair>,
    pub potentia: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ContextSum {
    pub nodes: Vec<usize>,
    pub resolves_identity: bool,
    pub sum: f64,
}

/// JSON dump of a PSA; `reconstruct` reads it back.
#[derive(Debug, Serialize, Deserialize)]
pub struct PsaDocument {
    pub schema_version: u32,
    pub dim: usize,
    pub graph_fingerprint: String,
    pub nodes: Vec<PsaNode>,
    pub contexts: Vec<ContextSum>,
    pub max_normalization_defect: f64,
}

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    node_index: usize,
    vector_fingerprint: &'a str,
    potentia: f64,
    /// First identity-resolving context containing the node.
    context: Option<usize>,
    context_sum: Option<f64>,
}

pub fn run(state: &Path, projectors: &Path, cfg: &CliConfig) -> CliResult<String> {
    let tol = &cfg.tolerances;
    let rho = load_state(state, tol)?;
    let vectors: Vec<PureState> = load_projectors(projectors, tol)?;
    let graph = build_power_graph(vectors.iter().map(Projector::from_state).collect(), tol.commutation)?;
    let psa = psa_from_state(&rho, &graph, tol)?;
    let contexts = enumerate_maximal_contexts(&graph, tol);

    let doc = PsaDocument {
        schema_version: PSA_SCHEMA_VERSION,
        dim: graph.dim(),
        graph_fingerprint: graph.fingerprint().to_string(),
        nodes: vectors
            .iter()
            .enumerate()
            .map(|(i, v)| PsaNode {
                index: i,
                fingerprint: projector_fingerprint(&graph.nodes()[i]),
                vector: encode_vector(v.amplitudes()),
                potentia: psa.value(i),
            })
            .collect(),
        contexts: contexts
            .iter()
            .map(|c| ContextSum {
                nodes: c.nodes.clone(),
                resolves_identity: c.resolves_identity,
                sum: psa.context_sum(c),
            })
            .collect(),
        max_normalization_defect: psa.max_normalization_defect(&contexts),
    };
    Ok(match cfg.format {
        Format::Json => to_json(&doc),
        Format::Csv => csv(&doc),
        Format::Text => text(&doc),
    })
}

fn resolving_context_of(doc: &PsaDocument, node: usize) -> Option<usize> {
    doc.contexts
        .iter()
        .position(|c| c.resolves_identity && c.nodes.contains(&node))
}

fn csv(doc: &PsaDocument) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for n in &doc.nodes {
        let context = resolving_context_of(doc, n.index);
        w.serialize(CsvRow {
            node_index: n.index,
            vector_fingerprint: &n.fingerprint,
            potentia: n.potentia,
            context,
            context_sum: context.map(|k| doc.contexts[k].sum),
        })
        .expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("flush to Vec")).expect("CSV is UTF-8")
}

fn text(doc: &PsaDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "graph: {} nodes in dimension {}, fingerprint {}",
        doc.nodes.len(),
        doc.dim,
        doc.graph_fingerprint
    );
    let _ = writeln!(
        out,
        "{:>5}  {:<16}  {:>12}  {:>7}  {:>12}",
        "node", "fingerprint", "potentia", "context", "context sum"
    );
    for n in &doc.nodes {
        let context = resolving_context_of(doc, n.index);
        let (c, s) = match context {
            Some(k) => (k.to_string(), format!("{:.9}", doc.contexts[k].sum)),
            None => ("-".to_string(), "-".to_string()),
        };
        let _ = writeln!(
            out,
            "{:>5}  {:<16}  {:>12.9}  {:>7}  {:>12}",
            n.index, n.fingerprint, n.potentia, c, s
        );
    }
    let _ = writeln!(out, "max normalization defect: {:.3e}", doc.max_normalization_defect);
    out
}
