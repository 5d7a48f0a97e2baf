use std::fmt::Write;
use std::path::Path;

use logos_core::powers::KsReport;
use logos_core::{build_power_graph, find_global_binary_valuation, KsOutcome, Projector};

use super::{csv_unsupported, load_projectors, to_json};
use crate::args::Format;
use crate::config::CliConfig;
use crate::error::CliResult;

pub fn run(projectors: &Path, cfg: &CliConfig) -> CliResult<String> {
    let tol = &cfg.tolerances;
    let vectors = load_projectors(projectors, tol)?;
    let dim = vectors[0].dim();
    let graph = build_power_graph(vectors.iter().map(Projector::from_state).collect(), tol.commutation)?;
    let report = find_global_binary_valuation(&graph, tol)?;
    match cfg.format {
        Format::Json => Ok(to_json(&report)),
        Format::Csv => Err(csv_unsupported("ks")),
        Format::Text => Ok(text(&report, vectors.len(), dim)),
    }
}

fn text(r: &KsReport, n: usize, dim: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "projectors: {n} (dimension {dim}), graph fingerprint {}",
        r.graph_fingerprint
    );
    let _ = writeln!(
        out,
        "maximal contexts: {} ({} resolve the identity)",
        r.maximal_contexts, r.resolving_contexts
    );
    match &r.outcome {
        KsOutcome::Found { valuation } => {
            let nodes: Vec<String> = valuation.true_nodes().iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "result: global binary valuation found");
            let _ = writeln!(out, "true nodes: {}", nodes.join(", "));
        }
        KsOutcome::Exhausted => {
            let _ = writeln!(out, "result: no global binary valuation (search exhausted)");
        }
    }
    let _ = writeln!(
        out,
        "search: {} decisions, {} backtracks, {} propagations",
        r.stats.decisions, r.stats.backtracks, r.stats.propagations
    );
    let _ = writeln!(
        out,
        "parity check: {} ({} resolving contexts)",
        if r.parity.obstructed {
            "obstructed, every node lies in an even number of resolving contexts"
        } else {
            "no obstruction"
        },
        r.parity.resolving_contexts
    );
    out
}
