use std::fmt::Write;
use std::path::Path;

use logos_core::relations::ComparisonReport;
use logos_core::{compare_with_standard, ContextFamily};

use super::{join, label, load_state, to_json};
use crate::args::Format;
use crate::config::CliConfig;
use crate::error::CliResult;

pub fn run(state: &Path, cfg: &CliConfig) -> CliResult<String> {
    let tol = &cfg.tolerances;
    let rho = load_state(state, tol)?;
    let family = ContextFamily::default_for(&rho, cfg.family_haar, cfg.seed, tol)?;
    let report = compare_with_standard(&rho, &family, tol)?;
    Ok(match cfg.format {
        Format::Json => to_json(&report),
        Format::Csv => psa_csv(&report),
        Format::Text => text(&report),
    })
}

fn psa_csv(report: &ComparisonReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &report.psa_table {
        w.serialize(row).expect("in-memory CSV write");
    }
    String::from_utf8(w.into_inner().expect("flush to Vec")).expect("CSV is UTF-8")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn text(r: &ComparisonReport) -> String {
    let mut out = String::new();
    let dims: Vec<String> = r.factor_dims.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        out,
        "state: {} ({})",
        dims.join("⊗"),
        if r.is_pure { "pure" } else { "mixed" }
    );
    let _ = writeln!(out, "classification: {}", r.classification);
    let _ = writeln!(
        out,
        "standard class: {} (PPT test {}, {}, min eigenvalue {:.6e})",
        label(&r.standard_class),
        label(&r.ppt.verdict),
        r.ppt.conclusiveness,
        r.ppt.min_eigenvalue
    );
    let _ = writeln!(out, "purity: {:.9}", r.purity);
    if let Some(c) = &r.schmidt_coefficients {
        let _ = writeln!(out, "schmidt coefficients: {}", join(c, 9));
    }
    let _ = writeln!(out, "intensive relation: {}", yes_no(r.intensive.related));
    let _ = writeln!(out, "  reduced spectrum 1: {}", join(&r.intensive.spectrum_1, 9));
    let _ = writeln!(out, "  reduced spectrum 2: {}", join(&r.intensive.spectrum_2, 9));
    if let Some(note) = &r.intensive.note {
        let _ = writeln!(out, "  note: {note}");
    }
    let _ = writeln!(
        out,
        "effective relation: {} ({} of {} contexts correlated)",
        yes_no(r.effective.related),
        r.effective.contexts_correlated,
        r.effective.contexts_checked
    );
    if let Some(f) = &r.effective.first_failure {
        let _ = writeln!(out, "  first failure: entry {}: {}", f.entry, f.reason);
    }
    if let Some(a) = &r.effective.analytic {
        let _ = writeln!(
            out,
            "  equal Schmidt coefficients: {} (agrees with sampled family: {})",
            yes_no(a.equal_schmidt),
            yes_no(a.agrees_with_sampled)
        );
    }
    let certain: Vec<String> = r.epr_certain_nodes.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        out,
        "certain nodes: {}",
        if certain.is_empty() {
            "none".to_string()
        } else {
            certain.join(", ")
        }
    );
    let _ = writeln!(
        out,
        "psa graph: {} nodes, fingerprint {}",
        r.psa_table.len(),
        r.psa_graph_fingerprint
    );
    let _ = writeln!(
        out,
        "context family: {} bases, fingerprint {}",
        r.family_size, r.family_fingerprint
    );
    if r.divergences.is_empty() {
        let _ = writeln!(out, "divergences: none");
    } else {
        for d in &r.divergences {
            let _ = writeln!(out, "divergence: {d}");
        }
    }
    out
}
