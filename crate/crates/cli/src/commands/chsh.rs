use std::fmt::Write;
use std::path::Path;

use logos_core::bell::{ChshSetting, OptimalChsh, RunStatistics};
use logos_core::io::parse_settings;
use logos_core::{chsh_value, classical_bound_check, optimal_chsh, simulate_epr_run, BoundCheck};
use serde::Serialize;

use super::{label, load_state, to_json};
use crate::args::Format;
use crate::config::{read_text, CliConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize)]
struct RunSummary<'a> {
    #[serde(flatten)]
    stats: &'a RunStatistics,
    empirical_value: f64,
}

#[derive(Debug, Serialize)]
struct ChshReport<'a> {
    setting_source: &'static str,
    value: f64,
    bound: BoundCheck,
    optimal: Option<&'a OptimalChsh>,
    run: Option<RunSummary<'a>>,
}

pub fn run(state: &Path, settings: Option<&Path>, optimal: bool, shots: u64, cfg: &CliConfig) -> CliResult<String> {
    let tol = &cfg.tolerances;
    let rho = load_state(state, tol)?;
    let (opt, setting, source) = if optimal {
        let o = optimal_chsh(&rho)?;
        let s = o.setting();
        (Some(o), s, "optimal")
    } else if let Some(path) = settings {
        (
            None,
            ChshSetting::from_matrices(parse_settings(&read_text(path)?)?, tol)?,
            "file",
        )
    } else {
        (None, ChshSetting::standard(), "standard")
    };
    let value = chsh_value(&rho, &setting)?;
    let stats = if shots > 0 {
        Some(simulate_epr_run(&rho, &setting, shots, cfg.seed)?)
    } else {
        None
    };
    let report = ChshReport {
        setting_source: source,
        value,
        bound: classical_bound_check(value, tol),
        optimal: opt.as_ref(),
        run: stats.as_ref().map(|s| RunSummary {
            stats: s,
            empirical_value: s.empirical_chsh(),
        }),
    };
    match cfg.format {
        Format::Json => Ok(to_json(&report)),
        Format::Csv => stats
            .map(|s| s.to_csv())
            .ok_or_else(|| CliError::Usage("chsh: --format csv exports run counts and needs --shots N".into())),
        Format::Text => Ok(text(&report)),
    }
}

fn text(r: &ChshReport<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "setting: {}", r.setting_source);
    let _ = writeln!(out, "S = {:.9}", r.value);
    let _ = writeln!(
        out,
        "classical bound: {} (margin {:+.9}, Tsirelson headroom {:.9})",
        label(&r.bound.verdict),
        r.bound.margin,
        r.bound.tsirelson_headroom
    );
    if let Some(o) = r.optimal {
        let _ = writeln!(
            out,
            "optimum: search {:.9}, correlation-matrix formula {:.9}, {}",
            o.search_value,
            o.formula_value,
            if o.agree { "agree" } else { "DISAGREE" }
        );
    }
    if let Some(run) = &r.run {
        let _ = writeln!(
            out,
            "empirical S = {:.6} ({} shots per setting, seed {})",
            run.empirical_value, run.stats.shots, run.stats.seed
        );
    }
    out
}
