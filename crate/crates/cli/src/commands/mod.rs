pub mod chsh;
pub mod classify;
pub mod ks;
pub mod psa;
pub mod reconstruct;

use std::path::Path;

use logos_core::io::{parse_projector_set, parse_state};
use logos_core::{DensityOperator, PureState, Tolerances};
use serde::Serialize;

use crate::config::read_text;
use crate::error::{CliError, CliResult};

pub fn load_state(path: &Path, tol: &Tolerances) -> CliResult<DensityOperator> {
    Ok(parse_state(&read_text(path)?, tol)?)
}

pub fn load_projectors(path: &Path, tol: &Tolerances) -> CliResult<Vec<PureState>> {
    Ok(parse_projector_set(&read_text(path)?, tol)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn csv_unsupported(command: &str) -> CliError {
    CliError::Usage(format!("{command}: --format csv is not available for this output"))
}

pub fn join(values: &[f64], precision: usize) -> String {
    values
        .iter()
        .map(|v| format!("{v:.precision$}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// The serialized name of a unit enum variant.
pub fn label<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        _ => "?".to_string(),
    }
}
