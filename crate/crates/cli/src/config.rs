use std::path::Path;

use logos_core::relations::{DEFAULT_FAMILY_SEED, DEFAULT_HAAR_CONTEXTS};
use logos_core::Tolerances;
use serde::Deserialize;

use crate::args::{Format, GlobalArgs};
use crate::error::{CliError, CliResult};

/// Contents of a `--config` TOML file.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    tolerances: Tolerances,
    family_haar: Option<usize>,
    seed: Option<u64>,
    format: Option<Format>,
}

/// Effective settings: defaults, then the config file, then flags.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub tolerances: Tolerances,
    pub family_haar: usize,
    pub seed: u64,
    pub format: Format,
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

impl CliConfig {
    pub fn resolve(global: &GlobalArgs) -> CliResult<Self> {
        let file = match &global.config {
            Some(path) => toml::from_str::<ConfigFile>(&read_text(path)?).map_err(|e| CliError::Config {
                path: path.clone(),
                message: e.to_string(),
            })?,
            None => ConfigFile::default(),
        };
        let mut tolerances = file.tolerances;
        if let Some(t) = global.tol {
            tolerances.relation = t;
        }
        tolerances.validate()?;
        Ok(Self {
            tolerances,
            family_haar: global.family_haar.or(file.family_haar).unwrap_or(DEFAULT_HAAR_CONTEXTS),
            seed: global.seed.or(file.seed).unwrap_or(DEFAULT_FAMILY_SEED),
            format: global.format.or(file.format).unwrap_or(Format::Text),
        })
    }
}

#[cfg(test)]
mod tests {
    use clap::Parser;

    use super::*;
    use crate::args::Cli;

    fn resolve(args: &[&str]) -> CliResult<CliConfig> {
        let cli = Cli::try_parse_from(["logos-entangle"].iter().chain(args)).expect("arguments parse");
        CliConfig::resolve(&cli.global)
    }

    #[test]
    fn defaults_without_file_or_flags() {
        let cfg = resolve(&["ks", "p.json"]).unwrap();
        assert_eq!(cfg.family_haar, DEFAULT_HAAR_CONTEXTS);
        assert_eq!(cfg.seed, DEFAULT_FAMILY_SEED);
        assert_eq!(cfg.format, Format::Text);
        assert_eq!(cfg.tolerances, Tolerances::default());
    }

    #[test]
    fn tol_flag_sets_relation_tolerance_only() {
        let cfg = resolve(&["classify", "s.json", "--tol", "1e-4"]).unwrap();
        assert_eq!(cfg.tolerances.relation, 1e-4);
        assert_eq!(cfg.tolerances.norm, Tolerances::default().norm);
    }

    #[test]
    fn flags_after_subcommand_are_global() {
        let cfg = resolve(&["chsh", "s.json", "--seed", "5", "--format", "csv"]).unwrap();
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.format, Format::Csv);
    }

    #[test]
    fn nonpositive_tolerance_is_rejected() {
        let err = resolve(&["classify", "s.json", "--tol=0"]).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn partial_tolerance_table_keeps_other_defaults() {
        let file: ConfigFile = toml::from_str("seed = 4\n[tolerances]\npsd = 1e-6\n").unwrap();
        assert_eq!(file.seed, Some(4));
        assert_eq!(file.tolerances.psd, 1e-6);
        assert_eq!(file.tolerances.relation, Tolerances::default().relation);
    }
}
