//! Optional TOML configuration. Keys are the long flag names; a flag given
//! on the command line always wins over the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::{Case, CliError, Curve, Family, Format};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub input: Option<PathBuf>,
    pub column: Option<String>,
    pub r: Option<OneOrMany>,
    pub k: Option<OneOrMany>,
    pub k_range: Option<String>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub n: Option<usize>,
    pub family: Option<Family>,
    pub alpha: Option<f64>,
    pub rho: Option<f64>,
    #[serde(rename = "T", alias = "upper")]
    pub upper: Option<f64>,
    pub threads: Option<usize>,
    pub raw_odds: Option<bool>,
    pub output: Option<Format>,
    pub stride: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub curve: Option<Curve>,
    pub case: Option<Case>,
    pub lambda: Option<f64>,
    pub rho_star: Option<f64>,
    pub kappa: Option<f64>,
    pub grid_step: Option<f64>,
}

/// `r = 1` and `r = [1, 10]` are both accepted.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

impl OneOrMany {
    pub fn into_vec(self) -> Vec<usize> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("cannot read config file {}", path.display()),
            source,
        })?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config file {}: {}", path.display(), e.message())))
    }
}

/// Command-line list if non-empty, otherwise the file's.
pub fn list_or(cli: &[usize], file: &Option<OneOrMany>) -> Vec<usize> {
    if cli.is_empty() {
        file.clone().map(OneOrMany::into_vec).unwrap_or_default()
    } else {
        cli.to_vec()
    }
}
