use std::path::{Path, PathBuf};

use accent_core::hmm::Constants;
use anyhow::{Context, Result};
use serde::Deserialize;

/// Settings read from `--config`. Every field is optional; command-line
/// flags win over the file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub lexicon: Option<PathBuf>,
    pub symbols: Option<PathBuf>,
    pub transcripts: Option<Vec<PathBuf>>,
    pub params_in: Option<PathBuf>,
    pub params_out: Option<PathBuf>,
    pub p_ins: Option<f64>,
    pub p_del: Option<f64>,
    pub sigma: Option<f64>,
    pub prior_weight: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub reference: Option<PathBuf>,
    pub reference_speaker: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("bad config {}", path.display()))
    }
}

/// Resolved settings for one run.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub lexicon: Option<PathBuf>,
    pub symbols: Option<PathBuf>,
    pub transcripts: Vec<PathBuf>,
    pub params_in: Option<PathBuf>,
    pub params_out: Option<PathBuf>,
    pub constants: Constants,
    pub out_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub reference: Option<PathBuf>,
    pub reference_speaker: String,
}
