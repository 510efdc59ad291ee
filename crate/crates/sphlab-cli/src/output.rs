//! Provenance, file naming and writing.

use crate::config::ExperimentConfig;
use crate::Failure;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::PathBuf;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub config: serde_json::Value,
}

pub struct Sink {
    pub name: String,
    pub dir: Option<PathBuf>,
    pub hash: String,
    config: serde_json::Value,
}

impl Sink {
    /// `default_dir` is used when neither the config nor `--out` names one.
    pub fn new(cfg: &ExperimentConfig, default_name: &str, default_dir: Option<&str>) -> Self {
        let canonical = cfg.canonical();
        let hash = format!("sha256:{:x}", Sha256::digest(canonical.as_bytes()));
        let dir = cfg.out.clone().or_else(|| default_dir.map(PathBuf::from));
        let name = cfg.name.clone().unwrap_or_else(|| default_name.to_string());
        let config = serde_json::from_str(&canonical).expect("canonical config is JSON");
        Sink { name, dir, hash, config }
    }

    pub fn provenance(&self) -> Provenance {
        Provenance { tool: "sphlab", version: VERSION, config_hash: self.hash.clone(), config: self.config.clone() }
    }

    pub fn csv_preamble(&self) -> String {
        format!("# sphlab {VERSION} config_hash={}\n", self.hash)
    }

    fn write(&self, file: &str, body: &str) -> Result<(), Failure> {
        if let Some(dir) = &self.dir {
            std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join(file);
            std::fs::write(&path, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }

    /// CSV with a comment line carrying the version and config hash.
    pub fn csv(&self, suffix: &str, body: &str) -> Result<(), Failure> {
        let file = if suffix.is_empty() { format!("{}.csv", self.name) } else { format!("{}_{suffix}.csv", self.name) };
        self.write(&file, &format!("{}{body}", self.csv_preamble()))
    }

    /// Prints `{provenance, result}` to stdout and writes it as `<name>.json`.
    pub fn json(&self, result: &impl Serialize) -> Result<(), Failure> {
        #[derive(Serialize)]
        struct Doc<'a, T: Serialize> {
            provenance: Provenance,
            result: &'a T,
        }
        let doc = Doc { provenance: self.provenance(), result };
        let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Usage(e.to_string()))? + "\n";
        print!("{text}");
        self.write(&format!("{}.json", self.name), &text)
    }
}
