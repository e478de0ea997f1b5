//! Stage checkpoints in the output directory, guarded by a manifest of
//! config hashes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Stage, StageError};

pub const MANIFEST: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of a stage: the upstream hash followed by the stage's own settings.
pub fn chain_hash(upstream: &str, stage: Stage, settings: &[(&str, String)]) -> String {
    let mut text = format!("{upstream}\n{stage}\n");
    for (k, v) in settings {
        let _ = writeln!(text, "{k}={v}");
    }
    sha256_hex(text.as_bytes())
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Manifest {
    stages: BTreeMap<String, String>,
}

/// What a stage did with its checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageAction {
    Computed,
    Loaded,
}

pub(crate) struct Checkpoints {
    dir: PathBuf,
    manifest: Manifest,
    force: bool,
}

impl Checkpoints {
    pub fn open(dir: &Path, force: bool) -> Result<Self, StageError> {
        fs::create_dir_all(dir).map_err(|e| StageError::io(dir, e))?;
        let path = dir.join(MANIFEST);
        let manifest = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).map_err(|e| StageError::Manifest {
                path: path.clone(),
                reason: e.to_string(),
            })?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Manifest::default(),
            Err(e) => return Err(StageError::io(&path, e)),
        };
        Ok(Checkpoints {
            dir: dir.to_path_buf(),
            manifest,
            force,
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn read(&self, name: &str) -> Result<String, StageError> {
        let path = self.path(name);
        fs::read_to_string(&path).map_err(|e| StageError::io(&path, e))
    }

    /// `Loaded` if every file exists under a matching hash, `Computed` if
    /// none of them is present. A checkpoint left by a different
    /// configuration, or only partly present, is refused unless forced.
    pub fn decide(&self, stage: Stage, hash: &str, files: &[&str]) -> Result<StageAction, StageError> {
        let present: Vec<&str> = files.iter().copied().filter(|f| self.path(f).exists()).collect();
        let recorded = self.manifest.stages.get(stage.name());
        if present.len() == files.len() && recorded.map(String::as_str) == Some(hash) {
            return Ok(StageAction::Loaded);
        }
        match present.first() {
            Some(f) if !self.force => Err(StageError::Stale { path: self.path(f) }),
            _ => Ok(StageAction::Computed),
        }
    }

    pub fn write(&self, name: &str, contents: &[u8]) -> Result<(), StageError> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(|e| StageError::io(&path, e))
    }

    /// Records a finished stage.
    pub fn commit(&mut self, stage: Stage, hash: &str) -> Result<(), StageError> {
        self.manifest.stages.insert(stage.name().to_string(), hash.to_string());
        let path = self.path(MANIFEST);
        let mut text = serde_json::to_string_pretty(&self.manifest).expect("string map");
        text.push('\n');
        fs::write(&path, text).map_err(|e| StageError::io(&path, e))
    }

    /// Deletes files of the form `{prefix}N.tsv`.
    pub fn remove_numbered(&self, prefix: &str) -> Result<(), StageError> {
        let entries = fs::read_dir(&self.dir).map_err(|e| StageError::io(&self.dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| StageError::io(&self.dir, e))?;
            let name = entry.file_name();
            let Some(name) = name.to_str() else { continue };
            let numbered = name
                .strip_prefix(prefix)
                .and_then(|rest| rest.strip_suffix(".tsv"))
                .is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()));
            if numbered {
                fs::remove_file(entry.path()).map_err(|e| StageError::io(&entry.path(), e))?;
            }
        }
        Ok(())
    }
}
