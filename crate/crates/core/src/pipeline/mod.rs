//! End-to-end orchestration with resumable checkpoints, the filament export
//! and the resource statistics.

mod checkpoint;
mod config;
mod run;
mod stats;

pub use checkpoint::{chain_hash, sha256_hex, StageAction, MANIFEST};
pub use config::PipelineConfig;
pub use run::{export_filaments, files, run_pipeline, RunOptions, RunOutcome};
pub use stats::{compute_stats, render_stats, Average, GraphCounters, NetworkStats};

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analogy::AnalogyError;
use crate::lexicon::LexiconError;
use crate::network::NetworkError;
use crate::similarity::SimilarityError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Lexicon,
    Neighbors,
    Analogies,
    Seed,
    Bootstrap,
    Export,
    Stats,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Lexicon,
        Stage::Neighbors,
        Stage::Analogies,
        Stage::Seed,
        Stage::Bootstrap,
        Stage::Export,
        Stage::Stats,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Lexicon => "lexicon",
            Stage::Neighbors => "neighbors",
            Stage::Analogies => "analogies",
            Stage::Seed => "seed",
            Stage::Bootstrap => "bootstrap",
            Stage::Export => "export",
            Stage::Stats => "stats",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum StageError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: lexicon has no entries", path.display())]
    EmptyLexicon { path: PathBuf },
    #[error("{}: {source}", path.display())]
    Lexicon { path: PathBuf, source: LexiconError },
    #[error("{}: {reason}", path.display())]
    Manifest { path: PathBuf, reason: String },
    #[error("{}: checkpoint was written under a different configuration (use --force to recompute)", path.display())]
    Stale { path: PathBuf },
    #[error("{}: {reason}", path.display())]
    Checkpoint { path: PathBuf, reason: String },
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Analogy(#[from] AnalogyError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

impl StageError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        StageError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn checkpoint(path: &Path, reason: impl fmt::Display) -> Self {
        StageError::Checkpoint {
            path: path.to_path_buf(),
            reason: reason.to_string(),
        }
    }
}

/// A stage failure, tagged with the stage.
#[derive(Debug, Error)]
#[error("stage `{stage}`: {source}")]
pub struct PipelineError {
    pub stage: Stage,
    #[source]
    pub source: StageError,
}
