//! The relation graph built from the analogy set, its family/series typing,
//! the high-precision seed and its bootstrap to a fixed point.

mod bootstrap;
mod clustering;
mod filament;
mod graph;

pub use bootstrap::{bootstrap, BootstrapConfig, BootstrapOutcome, Network};
pub use clustering::{
    clustering_coefficient, clustering_reduce, extract_seed, reduce_series, series_map, Ratio, SeriesMap,
};
pub use filament::{parse_filaments, render_filaments, Filament, FilamentError};
pub use graph::{family_candidates, induced_series, reliable_families, RelationGraph};

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

use crate::analogy::{AnalogyKind, Quad};
use crate::lexicon::{Lexicon, WordId};

/// Ordered word pair.
pub type Edge = (WordId, WordId);

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("bootstrap did not reach a fixed point within {0} iterations")]
    IterationCap(usize),
    #[error("edge dump line {line}: {reason}")]
    Dump { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `f` if the first pair crosses tags, `s` if the first and third do, else `u`.
pub fn type_analogy(lex: &Lexicon, q: Quad<WordId>) -> AnalogyKind {
    let tag = |w: WordId| &lex.entry(w).tag;
    if tag(q.a()) != tag(q.b()) {
        AnalogyKind::Family
    } else if tag(q.a()) != tag(q.c()) {
        AnalogyKind::Series
    } else {
        AnalogyKind::Untyped
    }
}

/// Family and series relations over ordered word pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypedEdges {
    pub family: BTreeSet<Edge>,
    pub series: BTreeSet<Edge>,
}

impl TypedEdges {
    pub fn is_empty(&self) -> bool {
        self.family.is_empty() && self.series.is_empty()
    }

    pub fn len(&self) -> usize {
        self.family.len() + self.series.len()
    }

    pub fn is_subset(&self, other: &TypedEdges) -> bool {
        self.family.is_subset(&other.family) && self.series.is_subset(&other.series)
    }

    pub fn union(&self, other: &TypedEdges) -> TypedEdges {
        TypedEdges {
            family: self.family.union(&other.family).copied().collect(),
            series: self.series.union(&other.series).copied().collect(),
        }
    }

    /// Rows `a<TAB>b<TAB>family|series`, families first, each block sorted
    /// by written forms.
    pub fn to_dump(&self, lex: &Lexicon) -> String {
        let mut out = String::new();
        for (label, set) in [("family", &self.family), ("series", &self.series)] {
            let mut rows: Vec<(&str, &str)> = set.iter().map(|&(a, b)| (lex.form(a), lex.form(b))).collect();
            rows.sort_unstable();
            for (a, b) in rows {
                let _ = writeln!(out, "{a}\t{b}\t{label}");
            }
        }
        out
    }

    pub fn from_dump<R: BufRead>(source: R, lex: &Lexicon) -> Result<Self, NetworkError> {
        let mut edges = TypedEdges::default();
        for (n, line) in source.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| NetworkError::Dump { line: n + 1, reason };
            let fields: Vec<&str> = line.split('\t').collect();
            let [a, b, label] = fields[..] else {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            };
            let a = lex.lookup(a).ok_or_else(|| err(format!("unknown word `{a}`")))?;
            let b = lex.lookup(b).ok_or_else(|| err(format!("unknown word `{b}`")))?;
            match label {
                "family" => edges.family.insert((a, b)),
                "series" => edges.series.insert((a, b)),
                other => return Err(err(format!("unknown relation `{other}`"))),
            };
        }
        Ok(edges)
    }
}
