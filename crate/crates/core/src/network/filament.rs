use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::BufRead;

use thiserror::Error;

use super::graph::RelationGraph;
use crate::lexicon::{Lexicon, WordId};

/// An entry, one member of its family, and the sub-series of the entry
/// with respect to that member.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Filament {
    pub entry: WordId,
    pub pivot: WordId,
    pub sub_series: BTreeSet<WordId>,
}

#[derive(Debug, Error)]
pub enum FilamentError {
    #[error("filament line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl RelationGraph {
    /// One filament per family pivot `b` of `a` with a non-empty `series(a, b)`.
    pub fn filaments_of(&self, a: WordId) -> Vec<Filament> {
        self.family_candidates()
            .range((a, WordId(0))..=(a, WordId(u32::MAX)))
            .filter_map(|&(_, b)| {
                let sub_series = self.series(a, b);
                (!sub_series.is_empty()).then_some(Filament {
                    entry: a,
                    pivot: b,
                    sub_series,
                })
            })
            .collect()
    }
}

/// One line per filament: entry, pivot and the space-separated sub-series,
/// tab-separated. Members and records are sorted by written form.
pub fn render_filaments(lex: &Lexicon, filaments: &[Filament]) -> String {
    let mut rows: Vec<(&str, &str, Vec<&str>)> = filaments
        .iter()
        .map(|f| {
            let mut members: Vec<&str> = f.sub_series.iter().map(|&c| lex.form(c)).collect();
            members.sort_unstable();
            (lex.form(f.entry), lex.form(f.pivot), members)
        })
        .collect();
    rows.sort_unstable();
    let mut out = String::new();
    for (entry, pivot, members) in rows {
        let _ = writeln!(out, "{entry}\t{pivot}\t{}", members.join(" "));
    }
    out
}

pub fn parse_filaments<R: BufRead>(source: R, lex: &Lexicon) -> Result<Vec<Filament>, FilamentError> {
    let mut out = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| FilamentError::Parse { line: n + 1, reason };
        let id = |form: &str| lex.lookup(form).ok_or_else(|| err(format!("unknown word `{form}`")));
        let fields: Vec<&str> = line.split('\t').collect();
        let [entry, pivot, members] = fields[..] else {
            return Err(err(format!("expected 3 fields, found {}", fields.len())));
        };
        let sub_series = members.split(' ').map(id).collect::<Result<BTreeSet<_>, _>>()?;
        out.push(Filament {
            entry: id(entry)?,
            pivot: id(pivot)?,
            sub_series,
        });
    }
    Ok(out)
}
