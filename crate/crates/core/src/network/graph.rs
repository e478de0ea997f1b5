use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{Edge, TypedEdges};
use crate::analogy::{AnalogyKind, AnalogySet};
use crate::lexicon::{Lexicon, WordId};

/// Weighted word graph over the permutation-closed analogy set. Each edge
/// `(a, b)` carries the analogies `a:b::c:d` that have it as first pair, so
/// its weight is their number.
#[derive(Debug, Clone, Default)]
pub struct RelationGraph {
    by_pair: BTreeMap<Edge, Vec<(WordId, WordId, AnalogyKind)>>,
    family: BTreeSet<Edge>,
}

impl RelationGraph {
    pub fn build(lex: &Lexicon, set: &AnalogySet) -> Self {
        let mut by_pair: BTreeMap<Edge, Vec<(WordId, WordId, AnalogyKind)>> = BTreeMap::new();
        let mut family = BTreeSet::new();
        for an in set.closed(lex) {
            let [a, b, c, d] = an.quad.0;
            by_pair.entry((a, b)).or_default().push((c, d, an.kind));
            if an.kind.licenses_family() {
                family.insert((a, b));
            }
        }
        RelationGraph { by_pair, family }
    }

    pub fn weight(&self, e: Edge) -> u32 {
        self.by_pair.get(&e).map_or(0, |v| v.len() as u32)
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.by_pair.contains_key(&e)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Edge, u32)> + '_ {
        self.by_pair.iter().map(|(&e, v)| (e, v.len() as u32))
    }

    pub fn edge_count(&self) -> usize {
        self.by_pair.len()
    }

    pub fn vertices(&self) -> BTreeSet<WordId> {
        self.by_pair.keys().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// Closed analogies with first pair `e`, as `(c, d, type)`.
    pub fn analogies_from(&self, e: Edge) -> &[(WordId, WordId, AnalogyKind)] {
        self.by_pair.get(&e).map_or(&[], Vec::as_slice)
    }

    /// `series(a, b)`: the words `c` with some `a:b::c:d` in the set.
    pub fn series(&self, a: WordId, b: WordId) -> BTreeSet<WordId> {
        self.analogies_from((a, b)).iter().map(|&(c, _, _)| c).collect()
    }

    pub fn family_candidates(&self) -> &BTreeSet<Edge> {
        &self.family
    }

    /// Rows `a<TAB>b<TAB>labels<TAB>weight` for every edge, sorted by written
    /// forms. Labels are a `,`-joined subset of `F` (family candidate), `F0`
    /// (reliable family) and `S0` (induced series), or `-`.
    pub fn to_dump(&self, lex: &Lexicon, typed: &TypedEdges) -> String {
        let mut rows: Vec<(&str, &str, String, u32)> = self
            .edges()
            .map(|(e, w)| {
                let mut labels = Vec::new();
                if self.family.contains(&e) {
                    labels.push("F");
                }
                if typed.family.contains(&e) {
                    labels.push("F0");
                }
                if typed.series.contains(&e) {
                    labels.push("S0");
                }
                let labels = if labels.is_empty() {
                    "-".to_string()
                } else {
                    labels.join(",")
                };
                (lex.form(e.0), lex.form(e.1), labels, w)
            })
            .collect();
        rows.sort_unstable();
        let mut out = String::new();
        for (a, b, labels, w) in rows {
            let _ = writeln!(out, "{a}\t{b}\t{labels}\t{w}");
        }
        out
    }
}

/// Edges that occur as first pair of at least one `f`- or `u`-typed analogy.
pub fn family_candidates(g: &RelationGraph) -> BTreeSet<Edge> {
    g.family.clone()
}

pub fn reliable_families(f: &BTreeSet<Edge>, g: &RelationGraph, threshold: u32) -> BTreeSet<Edge> {
    f.iter().copied().filter(|&e| g.weight(e) >= threshold).collect()
}

/// Serial relations `(a, c)` and `(b, d)` for every `a:b::c:d` whose first
/// pair is one of the given family edges.
pub fn induced_series(f0: &BTreeSet<Edge>, g: &RelationGraph) -> BTreeSet<Edge> {
    let mut out = BTreeSet::new();
    for &(a, b) in f0 {
        for &(c, d, _) in g.analogies_from((a, b)) {
            out.insert((a, c));
            out.insert((b, d));
        }
    }
    out
}
