use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::io::BufRead;
use std::ops::AddAssign;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::check::check_analogy;
use super::prune::{lengths_balance, tag_prune};
use super::quad::Quad;
use super::signature::{signature, Signature};
use crate::lexicon::{Lexicon, Phoneme, WordId};
use crate::similarity::Neighborhoods;

#[derive(Debug, Error)]
pub enum AnalogyError {
    #[error("missing neighborhood for `{0}`")]
    MissingNeighborhood(String),
    #[error("{candidates} candidate quadruplets exceed the cap of {cap}")]
    CandidateCap { candidates: u64, cap: u64 },
    #[error("analogy dump line {line}: {reason}")]
    Dump { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Typing of an analogy from the tags of its members: `f` when the first
/// pair crosses categories, `s` when the first and third do, `u` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AnalogyKind {
    Family,
    Series,
    Untyped,
}

impl AnalogyKind {
    pub fn code(self) -> char {
        match self {
            AnalogyKind::Family => 'f',
            AnalogyKind::Series => 's',
            AnalogyKind::Untyped => 'u',
        }
    }

    /// Whether the first pair may belong to one derivational family.
    pub fn licenses_family(self) -> bool {
        matches!(self, AnalogyKind::Family | AnalogyKind::Untyped)
    }
}

impl fmt::Display for AnalogyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl FromStr for AnalogyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f" => Ok(AnalogyKind::Family),
            "s" => Ok(AnalogyKind::Series),
            "u" => Ok(AnalogyKind::Untyped),
            other => Err(format!("unknown analogy type `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Analogy {
    pub quad: Quad<WordId>,
    pub kind: AnalogyKind,
}

impl Analogy {
    pub fn new(lex: &Lexicon, quad: Quad<WordId>) -> Self {
        Analogy {
            quad,
            kind: crate::network::type_analogy(lex, quad),
        }
    }
}

/// Analogies stored one per symmetry orbit, as the orbit member whose
/// written forms are lexicographically least. Kept sorted in that order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnalogySet {
    analogies: Vec<Analogy>,
}

pub(crate) fn canonical(lex: &Lexicon, q: Quad<WordId>) -> Quad<WordId> {
    q.canonical_by(|w| lex.ortho_rank(w))
}

impl AnalogySet {
    /// Builds the set from arbitrary members of each orbit.
    pub fn from_quads(lex: &Lexicon, quads: impl IntoIterator<Item = Quad<WordId>>) -> Self {
        let reps: BTreeSet<[u32; 4]> = quads
            .into_iter()
            .map(|q| canonical(lex, q).0.map(|w| lex.ortho_rank(w)))
            .collect();
        let by_rank = rank_inverse(lex);
        let analogies = reps
            .into_iter()
            .map(|r| Analogy::new(lex, Quad(r.map(|x| by_rank[x as usize]))))
            .collect();
        AnalogySet { analogies }
    }

    pub fn len(&self) -> usize {
        self.analogies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.analogies.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Analogy> + '_ {
        self.analogies.iter()
    }

    pub fn contains(&self, lex: &Lexicon, q: Quad<WordId>) -> bool {
        let rep = canonical(lex, q);
        let key = rep.0.map(|w| lex.ortho_rank(w));
        self.analogies
            .binary_search_by(|a| a.quad.0.map(|w| lex.ortho_rank(w)).cmp(&key))
            .is_ok()
    }

    /// Every member of every orbit, each typed for its own ordering.
    pub fn closed(&self, lex: &Lexicon) -> Vec<Analogy> {
        let mut out: Vec<Analogy> = self
            .analogies
            .iter()
            .flat_map(|a| a.quad.orbit())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .map(|q| Analogy::new(lex, q))
            .collect();
        out.sort();
        out
    }

    /// One analogy per line: four written forms and the type code, tab-separated.
    pub fn to_dump(&self, lex: &Lexicon) -> String {
        let mut out = String::new();
        for a in &self.analogies {
            let [w, x, y, z] = a.quad.0.map(|w| lex.form(w));
            let _ = writeln!(out, "{w}\t{x}\t{y}\t{z}\t{}", a.kind);
        }
        out
    }

    pub fn from_dump<R: BufRead>(source: R, lex: &Lexicon) -> Result<Self, AnalogyError> {
        let mut quads = Vec::new();
        for (n, line) in source.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| AnalogyError::Dump { line: n + 1, reason };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(err(format!("expected 5 fields, found {}", fields.len())));
            }
            let mut ids = [WordId(0); 4];
            for (slot, form) in ids.iter_mut().zip(&fields[..4]) {
                *slot = lex.lookup(form).ok_or_else(|| err(format!("unknown word `{form}`")))?;
            }
            let kind: AnalogyKind = fields[4].parse().map_err(err)?;
            let an = Analogy::new(lex, Quad(ids));
            if an.kind != kind {
                return Err(err(format!("type `{kind}` disagrees with tags (`{}`)", an.kind)));
            }
            quads.push(an.quad);
        }
        Ok(AnalogySet::from_quads(lex, quads))
    }
}

fn rank_inverse(lex: &Lexicon) -> Vec<WordId> {
    let mut inv = vec![WordId(0); lex.len()];
    for id in lex.ids() {
        inv[lex.ortho_rank(id) as usize] = id;
    }
    inv
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalogyCounters {
    pub candidates: u64,
    /// Quadruplets repeating a word.
    pub degenerate: u64,
    pub pruned_by_length: u64,
    pub pruned_by_tag: u64,
    pub phonemic_pass: u64,
    pub orthographic_pass: u64,
    /// Distinct orbits retained.
    pub analogies: u64,
}

impl AddAssign for AnalogyCounters {
    fn add_assign(&mut self, o: Self) {
        self.candidates += o.candidates;
        self.degenerate += o.degenerate;
        self.pruned_by_length += o.pruned_by_length;
        self.pruned_by_tag += o.pruned_by_tag;
        self.phonemic_pass += o.phonemic_pass;
        self.orthographic_pass += o.orthographic_pass;
        self.analogies += o.analogies;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationConfig {
    /// Refuse to start if the neighborhoods generate more quadruplets.
    pub max_candidates: Option<u64>,
}

struct WordForms {
    phonemes: Vec<Vec<Phoneme>>,
    chars: Vec<Vec<char>>,
}

/// Signatures of `(c, d)` for every `d` in the neighborhood of `c`.
struct PairSignatures {
    phonemic: Vec<Signature<Phoneme>>,
    orthographic: Vec<Signature<char>>,
}

/// Enumerates analogies `a:b::c:d` with `b` and `c` among the neighbors of
/// `a` and `d` among the neighbors of `c`.
pub fn enumerate_analogies(
    lex: &Lexicon,
    hoods: &Neighborhoods,
    cfg: &EnumerationConfig,
) -> Result<(AnalogySet, AnalogyCounters), AnalogyError> {
    for id in lex.ids() {
        match hoods.get(id) {
            Some(list) if list.source == id => {}
            _ => return Err(AnalogyError::MissingNeighborhood(lex.form(id).to_string())),
        }
    }
    let neighbors: Vec<Vec<WordId>> = lex
        .ids()
        .map(|id| hoods.get(id).expect("checked").ids().collect())
        .collect();

    let total: u64 = neighbors
        .iter()
        .map(|n| n.len() as u64 * n.iter().map(|c| neighbors[c.index()].len() as u64).sum::<u64>())
        .sum();
    if let Some(cap) = cfg.max_candidates {
        if total > cap {
            return Err(AnalogyError::CandidateCap { candidates: total, cap });
        }
    }

    let forms = WordForms {
        phonemes: lex.entries().iter().map(|e| e.phonemes.codes().to_vec()).collect(),
        chars: lex.entries().iter().map(|e| e.orthographic.chars().collect()).collect(),
    };
    let pair_sigs: Vec<PairSignatures> = (0..lex.len())
        .into_par_iter()
        .map(|c| PairSignatures {
            phonemic: neighbors[c]
                .iter()
                .map(|d| signature(&forms.phonemes[c], &forms.phonemes[d.index()]))
                .collect(),
            orthographic: neighbors[c]
                .iter()
                .map(|d| signature(&forms.chars[c], &forms.chars[d.index()]))
                .collect(),
        })
        .collect();

    let shards: Vec<(AnalogyCounters, Vec<Quad<WordId>>)> = lex
        .ids()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a| enumerate_from(lex, a, &neighbors, &forms, &pair_sigs))
        .collect();

    let mut counters = AnalogyCounters::default();
    let mut found = Vec::new();
    for (c, quads) in shards {
        counters += c;
        found.extend(quads);
    }
    let set = AnalogySet::from_quads(lex, found);
    counters.analogies = set.len() as u64;
    Ok((set, counters))
}

fn enumerate_from(
    lex: &Lexicon,
    a: WordId,
    neighbors: &[Vec<WordId>],
    forms: &WordForms,
    pair_sigs: &[PairSignatures],
) -> (AnalogyCounters, Vec<Quad<WordId>>) {
    let mut counters = AnalogyCounters::default();
    let mut found = Vec::new();
    let len = |w: WordId| forms.phonemes[w.index()].len();
    let tag = |w: WordId| &lex.entry(w).tag;
    let around_a = &neighbors[a.index()];
    for (bi, &b) in around_a.iter().enumerate() {
        let ab_phon = &pair_sigs[a.index()].phonemic[bi];
        let ab_ortho = &pair_sigs[a.index()].orthographic[bi];
        for &c in around_a {
            let around_c = &neighbors[c.index()];
            counters.candidates += around_c.len() as u64;
            for (di, &d) in around_c.iter().enumerate() {
                let q = Quad([a, b, c, d]);
                if !q.all_distinct() {
                    counters.degenerate += 1;
                    continue;
                }
                if !lengths_balance(q.0.map(len)) {
                    counters.pruned_by_length += 1;
                    continue;
                }
                if !tag_prune(tag(a), tag(b), tag(c), tag(d)) {
                    counters.pruned_by_tag += 1;
                    continue;
                }
                let p = q.0.map(|w| forms.phonemes[w.index()].as_slice());
                if !ab_phon.matches(&pair_sigs[c.index()].phonemic[di]) || !check_analogy(p[0], p[1], p[2], p[3]) {
                    continue;
                }
                counters.phonemic_pass += 1;
                let o = q.0.map(|w| forms.chars[w.index()].as_slice());
                if !ab_ortho.matches(&pair_sigs[c.index()].orthographic[di]) || !check_analogy(o[0], o[1], o[2], o[3]) {
                    continue;
                }
                counters.orthographic_pass += 1;
                found.push(q);
            }
        }
    }
    (counters, found)
}
