//! Morphological similarity by activation spreading over the word/feature
//! bipartite graph.
//!
//! Activation starts as unit mass on the source word, is divided evenly over
//! the source's features, then each feature divides what it received evenly
//! over the words that carry it. Both steps are products with a sparse
//! row-stochastic incidence matrix, so the activation of `x` from `s` is
//! `sum over shared f of 1 / (deg(s) * deg(f))`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use rayon::prelude::*;
use thiserror::Error;

use crate::lexicon::{extract_features, FeatureKey, Lexicon, WordId};

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("neighbor count must be at least 1")]
    ZeroNeighbors,
    #[error("neighborhood dump line {line}: {reason}")]
    Dump { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Compressed sparse rows with uniform weights per row.
#[derive(Debug, Clone)]
struct Incidence {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Incidence {
    fn from_rows(rows: &[Vec<u32>]) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut targets = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        offsets.push(0);
        for row in rows {
            targets.extend_from_slice(row);
            offsets.push(targets.len());
        }
        Incidence { offsets, targets }
    }

    fn row(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    fn rows(&self) -> usize {
        self.offsets.len() - 1
    }

    /// `x * P` where `P` is this incidence made row-stochastic.
    fn propagate(&self, x: &[(u32, f64)]) -> Vec<(u32, f64)> {
        let mut acc: HashMap<u32, f64> = HashMap::new();
        for &(i, mass) in x {
            let row = self.row(i as usize);
            if row.is_empty() {
                continue;
            }
            let share = mass / row.len() as f64;
            for &j in row {
                *acc.entry(j).or_insert(0.0) += share;
            }
        }
        let mut out: Vec<(u32, f64)> = acc.into_iter().collect();
        out.sort_unstable_by_key(|&(j, _)| j);
        out
    }
}

/// Words on one side, phoneme n-gram features on the other.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    word_to_features: Incidence,
    feature_to_words: Incidence,
    features: Vec<FeatureKey>,
    feature_index: HashMap<FeatureKey, u32>,
    forms: Vec<String>,
}

pub fn build_bipartite_graph(lex: &Lexicon, min_len: usize) -> BipartiteGraph {
    let mut feature_ids: HashMap<FeatureKey, u32> = HashMap::new();
    let mut features: Vec<FeatureKey> = Vec::new();
    let mut word_rows: Vec<Vec<u32>> = Vec::with_capacity(lex.len());
    for entry in lex.entries() {
        let mut row = Vec::new();
        for key in extract_features(&entry.phonemes, min_len) {
            let id = *feature_ids.entry(key.clone()).or_insert_with(|| {
                features.push(key);
                (features.len() - 1) as u32
            });
            row.push(id);
        }
        row.sort_unstable();
        word_rows.push(row);
    }
    let mut feature_rows: Vec<Vec<u32>> = vec![Vec::new(); features.len()];
    for (w, row) in word_rows.iter().enumerate() {
        for &f in row {
            feature_rows[f as usize].push(w as u32);
        }
    }
    BipartiteGraph {
        word_to_features: Incidence::from_rows(&word_rows),
        feature_to_words: Incidence::from_rows(&feature_rows),
        features,
        feature_index: feature_ids,
        forms: lex.entries().iter().map(|e| e.orthographic.clone()).collect(),
    }
}

impl BipartiteGraph {
    pub fn word_count(&self) -> usize {
        self.word_to_features.rows()
    }

    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub fn edge_count(&self) -> usize {
        self.word_to_features.targets.len()
    }

    pub fn word_degree(&self, w: WordId) -> usize {
        self.word_to_features.row(w.index()).len()
    }

    pub fn feature_degree(&self, key: &FeatureKey) -> Option<usize> {
        self.feature_index
            .get(key)
            .map(|&f| self.feature_to_words.row(f as usize).len())
    }

    pub fn features_of(&self, w: WordId) -> impl Iterator<Item = &FeatureKey> + '_ {
        self.word_to_features
            .row(w.index())
            .iter()
            .map(|&f| &self.features[f as usize])
    }

    /// Words carrying the given feature, in lexicon order.
    pub fn words_with(&self, key: &FeatureKey) -> Vec<WordId> {
        self.feature_index
            .get(key)
            .map(|&f| {
                self.feature_to_words
                    .row(f as usize)
                    .iter()
                    .map(|&w| WordId(w))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn shared_feature_count(&self, x: WordId, y: WordId) -> usize {
        let (a, b) = (
            self.word_to_features.row(x.index()),
            self.word_to_features.row(y.index()),
        );
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    fn check(&self, w: WordId) -> Result<(), SimilarityError> {
        if w.index() < self.word_count() {
            Ok(())
        } else {
            Err(SimilarityError::UnknownWord(format!("#{}", w.0)))
        }
    }
}

/// Activation mass per word, sparse and sorted by word id.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationVector {
    values: Vec<(WordId, f64)>,
}

impl ActivationVector {
    pub fn get(&self, w: WordId) -> f64 {
        self.values
            .binary_search_by_key(&w, |&(id, _)| id)
            .map(|i| self.values[i].1)
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (WordId, f64)> + '_ {
        self.values.iter().copied()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().map(|&(_, v)| v).sum()
    }

    pub fn support(&self) -> usize {
        self.values.len()
    }
}

pub fn spread_activation(g: &BipartiteGraph, source: WordId) -> Result<ActivationVector, SimilarityError> {
    g.check(source)?;
    let on_features = g.word_to_features.propagate(&[(source.0, 1.0)]);
    let on_words = g.feature_to_words.propagate(&on_features);
    Ok(ActivationVector {
        values: on_words.into_iter().map(|(w, v)| (WordId(w), v)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList {
    pub source: WordId,
    pub neighbors: Vec<(WordId, f64)>,
}

impl NeighborList {
    pub fn ids(&self) -> impl Iterator<Item = WordId> + '_ {
        self.neighbors.iter().map(|&(w, _)| w)
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }
}

/// Top-`k` words by activation from `source`, excluding the source itself.
/// Ties are broken by written form.
pub fn nearest_neighbors(g: &BipartiteGraph, source: WordId, k: usize) -> Result<NeighborList, SimilarityError> {
    if k == 0 {
        return Err(SimilarityError::ZeroNeighbors);
    }
    let activation = spread_activation(g, source)?;
    let mut ranked: Vec<(WordId, f64)> = activation.iter().filter(|&(w, v)| w != source && v > 0.0).collect();
    ranked.sort_by(|x, y| {
        y.1.total_cmp(&x.1)
            .then_with(|| g.forms[x.0.index()].cmp(&g.forms[y.0.index()]))
    });
    ranked.truncate(k);
    Ok(NeighborList {
        source,
        neighbors: ranked,
    })
}

/// Neighbor lists for every word of a lexicon, indexed by word id.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhoods {
    lists: Vec<NeighborList>,
}

impl Neighborhoods {
    pub fn compute(g: &BipartiteGraph, k: usize) -> Result<Self, SimilarityError> {
        let lists = (0..g.word_count() as u32)
            .into_par_iter()
            .map(|w| nearest_neighbors(g, WordId(w), k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Neighborhoods { lists })
    }

    pub fn from_lists(lists: Vec<NeighborList>) -> Self {
        Neighborhoods { lists }
    }

    pub fn get(&self, w: WordId) -> Option<&NeighborList> {
        self.lists.get(w.index())
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// One line per word: the source, then each neighbor with its activation,
    /// tab-separated.
    pub fn to_dump(&self, lex: &Lexicon) -> String {
        let mut out = String::new();
        for list in &self.lists {
            out.push_str(lex.form(list.source));
            for &(w, v) in &list.neighbors {
                let _ = write!(out, "\t{} {}", lex.form(w), v);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_dump<R: BufRead>(source: R, lex: &Lexicon) -> Result<Self, SimilarityError> {
        let mut lists: Vec<Option<NeighborList>> = vec![None; lex.len()];
        for (n, line) in source.lines().enumerate() {
            let line = line?;
            let err = |reason: String| SimilarityError::Dump { line: n + 1, reason };
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let head = fields.next().unwrap_or_default();
            let source = lex.lookup(head).ok_or_else(|| err(format!("unknown word `{head}`")))?;
            let mut neighbors = Vec::new();
            for field in fields {
                let (form, value) = field
                    .split_once(' ')
                    .ok_or_else(|| err(format!("malformed neighbor `{field}`")))?;
                let w = lex.lookup(form).ok_or_else(|| err(format!("unknown word `{form}`")))?;
                let v: f64 = value.parse().map_err(|_| err(format!("bad activation `{value}`")))?;
                neighbors.push((w, v));
            }
            lists[source.index()] = Some(NeighborList { source, neighbors });
        }
        let lists = lists
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                l.ok_or_else(|| SimilarityError::Dump {
                    line: 0,
                    reason: format!("no neighborhood for `{}`", lex.form(WordId(i as u32))),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Neighborhoods { lists })
    }
}
