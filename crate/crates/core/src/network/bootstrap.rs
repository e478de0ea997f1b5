//! Fixed-point extension of the seed through the analogies induced by the
//! transitive closures of its families.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::filament::Filament;
use super::graph::RelationGraph;
use super::{type_analogy, Edge, NetworkError, TypedEdges};
use crate::analogy::{length_prune, tag_prune, Quad, QuadChecker};
use crate::lexicon::{Lexicon, WordId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Minimum sub-series size of an extension filament once the size
    /// filter applies.
    pub min_subseries: usize,
    /// Iteration index from which the size filter applies.
    pub filter_from: usize,
    pub max_iterations: usize,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            min_subseries: 5,
            filter_from: 2,
            max_iterations: 50,
        }
    }
}

/// Final relations plus, for each first pair, the words `c` licensed by an
/// analogy `a:b::c:d` (from the analogy set or accepted during bootstrap).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Network {
    pub edges: TypedEdges,
    pub licenses: BTreeMap<Edge, BTreeSet<WordId>>,
}

impl Network {
    pub fn new(g: &RelationGraph, edges: TypedEdges, extensions: &BTreeSet<Quad<WordId>>) -> Self {
        let mut licenses: BTreeMap<Edge, BTreeSet<WordId>> = BTreeMap::new();
        for &(a, b) in &edges.family {
            let set = g.series(a, b);
            if !set.is_empty() {
                licenses.insert((a, b), set);
            }
        }
        for q in extensions {
            if edges.family.contains(&(q.a(), q.b())) {
                licenses.entry((q.a(), q.b())).or_default().insert(q.c());
            }
        }
        Network { edges, licenses }
    }

    /// One filament per family edge `(a, b)`: the licensed `c` that are in
    /// a serial relation with `a`. Filaments with an empty sub-series are
    /// omitted.
    pub fn filaments(&self) -> Vec<Filament> {
        self.edges
            .family
            .iter()
            .filter_map(|&(a, b)| {
                let sub_series: BTreeSet<WordId> = self
                    .licenses
                    .get(&(a, b))?
                    .iter()
                    .copied()
                    .filter(|&c| self.edges.series.contains(&(a, c)))
                    .collect();
                (!sub_series.is_empty()).then_some(Filament {
                    entry: a,
                    pivot: b,
                    sub_series,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapOutcome {
    /// `M_0, M_1, ...` up to and including the fixed point.
    pub iterations: Vec<TypedEdges>,
    /// Verified analogies that contributed an extension, in family-pair order.
    pub extensions: BTreeSet<Quad<WordId>>,
    /// The fixed point merged with the initial typed subgraph.
    pub network: Network,
}

impl BootstrapOutcome {
    pub fn fixed_point(&self) -> &TypedEdges {
        self.iterations.last().expect("at least the seed")
    }
}

/// Connected components of the undirected family relation, each sorted,
/// listed by smallest member.
fn family_components(family: &BTreeSet<Edge>) -> Vec<Vec<WordId>> {
    let mut adjacency: BTreeMap<WordId, BTreeSet<WordId>> = BTreeMap::new();
    for &(a, b) in family {
        adjacency.entry(a).or_default().insert(b);
        adjacency.entry(b).or_default().insert(a);
    }
    let mut seen = BTreeSet::new();
    let mut components = Vec::new();
    for &start in adjacency.keys() {
        if !seen.insert(start) {
            continue;
        }
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &adjacency[&x] {
                if seen.insert(y) {
                    component.push(y);
                    stack.push(y);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}

fn ordered_pairs(component: &[WordId]) -> impl Iterator<Item = Edge> + '_ {
    component
        .iter()
        .flat_map(move |&a| component.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
}

/// Verified analogies between two distinct family components whose family
/// pair and serial pair are both edges of the relation graph.
fn induced_analogies(
    lex: &Lexicon,
    g: &RelationGraph,
    components: &[Vec<WordId>],
    checker: &dyn QuadChecker,
) -> Vec<Quad<WordId>> {
    (0..components.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut found = Vec::new();
            for (j, other) in components.iter().enumerate() {
                if i == j {
                    continue;
                }
                for (a, b) in ordered_pairs(&components[i]) {
                    if !g.contains((a, b)) {
                        continue;
                    }
                    for (c, d) in ordered_pairs(other) {
                        if !g.contains((a, c)) {
                            continue;
                        }
                        let q = Quad([a, b, c, d]);
                        let e = |w: WordId| lex.entry(w);
                        if !length_prune(&e(a).phonemes, &e(b).phonemes, &e(c).phonemes, &e(d).phonemes)
                            || !tag_prune(&e(a).tag, &e(b).tag, &e(c).tag, &e(d).tag)
                            || !type_analogy(lex, q).licenses_family()
                        {
                            continue;
                        }
                        if checker.holds(lex, q) {
                            found.push(q);
                        }
                    }
                }
            }
            found
        })
        .collect()
}

pub fn bootstrap(
    lex: &Lexicon,
    g: &RelationGraph,
    seed: &TypedEdges,
    g0: &TypedEdges,
    checker: &dyn QuadChecker,
    cfg: &BootstrapConfig,
) -> Result<BootstrapOutcome, NetworkError> {
    let mut iterations = vec![seed.clone()];
    let mut extensions: BTreeSet<Quad<WordId>> = BTreeSet::new();
    loop {
        let step = iterations.len() - 1;
        let current = &iterations[step];
        let components = family_components(&current.family);

        let mut by_pair: BTreeMap<Edge, Vec<Quad<WordId>>> = BTreeMap::new();
        for q in induced_analogies(lex, g, &components, checker) {
            by_pair.entry((q.a(), q.b())).or_default().push(q);
        }
        let mut extension = TypedEdges::default();
        for (pair, quads) in by_pair {
            let sub_series: BTreeSet<WordId> = quads.iter().map(|q| q.c()).collect();
            if step >= cfg.filter_from && sub_series.len() < cfg.min_subseries {
                continue;
            }
            extension.family.insert(pair);
            extension.series.extend(sub_series.iter().map(|&c| (pair.0, c)));
            extensions.extend(quads);
        }

        let next = current.union(&extension);
        if next == *current {
            break;
        }
        if step + 1 > cfg.max_iterations {
            return Err(NetworkError::IterationCap(cfg.max_iterations));
        }
        iterations.push(next);
    }
    let merged = iterations.last().expect("seed").union(g0);
    let network = Network::new(g, merged, &extensions);
    Ok(BootstrapOutcome {
        iterations,
        extensions,
        network,
    })
}
