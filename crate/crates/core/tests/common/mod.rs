//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use filaments::analogy::{AnalogySet, Quad, QuadChecker};
use filaments::lexicon::{parse_lexicon, Lexicon, LexiconFormat, PhonemeString, WordId};
use filaments::network::{
    bootstrap, extract_seed, induced_series, reduce_series, reliable_families, render_filaments, series_map,
    RelationGraph, TypedEdges,
};
use filaments::pipeline::PipelineConfig;
use rand::Rng;

pub const ORACLE_LIMIT: usize = 40;
/// Bound for the lexicon fixtures, whose longest quadruplets run past 40.
pub const FIXTURE_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TooLarge(pub usize);

/// `a:b::c:d` iff there are factorizations with `(a_i = c_i and b_i = d_i)`
/// or `(a_i = b_i and c_i = d_i)` for every `i`. Refuses inputs over
/// `ORACLE_LIMIT` symbols in total.
pub fn oracle_analogy<T: Ord>(a: &[T], b: &[T], c: &[T], d: &[T]) -> Result<bool, TooLarge> {
    oracle_within(ORACLE_LIMIT, a, b, c, d)
}

pub fn oracle_within<T: Ord>(limit: usize, a: &[T], b: &[T], c: &[T], d: &[T]) -> Result<bool, TooLarge> {
    let total = a.len() + b.len() + c.len() + d.len();
    if total > limit {
        return Err(TooLarge(total));
    }
    if !same_multiset(a, d, b, c) {
        return Ok(false);
    }
    Ok(lattice_reachable(a, b, c, d))
}

/// `a ++ d` and `b ++ c` hold the same symbols.
fn same_multiset<T: Ord>(a: &[T], d: &[T], b: &[T], c: &[T]) -> bool {
    if a.len() + d.len() != b.len() + c.len() {
        return false;
    }
    let mut left: Vec<&T> = a.iter().chain(d).collect();
    let mut right: Vec<&T> = b.iter().chain(c).collect();
    left.sort();
    right.sort();
    left == right
}

/// The factorization search without any shortcut. Splitting factors into
/// single symbols, a step consumes one equal symbol from `(a, c)`, `(b, d)`,
/// `(a, b)` or `(c, d)`; the proportion holds iff the far corner of the
/// position lattice is reachable.
pub fn lattice_reachable<T: PartialEq>(a: &[T], b: &[T], c: &[T], d: &[T]) -> bool {
    let dims = [a.len() + 1, b.len() + 1, c.len() + 1, d.len() + 1];
    let index = |p: [usize; 4]| ((p[0] * dims[1] + p[1]) * dims[2] + p[2]) * dims[3] + p[3];
    let goal = [a.len(), b.len(), c.len(), d.len()];
    let mut seen = vec![false; dims.iter().product()];
    let mut stack = vec![[0usize; 4]];
    seen[0] = true;
    while let Some(p) = stack.pop() {
        if p == goal {
            return true;
        }
        let [i, j, k, l] = p;
        let mut next = Vec::with_capacity(4);
        if i < a.len() && k < c.len() && a[i] == c[k] {
            next.push([i + 1, j, k + 1, l]);
        }
        if j < b.len() && l < d.len() && b[j] == d[l] {
            next.push([i, j + 1, k, l + 1]);
        }
        if i < a.len() && j < b.len() && a[i] == b[j] {
            next.push([i + 1, j + 1, k, l]);
        }
        if k < c.len() && l < d.len() && c[k] == d[l] {
            next.push([i, j, k + 1, l + 1]);
        }
        for q in next {
            let n = index(q);
            if !seen[n] {
                seen[n] = true;
                stack.push(q);
            }
        }
    }
    false
}

pub fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

pub fn oracle_str(a: &str, b: &str, c: &str, d: &str) -> bool {
    oracle_analogy(&chars(a), &chars(b), &chars(c), &chars(d)).expect("small strings")
}

/// The eight readings of `a:b::c:d`, spelled out by letter.
pub fn symmetries<T: Copy>([a, b, c, d]: [T; 4]) -> [[T; 4]; 8] {
    [
        [a, b, c, d],
        [a, c, b, d],
        [b, a, d, c],
        [b, d, a, c],
        [c, a, d, b],
        [c, d, a, b],
        [d, b, c, a],
        [d, c, b, a],
    ]
}

/// Oracle on both the phonemic and the written forms.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleChecker;

impl QuadChecker for OracleChecker {
    fn holds(&self, lex: &Lexicon, q: Quad<WordId>) -> bool {
        let p = q.0.map(|w| lex.entry(w).phonemes.codes().to_vec());
        if !oracle_within(FIXTURE_LIMIT, &p[0], &p[1], &p[2], &p[3]).expect("fixture words are short") {
            return false;
        }
        let o = q.0.map(|w| chars(lex.form(w)));
        oracle_within(FIXTURE_LIMIT, &o[0], &o[1], &o[2], &o[3]).expect("fixture words are short")
    }
}

/// Every analogy between four distinct lexicon words that passes the tag
/// condition and the oracle, one quadruplet per orbit. A 4-set has three
/// orbits, one per way of choosing the extremes `{a, d}`.
pub fn oracle_enumeration(lex: &Lexicon) -> Vec<Quad<WordId>> {
    let ids: Vec<WordId> = lex.ids().collect();
    let n = ids.len();
    let len = |w: WordId| lex.entry(w).phonemes.len();
    let tag = |w: WordId| &lex.entry(w).tag;
    let mut found = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let (w, x, y, z) = (ids[i], ids[j], ids[k], ids[l]);
                    for q in [[w, x, y, z], [w, x, z, y], [w, y, z, x]] {
                        let [a, b, c, d] = q;
                        if len(a) + len(d) != len(b) + len(c) {
                            continue;
                        }
                        let tags_ok = (tag(a) == tag(b) && tag(c) == tag(d)) || (tag(a) == tag(c) && tag(b) == tag(d));
                        if tags_ok && OracleChecker.holds(lex, Quad(q)) {
                            found.push(Quad(q));
                        }
                    }
                }
            }
        }
    }
    found
}

/// The filament file of the reference computation: exhaustive oracle
/// enumeration instead of neighborhoods and signatures, and the oracle as
/// the bootstrap checker.
pub fn reference_filaments(lex: &Lexicon, cfg: &PipelineConfig) -> String {
    let set = AnalogySet::from_quads(lex, oracle_enumeration(lex));
    let g = RelationGraph::build(lex, &set);
    let f0 = reliable_families(g.family_candidates(), &g, cfg.w_threshold);
    let s0 = induced_series(&f0, &g);
    let g0 = TypedEdges { family: f0, series: s0 };
    let reduced = reduce_series(&series_map(&g0.series), cfg.cc_threshold);
    let seed = extract_seed(&g, &g0.family, &reduced);
    let outcome = bootstrap(lex, &g, &seed, &g0, &OracleChecker, &cfg.bootstrap()).expect("fixed point");
    render_filaments(lex, &outcome.network.filaments())
}

pub fn data_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn load_lexicon(name: &str) -> Lexicon {
    let text = std::fs::read_to_string(data_path(name)).expect("fixture lexicon");
    parse_lexicon(text.as_bytes(), LexiconFormat::Tsv).expect("valid fixture")
}

/// A bundled config with its output redirected.
pub fn fixture_config(name: &str, output: &Path) -> PipelineConfig {
    let mut cfg = PipelineConfig::from_toml_file(&data_path(name)).expect("valid fixture config");
    cfg.output = output.to_path_buf();
    cfg
}

pub fn lexicon_from(rows: &[(&str, &str, &str)]) -> Lexicon {
    let text: String = rows.iter().map(|(o, p, t)| format!("{o}\t{p}\t{t}\n")).collect();
    parse_lexicon(text.as_bytes(), LexiconFormat::Tsv).expect("valid rows")
}

/// Features as plain strings: windows of at least `min_len` positions over
/// `##`, the codes, `##`.
pub fn windows(p: &PhonemeString, min_len: usize) -> Vec<String> {
    let body = p.to_string();
    let mut positions = vec!["##".to_string()];
    positions.extend(
        body.as_bytes()
            .chunks(2)
            .map(|c| String::from_utf8(c.to_vec()).unwrap()),
    );
    positions.push("##".to_string());
    let mut out = Vec::new();
    for start in 0..positions.len() {
        for end in start + min_len..=positions.len() {
            out.push(positions[start..end].concat());
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Two-step activation by direct summation over shared features:
/// `sum_f 1 / (deg(s) * deg(f))`.
pub fn activation_by_summation(lex: &Lexicon, min_len: usize, source: WordId) -> Vec<f64> {
    let features: Vec<Vec<String>> = lex.entries().iter().map(|e| windows(&e.phonemes, min_len)).collect();
    let mut degree: HashMap<&str, usize> = HashMap::new();
    for fs in &features {
        for f in fs {
            *degree.entry(f.as_str()).or_default() += 1;
        }
    }
    let own = &features[source.index()];
    let deg_s = own.len() as f64;
    features
        .iter()
        .map(|fs| {
            fs.iter()
                .filter(|f| own.binary_search(f).is_ok())
                .map(|f| 1.0 / (deg_s * degree[f.as_str()] as f64))
                .sum()
        })
        .collect()
}

/// Random lexicon over a small inventory so that words share features.
pub fn random_lexicon<R: Rng>(rng: &mut R, words: usize) -> Lexicon {
    const CODES: [&str; 5] = ["aa", "bb", "kk", "ii", "on"];
    let rows: Vec<(String, String, String)> = (0..words)
        .map(|i| {
            let len = rng.gen_range(1..=7);
            let phon: String = (0..len).map(|_| CODES[rng.gen_range(0..CODES.len())]).collect();
            (format!("w{i}"), phon, "X".to_string())
        })
        .collect();
    let refs: Vec<(&str, &str, &str)> = rows
        .iter()
        .map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str()))
        .collect();
    lexicon_from(&refs)
}
