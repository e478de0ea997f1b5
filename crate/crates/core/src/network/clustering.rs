//! Series reduction by local clustering coefficient, and seed extraction.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::graph::{induced_series, RelationGraph};
use super::{Edge, TypedEdges};
use crate::lexicon::WordId;

/// `s0(a)`: the words in a serial relation with `a`.
pub type SeriesMap = BTreeMap<WordId, BTreeSet<WordId>>;

pub fn series_map(series: &BTreeSet<Edge>) -> SeriesMap {
    let mut map = SeriesMap::new();
    for &(a, c) in series {
        map.entry(a).or_default().insert(c);
    }
    map
}

/// Non-negative rational, compared exactly.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        Ratio { num, den }
    }

    /// The decimal value as written, so `0.66` is exactly 66/100.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() || x < 0.0 {
            return None;
        }
        x.to_string().parse().ok()
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl FromStr for Ratio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("not a non-negative decimal: `{s}`");
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int.checked_mul(den).and_then(|n| n.checked_add(frac)).ok_or_else(bad)?;
        Ok(Ratio { num, den })
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

/// Triangles over triples for `c` within the series of `a`:
/// `|(s0(a) - {c}) & (s0(c) - {a})| / (|s0(a)| - 1)`. `None` when `s0(a)`
/// has fewer than two members.
pub fn clustering_coefficient(a: WordId, c: WordId, s0: &SeriesMap) -> Option<Ratio> {
    let empty = BTreeSet::new();
    let of_a = s0.get(&a).unwrap_or(&empty);
    if of_a.len() < 2 {
        return None;
    }
    let of_c = s0.get(&c).unwrap_or(&empty);
    let triangles = of_a.iter().filter(|&&x| x != c && x != a && of_c.contains(&x)).count();
    Some(Ratio::new(triangles as u64, of_a.len() as u64 - 1))
}

/// `s'0(a)`: members of `s0(a)` whose clustering coefficient reaches the
/// threshold. Empty when `s0(a)` has fewer than two members.
pub fn clustering_reduce(a: WordId, s0: &SeriesMap, threshold: Ratio) -> BTreeSet<WordId> {
    let Some(of_a) = s0.get(&a) else {
        return BTreeSet::new();
    };
    of_a.iter()
        .copied()
        .filter(|&c| clustering_coefficient(a, c, s0).is_some_and(|r| r >= threshold))
        .collect()
}

pub fn reduce_series(s0: &SeriesMap, threshold: Ratio) -> SeriesMap {
    s0.keys()
        .map(|&a| (a, clustering_reduce(a, s0, threshold)))
        .filter(|(_, s)| !s.is_empty())
        .collect()
}

/// Keeps the reliable family edges `(a, b)` whose sub-series meets the
/// central cluster `s'0(a)`, together with the serial relations they induce.
pub fn extract_seed(g: &RelationGraph, f0: &BTreeSet<Edge>, reduced: &SeriesMap) -> TypedEdges {
    let empty = BTreeSet::new();
    let family: BTreeSet<Edge> = f0
        .iter()
        .copied()
        .filter(|&(a, b)| {
            let central = reduced.get(&a).unwrap_or(&empty);
            g.series(a, b).iter().any(|c| central.contains(c))
        })
        .collect();
    let series = induced_series(&family, g);
    TypedEdges { family, series }
}
