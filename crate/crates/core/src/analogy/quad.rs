use std::fmt;

use serde::{Deserialize, Serialize};

/// An ordered quadruplet read as `a : b :: c : d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quad<T>(pub [T; 4]);

/// Position permutations of the analogical proportion symmetry group, the
/// identity first. Entry `p` maps to `[q[p[0]], q[p[1]], q[p[2]], q[p[3]]]`.
pub const ORBIT: [[usize; 4]; 8] = [
    [0, 1, 2, 3], // a:b::c:d
    [0, 2, 1, 3], // a:c::b:d
    [1, 0, 3, 2], // b:a::d:c
    [1, 3, 0, 2], // b:d::a:c
    [2, 0, 3, 1], // c:a::d:b
    [2, 3, 0, 1], // c:d::a:b
    [3, 1, 2, 0], // d:b::c:a
    [3, 2, 1, 0], // d:c::b:a
];

impl<T: Copy> Quad<T> {
    pub fn a(&self) -> T {
        self.0[0]
    }
    pub fn b(&self) -> T {
        self.0[1]
    }
    pub fn c(&self) -> T {
        self.0[2]
    }
    pub fn d(&self) -> T {
        self.0[3]
    }

    pub fn permuted(&self, p: [usize; 4]) -> Self {
        Quad([self.0[p[0]], self.0[p[1]], self.0[p[2]], self.0[p[3]]])
    }

    /// The quadruplet under all eight symmetries, identity first.
    pub fn orbit(&self) -> [Quad<T>; 8] {
        ORBIT.map(|p| self.permuted(p))
    }

    /// Orbit member minimizing `key` lexicographically over the four positions.
    pub fn canonical_by<K: Ord>(&self, key: impl Fn(T) -> K) -> Self {
        self.orbit()
            .into_iter()
            .min_by(|x, y| x.0.map(&key).cmp(&y.0.map(&key)))
            .expect("orbit is non-empty")
    }
}

impl<T: Copy + Eq> Quad<T> {
    pub fn all_distinct(&self) -> bool {
        let q = &self.0;
        (0..4).all(|i| (i + 1..4).all(|j| q[i] != q[j]))
    }
}

impl<T: fmt::Display> fmt::Display for Quad<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "{a}:{b}::{c}:{d}")
    }
}
