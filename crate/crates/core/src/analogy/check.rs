use super::signature::{signature, Signature};

/// The pair comparisons that the eight symmetries of `a:b::c:d` reduce to,
/// as position indices `((p, q), (r, s))` meaning `sig(p, q) ~ sig(r, s)`.
pub const ORBIT_COMPARISONS: [((usize, usize), (usize, usize)); 4] = [
    ((0, 1), (2, 3)), // a:b::c:d and c:d::a:b
    ((0, 2), (1, 3)), // a:c::b:d and b:d::a:c
    ((1, 0), (3, 2)), // b:a::d:c and d:c::b:a
    ((2, 0), (3, 1)), // c:a::d:b and d:b::c:a
];

/// Decides an analogy from pair signatures: every symmetric reading of the
/// quadruplet must have matching signatures. `sig(p, q)` yields the signature
/// of the words at positions `p` and `q`.
pub fn orbit_agrees<S>(mut sig: impl FnMut(usize, usize) -> S, same: impl Fn(&S, &S) -> bool) -> bool {
    ORBIT_COMPARISONS
        .iter()
        .all(|&((p, q), (r, s))| same(&sig(p, q), &sig(r, s)))
}

/// Signature-based formal analogy test `a : b :: c : d`.
pub fn check_analogy<T: Eq + Clone>(a: &[T], b: &[T], c: &[T], d: &[T]) -> bool {
    let words = [a, b, c, d];
    orbit_agrees(|p, q| signature(words[p], words[q]), Signature::matches)
}
