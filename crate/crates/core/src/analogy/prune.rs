use crate::lexicon::{phoneme_length, MorphTag, PhonemeString};

/// Necessary condition on lengths: `l(a) - l(b) = l(c) - l(d)`.
pub fn length_prune(a: &PhonemeString, b: &PhonemeString, c: &PhonemeString, d: &PhonemeString) -> bool {
    lengths_balance([a, b, c, d].map(phoneme_length))
}

pub(crate) fn lengths_balance([a, b, c, d]: [usize; 4]) -> bool {
    a + d == b + c
}

/// Categorial condition: the tags pair up either along the pairs or along
/// the series.
pub fn tag_prune(ta: &MorphTag, tb: &MorphTag, tc: &MorphTag, td: &MorphTag) -> bool {
    (ta == tb && tc == td) || (ta == tc && tb == td)
}
