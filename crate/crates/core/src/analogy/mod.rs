//! Formal analogy between words: signatures, the symmetric checker, the
//! pruning heuristics and the neighborhood-driven enumeration of the
//! analogy set.

mod check;
mod enumerate;
mod prune;
mod quad;
mod signature;

pub use check::{check_analogy, orbit_agrees, ORBIT_COMPARISONS};
pub use enumerate::{
    enumerate_analogies, Analogy, AnalogyCounters, AnalogyError, AnalogyKind, AnalogySet, EnumerationConfig,
};
pub use prune::{length_prune, tag_prune};
pub use quad::{Quad, ORBIT};
pub use signature::{signature, EditOp, PatternOp, Signature};

use crate::lexicon::{Lexicon, Phoneme, WordId};

/// Something that decides whether four lexicon words form an analogy.
pub trait QuadChecker: Sync {
    fn holds(&self, lex: &Lexicon, q: Quad<WordId>) -> bool;
}

/// The production checker: signature agreement on both the phonemic and the
/// written forms.
#[derive(Debug, Clone, Copy, Default)]
pub struct SignatureChecker;

impl QuadChecker for SignatureChecker {
    fn holds(&self, lex: &Lexicon, q: Quad<WordId>) -> bool {
        let phon = q.0.map(|w| lex.entry(w).phonemes.codes());
        if !check_analogy::<Phoneme>(phon[0], phon[1], phon[2], phon[3]) {
            return false;
        }
        let ortho = q.0.map(|w| lex.form(w).chars().collect::<Vec<_>>());
        check_analogy(&ortho[0], &ortho[1], &ortho[2], &ortho[3])
    }
}
