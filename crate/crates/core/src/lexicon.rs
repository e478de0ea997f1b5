//! Lexicon ingestion and the phonemic representations derived from it.
//!
//! A lexicon file is tab-separated UTF-8 with three columns per record:
//! the written form, the phoneme codes (two characters per phoneme, no
//! boundary markers) and a morphosyntactic tag. Lines starting with `#` are
//! comments and blank lines are ignored.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Boundary marker placed before and after a word for feature extraction.
pub const BOUNDARY: &str = "##";

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: duplicate entry `{form}` (first seen on line {first})")]
    Duplicate { line: usize, first: usize, form: String },
    #[error("invalid phoneme string `{0}`: {1}")]
    Phonemes(String, &'static str),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A single phoneme code, exactly two characters wide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phoneme([char; 2]);

impl Phoneme {
    pub fn new(first: char, second: char) -> Result<Self, LexiconError> {
        for ch in [first, second] {
            if ch == '#' || ch.is_whitespace() || ch.is_control() {
                return Err(LexiconError::Phonemes(
                    format!("{first}{second}"),
                    "phoneme codes may not contain `#`, whitespace or control characters",
                ));
            }
        }
        Ok(Phoneme([first, second]))
    }
}

impl fmt::Display for Phoneme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0[0], self.0[1])
    }
}

/// Sequence of two-character phoneme codes, stored without boundary markers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PhonemeString(Vec<Phoneme>);

impl PhonemeString {
    pub fn parse(body: &str) -> Result<Self, LexiconError> {
        let chars: Vec<char> = body.chars().collect();
        if !chars.len().is_multiple_of(2) {
            return Err(LexiconError::Phonemes(body.to_string(), "odd number of characters"));
        }
        chars
            .chunks_exact(2)
            .map(|pair| Phoneme::new(pair[0], pair[1]))
            .collect::<Result<Vec<_>, _>>()
            .map(PhonemeString)
    }

    pub fn codes(&self) -> &[Phoneme] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of phonemes, boundary markers excluded.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// The boundary-marked form used for feature extraction: `##` + codes + `##`.
    pub fn marked(&self) -> String {
        let mut out = String::with_capacity(self.0.len() * 2 + 4);
        out.push_str(BOUNDARY);
        for code in &self.0 {
            out.push(code.0[0]);
            out.push(code.0[1]);
        }
        out.push_str(BOUNDARY);
        out
    }
}

impl fmt::Display for PhonemeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for code in &self.0 {
            write!(f, "{code}")?;
        }
        Ok(())
    }
}

pub fn phoneme_length(p: &PhonemeString) -> usize {
    p.len()
}

/// Morphosyntactic tag. Compared by exact string equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MorphTag(String);

impl MorphTag {
    pub fn new(value: impl Into<String>) -> Option<Self> {
        let value = value.into();
        (!value.is_empty()).then_some(MorphTag(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MorphTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Feature of the similarity graph: a window over the boundary-marked
/// phoneme sequence, rendered as its concatenated codes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureKey(String);

impl FeatureKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FeatureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// All windows of at least `min_len` positions over the marked sequence,
/// where each boundary marker occupies one position.
pub fn extract_features(p: &PhonemeString, min_len: usize) -> BTreeSet<FeatureKey> {
    let min_len = min_len.max(1);
    let mut positions: Vec<String> = Vec::with_capacity(p.len() + 2);
    positions.push(BOUNDARY.to_string());
    positions.extend(p.codes().iter().map(Phoneme::to_string));
    positions.push(BOUNDARY.to_string());

    let mut features = BTreeSet::new();
    for start in 0..positions.len() {
        let mut window = String::new();
        for (offset, code) in positions[start..].iter().enumerate() {
            window.push_str(code);
            if offset + 1 >= min_len {
                features.insert(FeatureKey(window.clone()));
            }
        }
    }
    features
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub orthographic: String,
    pub phonemes: PhonemeString,
    pub tag: MorphTag,
}

/// Index of an entry within its [`Lexicon`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WordId(pub u32);

impl WordId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LexiconFormat {
    #[default]
    Tsv,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    index: HashMap<String, WordId>,
    // rank of each entry when sorted by written form
    ortho_rank: Vec<u32>,
}

impl Lexicon {
    pub fn from_entries(entries: Vec<LexiconEntry>) -> Result<Self, LexiconError> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, entry) in entries.iter().enumerate() {
            if let Some(prev) = index.insert(entry.orthographic.clone(), WordId(i as u32)) {
                return Err(LexiconError::Duplicate {
                    line: i + 1,
                    first: prev.index() + 1,
                    form: entry.orthographic.clone(),
                });
            }
        }
        let mut order: Vec<usize> = (0..entries.len()).collect();
        order.sort_by(|&x, &y| entries[x].orthographic.cmp(&entries[y].orthographic));
        let mut ortho_rank = vec![0; entries.len()];
        for (rank, i) in order.into_iter().enumerate() {
            ortho_rank[i] = rank as u32;
        }
        Ok(Lexicon {
            entries,
            index,
            ortho_rank,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn ids(&self) -> impl Iterator<Item = WordId> + '_ {
        (0..self.entries.len() as u32).map(WordId)
    }

    pub fn entry(&self, id: WordId) -> &LexiconEntry {
        &self.entries[id.index()]
    }

    pub fn form(&self, id: WordId) -> &str {
        &self.entries[id.index()].orthographic
    }

    pub fn lookup(&self, form: &str) -> Option<WordId> {
        self.index.get(form).copied()
    }

    pub fn require(&self, form: &str) -> Result<WordId, LexiconError> {
        self.lookup(form)
            .ok_or_else(|| LexiconError::UnknownWord(form.to_string()))
    }

    /// Position of the word in lexicographic order of written forms.
    pub fn ortho_rank(&self, id: WordId) -> u32 {
        self.ortho_rank[id.index()]
    }
}

pub fn parse_lexicon<R: BufRead>(source: R, format: LexiconFormat) -> Result<Lexicon, LexiconError> {
    match format {
        LexiconFormat::Tsv => parse_tsv(source),
    }
}

fn parse_tsv<R: BufRead>(source: R) -> Result<Lexicon, LexiconError> {
    let mut entries = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (n, line) in source.lines().enumerate() {
        let line_no = n + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |reason: String| LexiconError::Malformed { line: line_no, reason };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(malformed(format!("expected 3 fields, found {}", fields.len())));
        }
        if let Some(i) = fields.iter().position(|f| f.is_empty()) {
            return Err(malformed(format!("field {} is empty", i + 1)));
        }
        let orthographic = fields[0];
        if orthographic.chars().any(char::is_whitespace) {
            return Err(malformed("written form contains whitespace".into()));
        }
        let phonemes = PhonemeString::parse(fields[1]).map_err(|e| malformed(e.to_string()))?;
        let tag = MorphTag::new(fields[2]).expect("checked non-empty");
        if let Some(&first) = seen.get(orthographic) {
            return Err(LexiconError::Duplicate {
                line: line_no,
                first,
                form: orthographic.to_string(),
            });
        }
        seen.insert(orthographic.to_string(), line_no);
        entries.push(LexiconEntry {
            orthographic: orthographic.to_string(),
            phonemes,
            tag,
        });
    }
    Lexicon::from_entries(entries)
}
