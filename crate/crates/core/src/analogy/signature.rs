//! Analogical signatures: canonical edit paths between two strings.
//!
//! The path comes from a longest-common-subsequence alignment. Among
//! co-optimal alignments the kept positions are chosen leftmost in the first
//! string, then leftmost in the second. Within each gap between kept runs the
//! deletion comes before the insertion.

/// One segment of an edit path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EditOp<T> {
    /// Copy this many symbols from the source.
    Keep(usize),
    Delete(Vec<T>),
    Insert(Vec<T>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature<T> {
    ops: Vec<EditOp<T>>,
}

/// What two pairs must share to stand in analogy: the sequence of operations
/// with deleted and inserted material, kept runs reduced to placeholders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternOp<T> {
    Keep,
    Delete(Vec<T>),
    Insert(Vec<T>),
}

impl<T: Clone> Signature<T> {
    pub fn ops(&self) -> &[EditOp<T>] {
        &self.ops
    }

    /// Replays the path against `source`; `None` if the kept lengths overrun it.
    pub fn apply(&self, source: &[T]) -> Option<Vec<T>> {
        let mut pos = 0;
        let mut out = Vec::new();
        for op in &self.ops {
            match op {
                EditOp::Keep(n) => {
                    out.extend_from_slice(source.get(pos..pos + n)?);
                    pos += n;
                }
                EditOp::Delete(seg) => pos += seg.len(),
                EditOp::Insert(seg) => out.extend_from_slice(seg),
            }
        }
        (pos == source.len()).then_some(out)
    }

    pub fn pattern(&self) -> Vec<PatternOp<T>> {
        self.ops
            .iter()
            .map(|op| match op {
                EditOp::Keep(_) => PatternOp::Keep,
                EditOp::Delete(s) => PatternOp::Delete(s.clone()),
                EditOp::Insert(s) => PatternOp::Insert(s.clone()),
            })
            .collect()
    }
}

impl<T: PartialEq> Signature<T> {
    /// Analogical identity: same operations with the same edited material.
    /// Kept runs match regardless of their length or content.
    pub fn matches(&self, other: &Signature<T>) -> bool {
        self.ops.len() == other.ops.len()
            && self.ops.iter().zip(&other.ops).all(|pair| match pair {
                (EditOp::Keep(_), EditOp::Keep(_)) => true,
                (EditOp::Delete(x), EditOp::Delete(y)) | (EditOp::Insert(x), EditOp::Insert(y)) => x == y,
                _ => false,
            })
    }
}

/// Suffix LCS table, `(n + 1) * (m + 1)` cells, row-major over `a`.
fn lcs_table<T: Eq>(a: &[T], b: &[T]) -> Vec<u32> {
    let w = b.len() + 1;
    let mut table = vec![0u32; (a.len() + 1) * w];
    for i in (0..a.len()).rev() {
        for j in (0..b.len()).rev() {
            table[i * w + j] = if a[i] == b[j] {
                table[(i + 1) * w + j + 1] + 1
            } else {
                table[(i + 1) * w + j].max(table[i * w + j + 1])
            };
        }
    }
    table
}

/// Kept position pairs of the canonical alignment.
fn canonical_alignment<T: Eq>(a: &[T], b: &[T]) -> Vec<(usize, usize)> {
    let w = b.len() + 1;
    let table = lcs_table(a, b);
    let mut kept = Vec::with_capacity(table[0] as usize);
    let (mut i, mut j) = (0, 0);
    while i < a.len() && table[i * w + j] > 0 {
        // the first occurrence of a[i] in b[j..] leaves the most room behind it
        if let Some(off) = b[j..].iter().position(|x| *x == a[i]) {
            let jj = j + off;
            if table[(i + 1) * w + jj + 1] + 1 == table[i * w + j] {
                kept.push((i, jj));
                i += 1;
                j = jj + 1;
                continue;
            }
        }
        i += 1;
    }
    kept
}

pub fn signature<T: Eq + Clone>(a: &[T], b: &[T]) -> Signature<T> {
    let kept = canonical_alignment(a, b);
    let mut ops: Vec<EditOp<T>> = Vec::new();
    let (mut i, mut j) = (0, 0);
    let push_gap = |ops: &mut Vec<EditOp<T>>, del: &[T], ins: &[T]| {
        if !del.is_empty() {
            ops.push(EditOp::Delete(del.to_vec()));
        }
        if !ins.is_empty() {
            ops.push(EditOp::Insert(ins.to_vec()));
        }
    };
    for (ki, kj) in kept {
        if ki != i || kj != j {
            push_gap(&mut ops, &a[i..ki], &b[j..kj]);
        }
        match ops.last_mut() {
            Some(EditOp::Keep(n)) if ki == i && kj == j => *n += 1,
            _ => ops.push(EditOp::Keep(1)),
        }
        i = ki + 1;
        j = kj + 1;
    }
    push_gap(&mut ops, &a[i..], &b[j..]);
    Signature { ops }
}
