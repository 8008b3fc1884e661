//! Candidate-root retrieval.
//!
//! Root surface forms are indexed by q-gram into fixed-width bit vectors. A
//! misspelled word is prefiltered by taking its leading `k` q-grams,
//! intersecting the vectors of every `(k - t_q)`-subset and unioning the
//! results; survivors are then kept only if some prefix of the word is within
//! the edit threshold of the root.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::distance::{alignment, AlignmentResult, ErrorMatrix};
use crate::langdef::{LanguageDefinition, Root, RootId};

/// Uncompressed bit vector over root ids.
#[derive(Clone, PartialEq, Eq)]
pub struct RootSet {
    words: Vec<u64>,
    len: usize,
}

impl RootSet {
    pub fn empty(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = Self::empty(len);
        for w in &mut set.words {
            *w = u64::MAX;
        }
        set.clear_tail();
        set
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Number of bits (not the number of set bits).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, id: RootId) {
        assert!(id.0 < self.len, "root id {} out of range", id.0);
        self.words[id.0 / 64] |= 1 << (id.0 % 64);
    }

    pub fn contains(&self, id: RootId) -> bool {
        id.0 < self.len && self.words[id.0 / 64] & (1 << (id.0 % 64)) != 0
    }

    pub fn intersect_with(&mut self, other: &RootSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &RootSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = RootId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(RootId(wi * 64 + bit))
            })
        })
    }

    pub fn is_subset(&self, other: &RootSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|id| id.0)).finish()
    }
}

/// q-gram of root surfaces -> roots containing it.
#[derive(Debug, Clone)]
pub struct QGramIndex {
    q: usize,
    grams: BTreeMap<String, RootSet>,
    root_count: usize,
}

impl QGramIndex {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn root_count(&self) -> usize {
        self.root_count
    }

    pub fn get(&self, gram: &str) -> Option<&RootSet> {
        self.grams.get(gram)
    }

    pub fn gram_count(&self) -> usize {
        self.grams.len()
    }

    /// Vector for `gram`, all-zero when no root contains it.
    pub fn vector(&self, gram: &str) -> RootSet {
        self.grams
            .get(gram)
            .cloned()
            .unwrap_or_else(|| RootSet::empty(self.root_count))
    }
}

/// Builds the inverted index over root surface forms.
///
/// # Panics
///
/// Panics if `q == 0`.
pub fn build_index(roots: &[Root], q: usize) -> QGramIndex {
    assert!(q >= 1, "q-gram length must be positive");
    let root_count = roots.len();
    let mut grams: BTreeMap<String, RootSet> = BTreeMap::new();
    for root in roots {
        let chars: Vec<char> = root.surface.chars().collect();
        for window in chars.windows(q) {
            grams
                .entry(window.iter().collect())
                .or_insert_with(|| RootSet::empty(root_count))
                .insert(root.id);
        }
    }
    QGramIndex {
        q,
        grams,
        root_count,
    }
}

/// Prefilter and edit-distance parameters for root retrieval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootQuery {
    /// Leading q-grams of the word consulted.
    pub k: usize,
    /// How many of them a root may lack.
    pub t_q: usize,
    /// Edit-distance threshold.
    pub t: usize,
}

impl RootQuery {
    pub fn new(k: usize, t_q: usize, t: usize) -> Result<Self, String> {
        if k == 0 {
            return Err("k must be at least 1".into());
        }
        if t_q >= k {
            return Err(format!("t_q ({t_q}) must be smaller than k ({k})"));
        }
        Ok(Self { k, t_q, t })
    }
}

impl Default for RootQuery {
    fn default() -> Self {
        Self { k: 3, t_q: 2, t: 1 }
    }
}

/// Leading q-grams of `x`, at most `k` of them, in positional order.
pub fn leading_qgrams(x: &str, q: usize, k: usize) -> Vec<String> {
    let chars: Vec<char> = x.chars().collect();
    chars
        .windows(q)
        .take(k)
        .map(|w| w.iter().collect())
        .collect()
}

/// Roots sharing at least `k - t_q` of the word's leading `k` q-grams.
///
/// A word with fewer than `k` q-grams uses the ones it has (with `t_q`
/// clamped below that count); a word with none passes every root.
pub fn prefilter_roots(x: &str, idx: &QGramIndex, query: &RootQuery) -> RootSet {
    let grams = leading_qgrams(x, idx.q, query.k);
    if grams.is_empty() {
        return RootSet::full(idx.root_count);
    }
    let t_q = query.t_q.min(grams.len() - 1);
    let subset_size = grams.len() - t_q;
    let vectors: Vec<RootSet> = grams.iter().map(|g| idx.vector(g)).collect();
    let mut result = RootSet::empty(idx.root_count);
    for subset in (0..vectors.len()).combinations(subset_size) {
        let mut acc = vectors[subset[0]].clone();
        for &i in &subset[1..] {
            acc.intersect_with(&vectors[i]);
        }
        result.union_with(&acc);
    }
    result
}

/// A retrieved root with its alignment against the word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateRoot {
    pub root: RootId,
    pub alignment: AlignmentResult,
}

/// Keeps the roots in `survivors` whose prefix edit distance to `x` is within
/// `t`, plus one unit of slack when the root ends in a mutable final char
/// (its last char may surface differently once a suffix is attached).
/// Returns the candidates in root-id order and the number of matrix cells
/// evaluated.
pub fn filter_roots(
    x: &str,
    def: &LanguageDefinition,
    survivors: &RootSet,
    t: usize,
) -> (Vec<CandidateRoot>, u64) {
    let x: Vec<char> = x.chars().collect();
    let mut h = ErrorMatrix::new(&x);
    let mut out = Vec::new();
    for id in survivors.iter() {
        let root = def.root(id);
        let surface: Vec<char> = root.surface.chars().collect();
        h.sync(&surface);
        let alignment = alignment(&h);
        let limit = t as u32 + def.rules.mutation_slack(&surface);
        if alignment.pred <= limit {
            out.push(CandidateRoot {
                root: id,
                alignment,
            });
        }
    }
    (out, h.evaluations())
}

/// PR(x, t) restricted to the prefilter's survivors.
pub fn candidate_roots(
    x: &str,
    def: &LanguageDefinition,
    idx: &QGramIndex,
    query: &RootQuery,
) -> Vec<CandidateRoot> {
    let survivors = prefilter_roots(x, idx, query);
    filter_roots(x, def, &survivors, query.t).0
}
