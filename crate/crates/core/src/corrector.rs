//! Candidate generation.
//!
//! For every retrieved root the morphotactics graph is searched depth first
//! with an explicit stack. Each step attaches one morpheme, realizes the new
//! surface prefix and extends the error matrix for it; a branch is abandoned
//! as soon as the cut-off distance shows that no extension can come within the
//! threshold. Surface prefixes ending in a char that a later morpheme may
//! still rewrite get one extra unit of threshold for that test only.
//!
//! Roots whose prefix edit distance uses up the whole threshold are also
//! tried directly as "left edge" solutions: the root followed by the
//! unmatched remainder of the word, checked with the recognizer.

use std::collections::BTreeMap;
use std::ops::AddAssign;

use crate::distance::{edit_distance_chars, ErrorMatrix};
use crate::langdef::{LanguageDefinition, Root, RootId, StateId};
use crate::ranking::{rank, Suggestion};
use crate::rootindex::{
    build_index, filter_roots, prefilter_roots, CandidateRoot, QGramIndex, RootQuery, RootSet,
};
use crate::surface::Realizer;

/// One morphological derivation of a candidate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Analysis {
    /// Morphemes joined by the boundary char, root first.
    pub lexical: String,
    pub root: RootId,
    /// Transition indices taken after the root.
    pub path: Vec<usize>,
}

/// A valid word close to the input, with every derivation found for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub surface: String,
    pub distance: u32,
    /// Sorted, never empty.
    pub analyses: Vec<Analysis>,
}

impl Candidate {
    pub fn lexical(&self) -> &str {
        &self.analyses[0].lexical
    }

    pub fn root(&self) -> RootId {
        self.analyses[0].root
    }

    pub fn surface_len(&self) -> usize {
        self.surface.chars().count()
    }
}

/// Operation counts for one or more queries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CorrectionStats {
    /// Recognizer invocations.
    pub recognitions: u64,
    /// Surface realizations of candidate lexical strings.
    pub generations: u64,
    /// Edit-distance matrix cells evaluated.
    pub edit_ops: u64,
    /// Candidates returned.
    pub solutions: u64,
}

impl AddAssign for CorrectionStats {
    fn add_assign(&mut self, rhs: Self) {
        self.recognitions += rhs.recognitions;
        self.generations += rhs.generations;
        self.edit_ops += rhs.edit_ops;
        self.solutions += rhs.solutions;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub query: RootQuery,
    /// Cut-off pruning. When off, branches are bounded by surface length only.
    pub prune: bool,
    /// q-gram prefilter. When off, every root is checked by edit distance.
    pub prefilter: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            query: RootQuery::default(),
            prune: true,
            prefilter: true,
        }
    }
}

impl SearchOptions {
    pub fn with_threshold(mut self, t: usize) -> Self {
        self.query.t = t;
        self
    }
}

/// A pending node of the search: a lexical prefix and the state it reached.
#[derive(Debug, Clone)]
pub struct SearchFrame {
    pub lexical: String,
    pub state: StateId,
    /// Realization of `lexical`; also the key the error matrix is synced to.
    pub surface: Vec<char>,
    pub effective_t: usize,
    root: RootId,
    path: Vec<usize>,
    /// Consecutive steps that did not lengthen the surface.
    stall: usize,
}

/// Sets the frame's pruning threshold: `t`, plus one when its surface ends
/// in a mutable final char. Acceptance of complete candidates always uses `t`.
pub fn adjust_threshold(mut frame: SearchFrame, t: usize, def: &LanguageDefinition) -> SearchFrame {
    frame.effective_t = t + def.rules.mutation_slack(&frame.surface) as usize;
    frame
}

type Solutions = BTreeMap<String, Candidate>;

fn emit(out: &mut Solutions, surface: &[char], distance: u32, analysis: Analysis) {
    let key: String = surface.iter().collect();
    let entry = out.entry(key.clone()).or_insert_with(|| Candidate {
        surface: key,
        distance,
        analyses: Vec::new(),
    });
    if let Err(pos) = entry.analyses.binary_search(&analysis) {
        entry.analyses.insert(pos, analysis);
    }
}

/// Search machinery over one language definition, independent of root retrieval.
#[derive(Debug, Clone)]
pub struct Generator<'a> {
    def: &'a LanguageDefinition,
    realizer: Realizer,
    outgoing: Vec<Vec<usize>>,
    morphemes: Vec<Vec<char>>,
}

impl<'a> Generator<'a> {
    pub fn new(def: &'a LanguageDefinition) -> Self {
        Self {
            def,
            realizer: Realizer::new(def),
            outgoing: def.fsa.outgoing(),
            morphemes: def
                .fsa
                .transitions
                .iter()
                .map(|tr| tr.morpheme.chars().collect())
                .collect(),
        }
    }

    pub fn def(&self) -> &'a LanguageDefinition {
        self.def
    }

    pub fn realizer(&self) -> &Realizer {
        &self.realizer
    }

    /// Every derivation of `word`; empty when it is not a word.
    pub fn analyze(&self, word: &str) -> Vec<Analysis> {
        if word.is_empty() {
            return Vec::new();
        }
        let x: Vec<char> = word.chars().collect();
        let all = RootSet::full(self.def.roots.len());
        let (roots, _) = filter_roots(word, self.def, &all, 0);
        let mut out = Solutions::new();
        let mut scratch = CorrectionStats::default();
        for cand in &roots {
            self.search_root(
                &x,
                self.def.root(cand.root),
                0,
                true,
                &mut out,
                &mut scratch,
            );
        }
        out.remove(word).map(|c| c.analyses).unwrap_or_default()
    }

    pub fn recognize(&self, word: &str) -> bool {
        !self.analyze(word).is_empty()
    }

    /// Runs the pruned search from each root and merges in the left-edge
    /// solutions. The result is ordered by surface.
    pub fn generate_from_roots(
        &self,
        x: &str,
        roots: &[CandidateRoot],
        t: usize,
        prune: bool,
        stats: &mut CorrectionStats,
    ) -> Vec<Candidate> {
        let chars: Vec<char> = x.chars().collect();
        let mut out = Solutions::new();
        if chars.is_empty() || roots.is_empty() {
            return Vec::new();
        }
        for cand in roots {
            self.search_root(&chars, self.def.root(cand.root), t, prune, &mut out, stats);
        }
        for cand in self.left_edge_solutions(x, t, roots, stats) {
            for analysis in cand.analyses {
                let surface: Vec<char> = cand.surface.chars().collect();
                emit(&mut out, &surface, cand.distance, analysis);
            }
        }
        stats.solutions += out.len() as u64;
        out.into_values().collect()
    }

    /// Candidates made of a root whose prefix distance equals `t` followed
    /// verbatim by the rest of `x` after each alignment index.
    pub fn left_edge_solutions(
        &self,
        x: &str,
        t: usize,
        roots: &[CandidateRoot],
        stats: &mut CorrectionStats,
    ) -> Vec<Candidate> {
        let chars: Vec<char> = x.chars().collect();
        let mut out = Solutions::new();
        for cand in roots.iter().filter(|c| c.alignment.pred as usize == t) {
            let root = self.def.root(cand.root);
            let Ok(base) = self.realizer.surface(&root.lexical) else {
                continue;
            };
            stats.generations += 1;
            for &i in &cand.alignment.indexes {
                let mut y: Vec<char> = base.chars().collect();
                y.extend_from_slice(&chars[i..]);
                let word: String = y.iter().collect();
                stats.recognitions += 1;
                let analyses = self.analyze(&word);
                if analyses.is_empty() {
                    continue;
                }
                let distance = edit_distance_chars(&chars, &y);
                stats.edit_ops += (chars.len() * y.len()) as u64;
                if distance <= t {
                    for analysis in analyses {
                        emit(&mut out, &y, distance as u32, analysis);
                    }
                }
            }
        }
        out.into_values().collect()
    }

    fn search_root(
        &self,
        x: &[char],
        root: &Root,
        t: usize,
        prune: bool,
        out: &mut Solutions,
        stats: &mut CorrectionStats,
    ) {
        let fsa = &self.def.fsa;
        let boundary = self.realizer.boundary();
        let Ok(surface) = self.realizer.surface(&root.lexical) else {
            return;
        };
        stats.generations += 1;
        let surface: Vec<char> = surface.chars().collect();
        let mut h = ErrorMatrix::new(x);
        h.sync(&surface);
        if fsa.is_final(root.entry_state) && h.distance() as usize <= t {
            emit(
                out,
                &surface,
                h.distance(),
                Analysis {
                    lexical: root.lexical.clone(),
                    root: root.id,
                    path: Vec::new(),
                },
            );
        }

        // Without pruning, no prefix of a solution can be longer than |x| + t.
        let max_len = x.len() + t;
        let stall_limit = fsa.states.len();
        let start = adjust_threshold(
            SearchFrame {
                lexical: root.lexical.clone(),
                state: root.entry_state,
                surface,
                effective_t: t,
                root: root.id,
                path: Vec::new(),
                stall: 0,
            },
            t,
            self.def,
        );
        let mut stack = vec![start];
        while let Some(frame) = stack.pop() {
            for &ti in &self.outgoing[frame.state.0] {
                let tr = &fsa.transitions[ti];
                let mut y = frame.surface.clone();
                if self.realizer.append(&mut y, &self.morphemes[ti]).is_err() {
                    continue;
                }
                stats.generations += 1;
                h.sync(&y);
                let stall = if y.len() > frame.surface.len() {
                    0
                } else {
                    frame.stall + 1
                };
                let mut next = adjust_threshold(
                    SearchFrame {
                        lexical: String::new(),
                        state: tr.to,
                        surface: y,
                        effective_t: t,
                        root: frame.root,
                        path: Vec::new(),
                        stall,
                    },
                    t,
                    self.def,
                );
                let viable = if prune {
                    h.cutoff(next.effective_t) as usize <= next.effective_t
                } else {
                    next.surface.len() <= max_len
                };
                let distance = h.distance();
                let accept = fsa.is_final(tr.to) && distance as usize <= t;
                if !viable && !accept {
                    continue;
                }
                next.lexical = format!("{}{}{}", frame.lexical, boundary, tr.morpheme);
                next.path = frame.path.clone();
                next.path.push(ti);
                if accept {
                    emit(
                        out,
                        &next.surface,
                        distance,
                        Analysis {
                            lexical: next.lexical.clone(),
                            root: next.root,
                            path: next.path.clone(),
                        },
                    );
                }
                // a run of non-lengthening steps longer than the state count
                // has revisited a (state, surface) pair
                if viable && stall <= stall_limit {
                    stack.push(next);
                }
            }
        }
        stats.edit_ops += h.evaluations();
    }
}

/// A generator paired with the q-gram index of its roots.
#[derive(Debug, Clone)]
pub struct Speller<'a> {
    generator: Generator<'a>,
    index: QGramIndex,
}

impl<'a> Speller<'a> {
    pub fn new(def: &'a LanguageDefinition, q: usize) -> Self {
        Self {
            generator: Generator::new(def),
            index: build_index(&def.roots, q),
        }
    }

    pub fn def(&self) -> &'a LanguageDefinition {
        self.generator.def
    }

    pub fn generator(&self) -> &Generator<'a> {
        &self.generator
    }

    pub fn index(&self) -> &QGramIndex {
        &self.index
    }

    pub fn recognize(&self, word: &str) -> bool {
        self.generator.recognize(word)
    }

    pub fn candidate_roots(
        &self,
        x: &str,
        options: &SearchOptions,
        stats: &mut CorrectionStats,
    ) -> Vec<CandidateRoot> {
        let survivors = if options.prefilter {
            prefilter_roots(x, &self.index, &options.query)
        } else {
            RootSet::full(self.def().roots.len())
        };
        let (roots, cells) = filter_roots(x, self.def(), &survivors, options.query.t);
        stats.edit_ops += cells;
        roots
    }

    pub fn generate_candidates(
        &self,
        x: &str,
        options: &SearchOptions,
        stats: &mut CorrectionStats,
    ) -> Vec<Candidate> {
        if x.is_empty() {
            return Vec::new();
        }
        let roots = self.candidate_roots(x, options, stats);
        self.generator
            .generate_from_roots(x, &roots, options.query.t, options.prune, stats)
    }

    pub fn left_edge_solutions(
        &self,
        x: &str,
        options: &SearchOptions,
        stats: &mut CorrectionStats,
    ) -> Vec<Candidate> {
        let roots = self.candidate_roots(x, options, stats);
        self.generator
            .left_edge_solutions(x, options.query.t, &roots, stats)
    }

    /// Ranked candidates for `x`.
    pub fn suggest(
        &self,
        x: &str,
        options: &SearchOptions,
        stats: &mut CorrectionStats,
    ) -> Vec<Suggestion> {
        let candidates = self.generate_candidates(x, options, stats);
        rank(candidates, x, self.def())
    }
}

/// One-shot candidate generation.
pub fn generate_candidates(
    x: &str,
    def: &LanguageDefinition,
    idx: &QGramIndex,
    query: &RootQuery,
    stats: &mut CorrectionStats,
) -> Vec<Candidate> {
    if x.is_empty() {
        return Vec::new();
    }
    let generator = Generator::new(def);
    let survivors = prefilter_roots(x, idx, query);
    let (roots, cells) = filter_roots(x, def, &survivors, query.t);
    stats.edit_ops += cells;
    generator.generate_from_roots(x, &roots, query.t, true, stats)
}
