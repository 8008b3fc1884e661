//! Lexical-to-surface realization and word recognition.
//!
//! Realization walks the morphemes of a lexical string left to right. At each
//! morpheme boundary it applies, in order: final mutations to the last char of
//! the realized prefix, boundary deletions to the incoming morpheme's first
//! char, and metacharacter resolution against the last classified vowel of the
//! realized prefix. Because every step only looks at the realized prefix, the
//! realization of `L+m` is always an extension of (a possibly mutated)
//! realization of `L`, which is what lets the corrector extend candidates one
//! morpheme at a time.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::corrector::Generator;
use crate::langdef::{
    vowel_like_chars, BoundaryDeletion, Context, FinalMutation, LanguageDefinition,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("malformed lexical string at position {position}: {reason}")]
    Malformed {
        position: usize,
        reason: &'static str,
    },
    #[error("cannot resolve metacharacter '{meta}' at position {position}")]
    Unresolved { meta: char, position: usize },
}

/// Compiled surface rules of one language definition.
#[derive(Debug, Clone)]
pub struct Realizer {
    boundary: char,
    metas: HashSet<char>,
    vowel_class: HashMap<char, usize>,
    vowel_like: HashSet<char>,
    resolutions: HashMap<(char, usize), char>,
    defaults: HashMap<char, char>,
    deletions: Vec<BoundaryDeletion>,
    mutations: Vec<FinalMutation>,
}

impl Realizer {
    pub fn new(def: &LanguageDefinition) -> Self {
        let mut vowel_class = HashMap::new();
        let mut class_index = HashMap::new();
        for (idx, class) in def.vowels.classes.iter().enumerate() {
            class_index.entry(class.name.as_str()).or_insert(idx);
            for &c in &class.chars {
                vowel_class.entry(c).or_insert(idx);
            }
        }
        let mut resolutions = HashMap::new();
        for rule in &def.rules.meta_resolutions {
            if let Some(&class) = class_index.get(rule.class.as_str()) {
                resolutions.entry((rule.meta, class)).or_insert(rule.target);
            }
        }
        let mut defaults = HashMap::new();
        for &(meta, target) in &def.rules.meta_defaults {
            defaults.entry(meta).or_insert(target);
        }
        Self {
            boundary: def.alphabet.boundary,
            metas: def.alphabet.meta_chars.iter().copied().collect(),
            vowel_class,
            vowel_like: vowel_like_chars(def).into_iter().collect(),
            resolutions,
            defaults,
            deletions: def.rules.boundary_deletions.clone(),
            mutations: def.rules.final_mutations.clone(),
        }
    }

    pub fn boundary(&self) -> char {
        self.boundary
    }

    /// Realizes a full lexical string.
    pub fn surface(&self, lexical: &str) -> Result<String, RealizeError> {
        let lex: Vec<char> = lexical.chars().collect();
        let mut out = Vec::with_capacity(lex.len());
        let mut start = 0;
        for (pos, &c) in lex.iter().enumerate() {
            if c == self.boundary {
                self.append_at(&mut out, &lex[start..pos], start)?;
                start = pos + 1;
            }
        }
        self.append_at(&mut out, &lex[start..], start)?;
        Ok(out.into_iter().collect())
    }

    /// Attaches one morpheme to an already realized surface prefix.
    pub fn append(&self, prefix: &mut Vec<char>, morpheme: &[char]) -> Result<(), RealizeError> {
        self.append_at(prefix, morpheme, 0)
    }

    fn append_at(
        &self,
        prefix: &mut Vec<char>,
        morpheme: &[char],
        offset: usize,
    ) -> Result<(), RealizeError> {
        if morpheme.is_empty() {
            return Err(RealizeError::Malformed {
                position: offset,
                reason: "empty morpheme",
            });
        }
        let mut skip = 0;
        if let Some(&last) = prefix.last() {
            // The mutation looks at the first char that survives deletion,
            // judged against the prefix as it stands before mutating.
            let first = morpheme[0];
            let trigger = if self.drops(first, last) {
                morpheme.get(1).copied()
            } else {
                Some(first)
            };
            if let Some(rule) = trigger.and_then(|t| {
                self.mutations
                    .iter()
                    .find(|r| r.from == last && self.lexical_matches(r.before, t))
            }) {
                *prefix.last_mut().unwrap() = rule.to;
            }
            if self.drops(first, *prefix.last().unwrap()) {
                skip = 1;
            }
        }
        for (idx, &c) in morpheme.iter().enumerate().skip(skip) {
            if c == self.boundary {
                return Err(RealizeError::Malformed {
                    position: offset + idx,
                    reason: "boundary inside morpheme",
                });
            }
            if self.metas.contains(&c) {
                let resolved = self.resolve(c, prefix).ok_or(RealizeError::Unresolved {
                    meta: c,
                    position: offset + idx,
                })?;
                prefix.push(resolved);
            } else {
                prefix.push(c);
            }
        }
        Ok(())
    }

    fn drops(&self, first: char, last: char) -> bool {
        self.deletions
            .iter()
            .any(|r| r.target == first && self.surface_matches(r.after, last))
    }

    fn resolve(&self, meta: char, prefix: &[char]) -> Option<char> {
        let class = prefix
            .iter()
            .rev()
            .find_map(|c| self.vowel_class.get(c).copied());
        class
            .and_then(|class| self.resolutions.get(&(meta, class)).copied())
            .or_else(|| self.defaults.get(&meta).copied())
    }

    fn is_vowel(&self, c: char) -> bool {
        self.vowel_like.contains(&c)
    }

    /// Tests a context against a lexical char (metas count as vowels when
    /// every resolution of theirs is a vowel).
    fn lexical_matches(&self, ctx: Context, c: char) -> bool {
        match ctx {
            Context::Vowel => self.is_vowel(c),
            Context::Consonant => !self.is_vowel(c) && !self.metas.contains(&c),
            Context::Char(x) => x == c,
        }
    }

    fn surface_matches(&self, ctx: Context, c: char) -> bool {
        match ctx {
            Context::Vowel => self.is_vowel(c),
            Context::Consonant => !self.is_vowel(c),
            Context::Char(x) => x == c,
        }
    }
}

/// Realizes `lexical` under the rules of `def`.
pub fn surface(lexical: &str, def: &LanguageDefinition) -> Result<String, RealizeError> {
    Realizer::new(def).surface(lexical)
}

/// Whether `word` is a word of the language: some root followed by a
/// morpheme path to a final state realizes exactly as `word`.
pub fn recognize(word: &str, def: &LanguageDefinition) -> bool {
    Generator::new(def).recognize(word)
}
