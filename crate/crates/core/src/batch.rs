//! Corpus evaluation: run the corrector over many words and average the
//! operation counts.

use rayon::prelude::*;

use crate::corrector::{CorrectionStats, SearchOptions, Speller};
use crate::ranking::Suggestion;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    pub misspelled: String,
    pub intended: Option<String>,
}

/// A malformed corpus line that was skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub records: Vec<CorpusRecord>,
    pub skipped: Vec<SkippedLine>,
}

/// Parses `misspelled[<TAB>intended]` lines. Blank lines and `#` comments
/// are ignored; anything else that does not fit is skipped and reported.
pub fn parse_corpus(text: &str) -> Corpus {
    let mut corpus = Corpus::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let skip = |reason: &str| SkippedLine {
            line: idx + 1,
            reason: reason.to_string(),
        };
        match fields.as_slice() {
            [word] | [word, ""] if !word.is_empty() => corpus.records.push(CorpusRecord {
                misspelled: word.to_string(),
                intended: None,
            }),
            [word, intended] if !word.is_empty() => corpus.records.push(CorpusRecord {
                misspelled: word.to_string(),
                intended: Some(intended.to_string()),
            }),
            ["", ..] => corpus.skipped.push(skip("empty misspelled word")),
            _ => corpus.skipped.push(skip("too many fields")),
        }
    }
    corpus
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchRow {
    pub word: String,
    pub intended: Option<String>,
    pub suggestions: Vec<Suggestion>,
    pub stats: CorrectionStats,
}

impl BatchRow {
    /// Whether the intended word was offered at all; `None` without ground truth.
    pub fn found(&self) -> Option<bool> {
        let intended = self.intended.as_deref()?;
        Some(
            self.suggestions
                .iter()
                .any(|s| s.candidate.surface == intended),
        )
    }

    pub fn found_first(&self) -> Option<bool> {
        let intended = self.intended.as_deref()?;
        Some(
            self.suggestions
                .first()
                .is_some_and(|s| s.candidate.surface == intended),
        )
    }
}

/// Per-word averages over a batch. Accuracies are percentages over the rows
/// that carry an intended word (zero when none do).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BatchAggregate {
    pub words: usize,
    pub mean_recognitions: f64,
    pub mean_generations: f64,
    pub mean_edit_ops: f64,
    pub mean_solutions: f64,
    pub evaluated: usize,
    pub accuracy_found: f64,
    pub accuracy_first: f64,
}

impl BatchAggregate {
    pub fn from_rows(rows: &[BatchRow]) -> Self {
        let words = rows.len();
        if words == 0 {
            return Self::default();
        }
        let n = words as f64;
        let mean = |f: fn(&CorrectionStats) -> u64| {
            rows.iter().map(|r| f(&r.stats) as f64).sum::<f64>() / n
        };
        let evaluated = rows.iter().filter(|r| r.intended.is_some()).count();
        let percent = |hits: usize| {
            if evaluated == 0 {
                0.0
            } else {
                100.0 * hits as f64 / evaluated as f64
            }
        };
        let found = rows.iter().filter(|r| r.found() == Some(true)).count();
        let first = rows
            .iter()
            .filter(|r| r.found_first() == Some(true))
            .count();
        Self {
            words,
            mean_recognitions: mean(|s| s.recognitions),
            mean_generations: mean(|s| s.generations),
            mean_edit_ops: mean(|s| s.edit_ops),
            mean_solutions: mean(|s| s.solutions),
            evaluated,
            accuracy_found: percent(found),
            accuracy_first: percent(first),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchReport {
    pub rows: Vec<BatchRow>,
    pub skipped: Vec<SkippedLine>,
    pub aggregate: BatchAggregate,
}

/// Corrects every record, in parallel; rows come back in input order.
pub fn run_batch(
    speller: &Speller<'_>,
    records: &[CorpusRecord],
    options: &SearchOptions,
) -> Vec<BatchRow> {
    records
        .par_iter()
        .map(|record| {
            let mut stats = CorrectionStats::default();
            let suggestions = speller.suggest(&record.misspelled, options, &mut stats);
            BatchRow {
                word: record.misspelled.clone(),
                intended: record.intended.clone(),
                suggestions,
                stats,
            }
        })
        .collect()
}

pub fn evaluate(speller: &Speller<'_>, corpus: &Corpus, options: &SearchOptions) -> BatchReport {
    let rows = run_batch(speller, &corpus.records, options);
    let aggregate = BatchAggregate::from_rows(&rows);
    BatchReport {
        rows,
        skipped: corpus.skipped.clone(),
        aggregate,
    }
}
