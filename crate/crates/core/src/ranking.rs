//! Ordering of candidates by edit distance and error-type likelihood.
//!
//! Each candidate gets an optimal edit script from the misspelled word to the
//! candidate. Every operation costs the negative log of the observed
//! frequency of the typing error it undoes; replacements of special pairs
//! are discounted by their share of all replacements.

use std::cmp::Ordering;

use crate::corrector::Candidate;
use crate::distance::ErrorMatrix;
use crate::langdef::{ErrorStats, LanguageDefinition};

/// One step turning the misspelled word into the candidate. Positions are
/// char indices into the misspelled word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOp {
    Replace {
        position: usize,
        from: char,
        to: char,
        special: bool,
    },
    /// Drop a char the typist added.
    Delete { position: usize, ch: char },
    /// Restore a char the typist left out; inserted before `position`.
    Insert { position: usize, ch: char },
    Transpose {
        position: usize,
        first: char,
        second: char,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
}

impl EditScript {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Backtraces an optimal script from `x` to `y`. Ties prefer replace, then
/// transpose, then delete, then insert.
pub fn extract_script(x: &str, y: &str, def: &LanguageDefinition) -> EditScript {
    let xs: Vec<char> = x.chars().collect();
    let ys: Vec<char> = y.chars().collect();
    let mut h = ErrorMatrix::new(&xs);
    h.extend(&ys);

    let mut ops = Vec::new();
    let (mut i, mut j) = (xs.len(), ys.len());
    while i > 0 || j > 0 {
        let here = h.get(i, j);
        if i > 0 && j > 0 && xs[i - 1] == ys[j - 1] && here == h.get(i - 1, j - 1) {
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && here == h.get(i - 1, j - 1) + 1 {
            let (from, to) = (xs[i - 1], ys[j - 1]);
            ops.push(EditOp::Replace {
                position: i - 1,
                from,
                to,
                special: def.is_special_pair(from, to),
            });
            i -= 1;
            j -= 1;
        } else if i > 1
            && j > 1
            && xs[i - 1] == ys[j - 2]
            && xs[i - 2] == ys[j - 1]
            && here == h.get(i - 2, j - 2) + 1
        {
            ops.push(EditOp::Transpose {
                position: i - 2,
                first: xs[i - 2],
                second: xs[i - 1],
            });
            i -= 2;
            j -= 2;
        } else if i > 0 && here == h.get(i - 1, j) + 1 {
            ops.push(EditOp::Delete {
                position: i - 1,
                ch: xs[i - 1],
            });
            i -= 1;
        } else {
            ops.push(EditOp::Insert {
                position: i,
                ch: ys[j - 1],
            });
            j -= 1;
        }
    }
    ops.reverse();
    EditScript { ops }
}

/// Per-operation costs derived from error-type frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorWeights {
    pub replacement: f64,
    pub special_replacement: f64,
    /// Cost of [`EditOp::Insert`]: the typist deleted a char.
    pub deletion: f64,
    /// Cost of [`EditOp::Delete`]: the typist inserted a char.
    pub insertion: f64,
    pub transposition: f64,
}

fn neg_log_percent(p: f64) -> f64 {
    -(p / 100.0).clamp(1e-6, 1.0).ln()
}

impl ErrorWeights {
    pub fn from_stats(stats: &ErrorStats) -> Self {
        let replacement = neg_log_percent(stats.replacement);
        let share = (stats.special_replacement_share / 100.0).clamp(0.0, 1.0);
        Self {
            replacement,
            special_replacement: replacement * (1.0 - share),
            deletion: neg_log_percent(stats.deletion),
            insertion: neg_log_percent(stats.insertion),
            transposition: neg_log_percent(stats.transposition),
        }
    }

    pub fn cost(&self, op: &EditOp) -> f64 {
        match op {
            EditOp::Replace { special: true, .. } => self.special_replacement,
            EditOp::Replace { .. } => self.replacement,
            EditOp::Insert { .. } => self.deletion,
            EditOp::Delete { .. } => self.insertion,
            EditOp::Transpose { .. } => self.transposition,
        }
    }
}

/// Lower is more plausible.
pub fn score(script: &EditScript, def: &LanguageDefinition) -> f64 {
    let weights = ErrorWeights::from_stats(&def.error_stats);
    script
        .ops
        .iter()
        .fold(0.0, |acc, op| acc + weights.cost(op))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suggestion {
    pub candidate: Candidate,
    pub score: f64,
    /// 1-based.
    pub rank: usize,
}

fn suggestion_order(a: &Suggestion, b: &Suggestion) -> Ordering {
    a.candidate
        .distance
        .cmp(&b.candidate.distance)
        .then(a.score.total_cmp(&b.score))
        .then(b.candidate.surface_len().cmp(&a.candidate.surface_len()))
        .then_with(|| a.candidate.surface.cmp(&b.candidate.surface))
}

/// Sorts by distance, then score, then longer surface first, then surface.
pub fn rank(candidates: Vec<Candidate>, x: &str, def: &LanguageDefinition) -> Vec<Suggestion> {
    let weights = ErrorWeights::from_stats(&def.error_stats);
    let mut out: Vec<Suggestion> = candidates
        .into_iter()
        .map(|candidate| {
            let script = extract_script(x, &candidate.surface, def);
            let score = script
                .ops
                .iter()
                .fold(0.0, |acc, op| acc + weights.cost(op));
            Suggestion {
                candidate,
                score,
                rank: 0,
            }
        })
        .collect();
    out.sort_by(suggestion_order);
    for (idx, s) in out.iter_mut().enumerate() {
        s.rank = idx + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::corrector::Analysis;
    use crate::langdef::RootId;

    fn cand(surface: &str, distance: u32) -> Candidate {
        Candidate {
            surface: surface.into(),
            distance,
            analyses: vec![Analysis {
                lexical: surface.into(),
                root: RootId(0),
                path: Vec::new(),
            }],
        }
    }

    #[test]
    fn missing_char_is_one_insert() {
        let def = bundled::mini_turkish();
        let script = extract_script("çaışmalarıyla", "çalışmalarıyla", &def);
        assert_eq!(
            script.ops,
            vec![EditOp::Insert {
                position: 2,
                ch: 'l'
            }]
        );
        assert!(extract_script("kalay", "kalay", &def).is_empty());
    }

    #[test]
    fn script_kinds() {
        let def = bundled::mini_turkish();
        let script = extract_script("kalsa", "kalas", &def);
        assert!(matches!(
            script.ops[..],
            [EditOp::Transpose { position: 3, .. }]
        ));
        let script = extract_script("calis", "çalış", &def);
        assert_eq!(script.len(), 3);
        assert!(script
            .ops
            .iter()
            .all(|op| matches!(op, EditOp::Replace { special: true, .. })));
        let script = extract_script("kalays", "kalay", &def);
        assert_eq!(
            script.ops,
            vec![EditOp::Delete {
                position: 5,
                ch: 's'
            }]
        );
    }

    #[test]
    fn weight_order_with_default_stats() {
        let w = ErrorWeights::from_stats(&ErrorStats::default());
        assert!(w.special_replacement < w.replacement);
        assert!(w.replacement < w.deletion);
        assert!(w.deletion < w.insertion);
        assert!(w.insertion < w.transposition);
    }

    #[test]
    fn special_replacement_beats_transposition() {
        let def = bundled::mini_turkish();
        let special = score(&extract_script("kasık", "kaşık", &def), &def);
        let swap = score(&extract_script("kaışk", "kaşık", &def), &def);
        assert!(special < swap);
    }

    #[test]
    fn score_is_additive() {
        let def = bundled::mini_turkish();
        let empty = score(&EditScript::default(), &def);
        assert_eq!(empty, 0.0);
        assert!(empty.is_sign_positive());
        let one = extract_script("kals", "kalas", &def);
        let two = extract_script("kalasy", "kalas", &def);
        let both = EditScript {
            ops: [one.ops.clone(), two.ops.clone()].concat(),
        };
        let sum = score(&one, &def) + score(&two, &def);
        assert!((score(&both, &def) - sum).abs() < 1e-12);
    }

    #[test]
    fn ranking_keys() {
        let def = bundled::mini_turkish();
        let ranked = rank(
            vec![
                cand("kala", 1),
                cand("kalas", 0),
                cand("kalay", 1),
                cand("kalaya", 2),
            ],
            "kalas",
            &def,
        );
        let order: Vec<&str> = ranked
            .iter()
            .map(|s| s.candidate.surface.as_str())
            .collect();
        assert_eq!(order[0], "kalas");
        assert_eq!(order[3], "kalaya");
        assert_eq!(
            ranked.iter().map(|s| s.rank).collect::<Vec<_>>(),
            vec![1, 2, 3, 4]
        );
        let single = rank(vec![cand("ev", 0)], "ev", &def);
        assert_eq!(single[0].rank, 1);
    }

    #[test]
    fn longer_wins_on_equal_score() {
        let mut def = bundled::mini_turkish();
        def.error_stats.insertion = def.error_stats.deletion;
        // one drops the extra 'b', the other restores an 'a'
        let ranked = rank(vec![cand("kal", 1), cand("kalab", 1)], "kalb", &def);
        assert_eq!(ranked[0].score, ranked[1].score);
        assert_eq!(ranked[0].candidate.surface, "kalab");
    }
}
