//! Spelling correction for agglutinative languages.
//!
//! Candidate roots are retrieved with a q-gram bit-vector index and filtered
//! by prefix edit distance; every word within the edit threshold of the
//! misspelled input is then generated by a pruned depth-first search over the
//! language's morphotactics, and the results are ranked by how likely the
//! required edits are as typing errors.
//!
//! ```
//! use agglutspell::{bundled, SearchOptions, Speller, CorrectionStats};
//!
//! let def = bundled::mini_turkish();
//! let speller = Speller::new(&def, 2);
//! let mut stats = CorrectionStats::default();
//! let ranked = speller.suggest("çaışmalarıyla", &SearchOptions::default(), &mut stats);
//! assert_eq!(ranked[0].candidate.surface, "çalışmalarıyla");
//! ```

pub mod batch;
pub mod bundled;
pub mod corrector;
pub mod distance;
pub mod langdef;
pub mod ranking;
pub mod rootindex;
pub mod surface;

pub use corrector::{
    adjust_threshold, generate_candidates, Analysis, Candidate, CorrectionStats, Generator,
    SearchFrame, SearchOptions, Speller,
};
pub use distance::{
    cutoff_distance, edit_distance, prefix_edit_distance, qgram_distance, AlignmentResult,
    ErrorMatrix,
};
pub use langdef::{
    load_language, parse_language, validate, Diagnostic, LangError, LanguageDefinition,
};
pub use ranking::{extract_script, rank, score, EditOp, EditScript, Suggestion};
pub use rootindex::{
    build_index, candidate_roots, prefilter_roots, QGramIndex, RootQuery, RootSet,
};
pub use surface::{recognize, surface, RealizeError, Realizer};
