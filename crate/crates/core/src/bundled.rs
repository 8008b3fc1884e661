//! The mini-Turkish language pack and evaluation corpus shipped with the crate.

use crate::langdef::{parse_language, LanguageDefinition};

pub const MINI_TURKISH: &str = include_str!("../data/mini-turkish.lang");

/// `misspelled<TAB>intended` lines.
pub const CORPUS: &str = include_str!("../data/corpus.tsv");

pub fn mini_turkish() -> LanguageDefinition {
    parse_language(MINI_TURKISH).expect("bundled pack is valid")
}
