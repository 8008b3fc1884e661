//! Language packs: alphabet, root lexicon, morphotactics and surface rules.
//!
//! A pack is a line-oriented UTF-8 text file made of bracketed sections that
//! must appear in a fixed order (see [`Section`]). Lines starting with `#`
//! are comments. The first state listed under `[states]` is the start state;
//! roots are the implicit transitions out of it, each landing in the entry
//! state chosen by the root's category.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::BufRead;

use thiserror::Error;

use crate::surface::Realizer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

impl fmt::Display for RootId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    pub surface_chars: Vec<char>,
    pub meta_chars: Vec<char>,
    pub boundary: char,
}

impl Alphabet {
    pub fn is_surface(&self, c: char) -> bool {
        self.surface_chars.contains(&c)
    }

    pub fn is_meta(&self, c: char) -> bool {
        self.meta_chars.contains(&c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VowelClass {
    pub name: String,
    pub chars: Vec<char>,
}

/// Partition of the vowels into harmony classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VowelClassTable {
    pub classes: Vec<VowelClass>,
}

impl VowelClassTable {
    pub fn class_of(&self, c: char) -> Option<&str> {
        self.classes
            .iter()
            .find(|class| class.chars.contains(&c))
            .map(|class| class.name.as_str())
    }

    pub fn is_vowel(&self, c: char) -> bool {
        self.class_of(c).is_some()
    }

    pub fn contains_class(&self, name: &str) -> bool {
        self.classes.iter().any(|class| class.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub id: RootId,
    pub surface: String,
    pub lexical: String,
    pub category: String,
    pub entry_state: StateId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub is_final: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub from: StateId,
    pub to: StateId,
    pub morpheme: String,
}

/// The morphotactics generator: states, a start state, final states and
/// morpheme-labelled transitions. Parallel edges and cycles are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphotacticsFsa {
    pub states: Vec<State>,
    pub start: StateId,
    pub transitions: Vec<Transition>,
}

impl MorphotacticsFsa {
    pub fn is_final(&self, state: StateId) -> bool {
        self.states.get(state.0).is_some_and(|s| s.is_final)
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s.name == name).map(StateId)
    }

    /// Transition indices leaving each state, in declaration order.
    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for (idx, tr) in self.transitions.iter().enumerate() {
            if let Some(list) = out.get_mut(tr.from.0) {
                list.push(idx);
            }
        }
        out
    }
}

/// Condition on a neighbouring character used by boundary rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Context {
    Vowel,
    Consonant,
    Char(char),
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Context::Vowel => f.write_str("vowel"),
            Context::Consonant => f.write_str("consonant"),
            Context::Char(c) => write!(f, "char:{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaResolution {
    pub meta: char,
    pub class: String,
    pub target: char,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryDeletion {
    pub target: char,
    pub after: Context,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalMutation {
    pub from: char,
    pub to: char,
    pub before: Context,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurfaceRuleSet {
    pub meta_resolutions: Vec<MetaResolution>,
    /// Fallback per metacharacter when the prefix holds no classified vowel.
    pub meta_defaults: Vec<(char, char)>,
    pub boundary_deletions: Vec<BoundaryDeletion>,
    pub final_mutations: Vec<FinalMutation>,
    pub mutable_finals: Vec<char>,
}

impl SurfaceRuleSet {
    pub fn is_mutable_final(&self, c: char) -> bool {
        self.mutable_finals.contains(&c)
    }

    /// Extra edit slack for a (partial) surface string whose last character
    /// may still be rewritten when another morpheme is attached.
    pub fn mutation_slack(&self, surface: &[char]) -> u32 {
        match surface.last() {
            Some(&c) if self.is_mutable_final(c) => 1,
            _ => 0,
        }
    }
}

/// Error-type frequencies, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    pub replacement: f64,
    pub deletion: f64,
    pub insertion: f64,
    pub transposition: f64,
    /// Share of replacements that involve a special pair.
    pub special_replacement_share: f64,
}

impl Default for ErrorStats {
    fn default() -> Self {
        Self {
            replacement: 23.1,
            deletion: 22.2,
            insertion: 17.3,
            transposition: 3.3,
            special_replacement_share: 34.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanguageDefinition {
    pub alphabet: Alphabet,
    pub vowels: VowelClassTable,
    pub roots: Vec<Root>,
    /// Category name to entry state, in declaration order.
    pub categories: Vec<(String, StateId)>,
    pub fsa: MorphotacticsFsa,
    pub rules: SurfaceRuleSet,
    pub special_pairs: Vec<(char, char)>,
    pub error_stats: ErrorStats,
}

impl LanguageDefinition {
    pub fn root(&self, id: RootId) -> &Root {
        &self.roots[id.0]
    }

    pub fn is_special_pair(&self, a: char, b: char) -> bool {
        self.special_pairs
            .iter()
            .any(|&(p, q)| (p == a && q == b) || (p == b && q == a))
    }

    /// Checks every structural invariant; an empty list means the definition is usable.
    pub fn validate(&self) -> Vec<Diagnostic> {
        validate(self)
    }
}

/// One violated invariant, naming the offending entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub entity: String,
    pub message: String,
}

impl Diagnostic {
    fn new(entity: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            entity: entity.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.message)
    }
}

#[derive(Debug, Error)]
pub enum LangError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid language pack: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("reading language pack: {0}")]
    Io(#[from] std::io::Error),
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Pack sections in their required order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Section {
    Alphabet,
    VowelClasses,
    MetaResolution,
    Roots,
    States,
    Categories,
    Transitions,
    BoundaryDeletions,
    FinalMutations,
    MutableFinals,
    SpecialPairs,
    ErrorStats,
}

impl Section {
    const ALL: [Section; 12] = [
        Section::Alphabet,
        Section::VowelClasses,
        Section::MetaResolution,
        Section::Roots,
        Section::States,
        Section::Categories,
        Section::Transitions,
        Section::BoundaryDeletions,
        Section::FinalMutations,
        Section::MutableFinals,
        Section::SpecialPairs,
        Section::ErrorStats,
    ];

    pub fn header(self) -> &'static str {
        match self {
            Section::Alphabet => "alphabet",
            Section::VowelClasses => "vowel-classes",
            Section::MetaResolution => "meta-resolution",
            Section::Roots => "roots",
            Section::States => "states",
            Section::Categories => "categories",
            Section::Transitions => "transitions",
            Section::BoundaryDeletions => "boundary-deletions",
            Section::FinalMutations => "final-mutations",
            Section::MutableFinals => "mutable-finals",
            Section::SpecialPairs => "special-pairs",
            Section::ErrorStats => "error-stats",
        }
    }

    fn from_header(name: &str) -> Option<Section> {
        Section::ALL.into_iter().find(|s| s.header() == name)
    }
}

/// Reads and validates a language pack.
pub fn load_language<R: BufRead>(source: R) -> Result<LanguageDefinition, LangError> {
    let mut parser = PackParser::default();
    for (idx, line) in source.lines().enumerate() {
        parser.line(idx + 1, &line?)?;
    }
    parser.finish()
}

/// [`load_language`] over an in-memory string.
pub fn parse_language(text: &str) -> Result<LanguageDefinition, LangError> {
    load_language(text.as_bytes())
}

pub fn validate(def: &LanguageDefinition) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let alphabet = &def.alphabet;

    // alphabet
    let mut seen = HashSet::new();
    for &c in &alphabet.surface_chars {
        if !seen.insert(c) {
            diags.push(Diagnostic::new(
                "alphabet",
                format!("surface char '{c}' declared twice"),
            ));
        }
    }
    for &c in &alphabet.meta_chars {
        if alphabet.is_surface(c) {
            diags.push(Diagnostic::new(
                format!("meta '{c}'"),
                "metacharacter is also a surface char",
            ));
        }
    }
    if alphabet.is_surface(alphabet.boundary) || alphabet.is_meta(alphabet.boundary) {
        diags.push(Diagnostic::new(
            "alphabet",
            format!(
                "boundary '{}' collides with an alphabet char",
                alphabet.boundary
            ),
        ));
    }

    // vowel classes
    let mut class_names = HashSet::new();
    let mut vowel_owner: HashMap<char, &str> = HashMap::new();
    for class in &def.vowels.classes {
        if !class_names.insert(class.name.as_str()) {
            diags.push(Diagnostic::new(
                format!("vowel class '{}'", class.name),
                "declared twice",
            ));
        }
        for &c in &class.chars {
            if !alphabet.is_surface(c) {
                diags.push(Diagnostic::new(
                    format!("vowel class '{}'", class.name),
                    format!("'{c}' is not a surface char"),
                ));
            }
            if let Some(other) = vowel_owner.insert(c, &class.name) {
                if other != class.name {
                    diags.push(Diagnostic::new(
                        format!("vowel class '{}'", class.name),
                        format!("'{c}' already belongs to class '{other}'"),
                    ));
                }
            }
        }
    }

    // surface rules
    let rules = &def.rules;
    for &meta in &alphabet.meta_chars {
        let has_rule = rules.meta_resolutions.iter().any(|r| r.meta == meta);
        let has_default = rules.meta_defaults.iter().any(|&(m, _)| m == meta);
        if !has_rule && !has_default {
            diags.push(Diagnostic::new(
                format!("meta '{meta}'"),
                "no resolution rule",
            ));
        } else if !has_default {
            diags.push(Diagnostic::new(
                format!("meta '{meta}'"),
                "no default resolution",
            ));
        }
    }
    for rule in &rules.meta_resolutions {
        let entity = format!("resolution {} {}", rule.meta, rule.class);
        if !alphabet.is_meta(rule.meta) {
            diags.push(Diagnostic::new(
                &entity,
                "resolves an undeclared metacharacter",
            ));
        }
        if !def.vowels.contains_class(&rule.class) {
            diags.push(Diagnostic::new(&entity, "unknown vowel class"));
        }
        if !alphabet.is_surface(rule.target) {
            diags.push(Diagnostic::new(&entity, "target is not a surface char"));
        }
    }
    for &(meta, target) in &rules.meta_defaults {
        if !alphabet.is_meta(meta) {
            diags.push(Diagnostic::new(
                format!("default {meta}"),
                "undeclared metacharacter",
            ));
        }
        if !alphabet.is_surface(target) {
            diags.push(Diagnostic::new(
                format!("default {meta}"),
                "target is not a surface char",
            ));
        }
    }
    for rule in &rules.boundary_deletions {
        if !alphabet.is_surface(rule.target) && !alphabet.is_meta(rule.target) {
            diags.push(Diagnostic::new(
                format!("drop {}", rule.target),
                "target is not an alphabet char",
            ));
        }
        check_context(
            &mut diags,
            alphabet,
            &format!("drop {}", rule.target),
            rule.after,
        );
    }
    for rule in &rules.final_mutations {
        let entity = format!("mutation {} -> {}", rule.from, rule.to);
        if !alphabet.is_surface(rule.from) || !alphabet.is_surface(rule.to) {
            diags.push(Diagnostic::new(&entity, "uses a non-surface char"));
        }
        if !rules.is_mutable_final(rule.from) {
            diags.push(Diagnostic::new(
                &entity,
                "source char is not a mutable final",
            ));
        }
        check_context(&mut diags, alphabet, &entity, rule.before);
    }
    for &c in &rules.mutable_finals {
        if !alphabet.is_surface(c) {
            diags.push(Diagnostic::new(
                "mutable-finals",
                format!("'{c}' is not a surface char"),
            ));
        }
    }

    // morphotactics
    let fsa = &def.fsa;
    let state_count = fsa.states.len();
    if fsa.start.0 >= state_count {
        diags.push(Diagnostic::new("fsa", "start state does not exist"));
    }
    let mut state_names = HashSet::new();
    for state in &fsa.states {
        if !state_names.insert(state.name.as_str()) {
            diags.push(Diagnostic::new(
                format!("state '{}'", state.name),
                "declared twice",
            ));
        }
    }
    for (idx, tr) in fsa.transitions.iter().enumerate() {
        let entity = format!("transition {} '{}'", idx + 1, tr.morpheme);
        if tr.from.0 >= state_count {
            diags.push(Diagnostic::new(&entity, "unknown source state"));
        }
        if tr.to.0 >= state_count {
            diags.push(Diagnostic::new(&entity, "unknown target state"));
        }
        if let Err(msg) = check_lexical(alphabet, &tr.morpheme, false) {
            diags.push(Diagnostic::new(&entity, msg));
        }
    }
    let mut category_names = HashSet::new();
    for (name, state) in &def.categories {
        if !category_names.insert(name.as_str()) {
            diags.push(Diagnostic::new(
                format!("category '{name}'"),
                "declared twice",
            ));
        }
        if state.0 >= state_count {
            diags.push(Diagnostic::new(
                format!("category '{name}'"),
                "unknown entry state",
            ));
        }
    }

    // roots
    let realizer = Realizer::new(def);
    let mut surface_category = HashSet::new();
    for (pos, root) in def.roots.iter().enumerate() {
        let entity = format!("root '{}' ({})", root.surface, root.category);
        if root.id.0 != pos {
            diags.push(Diagnostic::new(
                &entity,
                format!("id {} breaks the dense numbering (expected {pos})", root.id),
            ));
        }
        if root.surface.is_empty() {
            diags.push(Diagnostic::new(&entity, "empty surface form"));
        }
        if let Some(c) = root.surface.chars().find(|&c| !alphabet.is_surface(c)) {
            diags.push(Diagnostic::new(
                &entity,
                format!("surface char '{c}' is not in the alphabet"),
            ));
        }
        if root.entry_state.0 >= state_count {
            diags.push(Diagnostic::new(&entity, "entry state does not exist"));
        }
        match def
            .categories
            .iter()
            .find(|(name, _)| *name == root.category)
        {
            None => diags.push(Diagnostic::new(&entity, "unknown category")),
            Some((_, state)) if *state != root.entry_state => diags.push(Diagnostic::new(
                &entity,
                "entry state disagrees with its category",
            )),
            Some(_) => {}
        }
        if !surface_category.insert((root.surface.as_str(), root.category.as_str())) {
            diags.push(Diagnostic::new(&entity, "duplicate surface/category pair"));
        }
        match check_lexical(alphabet, &root.lexical, true) {
            Err(msg) => diags.push(Diagnostic::new(&entity, msg)),
            Ok(()) => {
                if let Ok(realized) = realizer.surface(&root.lexical) {
                    if realized != root.surface {
                        diags.push(Diagnostic::new(
                            &entity,
                            format!("lexical form realizes as '{realized}'"),
                        ));
                    }
                }
            }
        }
    }

    // ranking data
    for &(a, b) in &def.special_pairs {
        if !alphabet.is_surface(a) || !alphabet.is_surface(b) {
            diags.push(Diagnostic::new(
                format!("special pair {a} {b}"),
                "uses a non-surface char",
            ));
        }
    }
    let stats = &def.error_stats;
    for (name, value) in [
        ("replacement", stats.replacement),
        ("deletion", stats.deletion),
        ("insertion", stats.insertion),
        ("transposition", stats.transposition),
        ("special_replacement_share", stats.special_replacement_share),
    ] {
        if !(value >= 0.0 && value.is_finite()) {
            diags.push(Diagnostic::new(
                format!("error-stats {name}"),
                "frequency must be a nonnegative number",
            ));
        }
    }
    if stats.special_replacement_share > 100.0 {
        diags.push(Diagnostic::new(
            "error-stats special_replacement_share",
            "share exceeds 100",
        ));
    }

    diags
}

fn check_context(diags: &mut Vec<Diagnostic>, alphabet: &Alphabet, entity: &str, ctx: Context) {
    if let Context::Char(c) = ctx {
        if !alphabet.is_surface(c) && !alphabet.is_meta(c) {
            diags.push(Diagnostic::new(
                entity,
                format!("context char '{c}' is not in the alphabet"),
            ));
        }
    }
}

fn check_lexical(alphabet: &Alphabet, text: &str, allow_boundary: bool) -> Result<(), String> {
    if text.is_empty() {
        return Err("empty lexical string".into());
    }
    let mut prev_boundary = true;
    for c in text.chars() {
        if c == alphabet.boundary {
            if !allow_boundary {
                return Err("morpheme contains a boundary char".into());
            }
            if prev_boundary {
                return Err("misplaced boundary char".into());
            }
            prev_boundary = true;
        } else if alphabet.is_surface(c) || alphabet.is_meta(c) {
            prev_boundary = false;
        } else {
            return Err(format!("lexical char '{c}' is not in the alphabet"));
        }
    }
    if prev_boundary {
        return Err("trailing boundary char".into());
    }
    Ok(())
}

#[derive(Default)]
struct PackParser {
    section: Option<Section>,
    surface_chars: Option<Vec<char>>,
    meta_chars: Vec<char>,
    boundary: Option<char>,
    vowels: VowelClassTable,
    rules: SurfaceRuleSet,
    // (line, surface, lexical, category)
    roots: Vec<(usize, String, String, String)>,
    states: Vec<State>,
    categories: Vec<(usize, String, String)>,
    transitions: Vec<(usize, String, String, String)>,
    special_pairs: Vec<(char, char)>,
    error_stats: ErrorStats,
}

fn parse_err(line: usize, message: impl Into<String>) -> LangError {
    LangError::Parse {
        line,
        message: message.into(),
    }
}

fn single_char(line: usize, text: &str) -> Result<char, LangError> {
    let mut chars = text.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(parse_err(
            line,
            format!("expected a single char, got '{text}'"),
        )),
    }
}

fn parse_context(line: usize, text: &str) -> Result<Context, LangError> {
    match text {
        "vowel" => Ok(Context::Vowel),
        "consonant" => Ok(Context::Consonant),
        _ => match text.strip_prefix("char:") {
            Some(rest) => Ok(Context::Char(single_char(line, rest)?)),
            None => Err(parse_err(line, format!("unknown context '{text}'"))),
        },
    }
}

fn key_value(line: usize, text: &str) -> Result<(&str, &str), LangError> {
    text.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| parse_err(line, "expected `key = value`"))
}

fn tab_fields<'a>(line: usize, text: &'a str, what: &str) -> Result<[&'a str; 3], LangError> {
    let fields: Vec<&str> = text.split('\t').map(str::trim).collect();
    match fields.as_slice() {
        [a, b, c] if !a.is_empty() && !b.is_empty() && !c.is_empty() => Ok([a, b, c]),
        _ => Err(parse_err(
            line,
            format!("{what} needs three non-empty tab-separated fields"),
        )),
    }
}

impl PackParser {
    fn line(&mut self, line: usize, raw: &str) -> Result<(), LangError> {
        let text = raw.trim_end_matches(['\r', '\n']);
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return Ok(());
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let section = Section::from_header(name)
                .ok_or_else(|| parse_err(line, format!("unknown section [{name}]")))?;
            if self.section.is_some_and(|cur| cur >= section) {
                return Err(parse_err(
                    line,
                    format!("section [{name}] is repeated or out of order"),
                ));
            }
            self.section = Some(section);
            return Ok(());
        }
        let section = self
            .section
            .ok_or_else(|| parse_err(line, "content before the first section header"))?;
        match section {
            Section::Alphabet => {
                let (key, value) = key_value(line, trimmed)?;
                match key {
                    "chars" => self.surface_chars = Some(value.chars().collect()),
                    "meta" => self.meta_chars = value.chars().collect(),
                    "boundary" => self.boundary = Some(single_char(line, value)?),
                    _ => return Err(parse_err(line, format!("unknown alphabet key '{key}'"))),
                }
            }
            Section::VowelClasses => {
                let rest = trimmed
                    .strip_prefix("class ")
                    .ok_or_else(|| parse_err(line, "expected `class <name> = <chars>`"))?;
                let (name, chars) = key_value(line, rest)?;
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(parse_err(line, "bad vowel class name"));
                }
                self.vowels.classes.push(VowelClass {
                    name: name.to_string(),
                    chars: chars.chars().collect(),
                });
            }
            Section::MetaResolution => {
                let words: Vec<&str> = trimmed.split_whitespace().collect();
                match words.as_slice() {
                    ["default", meta, "->", target] => self
                        .rules
                        .meta_defaults
                        .push((single_char(line, meta)?, single_char(line, target)?)),
                    [meta, class, "->", target] => {
                        self.rules.meta_resolutions.push(MetaResolution {
                            meta: single_char(line, meta)?,
                            class: class.to_string(),
                            target: single_char(line, target)?,
                        })
                    }
                    _ => {
                        return Err(parse_err(
                            line,
                            "expected `<meta> <class> -> <char>` or `default <meta> -> <char>`",
                        ))
                    }
                }
            }
            Section::Roots => {
                let [surface, lexical, category] = tab_fields(line, text, "root")?;
                self.roots.push((
                    line,
                    surface.to_string(),
                    lexical.to_string(),
                    category.to_string(),
                ));
            }
            Section::States => {
                let words: Vec<&str> = trimmed.split_whitespace().collect();
                let (name, is_final) = match words.as_slice() {
                    [name] => (*name, false),
                    [name, "final"] => (*name, true),
                    _ => return Err(parse_err(line, "expected `<name>` or `<name> final`")),
                };
                self.states.push(State {
                    name: name.to_string(),
                    is_final,
                });
            }
            Section::Categories => {
                let (category, state) = trimmed
                    .split_once("->")
                    .map(|(a, b)| (a.trim(), b.trim()))
                    .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                    .ok_or_else(|| parse_err(line, "expected `<category> -> <state>`"))?;
                self.categories
                    .push((line, category.to_string(), state.to_string()));
            }
            Section::Transitions => {
                let [from, to, morpheme] = tab_fields(line, text, "transition")?;
                self.transitions.push((
                    line,
                    from.to_string(),
                    to.to_string(),
                    morpheme.to_string(),
                ));
            }
            Section::BoundaryDeletions => {
                let words: Vec<&str> = trimmed.split_whitespace().collect();
                match words.as_slice() {
                    ["drop", target, "after", ctx] => {
                        self.rules.boundary_deletions.push(BoundaryDeletion {
                            target: single_char(line, target)?,
                            after: parse_context(line, ctx)?,
                        })
                    }
                    _ => return Err(parse_err(line, "expected `drop <char> after <context>`")),
                }
            }
            Section::FinalMutations => {
                let words: Vec<&str> = trimmed.split_whitespace().collect();
                match words.as_slice() {
                    [from, "->", to, "before", ctx] => {
                        self.rules.final_mutations.push(FinalMutation {
                            from: single_char(line, from)?,
                            to: single_char(line, to)?,
                            before: parse_context(line, ctx)?,
                        })
                    }
                    _ => {
                        return Err(parse_err(
                            line,
                            "expected `<char> -> <char> before <context>`",
                        ))
                    }
                }
            }
            Section::MutableFinals => {
                let (key, value) = key_value(line, trimmed)?;
                if key != "chars" {
                    return Err(parse_err(line, "expected `chars = <chars>`"));
                }
                self.rules.mutable_finals = value.chars().collect();
            }
            Section::SpecialPairs => {
                let words: Vec<&str> = trimmed.split_whitespace().collect();
                match words.as_slice() {
                    [a, b] => self
                        .special_pairs
                        .push((single_char(line, a)?, single_char(line, b)?)),
                    _ => return Err(parse_err(line, "expected `<char> <char>`")),
                }
            }
            Section::ErrorStats => {
                let (key, value) = key_value(line, trimmed)?;
                let value: f64 = value
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad number '{value}'")))?;
                let slot = match key {
                    "replacement" => &mut self.error_stats.replacement,
                    "deletion" => &mut self.error_stats.deletion,
                    "insertion" => &mut self.error_stats.insertion,
                    "transposition" => &mut self.error_stats.transposition,
                    "special_replacement_share" => &mut self.error_stats.special_replacement_share,
                    _ => return Err(parse_err(line, format!("unknown error statistic '{key}'"))),
                };
                *slot = value;
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<LanguageDefinition, LangError> {
        let surface_chars = self.surface_chars.ok_or_else(|| {
            LangError::Invalid(vec![Diagnostic::new("alphabet", "missing `chars`")])
        })?;
        if self.states.is_empty() {
            return Err(LangError::Invalid(vec![Diagnostic::new(
                "states",
                "at least one (start) state is required",
            )]));
        }

        let state_index: HashMap<&str, StateId> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.as_str(), StateId(i)))
            .collect();
        let mut unresolved = Vec::new();

        let mut categories = Vec::new();
        for (line, name, state) in &self.categories {
            match state_index.get(state.as_str()) {
                Some(&id) => categories.push((name.clone(), id)),
                None => unresolved.push(Diagnostic::new(
                    format!("category '{name}' (line {line})"),
                    format!("unknown state '{state}'"),
                )),
            }
        }
        let category_index: HashMap<&str, StateId> = categories
            .iter()
            .map(|(name, id)| (name.as_str(), *id))
            .collect();

        let mut transitions = Vec::new();
        for (line, from, to, morpheme) in &self.transitions {
            for name in [from, to] {
                if !state_index.contains_key(name.as_str()) {
                    unresolved.push(Diagnostic::new(
                        format!("transition '{morpheme}' (line {line})"),
                        format!("unknown state '{name}'"),
                    ));
                }
            }
            if let (Some(&from), Some(&to)) =
                (state_index.get(from.as_str()), state_index.get(to.as_str()))
            {
                transitions.push(Transition {
                    from,
                    to,
                    morpheme: morpheme.clone(),
                });
            }
        }

        let mut roots = Vec::new();
        for (line, surface, lexical, category) in &self.roots {
            match category_index.get(category.as_str()) {
                Some(&entry_state) => roots.push(Root {
                    id: RootId(roots.len()),
                    surface: surface.clone(),
                    lexical: lexical.clone(),
                    category: category.clone(),
                    entry_state,
                }),
                None => unresolved.push(Diagnostic::new(
                    format!("root '{surface}' (line {line})"),
                    format!("unknown category '{category}'"),
                )),
            }
        }

        if !unresolved.is_empty() {
            return Err(LangError::Invalid(unresolved));
        }

        let def = LanguageDefinition {
            alphabet: Alphabet {
                surface_chars,
                meta_chars: self.meta_chars,
                boundary: self.boundary.unwrap_or('+'),
            },
            vowels: self.vowels,
            roots,
            categories,
            fsa: MorphotacticsFsa {
                states: self.states,
                start: StateId(0),
                transitions,
            },
            rules: self.rules,
            special_pairs: self.special_pairs,
            error_stats: self.error_stats,
        };
        let diags = validate(&def);
        if diags.is_empty() {
            Ok(def)
        } else {
            Err(LangError::Invalid(diags))
        }
    }
}

fn chars(list: &[char]) -> String {
    list.iter().collect()
}

/// Renders the definition back into pack syntax; reloading yields an equal value.
impl fmt::Display for LanguageDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let state_name = |id: StateId| self.fsa.states[id.0].name.as_str();

        writeln!(f, "[{}]", Section::Alphabet.header())?;
        writeln!(f, "chars = {}", chars(&self.alphabet.surface_chars))?;
        writeln!(f, "meta = {}", chars(&self.alphabet.meta_chars))?;
        writeln!(f, "boundary = {}", self.alphabet.boundary)?;

        writeln!(f, "\n[{}]", Section::VowelClasses.header())?;
        for class in &self.vowels.classes {
            writeln!(f, "class {} = {}", class.name, chars(&class.chars))?;
        }

        writeln!(f, "\n[{}]", Section::MetaResolution.header())?;
        for rule in &self.rules.meta_resolutions {
            writeln!(f, "{} {} -> {}", rule.meta, rule.class, rule.target)?;
        }
        for (meta, target) in &self.rules.meta_defaults {
            writeln!(f, "default {meta} -> {target}")?;
        }

        writeln!(f, "\n[{}]", Section::Roots.header())?;
        for root in &self.roots {
            writeln!(f, "{}\t{}\t{}", root.surface, root.lexical, root.category)?;
        }

        writeln!(f, "\n[{}]", Section::States.header())?;
        for state in &self.fsa.states {
            if state.is_final {
                writeln!(f, "{} final", state.name)?;
            } else {
                writeln!(f, "{}", state.name)?;
            }
        }

        writeln!(f, "\n[{}]", Section::Categories.header())?;
        for (name, state) in &self.categories {
            writeln!(f, "{name} -> {}", state_name(*state))?;
        }

        writeln!(f, "\n[{}]", Section::Transitions.header())?;
        for tr in &self.fsa.transitions {
            writeln!(
                f,
                "{}\t{}\t{}",
                state_name(tr.from),
                state_name(tr.to),
                tr.morpheme
            )?;
        }

        writeln!(f, "\n[{}]", Section::BoundaryDeletions.header())?;
        for rule in &self.rules.boundary_deletions {
            writeln!(f, "drop {} after {}", rule.target, rule.after)?;
        }

        writeln!(f, "\n[{}]", Section::FinalMutations.header())?;
        for rule in &self.rules.final_mutations {
            writeln!(f, "{} -> {} before {}", rule.from, rule.to, rule.before)?;
        }

        writeln!(f, "\n[{}]", Section::MutableFinals.header())?;
        writeln!(f, "chars = {}", chars(&self.rules.mutable_finals))?;

        writeln!(f, "\n[{}]", Section::SpecialPairs.header())?;
        for (a, b) in &self.special_pairs {
            writeln!(f, "{a} {b}")?;
        }

        let stats = &self.error_stats;
        writeln!(f, "\n[{}]", Section::ErrorStats.header())?;
        writeln!(f, "replacement = {}", stats.replacement)?;
        writeln!(f, "deletion = {}", stats.deletion)?;
        writeln!(f, "insertion = {}", stats.insertion)?;
        writeln!(f, "transposition = {}", stats.transposition)?;
        writeln!(
            f,
            "special_replacement_share = {}",
            stats.special_replacement_share
        )
    }
}

/// Characters (surface and meta) that a pack's rules treat as vowels.
pub(crate) fn vowel_like_chars(def: &LanguageDefinition) -> BTreeSet<char> {
    let mut set: BTreeSet<char> = def
        .vowels
        .classes
        .iter()
        .flat_map(|c| c.chars.iter().copied())
        .collect();
    for &meta in &def.alphabet.meta_chars {
        let mut targets = def
            .rules
            .meta_resolutions
            .iter()
            .filter(|r| r.meta == meta)
            .map(|r| r.target)
            .chain(
                def.rules
                    .meta_defaults
                    .iter()
                    .filter(|(m, _)| *m == meta)
                    .map(|(_, t)| *t),
            )
            .peekable();
        if targets.peek().is_some() && targets.all(|t| def.vowels.is_vowel(t)) {
            set.insert(meta);
        }
    }
    set
}
