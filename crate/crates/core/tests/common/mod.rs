//! Test-only reference implementations. None of these share code with the
//! library beyond `surface()` for whole lexical strings.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use agglutspell::{parse_language, surface, LanguageDefinition};

pub const TOY: &str = include_str!("../data/toy.lang");

pub fn toy() -> LanguageDefinition {
    parse_language(TOY).expect("toy pack is valid")
}

pub fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

/// Plain full-table restricted edit distance.
pub fn dp_distance(x: &[char], y: &[char]) -> usize {
    let (m, n) = (x.len(), y.len());
    let mut d = vec![vec![0usize; n + 1]; m + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=m {
        for j in 1..=n {
            let cost = usize::from(x[i - 1] != y[j - 1]);
            let mut best = (d[i - 1][j] + 1)
                .min(d[i][j - 1] + 1)
                .min(d[i - 1][j - 1] + cost);
            if i > 1 && j > 1 && x[i - 1] == y[j - 2] && x[i - 2] == y[j - 1] {
                best = best.min(d[i - 2][j - 2] + 1);
            }
            d[i][j] = best;
        }
    }
    d[m][n]
}

/// Every string one insertion, deletion, replacement or adjacent swap away.
pub fn neighbours(s: &[char], alphabet: &[char]) -> Vec<Vec<char>> {
    let mut out = Vec::new();
    for i in 0..=s.len() {
        for &c in alphabet {
            let mut t = s.to_vec();
            t.insert(i, c);
            out.push(t);
        }
    }
    for i in 0..s.len() {
        let mut t = s.to_vec();
        t.remove(i);
        out.push(t);
        for &c in alphabet {
            if c != s[i] {
                let mut t = s.to_vec();
                t[i] = c;
                out.push(t);
            }
        }
        if i + 1 < s.len() && s[i] != s[i + 1] {
            let mut t = s.to_vec();
            t.swap(i, i + 1);
            out.push(t);
        }
    }
    out
}

/// Fewest single operations turning `x` into `y`, by breadth-first search.
/// Intermediate strings are capped at two chars past the longer input.
pub fn bfs_distance(x: &[char], y: &[char], alphabet: &[char]) -> usize {
    let cap = x.len().max(y.len()) + 2;
    let mut seen: HashMap<Vec<char>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(x.to_vec(), 0);
    queue.push_back(x.to_vec());
    while let Some(s) = queue.pop_front() {
        let d = seen[&s];
        if s == y {
            return d;
        }
        for t in neighbours(&s, alphabet) {
            if t.len() <= cap && !seen.contains_key(&t) {
                seen.insert(t.clone(), d + 1);
                queue.push_back(t);
            }
        }
    }
    unreachable!("every string is reachable")
}

/// All strings within `k` single operations of `s`, including `s`.
pub fn corruptions(s: &[char], k: usize, alphabet: &[char]) -> BTreeSet<Vec<char>> {
    let mut all = BTreeSet::from([s.to_vec()]);
    let mut frontier = vec![s.to_vec()];
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &frontier {
            for t in neighbours(w, alphabet) {
                if all.insert(t.clone()) {
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    all
}

/// Every word of the language with surface length at most `max_len`, with
/// all of its lexical forms. Paths are expanded breadth first and each
/// lexical string is realized from scratch.
///
/// Assumes every morpheme lengthens the surface (true of the toy pack), so a
/// path whose surface is already too long cannot come back under the bound.
pub fn enumerate_words(def: &LanguageDefinition, max_len: usize) -> BTreeMap<String, Vec<String>> {
    let mut words: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut queue: VecDeque<(String, usize)> = def
        .roots
        .iter()
        .map(|r| (r.lexical.clone(), r.entry_state.0))
        .collect();
    while let Some((lexical, state)) = queue.pop_front() {
        let Ok(surf) = surface(&lexical, def) else {
            continue;
        };
        // a final mutation may still rewrite the last char, never the length
        if surf.chars().count() > max_len {
            continue;
        }
        if def.fsa.states[state].is_final {
            words.entry(surf).or_default().push(lexical.clone());
        }
        for tr in def.fsa.transitions.iter().filter(|t| t.from.0 == state) {
            queue.push_back((format!("{lexical}+{}", tr.morpheme), tr.to.0));
        }
    }
    for lexicals in words.values_mut() {
        lexicals.sort();
        lexicals.dedup();
    }
    words
}

/// {Y in words : ed(x, Y) <= t}.
pub fn words_within(
    x: &[char],
    words: &BTreeMap<String, Vec<String>>,
    t: usize,
) -> BTreeSet<String> {
    words
        .keys()
        .filter(|w| dp_distance(x, &chars(w)) <= t)
        .cloned()
        .collect()
}
