//! String distances: q-gram distance, restricted transposition edit distance,
//! the incremental error matrix, prefix edit distance and the cut-off distance
//! used to prune the candidate search.
//!
//! All computations are over `char`s, never bytes.

use std::collections::HashMap;

/// Number of q-grams not shared by `x` and `y`, counted with multiplicity:
/// a gram occurring twice in one word and once in the other contributes one.
///
/// # Panics
///
/// Panics if `q == 0`.
pub fn qgram_distance(x: &str, y: &str, q: usize) -> usize {
    assert!(q >= 1, "q-gram length must be positive");
    let x: Vec<char> = x.chars().collect();
    let y: Vec<char> = y.chars().collect();
    let mut balance: HashMap<&[char], isize> = HashMap::new();
    for g in x.windows(q) {
        *balance.entry(g).or_default() += 1;
    }
    for g in y.windows(q) {
        *balance.entry(g).or_default() -= 1;
    }
    balance.values().map(|d| d.unsigned_abs()).sum()
}

/// Minimum number of insertions, deletions, replacements and adjacent
/// transpositions turning `x` into `y` (each char edited at most once).
pub fn edit_distance(x: &str, y: &str) -> usize {
    let x: Vec<char> = x.chars().collect();
    let y: Vec<char> = y.chars().collect();
    edit_distance_chars(&x, &y)
}

pub fn edit_distance_chars(x: &[char], y: &[char]) -> usize {
    let mut h = ErrorMatrix::new(x);
    h.extend(y);
    h.distance() as usize
}

/// `H(i, j) = ed(X[..i], Y[..j])` for a fixed `X`, grown one column per
/// character appended to `Y`.
///
/// Columns are stored contiguously, so dropping trailing characters of `Y`
/// (backtracking) is a truncation.
#[derive(Debug, Clone)]
pub struct ErrorMatrix {
    x: Vec<char>,
    y: Vec<char>,
    cells: Vec<u32>,
    evaluations: u64,
}

impl ErrorMatrix {
    pub fn new(x: &[char]) -> Self {
        let cells = (0..=x.len() as u32).collect();
        Self {
            x: x.to_vec(),
            y: Vec::new(),
            cells,
            evaluations: 0,
        }
    }

    fn rows(&self) -> usize {
        self.x.len() + 1
    }

    pub fn x(&self) -> &[char] {
        &self.x
    }

    pub fn y(&self) -> &[char] {
        &self.y
    }

    pub fn x_len(&self) -> usize {
        self.x.len()
    }

    pub fn y_len(&self) -> usize {
        self.y.len()
    }

    /// Interior cells computed so far (the `m` cells of every pushed column).
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.cells[j * self.rows() + i]
    }

    pub fn column(&self, j: usize) -> &[u32] {
        let rows = self.rows();
        &self.cells[j * rows..(j + 1) * rows]
    }

    /// `ed(X, Y)` for the current `Y`.
    pub fn distance(&self) -> u32 {
        self.get(self.x.len(), self.y.len())
    }

    /// Appends column `n + 1` for `Y` extended by `c`.
    pub fn push(&mut self, c: char) {
        let rows = self.rows();
        let j = self.y.len() + 1;
        self.y.push(c);
        let prev = (j - 1) * rows;
        let cur = j * rows;
        self.cells.push(j as u32);
        for i in 1..rows {
            let xi = self.x[i - 1];
            let value = if xi == c {
                self.cells[prev + i - 1]
            } else {
                let diag = self.cells[prev + i - 1];
                let left = self.cells[prev + i];
                let up = self.cells[cur + i - 1];
                let mut best = diag.min(left).min(up);
                if i >= 2 && j >= 2 && self.x[i - 2] == c && xi == self.y[j - 2] {
                    best = best.min(self.cells[(j - 2) * rows + i - 2]);
                }
                best + 1
            };
            self.cells.push(value);
        }
        self.evaluations += self.x.len() as u64;
    }

    pub fn extend(&mut self, chars: &[char]) {
        for &c in chars {
            self.push(c);
        }
    }

    /// Drops the last column; `None` when `Y` is already empty.
    pub fn pop(&mut self) -> Option<char> {
        let c = self.y.pop()?;
        let keep = (self.y.len() + 1) * self.rows();
        self.cells.truncate(keep);
        Some(c)
    }

    pub fn truncate(&mut self, n: usize) {
        if n < self.y.len() {
            self.y.truncate(n);
            let keep = (n + 1) * self.rows();
            self.cells.truncate(keep);
        }
    }

    /// Makes the matrix describe `target`, reusing the columns of the longest
    /// common prefix. Returns the number of columns recomputed.
    pub fn sync(&mut self, target: &[char]) -> usize {
        let common = self
            .y
            .iter()
            .zip(target)
            .take_while(|(a, b)| a == b)
            .count();
        self.truncate(common);
        self.extend(&target[common..]);
        target.len() - common
    }

    /// Lower bound on `ed(X, Y')` over every extension `Y'` of `Y` whose
    /// length is within `t` of `|X|`: the minimum of column `n` over a band of
    /// rows around the diagonal.
    pub fn cutoff(&self, t: usize) -> u32 {
        let m = self.x.len();
        let n = self.y.len();
        if n == 0 {
            return 0;
        }
        if n >= m + t {
            return (n - m) as u32;
        }
        let lo = if n <= t { 1 } else { n - t };
        let hi = (n + t).min(m);
        if lo > hi {
            return n.saturating_sub(m) as u32;
        }
        let column = self.column(n);
        column[lo..=hi].iter().copied().min().unwrap_or(u32::MAX)
    }
}

pub fn cutoff_distance(h: &ErrorMatrix, t: usize) -> u32 {
    h.cutoff(t)
}

/// Best alignment of a root against the prefixes of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentResult {
    /// `min { ed(X[..i], r) : 1 <= i <= m }`
    pub pred: u32,
    /// Every prefix length `i` attaining `pred`, ascending.
    pub indexes: Vec<usize>,
}

pub fn prefix_edit_distance(x: &str, r: &str) -> AlignmentResult {
    let x: Vec<char> = x.chars().collect();
    let r: Vec<char> = r.chars().collect();
    let mut h = ErrorMatrix::new(&x);
    h.extend(&r);
    alignment(&h)
}

/// Alignment of the current `Y` of `h` against the prefixes of `X`.
/// With an empty `X` there are no prefixes to align with: `pred = |Y|` and
/// `indexes` is empty.
pub fn alignment(h: &ErrorMatrix) -> AlignmentResult {
    let column = h.column(h.y_len());
    let Some(pred) = column.iter().skip(1).copied().min() else {
        return AlignmentResult {
            pred: h.y_len() as u32,
            indexes: Vec::new(),
        };
    };
    let indexes = (1..column.len()).filter(|&i| column[i] == pred).collect();
    AlignmentResult { pred, indexes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn qgram_worked_values() {
        assert_eq!(qgram_distance("ahmet", "mehmet", 2), 3);
        assert_eq!(qgram_distance("ahmet", "mehmet", 3), 3);
        assert_eq!(qgram_distance("çaış", "çaış", 2), 0);
        assert_eq!(qgram_distance("a", "b", 2), 0);
        assert_eq!(qgram_distance("ab", "b", 2), 1);
        assert_eq!(qgram_distance("aaa", "aa", 2), 1);
    }

    #[test]
    fn edit_distance_worked_values() {
        assert_eq!(edit_distance("kalayhla", "kalayla"), 1);
        assert_eq!(edit_distance("kalay", "kalas"), 1);
        assert_eq!(edit_distance("kala", "yatay"), 3);
        assert_eq!(edit_distance("kalay", "yatay"), 2);
        assert_eq!(edit_distance("kalayh", "yatay"), 3);
        assert_eq!(edit_distance("", "çaış"), 4);
        assert_eq!(edit_distance("abc", ""), 3);
        assert_eq!(edit_distance("ab", "ba"), 1);
        // transposition and substitution on the same pair
        assert_eq!(edit_distance("ca", "abc"), 3);
    }

    #[test]
    fn matrix_push_pop_and_sync() {
        let mut h = ErrorMatrix::new(&chars("ab"));
        h.push('a');
        assert_eq!(h.y_len(), 1);
        h.push('b');
        assert_eq!(h.get(2, 2), 0);
        assert_eq!(h.evaluations(), 4);
        assert_eq!(h.pop(), Some('b'));
        assert_eq!(h.y_len(), 1);
        assert_eq!(h.sync(&chars("ax")), 1);
        assert_eq!(h.distance(), 1);
        assert_eq!(h.sync(&chars("ab")), 1);
        assert_eq!(h.distance(), 0);
        h.truncate(0);
        assert_eq!(h.pop(), None);
    }

    #[test]
    fn base_cases_hold() {
        let mut h = ErrorMatrix::new(&chars("kalayhlamak"));
        h.extend(&chars("kalas"));
        for i in 0..=11 {
            assert_eq!(h.get(i, 0), i as u32);
        }
        for j in 0..=5 {
            assert_eq!(h.get(0, j), j as u32);
        }
    }

    #[test]
    fn prefix_alignment_worked_values() {
        assert_eq!(
            prefix_edit_distance("kalayhlamak", "kalayla"),
            AlignmentResult {
                pred: 1,
                indexes: vec![8]
            }
        );
        assert_eq!(
            prefix_edit_distance("kalayhlamak", "kalas"),
            AlignmentResult {
                pred: 1,
                indexes: vec![4, 5]
            }
        );
        assert_eq!(
            prefix_edit_distance("çalış", "çalış"),
            AlignmentResult {
                pred: 0,
                indexes: vec![5]
            }
        );
        assert!(prefix_edit_distance("", "ab").indexes.is_empty());
    }

    #[test]
    fn cutoff_cases() {
        // X = Y
        let x = chars("kalay");
        let mut h = ErrorMatrix::new(&x);
        h.extend(&x);
        assert_eq!(h.cutoff(1), 0);

        // n = m + t + 1 forces a prune
        let mut h = ErrorMatrix::new(&chars("ab"));
        h.extend(&chars("abcd"));
        assert_eq!(h.cutoff(1), 2);

        let mut h = ErrorMatrix::new(&chars("kalayhlamak"));
        h.extend(&chars("kalas"));
        assert_eq!(h.column(5)[4..=6], [1, 1, 2]);
        assert_eq!(h.cutoff(1), 1);
    }

    #[test]
    fn cutoff_short_prefix_uses_leading_rows() {
        let mut h = ErrorMatrix::new(&chars("abc"));
        h.push('x');
        // n = 1 <= t = 2: rows 1..=3
        assert_eq!(h.cutoff(2), 1);
    }
}
