//! One-sided topological Markov shifts over a finite alphabet.
//!
//! Symbols are stored 0-based (`0..k`) internally and shown 1-based (`1..=k`)
//! everywhere text is produced or parsed, so a word printed as `121` is the
//! internal sequence `[0, 1, 0]`.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Default upper bound on the number of words any enumeration may touch.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Limit on exhaustive enumerations (word lists, partition sums).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCap(pub u64);

impl Default for EnumerationCap {
    fn default() -> Self {
        EnumerationCap(DEFAULT_ENUMERATION_CAP)
    }
}

impl EnumerationCap {
    pub fn check(self, count: u128) -> Result<()> {
        if count > u128::from(self.0) {
            Err(Error::CapExceeded { count, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

/// A finite word over the alphabet. Admissibility is checked by [`Sft::word`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    /// Wraps 0-based symbols without any admissibility check.
    pub fn from_symbols(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    /// Parses 1-based text: either a digit string (`"121"`) or a dotted list
    /// (`"1.10.2"`) for alphabets with more than nine symbols.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        let symbols: Result<Vec<usize>> = if text.contains('.') {
            text.split('.')
                .map(|tok| match tok.parse::<usize>() {
                    Ok(s) if s >= 1 => Ok(s - 1),
                    _ => Err(Error::InvalidWord(format!("bad symbol {tok:?} in {text:?}"))),
                })
                .collect()
        } else {
            text.chars()
                .map(|c| match c.to_digit(10) {
                    Some(d) if d >= 1 => Ok(d as usize - 1),
                    _ => Err(Error::InvalidWord(format!("bad symbol {c:?} in {text:?}"))),
                })
                .collect()
        };
        symbols.map(Word)
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_symbols(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 9) {
            for s in &self.0 {
                write!(f, "{}", s + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| (s + 1).to_string()).collect();
            f.write_str(&parts.join("."))
        }
    }
}

/// Transition structure `A = (t_ij)` of a one-sided topological Markov shift.
///
/// Invariants: `k >= 1`, and no row or column of `A` is entirely zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sft {
    k: usize,
    allowed: Vec<bool>,
    successors: Vec<Vec<usize>>,
}

impl Sft {
    /// Builds a shift from 0/1 rows.
    pub fn new(rows: &[Vec<u8>]) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidShift("alphabet must contain at least one symbol".into()));
        }
        let mut allowed = Vec::with_capacity(k * k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidShift(format!(
                    "row {} has {} entries, expected {k}",
                    i + 1,
                    row.len()
                )));
            }
            for &t in row {
                match t {
                    0 => allowed.push(false),
                    1 => allowed.push(true),
                    other => {
                        return Err(Error::InvalidShift(format!(
                            "row {} contains {other}; entries must be 0 or 1",
                            i + 1
                        )))
                    }
                }
            }
        }
        Self::from_allowed(k, allowed)
    }

    fn from_allowed(k: usize, allowed: Vec<bool>) -> Result<Self> {
        for i in 0..k {
            if !(0..k).any(|j| allowed[i * k + j]) {
                return Err(Error::InvalidShift(format!("row {} is all zeros", i + 1)));
            }
            if !(0..k).any(|j| allowed[j * k + i]) {
                return Err(Error::InvalidShift(format!("column {} is all zeros", i + 1)));
            }
        }
        let successors = (0..k)
            .map(|i| (0..k).filter(|&j| allowed[i * k + j]).collect())
            .collect();
        Ok(Sft { k, allowed, successors })
    }

    /// Full shift on `k` symbols.
    pub fn full(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidShift("alphabet must contain at least one symbol".into()));
        }
        Self::from_allowed(k, vec![true; k * k])
    }

    /// `A = [[1,1],[1,0]]`: no two consecutive 2s.
    pub fn golden_mean() -> Self {
        Self::new(&[vec![1, 1], vec![1, 0]]).expect("golden-mean matrix is valid")
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    /// `t_ab == 1`, 0-based symbols.
    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.allowed[a * self.k + b]
    }

    pub fn successors(&self, a: usize) -> &[usize] {
        &self.successors[a]
    }

    /// Transition matrix rows as 0/1.
    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.k)
            .map(|i| (0..self.k).map(|j| u8::from(self.allows(i, j))).collect())
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.allowed.iter().filter(|&&t| t).count()
    }

    pub fn is_admissible(&self, symbols: &[usize]) -> bool {
        symbols.iter().all(|&s| s < self.k) && symbols.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    /// Validates 0-based symbols into an admissible word.
    pub fn word(&self, symbols: Vec<usize>) -> Result<Word> {
        if symbols.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= self.k) {
            return Err(Error::InvalidWord(format!(
                "symbol {} outside alphabet 1..={}",
                s + 1,
                self.k
            )));
        }
        let word = Word(symbols);
        if !self.is_admissible(word.symbols()) {
            return Err(Error::InvalidWord(format!("{word} is not admissible")));
        }
        Ok(word)
    }

    /// Number of admissible words of length `n`, i.e. the entry sum of `A^(n-1)`.
    pub fn count_words(&self, n: usize) -> Result<u128> {
        if n == 0 {
            return Err(Error::InvalidArgument("word length must be at least 1".into()));
        }
        let mut ending: Vec<u128> = vec![1; self.k];
        for step in 2..=n {
            let mut next = vec![0u128; self.k];
            for (a, &c) in ending.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &b in self.successors(a) {
                    next[b] = next[b].checked_add(c).ok_or(Error::Overflow(step))?;
                }
            }
            ending = next;
        }
        ending
            .iter()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
            .ok_or(Error::Overflow(n))
    }

    /// All admissible words of length `n` in lexicographic order.
    pub fn enumerate_words(&self, n: usize, cap: EnumerationCap) -> Result<Vec<Word>> {
        let count = match self.count_words(n) {
            Ok(c) => c,
            Err(Error::Overflow(_)) => u128::MAX,
            Err(e) => return Err(e),
        };
        cap.check(count)?;
        let mut out = Vec::with_capacity(count as usize);
        self.for_each_word(n, |w| out.push(Word(w.to_vec())));
        Ok(out)
    }

    /// Visits every admissible word of length `n` in lexicographic order
    /// without allocating per word. No cap is applied.
    pub fn for_each_word<F: FnMut(&[usize])>(&self, n: usize, mut f: F) {
        if n == 0 {
            return;
        }
        let mut word = Vec::with_capacity(n);
        for a in 0..self.k {
            word.push(a);
            self.extend_words(&mut word, n, &mut f);
            word.pop();
        }
    }

    fn extend_words<F: FnMut(&[usize])>(&self, word: &mut Vec<usize>, n: usize, f: &mut F) {
        if word.len() == n {
            f(word);
            return;
        }
        let last = *word.last().expect("non-empty prefix");
        for &b in self.successors(last) {
            word.push(b);
            self.extend_words(word, n, f);
            word.pop();
        }
    }

    fn reachable_from(&self, start: usize, reverse: bool) -> Vec<bool> {
        let mut seen = vec![false; self.k];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(a) = queue.pop_front() {
            for (b, s) in seen.iter_mut().enumerate() {
                let edge = if reverse { self.allows(b, a) } else { self.allows(a, b) };
                if edge && !*s {
                    *s = true;
                    queue.push_back(b);
                }
            }
        }
        seen
    }

    /// Every symbol reaches every other symbol (and itself) along admissible paths.
    pub fn is_irreducible(&self) -> bool {
        self.reachable_from(0, false).iter().all(|&r| r) && self.reachable_from(0, true).iter().all(|&r| r)
    }

    /// Period (gcd of cycle lengths) of an irreducible shift; `None` when reducible.
    pub fn period(&self) -> Option<usize> {
        if !self.is_irreducible() {
            return None;
        }
        let mut level = vec![usize::MAX; self.k];
        level[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &b in self.successors(a) {
                if level[b] == usize::MAX {
                    level[b] = level[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        let mut g = 0usize;
        for a in 0..self.k {
            for &b in self.successors(a) {
                let diff = (level[a] + 1).abs_diff(level[b]);
                g = gcd(g, diff);
            }
        }
        Some(g.max(1))
    }

    /// Topologically mixing, i.e. `A` primitive: irreducible with period 1.
    pub fn is_mixing(&self) -> bool {
        self.period() == Some(1)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
