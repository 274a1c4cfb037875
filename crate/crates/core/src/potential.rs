//! Locally constant potentials, Birkhoff sums, and higher-block recoding.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::sft::{EnumerationCap, Sft, Word};

/// Largest dense table this crate will allocate (`k^memory` slots).
const MAX_TABLE_SLOTS: usize = 1 << 26;

/// A real potential depending only on the first `memory` coordinates.
///
/// The table holds one finite value per admissible word of length `memory`.
/// Values are stored densely, indexed by the base-`k` code of the word;
/// inadmissible slots hold NaN and are never read.
#[derive(Debug, Clone)]
pub struct LocallyConstantPotential {
    k: usize,
    memory: usize,
    values: Vec<f64>,
}

/// Equal tables: admissible slots compare as numbers, NaN slots match NaN slots.
impl PartialEq for LocallyConstantPotential {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.memory == other.memory
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a == b || (a.is_nan() && b.is_nan()))
    }
}

fn table_slots(k: usize, memory: usize) -> Result<usize> {
    u32::try_from(memory)
        .ok()
        .and_then(|m| k.checked_pow(m))
        .filter(|&s| s <= MAX_TABLE_SLOTS)
        .ok_or_else(|| Error::InvalidPotential(format!("table for memory {memory} over {k} symbols is too large")))
}

impl LocallyConstantPotential {
    /// Builds a potential from explicit `(word, value)` entries. Every admissible
    /// word of length `memory` must appear exactly once; no other words may appear.
    pub fn from_table<I>(sft: &Sft, memory: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, f64)>,
    {
        if memory == 0 {
            return Err(Error::InvalidPotential("memory must be at least 1".into()));
        }
        let k = sft.alphabet_size();
        let mut values = vec![f64::NAN; table_slots(k, memory)?];
        let mut seen = vec![false; values.len()];
        for (word, value) in entries {
            if word.len() != memory {
                return Err(Error::InvalidPotential(format!(
                    "word {word} has length {}, expected {memory}",
                    word.len()
                )));
            }
            if !sft.is_admissible(word.symbols()) {
                return Err(Error::InvalidPotential(format!("word {word} is not admissible")));
            }
            if !value.is_finite() {
                return Err(Error::InvalidPotential(format!("value for {word} is not finite")));
            }
            let idx = encode(k, word.symbols());
            if seen[idx] {
                return Err(Error::InvalidPotential(format!("duplicate entry for {word}")));
            }
            seen[idx] = true;
            values[idx] = value;
        }
        let mut missing = None;
        sft.for_each_word(memory, |w| {
            if missing.is_none() && !seen[encode(k, w)] {
                missing = Some(Word::from_symbols(w.to_vec()));
            }
        });
        if let Some(w) = missing {
            return Err(Error::InvalidPotential(format!(
                "missing entry for admissible word {w}"
            )));
        }
        Ok(LocallyConstantPotential { k, memory, values })
    }

    /// Evaluates `f` on every admissible word of length `memory`.
    pub fn from_fn<F: FnMut(&[usize]) -> f64>(sft: &Sft, memory: usize, mut f: F) -> Result<Self> {
        if memory == 0 {
            return Err(Error::InvalidPotential("memory must be at least 1".into()));
        }
        let k = sft.alphabet_size();
        let mut values = vec![f64::NAN; table_slots(k, memory)?];
        let mut bad = None;
        sft.for_each_word(memory, |w| {
            let v = f(w);
            if !v.is_finite() && bad.is_none() {
                bad = Some(Word::from_symbols(w.to_vec()));
            }
            values[encode(k, w)] = v;
        });
        if let Some(w) = bad {
            return Err(Error::InvalidPotential(format!("value for {w} is not finite")));
        }
        Ok(LocallyConstantPotential { k, memory, values })
    }

    pub fn constant(sft: &Sft, c: f64) -> Result<Self> {
        Self::from_fn(sft, 1, |_| c)
    }

    /// Memory-1 potential `phi(i) = values[i]`.
    pub fn from_symbol_values(sft: &Sft, values: &[f64]) -> Result<Self> {
        if values.len() != sft.alphabet_size() {
            return Err(Error::DimensionMismatch {
                expected: sft.alphabet_size(),
                found: values.len(),
            });
        }
        Self::from_fn(sft, 1, |w| values[w[0]])
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    /// True when the table is total and finite over the admissible words of `sft`.
    pub fn is_defined_over(&self, sft: &Sft) -> bool {
        if sft.alphabet_size() != self.k {
            return false;
        }
        let mut ok = true;
        sft.for_each_word(self.memory, |w| {
            ok &= self.values[encode(self.k, w)].is_finite();
        });
        ok
    }

    /// Value on a window of exactly `memory` symbols. NaN for inadmissible windows.
    #[inline]
    pub fn value(&self, window: &[usize]) -> f64 {
        debug_assert_eq!(window.len(), self.memory);
        self.values[encode(self.k, window)]
    }

    pub fn get(&self, word: &Word) -> Option<f64> {
        if word.len() != self.memory || word.symbols().iter().any(|&s| s >= self.k) {
            return None;
        }
        let v = self.value(word.symbols());
        v.is_finite().then_some(v)
    }

    /// `(word, value)` pairs in lexicographic word order.
    pub fn entries(&self) -> Vec<(Word, f64)> {
        let mut out = Vec::new();
        let mut w = vec![0usize; self.memory];
        for idx in 0..self.values.len() {
            let v = self.values[idx];
            if v.is_finite() {
                decode_into(self.k, idx, &mut w);
                out.push((Word::from_symbols(w.clone()), v));
            }
        }
        out
    }

    fn finite_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied().filter(|v| v.is_finite())
    }

    pub fn min_value(&self) -> f64 {
        self.finite_values().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.finite_values().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max |value|` over the table.
    pub fn sup_norm(&self) -> f64 {
        self.finite_values().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `S_n p` on the cylinder of `word`, summed left to right over windows
    /// `0..n`. With `n = None` the sum uses every full window of the word.
    pub fn birkhoff_sum(&self, word: &[usize], n: Option<usize>) -> Result<f64> {
        let available = (word.len() + 1).saturating_sub(self.memory);
        let n = n.unwrap_or(available);
        if word.len() < n + self.memory - 1 || n == 0 && word.len() < self.memory {
            return Err(Error::WordTooShort {
                len: word.len(),
                windows: n,
                memory: self.memory,
            });
        }
        Ok(self.birkhoff_unchecked(word, n))
    }

    #[inline]
    pub(crate) fn birkhoff_unchecked(&self, word: &[usize], n: usize) -> f64 {
        let mut sum = 0.0;
        for i in 0..n {
            sum += self.value(&word[i..i + self.memory]);
        }
        sum
    }

    /// Same function presented with a larger memory.
    pub fn lift(&self, sft: &Sft, memory: usize) -> Result<Self> {
        if memory < self.memory {
            return Err(Error::MemoryMismatch {
                found: self.memory,
                max: memory,
            });
        }
        if memory == self.memory {
            return Ok(self.clone());
        }
        let m = self.memory;
        Self::from_fn(sft, memory, |w| self.value(&w[..m]))
    }

    /// `a * self + b * other`, presented at the larger of the two memories.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64, sft: &Sft) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                found: other.k,
            });
        }
        let memory = self.memory.max(other.memory);
        let (m1, m2) = (self.memory, other.memory);
        Self::from_fn(sft, memory, |w| a * self.value(&w[..m1]) + b * other.value(&w[..m2]))
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn plus_constant(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        LocallyConstantPotential {
            k: self.k,
            memory: self.memory,
            values: self
                .values
                .iter()
                .map(|&v| if v.is_finite() { f(v) } else { v })
                .collect(),
        }
    }
}

#[inline]
fn encode(k: usize, word: &[usize]) -> usize {
    word.iter().fold(0, |acc, &s| acc * k + s)
}

fn decode_into(k: usize, mut idx: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % k;
        idx /= k;
    }
}

/// Correspondence between an original shift and its block presentation:
/// recoded symbol `u` stands for the admissible word `blocks[u]` of length
/// `block_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCode {
    pub block_len: usize,
    pub blocks: Vec<Word>,
    index: HashMap<Vec<usize>, usize>,
}

impl BlockCode {
    /// Sliding-window image of an original word (length `L` maps to `L - block_len + 1`).
    pub fn encode(&self, word: &[usize]) -> Option<Vec<usize>> {
        if word.len() < self.block_len {
            return None;
        }
        word.windows(self.block_len)
            .map(|w| self.index.get(w).copied())
            .collect()
    }

    /// Inverse of [`BlockCode::encode`].
    pub fn decode(&self, recoded: &[usize]) -> Option<Word> {
        let (first, rest) = recoded.split_first()?;
        let mut out = self.blocks.get(*first)?.symbols().to_vec();
        for &u in rest {
            out.push(*self.blocks.get(u)?.symbols().last()?);
        }
        Some(Word::from_symbols(out))
    }
}

/// Output of [`recode_to_memory2`].
#[derive(Debug, Clone, PartialEq)]
pub struct Recoding {
    pub sft: Sft,
    pub potentials: Vec<LocallyConstantPotential>,
    /// `None` when the inputs already had memory at most 2 and were returned unchanged.
    pub blocks: Option<BlockCode>,
}

/// Re-presents potentials of memory `M > 2` as memory-2 potentials on the
/// `(M-1)`-block shift. Birkhoff sums are preserved exactly: a word of
/// length `n + M - 1` and its image of length `n + 1` give identical `S_n`.
pub fn recode_to_memory2(sft: &Sft, potentials: &[LocallyConstantPotential], cap: EnumerationCap) -> Result<Recoding> {
    for p in potentials {
        if !p.is_defined_over(sft) {
            return Err(Error::InvalidPotential(
                "potential is not defined over the given shift".into(),
            ));
        }
    }
    let memory = potentials.iter().map(|p| p.memory).max().unwrap_or(1);
    if memory <= 2 {
        return Ok(Recoding {
            sft: sft.clone(),
            potentials: potentials.to_vec(),
            blocks: None,
        });
    }
    let block_len = memory - 1;
    let blocks = sft.enumerate_words(block_len, cap)?;
    let index: HashMap<Vec<usize>, usize> = blocks
        .iter()
        .enumerate()
        .map(|(i, w)| (w.symbols().to_vec(), i))
        .collect();
    let rows: Vec<Vec<u8>> = blocks
        .iter()
        .map(|u| {
            blocks
                .iter()
                .map(|v| u8::from(u.symbols()[1..] == v.symbols()[..block_len - 1]))
                .collect()
        })
        .collect();
    let recoded = Sft::new(&rows)?;
    let mut joined = vec![0usize; memory];
    let recoded_potentials = potentials
        .iter()
        .map(|p| {
            LocallyConstantPotential::from_fn(&recoded, 2, |pair| {
                joined[..block_len].copy_from_slice(blocks[pair[0]].symbols());
                joined[block_len] = *blocks[pair[1]].symbols().last().expect("non-empty block");
                p.value(&joined[..p.memory])
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Recoding {
        sft: recoded,
        potentials: recoded_potentials,
        blocks: Some(BlockCode {
            block_len,
            blocks,
            index,
        }),
    })
}
