use std::fmt;

use super::SftSystem;
use crate::error::{Error, Result};

/// A finite admissible word: every adjacent pair is an allowed transition.
///
/// For locally constant data a cylinder of depth `n` plays the role of a
/// Bowen ball of length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<usize>,
}

impl Word {
    pub fn new(sft: &SftSystem, symbols: Vec<usize>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= sft.alphabet_size()) {
            return Err(Error::InvalidWord(format!(
                "symbol {s} outside alphabet of size {}",
                sft.alphabet_size()
            )));
        }
        if let Some(w) = symbols.windows(2).find(|w| !sft.allowed(w[0], w[1])) {
            return Err(Error::InvalidWord(format!("forbidden transition {} -> {}", w[0], w[1])));
        }
        Ok(Word { symbols })
    }

    pub(crate) fn new_unchecked(symbols: Vec<usize>) -> Self {
        Word { symbols }
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// True if the word closes up into a periodic orbit.
    pub fn is_cyclic(&self, sft: &SftSystem) -> bool {
        sft.allowed(*self.symbols.last().unwrap(), self.symbols[0])
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.iter().all(|&s| s < 10) {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
        } else {
            for (i, s) in self.symbols.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

/// Default cap on the number of words any enumeration may visit.
pub const DEFAULT_WORD_CAP: u64 = 1 << 25;

/// All admissible words of length `n`, in lexicographic order.
pub fn admissible_words(sft: &SftSystem, n: usize) -> Result<Vec<Word>> {
    admissible_words_capped(sft, n, DEFAULT_WORD_CAP)
}

pub fn admissible_words_capped(sft: &SftSystem, n: usize, cap: u64) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::InvalidParameter("word length must be at least 1".into()));
    }
    check_word_budget(sft, n, cap)?;
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    for s in 0..sft.alphabet_size() {
        prefix.push(s);
        extend(sft, n, &mut prefix, &mut out);
        prefix.pop();
    }
    Ok(out)
}

fn extend(sft: &SftSystem, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Word>) {
    if prefix.len() == n {
        out.push(Word::new_unchecked(prefix.clone()));
        return;
    }
    let last = *prefix.last().unwrap();
    for s in sft.successors(last) {
        prefix.push(s);
        extend(sft, n, prefix, out);
        prefix.pop();
    }
}

/// Fails with `ResourceLimit` when `alphabet_size^n` exceeds `cap`.
pub fn check_word_budget(sft: &SftSystem, n: usize, cap: u64) -> Result<()> {
    let a = sft.alphabet_size() as u128;
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(a);
        if total > cap as u128 {
            return Err(Error::ResourceLimit { requested: total, cap });
        }
    }
    Ok(())
}
