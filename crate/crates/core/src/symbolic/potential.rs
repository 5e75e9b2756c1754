use super::{SftSystem, Word};
use crate::error::{Error, Result};

/// Largest table (alphabet_size^depth) a potential may allocate.
const MAX_TABLE: u128 = 1 << 24;

/// A locally constant potential of finite depth `k`: its value at a point
/// depends only on the first `k` symbols, so it is stored as a table over
/// the admissible `k`-words.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    alphabet_size: usize,
    depth: usize,
    // Indexed by the base-`alphabet_size` code of the word; `None` for
    // inadmissible words.
    table: Vec<Option<f64>>,
}

impl Potential {
    /// Builds a potential by evaluating `f` on every admissible `depth`-word.
    pub fn from_fn(
        sft: &SftSystem,
        depth: usize,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self> {
        let mut p = Self::empty(sft, depth)?;
        let mut word = vec![0; depth];
        for code in 0..p.table.len() {
            decode_into(code, sft.alphabet_size(), &mut word);
            if sft.is_admissible(&word) {
                let v = f(&word);
                if !v.is_finite() {
                    return Err(Error::InvalidPotential(format!(
                        "non-finite value {v} on word {word:?}"
                    )));
                }
                p.table[code] = Some(v);
            }
        }
        Ok(p)
    }

    /// Builds a potential from explicit `(word, value)` entries, which must
    /// cover every admissible `depth`-word exactly once.
    pub fn from_table(
        sft: &SftSystem,
        depth: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, f64)>,
    ) -> Result<Self> {
        let mut p = Self::empty(sft, depth)?;
        for (word, v) in entries {
            if word.len() != depth {
                return Err(Error::InvalidPotential(format!(
                    "word {word:?} has length {}, expected depth {depth}",
                    word.len()
                )));
            }
            if !sft.is_admissible(&word) {
                return Err(Error::InvalidPotential(format!("word {word:?} is not admissible")));
            }
            if !v.is_finite() {
                return Err(Error::InvalidPotential(format!("non-finite value on {word:?}")));
            }
            let code = encode(&word, sft.alphabet_size());
            if p.table[code].replace(v).is_some() {
                return Err(Error::InvalidPotential(format!("duplicate entry for {word:?}")));
            }
        }
        let mut word = vec![0; depth];
        for code in 0..p.table.len() {
            decode_into(code, sft.alphabet_size(), &mut word);
            if p.table[code].is_none() && sft.is_admissible(&word) {
                return Err(Error::InvalidPotential(format!("missing value for word {word:?}")));
            }
        }
        Ok(p)
    }

    /// Depth-1 potential with one value per symbol.
    pub fn from_symbol_values(sft: &SftSystem, values: &[f64]) -> Result<Self> {
        if values.len() != sft.alphabet_size() {
            return Err(Error::InvalidPotential(format!(
                "{} symbol values for an alphabet of size {}",
                values.len(),
                sft.alphabet_size()
            )));
        }
        Self::from_fn(sft, 1, |w| values[w[0]])
    }

    pub fn constant(sft: &SftSystem, c: f64) -> Self {
        Self::from_fn(sft, 1, |_| c).expect("constant potential is valid")
    }

    pub fn zero(sft: &SftSystem) -> Self {
        Self::constant(sft, 0.0)
    }

    /// Indicator of the cylinder `[symbol]`.
    pub fn indicator(sft: &SftSystem, symbol: usize) -> Self {
        Self::from_fn(sft, 1, |w| if w[0] == symbol { 1.0 } else { 0.0 })
            .expect("indicator potential is valid")
    }

    fn empty(sft: &SftSystem, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidPotential("depth must be at least 1".into()));
        }
        let size = (sft.alphabet_size() as u128)
            .checked_pow(depth as u32)
            .filter(|&s| s <= MAX_TABLE)
            .ok_or(Error::ResourceLimit {
                requested: (sft.alphabet_size() as u128).saturating_pow(depth as u32),
                cap: MAX_TABLE as u64,
            })?;
        Ok(Potential { alphabet_size: sft.alphabet_size(), depth, table: vec![None; size as usize] })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Value on a `depth`-word, `None` if the word is inadmissible.
    #[inline]
    pub fn value(&self, word: &[usize]) -> Option<f64> {
        debug_assert_eq!(word.len(), self.depth);
        if word.iter().any(|&s| s >= self.alphabet_size) {
            return None;
        }
        self.table[encode(word, self.alphabet_size)]
    }

    /// `(word, value)` pairs over admissible words in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.table.iter().enumerate().filter_map(move |(code, v)| {
            v.map(|v| {
                let mut w = vec![0; self.depth];
                decode_into(code, self.alphabet_size, &mut w);
                (w, v)
            })
        })
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.table.iter().flatten().copied()
    }

    pub fn max_value(&self) -> f64 {
        self.values().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values().fold(f64::INFINITY, f64::min)
    }

    /// Checks that the table is defined exactly on the admissible words of `sft`.
    pub fn check_host(&self, sft: &SftSystem) -> Result<()> {
        if self.alphabet_size != sft.alphabet_size() {
            return Err(Error::InvalidPotential(format!(
                "potential over {} symbols used with an alphabet of size {}",
                self.alphabet_size,
                sft.alphabet_size()
            )));
        }
        let mut word = vec![0; self.depth];
        for code in 0..self.table.len() {
            decode_into(code, self.alphabet_size, &mut word);
            if self.table[code].is_some() != sft.is_admissible(&word) {
                return Err(Error::InvalidPotential(format!(
                    "table does not match the admissible {}-words (at {word:?})",
                    self.depth
                )));
            }
        }
        Ok(())
    }

    /// The same function viewed as a potential of larger depth.
    pub fn lift(&self, sft: &SftSystem, depth: usize) -> Result<Self> {
        if depth < self.depth {
            return Err(Error::InvalidPotential(format!(
                "cannot lift depth {} to smaller depth {depth}",
                self.depth
            )));
        }
        if depth == self.depth {
            return Ok(self.clone());
        }
        let k = self.depth;
        Self::from_fn(sft, depth, |w| self.value(&w[..k]).expect("prefix of admissible word"))
    }

    /// `Σ cᵢ·pᵢ`, lifted to the largest depth among the terms.
    pub fn linear_combination(sft: &SftSystem, terms: &[(f64, &Potential)]) -> Result<Self> {
        let depth = terms.iter().map(|(_, p)| p.depth).max().unwrap_or(1);
        for (_, p) in terms {
            p.check_host(sft)?;
        }
        Self::from_fn(sft, depth, |w| {
            terms
                .iter()
                .map(|(c, p)| c * p.value(&w[..p.depth]).expect("prefix of admissible word"))
                .sum()
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Potential {
            alphabet_size: self.alphabet_size,
            depth: self.depth,
            table: self.table.iter().map(|v| v.map(|x| c * x)).collect(),
        }
    }

    /// `S_nφ` along a word.
    ///
    /// With `wrap == false` the sum runs over the `n - depth + 1` full windows
    /// of the word. With `wrap == true` it runs over the `n` cyclic windows,
    /// which is the Birkhoff sum at the periodic point `w^∞`; every cyclic
    /// window must then be admissible.
    pub fn birkhoff_sum(&self, word: &Word, wrap: bool) -> Result<f64> {
        self.birkhoff_sum_symbols(word.symbols(), wrap)
    }

    pub fn birkhoff_sum_symbols(&self, symbols: &[usize], wrap: bool) -> Result<f64> {
        let n = symbols.len();
        let k = self.depth;
        if n == 0 || (!wrap && n < k) {
            return Err(Error::WordTooShort { len: n, depth: k });
        }
        if !wrap {
            return symbols
                .windows(k)
                .map(|w| {
                    self.value(w)
                        .ok_or_else(|| Error::InvalidWord(format!("window {w:?} not admissible")))
                })
                .sum();
        }
        let mut window = vec![0; k];
        let mut total = 0.0;
        for start in 0..n {
            for (i, slot) in window.iter_mut().enumerate() {
                *slot = symbols[(start + i) % n];
            }
            total += self
                .value(&window)
                .ok_or_else(|| Error::NotCyclic { window: window.clone() })?;
        }
        Ok(total)
    }
}

/// `S_nφ(w)` — free-function form of [`Potential::birkhoff_sum`].
pub fn birkhoff_sum(potential: &Potential, word: &Word, wrap: bool) -> Result<f64> {
    potential.birkhoff_sum(word, wrap)
}

#[inline]
fn encode(word: &[usize], a: usize) -> usize {
    word.iter().fold(0, |acc, &s| acc * a + s)
}

fn decode_into(mut code: usize, a: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = code % a;
        code /= a;
    }
}
