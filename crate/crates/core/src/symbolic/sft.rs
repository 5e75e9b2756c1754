use crate::error::{Error, Result};

/// A topologically mixing one-sided subshift of finite type.
///
/// Construction certifies primitivity of the transition matrix, which for
/// shifts of finite type is equivalent to topological mixing and therefore
/// to the specification property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftSystem {
    alphabet_size: usize,
    transitions: Vec<Vec<bool>>,
    primitivity_power: usize,
}

impl SftSystem {
    /// Builds a system from a 0/1 transition matrix; `transitions[i][j] == 1`
    /// iff symbol `j` may follow symbol `i`.
    pub fn new(transitions: &[Vec<u8>]) -> Result<Self> {
        let n = transitions.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut allowed = vec![vec![false; n]; n];
        for (i, row) in transitions.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: i, len: row.len(), expected: n });
            }
            for (j, &v) in row.iter().enumerate() {
                allowed[i][j] = match v {
                    0 => false,
                    1 => true,
                    value => return Err(Error::InvalidEntry { row: i, col: j, value }),
                };
            }
        }
        Self::from_bool(allowed)
    }

    pub fn from_bool(allowed: Vec<Vec<bool>>) -> Result<Self> {
        let n = allowed.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        for (i, row) in allowed.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: i, len: row.len(), expected: n });
            }
        }
        for s in 0..n {
            if !allowed[s].iter().any(|&b| b) {
                return Err(Error::EmptyRowOrColumn { symbol: s, kind: "row" });
            }
            if !allowed.iter().any(|row| row[s]) {
                return Err(Error::EmptyRowOrColumn { symbol: s, kind: "column" });
            }
        }
        let primitivity_power =
            primitivity_power(&allowed).ok_or(Error::NonPrimitive { max_power: n * n })?;
        Ok(SftSystem { alphabet_size: n, transitions: allowed, primitivity_power })
    }

    /// The full shift on `k` symbols.
    pub fn full_shift(k: usize) -> Result<Self> {
        Self::from_bool(vec![vec![true; k]; k])
    }

    /// The golden mean shift: symbol 1 may not follow itself.
    pub fn golden_mean() -> Self {
        Self::new(&[vec![1, 1], vec![1, 0]]).expect("golden mean shift is primitive")
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn primitivity_power(&self) -> usize {
        self.primitivity_power
    }

    #[inline]
    pub fn allowed(&self, from: usize, to: usize) -> bool {
        self.transitions[from][to]
    }

    pub fn transitions(&self) -> &[Vec<bool>] {
        &self.transitions
    }

    /// Transition matrix as 0/1 bytes, the form accepted by [`SftSystem::new`].
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.transitions
            .iter()
            .map(|row| row.iter().map(|&b| b as u8).collect())
            .collect()
    }

    /// Successors of `symbol` in increasing order.
    pub fn successors(&self, symbol: usize) -> impl Iterator<Item = usize> + '_ {
        self.transitions[symbol]
            .iter()
            .enumerate()
            .filter_map(|(j, &b)| b.then_some(j))
    }

    pub fn edge_count(&self) -> usize {
        self.transitions.iter().flatten().filter(|&&b| b).count()
    }

    pub fn is_admissible(&self, symbols: &[usize]) -> bool {
        symbols.iter().all(|&s| s < self.alphabet_size)
            && symbols.windows(2).all(|w| self.transitions[w[0]][w[1]])
    }
}

/// Smallest `k <= n²` with `A^k > 0`, by boolean matrix powering over
/// bit-packed rows.
fn primitivity_power(allowed: &[Vec<bool>]) -> Option<usize> {
    let n = allowed.len();
    let words = n.div_ceil(64);
    let pack = |row: &[bool]| {
        let mut bits = vec![0u64; words];
        for (j, &b) in row.iter().enumerate() {
            if b {
                bits[j / 64] |= 1 << (j % 64);
            }
        }
        bits
    };
    let base: Vec<Vec<u64>> = allowed.iter().map(|r| pack(r)).collect();
    let full: Vec<u64> = pack(&vec![true; n]);
    let is_full = |m: &[Vec<u64>]| m.iter().all(|row| *row == full);

    let mut power = base.clone();
    for k in 1..=n * n {
        if is_full(&power) {
            return Some(k);
        }
        // power <- power · base
        let mut next = vec![vec![0u64; words]; n];
        for i in 0..n {
            for m in 0..n {
                if power[i][m / 64] >> (m % 64) & 1 == 1 {
                    for w in 0..words {
                        next[i][w] |= base[m][w];
                    }
                }
            }
        }
        power = next;
    }
    None
}
