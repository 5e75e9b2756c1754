use std::collections::HashMap;

use super::{admissible_words, Potential, SftSystem};
use crate::error::{Error, Result};

/// Largest alphabet a higher-block presentation may have.
pub const MAX_BLOCK_ALPHABET: usize = 512;

/// A higher-block presentation of a system together with its recoded
/// potentials, all of depth at most 2.
#[derive(Debug, Clone)]
pub struct Recoding {
    pub sft: SftSystem,
    pub potentials: Vec<Potential>,
    /// `blocks[s]` is the word of the original system that new symbol `s` stands for.
    pub blocks: Vec<Vec<usize>>,
}

impl Recoding {
    pub fn is_identity(&self) -> bool {
        self.blocks.iter().enumerate().all(|(i, b)| b.len() == 1 && b[0] == i)
    }
}

/// Recodes `sft` to its `(k-1)`-block presentation, `k` being the largest
/// potential depth, so that every potential becomes a function of one
/// transition (depth <= 2). Systems whose potentials already have depth
/// <= 2 are returned unchanged.
///
/// The recoding is a topological conjugacy, so pressure, measure integrals
/// and extremal cycle means are all preserved.
pub fn higher_block_recode(sft: &SftSystem, potentials: &[Potential]) -> Result<Recoding> {
    for p in potentials {
        p.check_host(sft)?;
    }
    let k = potentials.iter().map(Potential::depth).max().unwrap_or(1);
    if k <= 2 {
        return Ok(Recoding {
            sft: sft.clone(),
            potentials: potentials.to_vec(),
            blocks: (0..sft.alphabet_size()).map(|s| vec![s]).collect(),
        });
    }

    let blocks: Vec<Vec<usize>> = admissible_words(sft, k - 1)?
        .into_iter()
        .map(|w| w.symbols().to_vec())
        .collect();
    if blocks.len() > MAX_BLOCK_ALPHABET {
        return Err(Error::ResourceLimit {
            requested: blocks.len() as u128,
            cap: MAX_BLOCK_ALPHABET as u64,
        });
    }
    let index: HashMap<&[usize], usize> =
        blocks.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();

    let m = blocks.len();
    let mut allowed = vec![vec![false; m]; m];
    for (i, a) in blocks.iter().enumerate() {
        let mut next = a[1..].to_vec();
        next.push(0);
        for s in sft.successors(*a.last().unwrap()) {
            *next.last_mut().unwrap() = s;
            allowed[i][index[next.as_slice()]] = true;
        }
    }
    let new_sft = SftSystem::from_bool(allowed)?;

    let mut recoded = Vec::with_capacity(potentials.len());
    let mut word = vec![0; k];
    for p in potentials {
        let lifted = p.lift(sft, k)?;
        recoded.push(Potential::from_fn(&new_sft, 2, |pair| {
            word[..k - 1].copy_from_slice(&blocks[pair[0]]);
            word[k - 1] = *blocks[pair[1]].last().unwrap();
            lifted.value(&word).expect("overlapping blocks form an admissible word")
        })?);
    }
    Ok(Recoding { sft: new_sft, potentials: recoded, blocks })
}
