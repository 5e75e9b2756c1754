//! Mixing subshifts of finite type and the locally constant objects that
//! live on them: words, potentials, Markov measures and the spectrum
//! domain of a potential.

pub mod cycles;
mod domain;
mod measure;
mod potential;
mod recode;
mod sft;
mod word;

pub use domain::{spectrum_domain, Interval};
pub use measure::MarkovMeasure;
pub use potential::{birkhoff_sum, Potential};
pub use recode::{higher_block_recode, Recoding, MAX_BLOCK_ALPHABET};
pub use sft::SftSystem;
pub use word::{admissible_words, admissible_words_capped, check_word_budget, Word, DEFAULT_WORD_CAP};

/// Builds an [`SftSystem`] from a 0/1 matrix.
pub fn build_sft(transitions: &[Vec<u8>]) -> crate::Result<SftSystem> {
    SftSystem::new(transitions)
}
