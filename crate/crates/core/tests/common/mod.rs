#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thermo_core::{Potential, SftSystem};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random mixing SFT on `size` symbols (rejection-sampled).
pub fn random_sft(rng: &mut impl Rng, size: usize) -> SftSystem {
    loop {
        let rows: Vec<Vec<u8>> = (0..size)
            .map(|_| (0..size).map(|_| u8::from(rng.gen_bool(0.65))).collect())
            .collect();
        if let Ok(sft) = SftSystem::new(&rows) {
            return sft;
        }
    }
}

pub fn random_depth1(rng: &mut impl Rng, sft: &SftSystem, scale: f64) -> Potential {
    let values: Vec<f64> =
        (0..sft.alphabet_size()).map(|_| rng.gen_range(-scale..scale)).collect();
    Potential::from_symbol_values(sft, &values).unwrap()
}

pub fn random_depth2(rng: &mut impl Rng, sft: &SftSystem, scale: f64) -> Potential {
    let a = sft.alphabet_size();
    let values: Vec<f64> = (0..a * a).map(|_| rng.gen_range(-scale..scale)).collect();
    Potential::from_fn(sft, 2, |w| values[w[0] * a + w[1]]).unwrap()
}

pub fn binary_entropy(a: f64) -> f64 {
    if a <= 0.0 || a >= 1.0 {
        return 0.0;
    }
    -a * a.ln() - (1.0 - a) * (1.0 - a).ln()
}

/// Second differences of equally spaced samples.
pub fn second_differences(values: &[f64]) -> Vec<f64> {
    values.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect()
}
