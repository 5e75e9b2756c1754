//! Shared fixtures for the benchmarks.

use thermo_core::{Potential, SftSystem};

/// Full shift on `k` symbols with `φ = 1_{last symbol}` and a depth-2 `ψ`.
pub fn fixture(k: usize) -> (SftSystem, Potential, Potential) {
    let sft = SftSystem::full_shift(k).expect("full shift");
    let phi = Potential::indicator(&sft, k - 1);
    let psi = Potential::from_fn(&sft, 2, |w| ((w[0] * 7 + w[1] * 3) % 5) as f64 * 0.1)
        .expect("potential");
    (sft, phi, psi)
}
