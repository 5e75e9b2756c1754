//! Thermodynamic formalism on mixing subshifts of finite type.
//!
//! The crate computes the topological pressure of Birkhoff level sets
//!
//! ```text
//! P_{X(φ,α)}(ψ) = sup { h_μ + ∫ψ dμ : μ invariant, ∫φ dμ = α }
//! ```
//!
//! for locally constant `φ`, `ψ` on a topologically mixing SFT, by Legendre
//! duality over the classical pressure `P(ψ + qφ)` (a Perron eigenvalue).
//! Around that core sit:
//!
//! * [`symbolic`]: systems, words, potentials, Markov measures, the
//!   spectrum domain `L_φ` via extremal mean cycles;
//! * [`pressure`]: Perron–Frobenius pressure, equilibrium states, `dP/dq`;
//! * [`spectra`]: constrained pressure `F(α)` and spectrum curves;
//! * [`flows`]: suspension flows, ratio level sets and flow entropy spectra;
//! * [`dimension`]: Bowen-formula dimensions of level sets for piecewise
//!   linear expanding interval maps;
//! * [`estimators`]: definition-level cylinder sums, Katok spanning costs and
//!   a brute-force constrained optimizer used as an independent oracle.
//!
//! All logarithms are natural.

pub mod dimension;
pub mod error;
pub mod estimators;
pub mod flows;
pub mod linalg;
pub mod pressure;
pub mod roots;
pub mod spectra;
pub mod symbolic;

pub use dimension::{
    dimension_spectrum, full_dimension, level_set_dimension, symbolic_model, DimensionResult,
    IntervalMapModel,
};
pub use error::{Error, Result};
pub use estimators::{
    brute_force_constrained, katok_entropy_estimate, level_set_pressure_estimate,
    separated_pressure_estimate, EstimateReport,
};
pub use flows::{
    flow_entropy_spectrum, flow_topological_entropy, ratio_constrained_pressure, FlowSpectrumPoint,
    SuspensionSystem,
};
pub use pressure::{classical_pressure, equilibrium_measure, pressure, pressure_gradient, PressureResult};
pub use spectra::{
    constrained_pressure, full_pressure_point, spectrum_curve, ConstrainedPressure,
    FullPressurePoint, SpectrumCurve,
};
pub use symbolic::{
    admissible_words, birkhoff_sum, build_sft, higher_block_recode, spectrum_domain, Interval,
    MarkovMeasure, Potential, SftSystem, Word,
};
