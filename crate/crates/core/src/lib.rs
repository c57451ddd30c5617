//! Numerical engine for local "super-observable" fields of band-limited
//! quantum superpositions.
//!
//! A state built from operator eigenstates whose eigenvalues all lie in
//! `[λ_min, λ_max]` can nonetheless have a position-conditioned (weak) value
//! of that operator far outside the band. This crate computes those local
//! observable fields and the constructions that exhibit them:
//!
//! - [`weak_value`]: generic local observables `Õ(x) = ⟨x|Ô|ψ⟩ / ⟨x|ψ⟩`,
//!   superbehavior detection, sum rules, generating functions;
//! - [`rotor`]: the two-level rigid-rotor example with its closed-form local
//!   total angular momentum;
//! - [`oscillator`]: the harmonic-oscillator sequence `h_N` whose local
//!   energy near the origin grows like `ħω₀N/(2g²)`;
//! - [`energy_analysis`]: spectral vs. window-conditioned energy of the
//!   sequence ("quantum mimicry");
//! - [`time_evolution`]: exact spectral-phase evolution of the sequence and
//!   its superoscillation in time;
//! - [`numerics`]: the log-polar complex arithmetic and stable special
//!   functions everything else stands on (coefficient magnitudes reach
//!   `exp(±3000)` in the N = 1000 regime).
//!
//! Everything is computed in units `ħ = m = 1`; the single scale knob is
//! `mω₀/ħ` carried by [`oscillator::OscillatorConfig`].

pub mod energy_analysis;
mod error;
pub mod numerics;
pub mod oscillator;
pub mod rotor;
pub mod time_evolution;
pub mod weak_value;

pub use error::{Error, Result};
pub use num_complex::Complex64;
