//! Two-mode Fock-state simulator for entangled-photon lithography exposure
//! patterns and absorption-rate feasibility bounds.
//!
//! The library models the multi-photon exposure ("dosage") of a substrate
//! placed where two interferometer arms recombine. States are finite
//! superpositions in the two-mode photon-number basis ([`fock`]); canonical
//! inputs are path-entangled NOON states and truncated coherent states
//! ([`states`]). The order-K dosage expectation `<(e†)^K e^K>/K!` is
//! evaluated along the substrate ([`dosage`]) and swept into exposure curves
//! whose fringe visibility and period are extracted by discrete Fourier
//! analysis ([`pattern`]): an N-photon NOON state compresses the fringe
//! period from the classical π to π/N, while a coherent state of any
//! intensity stays at π. The [`rates`] module computes the photon-flux
//! ceilings (critical intensity, maximal entangled flux, spot coverage, and
//! the joint N-photon absorption bound) that constrain how fast such
//! entangled exposures can run.
//!
//! All public operations are pure functions over immutable values and are
//! deterministic; file formats (state JSON, curve CSV/JSON) round-trip
//! losslessly.

pub mod dosage;
pub mod error;
pub mod fock;
mod numeric;
pub mod pattern;
pub mod rates;
pub mod states;

pub use error::{Error, Result};
