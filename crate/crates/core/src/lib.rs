//! Spectral bounds for the probability that the coordinate of a quantum
//! harmonic oscillator is positive at an instant drawn uniformly from
//! `{0, s, t}`.
//!
//! The operator `(1/3)(E(0) + E(s) + E(t))`, with `E(τ)` the projection onto
//! `Q cos τ + P sin τ > 0`, is assembled in the number-state basis from the
//! angular Wigner coefficients of [`wigner`], diagonalised in [`spectral`],
//! and cross-checked against the Weyl-symbol side in [`weyl`].

pub mod cli;
pub mod error;
pub mod operator;
pub mod quadrature;
pub mod special;
pub mod spectral;
pub mod weyl;
pub mod wigner;

pub use error::{Error, Result};
pub use operator::{InstantTriple, OperatorMatrix};
pub use spectral::{ConvergenceRow, SpectralResult};
pub use weyl::HsIntegralResult;
pub use wigner::{AngularCoefficientTable, ModePair, SuperpositionState};
