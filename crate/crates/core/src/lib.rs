//! Single-qubit dynamics under homodyne-based Markovian feedback.
//!
//! The crate integrates the averaged feedback master equation, solves for
//! its steady state through the vectorized generator, and measures how
//! tight the Robertson and Schrödinger–Robertson uncertainty relations are
//! for `A = σx`, `B = σz` together with the state's mixedness
//! `Y = 1 − Tr ρ²`. Published closed forms for two feedback families are
//! transcribed in [`analytic`] and checked against the numerics by
//! [`campaign`].
//!
//! `no_std`; needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod analytic;
pub mod campaign;
pub mod dynamics;
mod error;
pub mod metrics;
mod svd;

pub use algebra::{
    bloch_from_rho, expectation, pauli, purity, rho_from_bloch, BlochVector, Complex2x2,
    DensityMatrix, HermitianObservable, Pauli, C64,
};
pub use dynamics::{
    dissipator, evolve, feedback_rhs, liouvillian_matrix, steady_state, EvolveOptions,
    FeedbackOperator, Method, Superoperator, Trajectory,
};
pub use error::{Error, Result};
pub use metrics::{ObservablePair, TightnessReport};
