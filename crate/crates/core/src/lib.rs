//! Parent-Hamiltonian embedding of parameterized matrix product states.
//!
//! A translation-invariant MPS with bond dimension `chi` is embedded as an
//! exact zero-energy eigenstate of `H = sum_i h_i`, where every `h_i` acts on
//! `D` neighbouring sites and is assembled from states orthogonal to all
//! `D`-site MPS blocks. Depending on the coefficient scheme the embedded
//! state is the ground state or a scar in the middle of a thermal spectrum.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, plotting and the
//! command-line driver live in the `scarmps` companion crate.
//!
//! Configuration indices put site 1 in the most significant bit, with
//! spin up encoded as `0` and spin down as `1`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod chain;
pub mod embedding;
pub mod error;
pub mod hamiltonian;
pub mod lattice;
pub mod linalg;
pub mod mps;
pub mod reference;
pub mod spectral;
pub mod sweep;

pub use num_complex::Complex64;

pub use crate::error::{Error, Result};

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<Complex64>;
