//! Simulation and analysis of one-dimensional discrete-time quantum walks
//! whose internal state is a pair of qubits.
//!
//! A single walker lives on the integer line and carries a 4-dimensional
//! coin register spanned by `|00>, |01>, |10>, |11>`. One step of the walk
//! is the coin `C = C1 ⊗ C2` followed by a conditional shift that moves the
//! `|00>` component right, the `|11>` component left and leaves `|01>` and
//! `|10>` in place.
//!
//! The crate is `no_std` and only needs `alloc`:
//!
//! * [`linalg`] – complex amplitudes, small fixed-size matrices, tensor
//!   products and a Hermitian Jacobi eigensolver.
//! * [`state`] – the dense position × coin wave function.
//! * [`coin`] and [`init`] – sub-coins, the composite coin and the initial
//!   state families.
//! * [`walk`] – the coin-then-shift protocol.
//! * [`observables`] – probability densities, moments and entropies.
//! * [`analytic`] – momentum-space evolution, spectra and the closed-form
//!   limiting distribution for identical sub-coins.
//! * [`classify`] – distribution taxonomy, Gaussian fits and transport
//!   detectors.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod classify;
pub mod coin;
pub mod error;
pub mod init;
pub mod linalg;
pub mod observables;
pub mod state;
pub mod walk;

pub use error::{Error, Result};
pub use linalg::Amp;

/// Tolerance on the global norm of a wave function.
pub const NORM_TOL: f64 = 1e-12;
/// Elementwise tolerance on `U†U = I`.
pub const UNITARY_TOL: f64 = 1e-12;
/// Tolerance used when comparing probabilities from independent routes.
pub const COMPARE_TOL: f64 = 1e-10;
