//! Dissipative Grover search.
//!
//! The solution subspace of Grover's Hamiltonian is dressed with an ancilla
//! "reservoir" register whose energy ladder turns the usual Rabi oscillation
//! into an exponential decay onto the marked states. This crate provides:
//!
//! * [`search`]: problem/reservoir descriptions, basis layout, success probability.
//! * [`hamiltonian`]: dense Hamiltonian builders and exact propagation.
//! * [`trotter`]: the discrete-time iterate, its gate-level circuit and phase noise.
//! * [`bj`]: closed-form Bixon-Jortner predictions and the Grover-to-BJ mapping.
//! * [`params`]: reservoir parameter selection and runtime estimates.
//! * [`fixed_point`]: the fixed-point search baseline used for robustness comparisons.

pub mod bj;
pub mod error;
pub mod fixed_point;
pub mod hamiltonian;
pub mod noise;
pub mod params;
pub mod search;
pub mod trotter;

pub use error::{Error, Result};
pub use num_complex::Complex64;
