//! Lie-group diagnostics for variational quantum circuit training.
//!
//! Single-qubit rotation gates live in SU(2); recorded angle trajectories are
//! lifted through the exponential map and scored by how closely they follow
//! geodesics (constant velocity, zero acceleration, short length, low energy).
//!
//! * [`lie`]: su(2)/SU(2) algebra, exp/log, Killing metric, adjoint action, geodesics.
//! * [`sim`]: statevector simulator, layered ansatz, `⟨Z₀Z₁⟩` cost, Bloch vectors.
//! * [`nn`]: tanh MLP that emits circuit angles, with exact backprop.
//! * [`train`]: parameter-shift gradients, direct and network-generated training, variance scans.
//! * [`analysis`]: normalization, central differences, RSD, energy/length, group maps.
//! * [`report`]: with/without comparison tables.
//! * [`io`]: CSV and JSON formats.

pub mod analysis;
pub mod error;
pub mod io;
pub mod lie;
pub mod nn;
pub mod report;
pub mod sim;
pub mod train;

pub use error::{Error, Result};
