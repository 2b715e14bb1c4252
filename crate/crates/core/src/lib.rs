//! Balanced homodyne detection on truncated Fock spaces.
//!
//! The detector mixes a signal mode with a strong coherent local oscillator
//! `|z>`, `z = r e^{i theta}`, on a 50-50 beam splitter and records the
//! photon-number difference scaled by `1/(sqrt 2 r)`. The crate computes the
//! exact lattice statistics of that observable, its effects and moment
//! operators, and the diagnostics showing convergence to the rotated
//! quadrature `Q_theta` as `r` grows.

pub mod beamsplitter;
pub mod convergence;
pub mod error;
pub mod fock;
pub mod homodyne;
pub mod moments;
pub mod quadrature;
mod special;
pub mod state;

pub use error::{HdError, Result};
pub use fock::{FockVector, HermitianOperator, C64};
pub use special::max_dim;
pub use state::SignalStateSpec;
