//! Quantum Doeblin coefficients.
//!
//! Efficiently computable bounds on the trace-distance contraction and
//! expansion coefficients of quantum channels, each obtained from a small
//! dense semidefinite program:
//!
//! - [`doeblin::alpha`] and its transpose / hermitian variants bound the
//!   contraction coefficient from above,
//! - the reverse coefficients ([`doeblin::reverse_alpha`] and friends) bound
//!   the expansion coefficient from below,
//! - [`oracles`] holds brute-force estimators and closed forms used to check
//!   them.
//!
//! The crate is layered bottom-up: [`hermlin`] (dense Hermitian linear
//! algebra), [`channel`] (channel algebra in the Choi picture), [`sdp`]
//! (a primal-dual interior-point solver), [`doeblin`] (coefficient
//! programs) and [`oracles`].
//!
//! Composite spaces are always ordered `output ⊗ input`, row-major.

#![forbid(unsafe_code)]

pub mod channel;
pub mod doeblin;
mod error;
pub mod hermlin;
pub mod oracles;
pub mod sdp;
pub mod tol;

pub use error::{Error, Result};
