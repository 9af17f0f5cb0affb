//! Dense semidefinite programming in linear-matrix-inequality form.
//!
//! Small problems only: a few hundred variables and block dimensions that
//! add up to at most 160. Complex Hermitian constraints are expected to be
//! lowered with [`crate::hermlin::real_embed`] first.

mod problem;
mod sdpa;
mod solver;

pub use problem::{LinearEquality, LmiBlock, SdpProblem};
pub use sdpa::{to_sdpa_sparse, write_sdpa_sparse};
pub use solver::{
    solve, solve_with, SdpSolution, SolverSettings, SolverStatus, MAX_TOTAL_BLOCK_DIM, MAX_VARS,
};
