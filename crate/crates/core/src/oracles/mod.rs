//! Independent checks for the SDP coefficients: brute-force searches over
//! the Bloch ball, commuting divergences, and classical channels.

mod bloch;
mod classical;
mod divergence;
mod gad;

pub use bloch::{alpha_dmax_qubit, bloch_state, eta_tr_expansion_qubit, eta_tr_qubit, fibonacci_sphere, DmaxKernel};
pub use classical::{
    binary_entropy, classical_capacity_biso, classical_doeblin, classical_gamma, classical_reverse_alpha,
    classical_reverse_crossover, ClassicalChannel,
};
pub use divergence::{
    chi_squared_slopes, expansion_witness_hockey_stick, f_divergence_commuting, hockey_stick, DivergencePair,
    FDivergence, HockeyWitness,
};
pub use gad::gad_dephasing_identity;
