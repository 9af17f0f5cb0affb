//! Dense complex linear algebra for Hermitian matrices of dimension ≤ 64.
//!
//! Everything here is a pure function of its inputs. Bipartite operators
//! act on `A ⊗ B` with row-major index `i·d_B + k`.

mod eigen;
mod matrix;
mod ops;

pub use eigen::{eig_hermitian, eigenvalues, Eigen};
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use ops::{
    coordinates, from_coordinates, hermitian_basis, is_psd, kron, kron_herm, min_eigenvalue,
    partial_trace, partial_transpose, real_embed, trace_norm, Subsystem,
};

pub(crate) use ops::{partial_trace_raw, partial_transpose_raw, real_embed_raw};
