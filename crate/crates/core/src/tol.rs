//! Numerical tolerances shared by every module.

/// Maximum deviation from Hermiticity, `|h[i,j] - conj(h[j,i])|`.
pub const HERM_TOL: f64 = 1e-12;
/// Accuracy target for eigendecompositions.
pub const EIG_TOL: f64 = 1e-10;
/// A matrix counts as positive semidefinite if its smallest eigenvalue is
/// at least `-PSD_TOL`.
pub const PSD_TOL: f64 = 1e-9;
/// Trace preservation / Choi marginal tolerance.
pub const TP_TOL: f64 = 1e-10;
/// Kraus lists violating `Σ A†A = 1` by more than this are rejected.
pub const TP_REJECT_TOL: f64 = 1e-8;
/// Choi eigenvalues at or below this are dropped when extracting Kraus operators.
pub const KRAUS_DROP_TOL: f64 = 1e-10;
/// Largest Hermitian dimension handled by the dense kernel.
pub const MAX_DIM: usize = 64;
/// Largest side length of a Kronecker product.
pub const MAX_KRON_SIDE: usize = 4096;
