//! Dephasing a generalized amplitude damping channel yields a generalized
//! depolarizing channel.

use crate::channel::{dephasing, gad, generalized_depolarizing};
use crate::hermlin::HermitianMatrix;
use crate::Result;

/// Max-entry deviation between the Choi matrices of `D^Z_b ∘ A_{p,η}` and
/// `D_{1−η, σ}`, with `b = (1 − √η)/2` and `σ = diag(p, 1 − p)`.
pub fn gad_dephasing_identity(p: f64, eta: f64) -> Result<f64> {
    let b = (1.0 - eta.sqrt()) / 2.0;
    let lhs = dephasing(b)?.compose(&gad(p, eta)?)?;
    let sigma = HermitianMatrix::from_real_diag(&[p, 1.0 - p]);
    let rhs = generalized_depolarizing(1.0 - eta, &sigma)?;
    Ok(lhs.choi().matrix().max_abs_diff(rhs.choi().matrix()))
}
