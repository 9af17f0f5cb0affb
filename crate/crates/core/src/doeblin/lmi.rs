//! Lowering of complex Hermitian constraints to the real LMI form.

use nalgebra::DMatrix;

use crate::hermlin::{hermitian_basis, real_embed_raw, ComplexMatrix, HermitianMatrix};
use crate::sdp::SdpProblem;
use crate::Result;

/// A Hermitian operator variable stored as real coordinates
/// `y[offset..offset + dim²]` in the orthonormal basis of
/// [`hermitian_basis`].
pub(crate) struct HermVar {
    pub offset: usize,
    pub basis: Vec<HermitianMatrix>,
}

impl HermVar {
    pub fn new(offset: usize, dim: usize) -> Result<Self> {
        Ok(Self {
            offset,
            basis: hermitian_basis(dim)?,
        })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn end(&self) -> usize {
        self.offset + self.len()
    }

    /// `(variable index, f(B_k))` for every basis element.
    pub fn map_terms(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Vec<(usize, ComplexMatrix)> {
        self.basis
            .iter()
            .enumerate()
            .map(|(k, b)| (self.offset + k, f(b.matrix())))
            .collect()
    }

    /// Objective coefficients of `Tr(X)`: only the identity direction
    /// contributes.
    pub fn trace_coeffs(&self, objective: &mut [f64], sign: f64) {
        for (k, b) in self.basis.iter().enumerate() {
            let t = b.trace();
            if t != 0.0 {
                objective[self.offset + k] += sign * t;
            }
        }
    }

    pub fn value(&self, y: &[f64]) -> HermitianMatrix {
        crate::hermlin::from_coordinates(&y[self.offset..self.end()], &self.basis)
    }
}

/// Adds `m0 + Σ y_k M_k ⪰ 0` through the real embedding.
pub(crate) fn add_psd(
    problem: &mut SdpProblem,
    m0: &ComplexMatrix,
    terms: &[(usize, ComplexMatrix)],
) -> Result<()> {
    let c = symmetric(real_embed_raw(m0));
    let coeffs = terms
        .iter()
        .map(|(i, m)| (*i, -symmetric(real_embed_raw(m))))
        .collect();
    problem.add_block(c, coeffs)
}

/// Adds `m0 + Σ y_k M_k = 0` as the real equalities `Tr(G (m0 + Σ y_k M_k)) = 0`
/// for every `G` in `basis`.
pub(crate) fn add_zero(
    problem: &mut SdpProblem,
    m0: &ComplexMatrix,
    terms: &[(usize, ComplexMatrix)],
    basis: &[HermitianMatrix],
) -> Result<()> {
    let n = problem.num_vars();
    for g in basis {
        let mut coeffs = vec![0.0; n];
        for (i, m) in terms {
            coeffs[*i] += g.matrix().inner(m).re;
        }
        let rhs = -g.matrix().inner(m0).re;
        problem.add_equality(coeffs, rhs)?;
    }
    Ok(())
}

/// Removes rounding asymmetry so the block passes the symmetry check.
fn symmetric(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}
