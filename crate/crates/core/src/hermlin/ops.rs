use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eigen::eigenvalues;
use super::{ComplexMatrix, HermitianMatrix};
use crate::tol::{MAX_DIM, MAX_KRON_SIDE, PSD_TOL};
use crate::{Error, Result};

/// Selects one factor of a bipartite space `A ⊗ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Kronecker product; entry `(i·rb + k, j·cb + l)` is `a[i,j] · b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    if rows > MAX_KRON_SIDE || cols > MAX_KRON_SIDE {
        return Err(Error::Size(format!(
            "Kronecker product {rows}x{cols} exceeds {MAX_KRON_SIDE} per side"
        )));
    }
    let (rb, cb) = (b.rows(), b.cols());
    Ok(ComplexMatrix::from_fn(rows, cols, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    }))
}

pub fn kron_herm(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::symmetrized(kron(a.matrix(), b.matrix())?))
}

fn check_bipartite(m: &HermitianMatrix, (da, db): (usize, usize)) -> Result<()> {
    if da * db != m.dim() || da == 0 || db == 0 {
        return Err(Error::InvalidInput(format!(
            "dimension {} is not {da}·{db}",
            m.dim()
        )));
    }
    Ok(())
}

/// Traces out one factor of `A ⊗ B`, keeping `keep`.
pub fn partial_trace(
    m: &HermitianMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<HermitianMatrix> {
    check_bipartite(m, dims)?;
    Ok(HermitianMatrix::symmetrized(partial_trace_raw(m.matrix(), dims, keep)))
}

/// Partial trace of an arbitrary square matrix on `A ⊗ B`.
pub(crate) fn partial_trace_raw(
    m: &ComplexMatrix,
    (da, db): (usize, usize),
    keep: Subsystem,
) -> ComplexMatrix {
    match keep {
        Subsystem::First => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::Second => ComplexMatrix::from_fn(db, db, |k, l| {
            (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()
        }),
    }
}

/// Transposes one factor of `A ⊗ B`; an exact involution.
pub fn partial_transpose(
    m: &HermitianMatrix,
    dims: (usize, usize),
    on: Subsystem,
) -> Result<HermitianMatrix> {
    check_bipartite(m, dims)?;
    Ok(HermitianMatrix::symmetrized(partial_transpose_raw(m.matrix(), dims, on)))
}

pub(crate) fn partial_transpose_raw(
    m: &ComplexMatrix,
    (da, db): (usize, usize),
    on: Subsystem,
) -> ComplexMatrix {
    let n = da * db;
    ComplexMatrix::from_fn(n, n, |r, c| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (c / db, c % db);
        match on {
            Subsystem::First => m[(j * db + k, i * db + l)],
            Subsystem::Second => m[(i * db + l, j * db + k)],
        }
    })
}

/// `‖m‖₁`, the sum of absolute eigenvalues.
pub fn trace_norm(m: &HermitianMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().map(|l| l.abs()).sum())
}

pub fn min_eigenvalue(m: &HermitianMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?.first().copied().unwrap_or(0.0))
}

/// PSD within [`PSD_TOL`].
pub fn is_psd(m: &HermitianMatrix) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -PSD_TOL)
}

/// Orthonormal basis of the real vector space of `dim × dim` Hermitian
/// matrices under `⟨A, B⟩ = Tr(AB)`.
///
/// Order: `1/√dim` first, then for each pair `j < k` the symmetric and
/// antisymmetric off-diagonal elements, then the traceless diagonal
/// elements. For `dim = 2` this is `(1, X, Y, Z)/√2`.
pub fn hermitian_basis(dim: usize) -> Result<Vec<HermitianMatrix>> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::Size(format!("basis dimension {dim} outside 1..={MAX_DIM}")));
    }
    let mut out = Vec::with_capacity(dim * dim);
    out.push(HermitianMatrix::identity(dim).scale(1.0 / (dim as f64).sqrt()));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..dim {
        for k in j + 1..dim {
            let mut sym = ComplexMatrix::zeros(dim, dim);
            sym[(j, k)] = Complex64::new(r, 0.0);
            sym[(k, j)] = Complex64::new(r, 0.0);
            out.push(HermitianMatrix::symmetrized(sym));
            let mut anti = ComplexMatrix::zeros(dim, dim);
            anti[(j, k)] = Complex64::new(0.0, -r);
            anti[(k, j)] = Complex64::new(0.0, r);
            out.push(HermitianMatrix::symmetrized(anti));
        }
    }
    for l in 1..dim {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..dim)
            .map(|i| match i.cmp(&l) {
                std::cmp::Ordering::Less => 1.0 / norm,
                std::cmp::Ordering::Equal => -(l as f64) / norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        out.push(HermitianMatrix::from_real_diag(&diag));
    }
    Ok(out)
}

/// Real coordinates `Tr(B_k h)` of `h` in `basis`.
pub fn coordinates(h: &HermitianMatrix, basis: &[HermitianMatrix]) -> Vec<f64> {
    basis.iter().map(|b| b.inner(h)).collect()
}

/// `Σ_k c_k B_k`.
pub fn from_coordinates(coords: &[f64], basis: &[HermitianMatrix]) -> HermitianMatrix {
    assert_eq!(coords.len(), basis.len());
    let n = basis.first().map_or(0, HermitianMatrix::dim);
    let mut acc = ComplexMatrix::zeros(n, n);
    for (c, b) in coords.iter().zip(basis) {
        if *c == 0.0 {
            continue;
        }
        acc = &acc + &b.matrix().scale(*c);
    }
    HermitianMatrix::symmetrized(acc)
}

/// The real symmetric embedding `[[Re h, −Im h], [Im h, Re h]]`.
///
/// Every eigenvalue of `h` appears twice in the embedding, so it is PSD
/// exactly when `h` is.
pub fn real_embed(h: &HermitianMatrix) -> DMatrix<f64> {
    real_embed_raw(h.matrix())
}

pub(crate) fn real_embed_raw(m: &ComplexMatrix) -> DMatrix<f64> {
    let n = m.rows();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = m[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}
