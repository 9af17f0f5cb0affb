use num_complex::Complex64;
use serde::Serialize;

use crate::hermlin::{
    eig_hermitian, min_eigenvalue, partial_trace, partial_transpose, ComplexMatrix,
    HermitianMatrix, Subsystem,
};
use crate::tol::{KRAUS_DROP_TOL, MAX_DIM, PSD_TOL, TP_REJECT_TOL, TP_TOL};
use crate::{Error, Result};

/// Hermitian operator on output ⊗ input with no positivity or marginal
/// requirement.
#[derive(Clone, Debug)]
pub struct HermitianChoiLike {
    matrix: HermitianMatrix,
    d_in: usize,
    d_out: usize,
}

impl HermitianChoiLike {
    pub fn new(matrix: HermitianMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if d_in == 0 || d_out == 0 || matrix.dim() != d_in * d_out {
            return Err(Error::InvalidInput(format!(
                "matrix of dimension {} is not a map from {d_in} to {d_out} dimensions",
                matrix.dim()
            )));
        }
        if matrix.dim() > MAX_DIM {
            return Err(Error::Size(format!("Choi dimension {} exceeds {MAX_DIM}", matrix.dim())));
        }
        Ok(Self { matrix, d_in, d_out })
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d_out, self.d_in)
    }
}

/// Normalized Choi matrix of a CPTP map: PSD, unit trace, input marginal
/// `𝟙/d_in`.
#[derive(Clone, Debug)]
pub struct ChoiMatrix(HermitianChoiLike);

impl ChoiMatrix {
    /// Checks positivity within `PSD_TOL` and the marginal within `1e-8`.
    pub fn new(matrix: HermitianMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        let like = HermitianChoiLike::new(matrix, d_in, d_out)?;
        let flags = validate_with(&like, TP_REJECT_TOL)?;
        if !flags.is_cp {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix is not positive semidefinite (min eigenvalue {:.3e})",
                flags.min_eigenvalue
            )));
        }
        if !flags.is_tp {
            return Err(Error::InvalidChannel(format!(
                "input marginal differs from 1/d_in by {:.3e}",
                flags.marginal_defect
            )));
        }
        Ok(Self(like))
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0.matrix
    }

    pub fn d_in(&self) -> usize {
        self.0.d_in
    }

    pub fn d_out(&self) -> usize {
        self.0.d_out
    }

    /// `(d_out, d_in)`, the factor dimensions of the Choi space.
    pub fn dims(&self) -> (usize, usize) {
        self.0.dims()
    }

    pub fn as_choi_like(&self) -> &HermitianChoiLike {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChannelFlags {
    pub is_cp: bool,
    pub is_tp: bool,
    pub is_ppt: bool,
    pub min_eigenvalue: f64,
    pub marginal_defect: f64,
    pub min_pt_eigenvalue: f64,
}

/// CP, TP and PPT flags of a Choi-like operator. TP is checked within
/// `1e-10`, positivity within `PSD_TOL`.
pub fn validate(choi: &HermitianChoiLike) -> Result<ChannelFlags> {
    validate_with(choi, TP_TOL)
}

fn validate_with(choi: &HermitianChoiLike, tp_tol: f64) -> Result<ChannelFlags> {
    let dims = choi.dims();
    let min_eig = min_eigenvalue(&choi.matrix)?;
    let marginal = partial_trace(&choi.matrix, dims, Subsystem::Second)?;
    let target = HermitianMatrix::identity(choi.d_in).scale(1.0 / choi.d_in as f64);
    let marginal_defect = marginal.max_abs_diff(&target);
    let pt = partial_transpose(&choi.matrix, dims, Subsystem::Second)?;
    let min_pt = min_eigenvalue(&pt)?;
    Ok(ChannelFlags {
        is_cp: min_eig >= -PSD_TOL,
        is_tp: marginal_defect <= tp_tol,
        is_ppt: min_pt >= -PSD_TOL,
        min_eigenvalue: min_eig,
        marginal_defect,
        min_pt_eigenvalue: min_pt,
    })
}

fn check_kraus_shapes(kraus: &[ComplexMatrix], d_in: usize, d_out: usize) -> Result<()> {
    if kraus.is_empty() {
        return Err(Error::InvalidChannel("empty Kraus list".into()));
    }
    if d_in == 0 || d_out == 0 {
        return Err(Error::InvalidChannel("zero dimension".into()));
    }
    if d_in * d_out > MAX_DIM {
        return Err(Error::Size(format!(
            "Choi dimension {} exceeds {MAX_DIM}",
            d_in * d_out
        )));
    }
    for (k, a) in kraus.iter().enumerate() {
        if a.rows() != d_out || a.cols() != d_in {
            return Err(Error::InvalidChannel(format!(
                "Kraus operator {k} has shape {}x{}, expected {d_out}x{d_in}",
                a.rows(),
                a.cols()
            )));
        }
        if !a.is_finite() {
            return Err(Error::InvalidChannel(format!("Kraus operator {k} is not finite")));
        }
    }
    Ok(())
}

/// `J = Σ_k (A_k ⊗ 𝟙) Φ⁺ (A_k ⊗ 𝟙)†` with `Φ⁺` the normalized maximally
/// entangled state.
pub fn choi_from_kraus(kraus: &[ComplexMatrix], d_in: usize, d_out: usize) -> Result<ChoiMatrix> {
    check_kraus_shapes(kraus, d_in, d_out)?;
    let mut tp = ComplexMatrix::zeros(d_in, d_in);
    for a in kraus {
        tp = &tp + &a.adjoint().matmul(a);
    }
    let tp_defect = tp.max_abs_diff(&ComplexMatrix::identity(d_in));
    if tp_defect > TP_REJECT_TOL {
        return Err(Error::InvalidChannel(format!(
            "Kraus operators violate trace preservation by {tp_defect:.3e}"
        )));
    }

    let n = d_in * d_out;
    let mut j = ComplexMatrix::zeros(n, n);
    let w = 1.0 / d_in as f64;
    for a in kraus {
        let v = a.as_slice();
        for r in 0..n {
            let vr = v[r] * w;
            if vr == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..n {
                j[(r, c)] += vr * v[c].conj();
            }
        }
    }
    let like = HermitianChoiLike::new(HermitianMatrix::symmetrized(j), d_in, d_out)?;
    Ok(ChoiMatrix(like))
}

/// Kraus operators `√(λ d_in)·reshape(v)` from the eigenpairs of `J` with
/// `λ > 1e-10`.
pub fn kraus_from_choi(choi: &ChoiMatrix) -> Result<Vec<ComplexMatrix>> {
    let (d_out, d_in) = choi.dims();
    let eig = eig_hermitian(choi.matrix())?;
    let mut kraus = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate().rev() {
        if lambda <= KRAUS_DROP_TOL {
            continue;
        }
        let s = (lambda * d_in as f64).sqrt();
        let v = eig.vector(k);
        kraus.push(ComplexMatrix::from_fn(d_out, d_in, |o, i| v[o * d_in + i] * s));
    }
    if kraus.is_empty() {
        return Err(Error::InvalidChannel("Choi matrix has no positive eigenvalues".into()));
    }
    Ok(kraus)
}
