//! Forward coefficients: the largest (sub-normalized) replacer that fits
//! under the channel in the PSD order.

use super::lmi::{add_psd, add_zero, HermVar};
use super::{CoefficientKind, CoefficientResult, Doeblin, Witness, WITNESS_TRACE_MIN};
use crate::channel::{validate, HermitianChoiLike, QuantumChannel};
use crate::hermlin::{
    eig_hermitian, hermitian_basis, kron, partial_trace_raw, partial_transpose_raw, ComplexMatrix,
    HermitianMatrix, Subsystem,
};
use crate::tol::KRAUS_DROP_TOL;

/// Eigenvalue threshold of `Σ_k A_k A_k†` below which an output direction
/// is compatible with every kernel vector.
const FACE_TOL: f64 = 1e-8;
use crate::sdp::{solve_with, SdpProblem};
use crate::Result;

impl Doeblin {
    /// `α(N) = max Tr σ̂` subject to `σ̂ ⪰ 0` and `σ̂ ⊗ 𝟙/d_in ⪯ J(N)`.
    pub fn alpha(&self, n: &QuantumChannel) -> Result<CoefficientResult> {
        self.minorant(CoefficientKind::Alpha, n.choi().as_choi_like(), true)
    }

    /// `αᵀ(N)`, the same program on `J(T ∘ N)`. Channels whose `T ∘ N` is
    /// not completely positive give a `not_applicable` result.
    pub fn alpha_transpose(&self, n: &QuantumChannel) -> Result<CoefficientResult> {
        let tj = n.transpose_choi();
        if !validate(&tj)?.is_cp {
            return Ok(CoefficientResult::not_applicable(CoefficientKind::AlphaT));
        }
        self.minorant(CoefficientKind::AlphaT, &tj, true)
    }

    /// `α^H(N)`: as [`Doeblin::alpha`] with `σ̂` only required Hermitian.
    pub fn alpha_hermitian(&self, n: &QuantumChannel) -> Result<CoefficientResult> {
        self.minorant(CoefficientKind::AlphaH, n.choi().as_choi_like(), false)
    }

    /// `α^{T,H}(N)`: Hermitian minorant of `J(T ∘ N)`.
    pub fn alpha_transpose_hermitian(&self, n: &QuantumChannel) -> Result<CoefficientResult> {
        self.minorant(CoefficientKind::AlphaTH, &n.transpose_choi(), false)
    }

    fn minorant(
        &self,
        kind: CoefficientKind,
        j: &HermitianChoiLike,
        psd: bool,
    ) -> Result<CoefficientResult> {
        let Some(m) = minorant_problem(j, psd)? else {
            return Ok(CoefficientResult::forced_zero(kind));
        };
        let sol = solve_with(&m.problem, &self.settings)?;
        let k = m.x.value(&sol.y);
        let sigma = match &m.u {
            Some(u) => k.congruence(u),
            None => k,
        };
        let value = sigma.trace();
        let witness = if psd {
            (value >= WITNESS_TRACE_MIN).then(|| Witness::Operator(sigma.scale(1.0 / value)))
        } else {
            Some(Witness::Operator(sigma))
        };
        Ok(CoefficientResult::from_solution(kind, value, witness, &sol))
    }

    /// PPT relaxation of the entanglement-breaking fraction:
    /// `max Tr Ĵ` with `Ĵ ⪰ 0`, `Ĵ^{T_in} ⪰ 0`, `Ĵ ⪯ J(N)` and
    /// `Tr_out Ĵ = Tr(Ĵ) 𝟙/d_in`.
    pub fn p1_eb_ppt(&self, n: &QuantumChannel) -> Result<CoefficientResult> {
        let (d_out, d_in) = n.choi().dims();
        let (problem, x, v) = p1_problem(n)?;
        let sol = solve_with(&problem, &self.settings)?;
        let jhat = x.value(&sol.y).congruence(&v);
        let value = jhat.trace();
        let witness = HermitianChoiLike::new(jhat, d_in, d_out)
            .ok()
            .map(Witness::Choi);
        Ok(CoefficientResult::from_solution(
            CoefficientKind::P1Ppt,
            value,
            witness,
            &sol,
        ))
    }
}

pub(super) struct Minorant {
    pub problem: SdpProblem,
    pub x: HermVar,
    /// Isometry onto the face the variable is confined to:
    /// `σ̂ = U K U†` with `K` described by `x`. `None` means `U = 𝟙`.
    pub u: Option<ComplexMatrix>,
}

/// Program for the minorant coefficients. `None` when `σ̂ ⪰ 0` is
/// required and the constraints force `σ̂ = 0`.
///
/// With `σ̂ ⪰ 0`, every kernel vector `k = Σ_i a_i ⊗ |i⟩` of `J` forces
/// `σ̂ a_i = 0`. The program is then posed for `σ̂ = U K U†` with `U`
/// spanning the complement of all such `a_i`, and the order constraint is
/// compressed to the support of `J`; both compressions restore interior
/// points that the solver needs.
pub(super) fn minorant_problem(j: &HermitianChoiLike, psd: bool) -> Result<Option<Minorant>> {
    let (d_out, d_in) = j.dims();
    let id_in = ComplexMatrix::identity(d_in).scale(1.0 / d_in as f64);
    let lift = |b: &ComplexMatrix| kron(b, &id_in).expect("dimensions checked by the Choi type");

    let face = if psd { support_face(j)? } else { None };
    let Some((u, v, lambda)) = face else {
        let x = HermVar::new(0, d_out)?;
        let mut objective = vec![0.0; x.len()];
        x.trace_coeffs(&mut objective, 1.0);
        let mut problem = SdpProblem::new(objective);
        if psd {
            let zero = ComplexMatrix::zeros(d_out, d_out);
            add_psd(&mut problem, &zero, &x.map_terms(|b| b.clone()))?;
        }
        add_psd(&mut problem, j.matrix().matrix(), &x.map_terms(|b| -&lift(b)))?;
        return Ok(Some(Minorant { problem, x, u: None }));
    };
    let w = u.cols();
    if w == 0 {
        return Ok(None);
    }
    let x = HermVar::new(0, w)?;
    let mut objective = vec![0.0; x.len()];
    x.trace_coeffs(&mut objective, 1.0);
    let mut problem = SdpProblem::new(objective);
    add_psd(&mut problem, &ComplexMatrix::zeros(w, w), &x.map_terms(|b| b.clone()))?;
    let vt = v.adjoint();
    let terms = x.map_terms(|b| -&vt.matmul(&lift(&u.matmul(b).matmul(&u.adjoint()))).matmul(&v));
    add_psd(&mut problem, &ComplexMatrix::diag(&lambda), &terms)?;
    Ok(Some(Minorant { problem, x, u: Some(u) }))
}

/// For a rank-deficient `J`: the isometry `U` onto the output vectors
/// orthogonal to every `a_i` of every kernel vector, the isometry `V` onto
/// the support of `J`, and the nonzero eigenvalues. `None` for full rank.
fn support_face(j: &HermitianChoiLike) -> Result<Option<(ComplexMatrix, ComplexMatrix, Vec<f64>)>> {
    let (d_out, d_in) = j.dims();
    let dim = d_out * d_in;
    let eig = eig_hermitian(j.matrix())?;
    let cutoff = KRAUS_DROP_TOL * eig.max().max(0.0);
    let (range, kernel): (Vec<usize>, Vec<usize>) = (0..dim).partition(|&k| eig.values[k] > cutoff);
    if kernel.is_empty() {
        return Ok(None);
    }
    // G = Σ_k A_k A_k† with A_k[o, i] = k[o·d_in + i].
    let mut g = ComplexMatrix::zeros(d_out, d_out);
    for &k in &kernel {
        let a = ComplexMatrix::from_fn(d_out, d_in, |o, i| eig.vectors[(o * d_in + i, k)]);
        g = &g + &a.matmul(&a.adjoint());
    }
    let ge = eig_hermitian(&HermitianMatrix::symmetrized(g))?;
    let free: Vec<usize> = (0..d_out).filter(|&k| ge.values[k] <= FACE_TOL).collect();
    let u = ComplexMatrix::from_fn(d_out, free.len(), |o, c| ge.vectors[(o, free[c])]);
    let v = ComplexMatrix::from_fn(dim, range.len(), |r, c| eig.vectors[(r, range[c])]);
    let lambda = range.iter().map(|&k| eig.values[k]).collect();
    Ok(Some((u, v, lambda)))
}

/// Program for [`Doeblin::p1_eb_ppt`] and the isometry `V` with
/// `Ĵ = V K V†` in terms of the variable `K`.
///
/// `Ĵ ⪯ J(N)` confines `Ĵ` to the support of `J(N)`, so `K` lives on that
/// support. Without this restriction a rank-deficient Choi matrix leaves
/// the program without interior points and the solver stalls.
pub(super) fn p1_problem(n: &QuantumChannel) -> Result<(SdpProblem, HermVar, ComplexMatrix)> {
    let (d_out, d_in) = n.choi().dims();
    let dim = d_out * d_in;
    let eig = eig_hermitian(n.choi().matrix())?;
    let cutoff = KRAUS_DROP_TOL * eig.max().max(0.0);
    let support: Vec<usize> = (0..dim).filter(|&k| eig.values[k] > cutoff).collect();
    let r = support.len();
    let v = ComplexMatrix::from_fn(dim, r, |i, c| eig.vectors[(i, support[c])]);
    let lifted = |b: &ComplexMatrix| v.matmul(b).matmul(&v.adjoint());

    let x = HermVar::new(0, r)?;
    let mut objective = vec![0.0; x.len()];
    x.trace_coeffs(&mut objective, 1.0);
    let mut problem = SdpProblem::new(objective);

    add_psd(&mut problem, &ComplexMatrix::zeros(r, r), &x.map_terms(|b| b.clone()))?;
    let pt = x.map_terms(|b| partial_transpose_raw(&lifted(b), (d_out, d_in), Subsystem::Second));
    add_psd(&mut problem, &ComplexMatrix::zeros(dim, dim), &pt)?;
    let lambda: Vec<f64> = support.iter().map(|&k| eig.values[k]).collect();
    add_psd(&mut problem, &ComplexMatrix::diag(&lambda), &x.map_terms(|b| -b))?;

    let id_in = ComplexMatrix::identity(d_in).scale(1.0 / d_in as f64);
    let marginal = x.map_terms(|b| {
        let tr = b.trace();
        &partial_trace_raw(&lifted(b), (d_out, d_in), Subsystem::Second) - &id_in.scale_complex(tr)
    });
    add_zero(
        &mut problem,
        &ComplexMatrix::zeros(d_in, d_in),
        &marginal,
        &hermitian_basis(d_in)?,
    )?;
    Ok((problem, x, v))
}
