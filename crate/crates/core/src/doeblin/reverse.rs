//! Reverse coefficients: how little noise a degrading map `D` needs to turn
//! the channel into a depolarizing-type channel.

use super::lmi::{add_psd, add_zero, HermVar};
use super::{CoefficientKind, CoefficientResult, Doeblin, Witness};
use crate::channel::{link_raw, max_entangled, swap, HermitianChoiLike, QuantumChannel};
use crate::hermlin::{hermitian_basis, kron, partial_trace_raw, ComplexMatrix, Subsystem};
use crate::sdp::{solve_with, SdpProblem};
use crate::{Error, Result};

#[derive(Clone, Copy)]
pub(super) enum Target {
    /// `(1 − p) Φ⁺ + p 𝟙/d²`
    Depolarizing,
    /// `(1 − p) SWAP/d + p 𝟙/d²`
    TransposeDepolarizing,
    /// `(1 − Tr X̃) Φ⁺ + X̃ ⊗ 𝟙/d`
    Generalized,
}

impl Doeblin {
    /// `α̌(N) = min p` such that some channel `D` has `D ∘ N = D_p`.
    pub fn reverse_alpha(&self, n: &QuantumChannel) -> Result<CoefficientResult> {
        self.reverse(CoefficientKind::RevAlpha, n, Target::Depolarizing)
    }

    /// `α̌ᵀ(N) = min q` such that some channel `D` has `D ∘ N = D^T_q`.
    pub fn reverse_alpha_transpose(&self, n: &QuantumChannel) -> Result<CoefficientResult> {
        self.reverse(CoefficientKind::RevAlphaT, n, Target::TransposeDepolarizing)
    }

    /// `α̌^H(N) = min Tr X̃` over Hermitian `X̃` such that `D ∘ N` has Choi
    /// matrix `(1 − Tr X̃) Φ⁺ + X̃ ⊗ 𝟙/d`.
    pub fn reverse_alpha_hermitian(&self, n: &QuantumChannel) -> Result<CoefficientResult> {
        self.reverse(CoefficientKind::RevAlphaH, n, Target::Generalized)
    }

    fn reverse(
        &self,
        kind: CoefficientKind,
        n: &QuantumChannel,
        target: Target,
    ) -> Result<CoefficientResult> {
        let rp = reverse_problem(n, target)?;
        let sol = solve_with(&rp.problem, &self.settings)?;
        let value = match &rp.x {
            Some(x) => x.value(&sol.y).trace(),
            None => sol.y[rp.p_index],
        };
        let d = n.d_in();
        let witness = HermitianChoiLike::new(rp.d.value(&sol.y), d, d)
            .ok()
            .map(Witness::Choi);
        Ok(CoefficientResult::from_solution(kind, value, witness, &sol))
    }
}

pub(super) struct ReverseProblem {
    pub problem: SdpProblem,
    pub d: HermVar,
    pub x: Option<HermVar>,
    pub p_index: usize,
}

pub(super) fn reverse_problem(n: &QuantumChannel, target: Target) -> Result<ReverseProblem> {
    if n.d_in() != n.d_out() {
        return Err(Error::InvalidInput(format!(
            "reverse coefficients need d_in = d_out, got {} and {}",
            n.d_in(),
            n.d_out()
        )));
    }
    let d = n.d_in();
    let dd = d * d;
    let j = n.choi().matrix().matrix();

    // D lives on C ⊗ B with C = B = d.
    let dvar = HermVar::new(0, dd)?;
    let (extra_len, xvar) = match target {
        Target::Generalized => {
            let x = HermVar::new(dvar.end(), d)?;
            (x.len(), Some(x))
        }
        _ => (1, None),
    };
    let p_index = dvar.end();
    let num_vars = dvar.end() + extra_len;
    let mut objective = vec![0.0; num_vars];
    match &xvar {
        Some(x) => x.trace_coeffs(&mut objective, -1.0),
        None => objective[p_index] = -1.0,
    }
    let mut problem = SdpProblem::new(objective);

    add_psd(
        &mut problem,
        &ComplexMatrix::zeros(dd, dd),
        &dvar.map_terms(|b| b.clone()),
    )?;

    // Tr_C D = 𝟙/d
    let marg = dvar.map_terms(|b| partial_trace_raw(b, (d, d), Subsystem::Second));
    let id_b = ComplexMatrix::identity(d).scale(1.0 / d as f64);
    add_zero(&mut problem, &-&id_b, &marg, &hermitian_basis(d)?)?;

    // D ⋆ J(N) − target = 0
    let phi = max_entangled(d);
    let mixed = ComplexMatrix::identity(dd).scale(1.0 / dd as f64);
    let mut terms = dvar.map_terms(|b| link_raw(b, (d, d), j, d));
    let m0 = match (&xvar, target) {
        (Some(x), _) => {
            // −(1 − Tr X̃) Φ⁺ − X̃ ⊗ 𝟙/d
            let id_in = ComplexMatrix::identity(d).scale(1.0 / d as f64);
            for (i, b) in x.map_terms(|b| b.clone()) {
                let tr = b.trace();
                let kb = kron(&b, &id_in)?;
                terms.push((i, &phi.scale_complex(tr) - &kb));
            }
            -&phi
        }
        (None, Target::TransposeDepolarizing) => {
            let sw = swap(d).scale(1.0 / d as f64);
            terms.push((p_index, &sw - &mixed));
            -&sw
        }
        (None, _) => {
            terms.push((p_index, &phi - &mixed));
            -&phi
        }
    };
    add_zero(&mut problem, &m0, &terms, &hermitian_basis(dd)?)?;

    Ok(ReverseProblem {
        problem,
        d: dvar,
        x: xvar,
        p_index,
    })
}
