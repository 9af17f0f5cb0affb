//! Quantum Doeblin coefficients and the bounds derived from them.
//!
//! Forward coefficients bound the trace-distance contraction coefficient
//! from above, reverse coefficients bound the expansion coefficient from
//! below. Every coefficient is one small SDP solved with [`crate::sdp`].

mod bounds;
mod forward;
mod lmi;
mod reverse;

use std::fmt;

use serde::{Serialize, Serializer};

pub use bounds::{CapacityBounds, DpRange};

use crate::channel::{HermitianChoiLike, QuantumChannel};
use crate::hermlin::HermitianMatrix;
use crate::sdp::{SdpProblem, SdpSolution, SolverSettings, SolverStatus};
use crate::Result;

/// Traces below this size give no normalized state witness.
pub const WITNESS_TRACE_MIN: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoefficientKind {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "alpha_T")]
    AlphaT,
    #[serde(rename = "alpha_H")]
    AlphaH,
    #[serde(rename = "alpha_TH")]
    AlphaTH,
    #[serde(rename = "p1_ppt")]
    P1Ppt,
    #[serde(rename = "rev_alpha")]
    RevAlpha,
    #[serde(rename = "rev_alpha_T")]
    RevAlphaT,
    #[serde(rename = "rev_alpha_H")]
    RevAlphaH,
}

impl CoefficientKind {
    pub const ALL: [CoefficientKind; 8] = [
        CoefficientKind::Alpha,
        CoefficientKind::AlphaT,
        CoefficientKind::AlphaH,
        CoefficientKind::AlphaTH,
        CoefficientKind::P1Ppt,
        CoefficientKind::RevAlpha,
        CoefficientKind::RevAlphaT,
        CoefficientKind::RevAlphaH,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CoefficientKind::Alpha => "alpha",
            CoefficientKind::AlphaT => "alpha_T",
            CoefficientKind::AlphaH => "alpha_H",
            CoefficientKind::AlphaTH => "alpha_TH",
            CoefficientKind::P1Ppt => "p1_ppt",
            CoefficientKind::RevAlpha => "rev_alpha",
            CoefficientKind::RevAlphaT => "rev_alpha_T",
            CoefficientKind::RevAlphaH => "rev_alpha_H",
        }
    }

    pub fn is_reverse(self) -> bool {
        matches!(
            self,
            CoefficientKind::RevAlpha | CoefficientKind::RevAlphaT | CoefficientKind::RevAlphaH
        )
    }
}

impl fmt::Display for CoefficientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Optimizer returned alongside a coefficient.
#[derive(Clone, Debug)]
pub enum Witness {
    /// An operator on the output space: the normalized state `σ̂` for the
    /// PSD coefficients, the raw Hermitian `X̂` for the relaxed ones.
    Operator(HermitianMatrix),
    /// A Choi-like operator: `Ĵ` for the entanglement-breaking fraction or
    /// the degrading map `D` for reverse coefficients.
    Choi(HermitianChoiLike),
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientResult {
    pub kind: CoefficientKind,
    /// `NaN` when `not_applicable` is set.
    pub value: f64,
    #[serde(skip)]
    pub witness: Option<Witness>,
    #[serde(serialize_with = "status_str")]
    pub status: SolverStatus,
    pub not_applicable: bool,
    pub iterations: usize,
    pub gap: f64,
}

fn status_str<S: Serializer>(s: &SolverStatus, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(s.as_str())
}

impl CoefficientResult {
    fn from_solution(kind: CoefficientKind, value: f64, witness: Option<Witness>, sol: &SdpSolution) -> Self {
        Self {
            kind,
            value,
            witness,
            status: sol.status,
            not_applicable: false,
            iterations: sol.iterations,
            gap: sol.gap,
        }
    }

    fn not_applicable(kind: CoefficientKind) -> Self {
        Self {
            kind,
            value: f64::NAN,
            witness: None,
            status: SolverStatus::Optimal,
            not_applicable: true,
            iterations: 0,
            gap: 0.0,
        }
    }

    /// `α = 0` read off the constraints: the feasible `σ̂` are all zero.
    fn forced_zero(kind: CoefficientKind) -> Self {
        Self {
            kind,
            value: 0.0,
            witness: None,
            status: SolverStatus::Optimal,
            not_applicable: false,
            iterations: 0,
            gap: 0.0,
        }
    }

    pub fn is_optimal(&self) -> bool {
        !self.not_applicable && self.status == SolverStatus::Optimal
    }

    /// The value when it is applicable.
    pub fn applicable_value(&self) -> Option<f64> {
        (!self.not_applicable).then_some(self.value)
    }
}

/// Coefficient computations sharing solver settings.
///
/// Non-optimal solver outcomes are reported through
/// [`CoefficientResult::status`]; errors are reserved for invalid input.
#[derive(Clone, Debug, Default)]
pub struct Doeblin {
    pub settings: SolverSettings,
    /// Include `α^{T,H}` in [`Doeblin::contraction_upper_bound`].
    pub combine_th: bool,
}

impl Doeblin {
    pub fn new(settings: SolverSettings) -> Self {
        Self {
            settings,
            combine_th: false,
        }
    }

    pub fn coefficient(&self, kind: CoefficientKind, n: &QuantumChannel) -> Result<CoefficientResult> {
        match kind {
            CoefficientKind::Alpha => self.alpha(n),
            CoefficientKind::AlphaT => self.alpha_transpose(n),
            CoefficientKind::AlphaH => self.alpha_hermitian(n),
            CoefficientKind::AlphaTH => self.alpha_transpose_hermitian(n),
            CoefficientKind::P1Ppt => self.p1_eb_ppt(n),
            CoefficientKind::RevAlpha => self.reverse_alpha(n),
            CoefficientKind::RevAlphaT => self.reverse_alpha_transpose(n),
            CoefficientKind::RevAlphaH => self.reverse_alpha_hermitian(n),
        }
    }

    /// The program [`Doeblin::coefficient`] would solve, e.g. for export in
    /// SDPA format. `None` when the coefficient is not applicable or its
    /// constraints force the value 0 without a solve.
    pub fn sdp_problem(&self, kind: CoefficientKind, n: &QuantumChannel) -> Result<Option<SdpProblem>> {
        use reverse::{reverse_problem, Target};
        let problem = match kind {
            CoefficientKind::Alpha => return minorant(n.choi().as_choi_like(), true),
            CoefficientKind::AlphaT => {
                let tj = n.transpose_choi();
                if !crate::channel::validate(&tj)?.is_cp {
                    return Ok(None);
                }
                return minorant(&tj, true);
            }
            CoefficientKind::AlphaH => return minorant(n.choi().as_choi_like(), false),
            CoefficientKind::AlphaTH => return minorant(&n.transpose_choi(), false),
            CoefficientKind::P1Ppt => forward::p1_problem(n)?.0,
            CoefficientKind::RevAlpha => reverse_problem(n, Target::Depolarizing)?.problem,
            CoefficientKind::RevAlphaT => reverse_problem(n, Target::TransposeDepolarizing)?.problem,
            CoefficientKind::RevAlphaH => reverse_problem(n, Target::Generalized)?.problem,
        };
        Ok(Some(problem))
    }
}

fn minorant(j: &HermitianChoiLike, psd: bool) -> Result<Option<SdpProblem>> {
    Ok(forward::minorant_problem(j, psd)?.map(|m| m.problem))
}

pub fn alpha(n: &QuantumChannel) -> Result<CoefficientResult> {
    Doeblin::default().alpha(n)
}

pub fn alpha_transpose(n: &QuantumChannel) -> Result<CoefficientResult> {
    Doeblin::default().alpha_transpose(n)
}

pub fn alpha_hermitian(n: &QuantumChannel) -> Result<CoefficientResult> {
    Doeblin::default().alpha_hermitian(n)
}

pub fn alpha_transpose_hermitian(n: &QuantumChannel) -> Result<CoefficientResult> {
    Doeblin::default().alpha_transpose_hermitian(n)
}

pub fn p1_eb_ppt(n: &QuantumChannel) -> Result<CoefficientResult> {
    Doeblin::default().p1_eb_ppt(n)
}

pub fn reverse_alpha(n: &QuantumChannel) -> Result<CoefficientResult> {
    Doeblin::default().reverse_alpha(n)
}

pub fn reverse_alpha_transpose(n: &QuantumChannel) -> Result<CoefficientResult> {
    Doeblin::default().reverse_alpha_transpose(n)
}

pub fn reverse_alpha_hermitian(n: &QuantumChannel) -> Result<CoefficientResult> {
    Doeblin::default().reverse_alpha_hermitian(n)
}

pub fn contraction_upper_bound(n: &QuantumChannel) -> Result<f64> {
    Doeblin::default().contraction_upper_bound(n)
}

pub fn expansion_lower_bound(n: &QuantumChannel) -> Result<f64> {
    Doeblin::default().expansion_lower_bound(n)
}

pub fn dp_range(n: &QuantumChannel, id: &str) -> Result<DpRange> {
    Doeblin::default().dp_range(n, id)
}

pub fn capacity_bounds(n: &QuantumChannel) -> Result<CapacityBounds> {
    Doeblin::default().capacity_bounds(n)
}
