use serde::Serialize;

use super::{CoefficientResult, Doeblin};
use crate::channel::QuantumChannel;
use crate::{Error, Result};

/// Interval `[lower, upper]` known to contain both the expansion and the
/// contraction coefficient of a channel.
#[derive(Clone, Debug, Serialize)]
pub struct DpRange {
    pub id: String,
    /// `1 − min{α̌, α̌ᵀ, α̌^H}`.
    pub lower: f64,
    /// `1 − max{α^H, αᵀ}`.
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapacityBounds {
    /// `max{0, 1 − 2α}`; only defined for qubit inputs.
    pub q_bound: Option<f64>,
    /// `1 − α`, bounding the two-way assisted quantum capacity.
    pub q2_bound: f64,
    /// `1 − α`, bounding the classical capacity.
    pub c_bound: f64,
}

fn require_optimal(r: &CoefficientResult) -> Result<()> {
    if r.not_applicable || r.is_optimal() {
        Ok(())
    } else {
        Err(Error::Solver {
            status: r.status,
            detail: format!("{} did not converge (gap {:.3e})", r.kind, r.gap),
        })
    }
}

impl Doeblin {
    /// `1 − max{α^H, αᵀ}`, skipping `αᵀ` for channels that are not PPT and
    /// adding `α^{T,H}` when `combine_th` is set.
    pub fn contraction_upper_bound(&self, n: &QuantumChannel) -> Result<f64> {
        let mut results = vec![self.alpha_hermitian(n)?, self.alpha_transpose(n)?];
        if self.combine_th {
            results.push(self.alpha_transpose_hermitian(n)?);
        }
        let mut best = f64::NEG_INFINITY;
        for r in &results {
            require_optimal(r)?;
            if let Some(v) = r.applicable_value() {
                best = best.max(v);
            }
        }
        Ok(1.0 - best)
    }

    /// `1 − min{α̌, α̌ᵀ, α̌^H}`.
    pub fn expansion_lower_bound(&self, n: &QuantumChannel) -> Result<f64> {
        let results = [
            self.reverse_alpha(n)?,
            self.reverse_alpha_transpose(n)?,
            self.reverse_alpha_hermitian(n)?,
        ];
        let mut best = f64::INFINITY;
        for r in &results {
            require_optimal(r)?;
            best = best.min(r.value);
        }
        Ok(1.0 - best)
    }

    pub fn dp_range(&self, n: &QuantumChannel, id: &str) -> Result<DpRange> {
        Ok(DpRange {
            id: id.to_string(),
            lower: self.expansion_lower_bound(n)?,
            upper: self.contraction_upper_bound(n)?,
        })
    }

    pub fn capacity_bounds(&self, n: &QuantumChannel) -> Result<CapacityBounds> {
        let a = self.alpha(n)?;
        require_optimal(&a)?;
        let alpha = a.value;
        Ok(CapacityBounds {
            q_bound: (n.d_in() == 2).then(|| (1.0 - 2.0 * alpha).max(0.0)),
            q2_bound: 1.0 - alpha,
            c_bound: 1.0 - alpha,
        })
    }
}
