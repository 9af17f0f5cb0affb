//! Hockey-stick and commuting f-divergences, and the depolarizing expansion
//! witnesses built from them.

use serde::Serialize;

use crate::hermlin::{eigenvalues, HermitianMatrix};
use crate::tol::PSD_TOL;
use crate::{Error, Result};

/// A pair of density matrices of equal dimension.
#[derive(Clone, Debug)]
pub struct DivergencePair {
    pub rho: HermitianMatrix,
    pub sigma: HermitianMatrix,
}

fn check_density(m: &HermitianMatrix, name: &str) -> Result<()> {
    if (m.trace() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!("{name} has trace {}", m.trace())));
    }
    if eigenvalues(m)?[0] < -PSD_TOL {
        return Err(Error::InvalidInput(format!("{name} is not positive semidefinite")));
    }
    Ok(())
}

impl DivergencePair {
    pub fn new(rho: HermitianMatrix, sigma: HermitianMatrix) -> Result<Self> {
        if rho.dim() != sigma.dim() {
            return Err(Error::InvalidInput("states differ in dimension".into()));
        }
        check_density(&rho, "rho")?;
        check_density(&sigma, "sigma")?;
        Ok(Self { rho, sigma })
    }

    /// `ρ = |0⟩⟨0|`, `σ = (1 − ε)|0⟩⟨0| + ε|1⟩⟨1|`.
    pub fn flip_pair(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::param("epsilon", eps, 0.0, 1.0));
        }
        Self::new(
            HermitianMatrix::from_real_diag(&[1.0, 0.0]),
            HermitianMatrix::from_real_diag(&[1.0 - eps, eps]),
        )
    }

    /// Both states after the qubit depolarizing channel `D_p`.
    pub fn depolarized(&self, p: f64) -> Result<Self> {
        let ch = crate::channel::depolarizing(p, self.rho.dim())?;
        Ok(Self {
            rho: ch.apply(&self.rho)?,
            sigma: ch.apply(&self.sigma)?,
        })
    }
}

/// `E_γ(ρ‖σ) = Tr(ρ − γσ)₊` for `γ ≥ 1`.
pub fn hockey_stick(rho: &HermitianMatrix, sigma: &HermitianMatrix, gamma: f64) -> Result<f64> {
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            interval: "[1, inf)".into(),
        });
    }
    if rho.dim() != sigma.dim() {
        return Err(Error::InvalidInput("states differ in dimension".into()));
    }
    let diff = rho - &sigma.scale(gamma);
    Ok(eigenvalues(&diff)?.iter().fold(0.0, |acc, &l| acc + l.max(0.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FDivergence {
    /// `f(x) = x² − 1`
    ChiSquared,
    /// `f(x) = x ln x`
    RelativeEntropy,
}

fn diagonal(m: &HermitianMatrix, name: &str) -> Result<Vec<f64>> {
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)].norm() > 1e-12 {
                return Err(Error::InvalidInput(format!("{name} is not diagonal")));
            }
        }
    }
    Ok((0..n).map(|i| m[(i, i)].re).collect())
}

/// `Σ σᵢ f(ρᵢ/σᵢ)` for simultaneously diagonal states. Terms with
/// `σᵢ = 0 < ρᵢ` make both divergences `+∞`; `0/0` terms vanish. The
/// relative entropy uses the natural logarithm.
pub fn f_divergence_commuting(rho: &HermitianMatrix, sigma: &HermitianMatrix, f: FDivergence) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::InvalidInput("states differ in dimension".into()));
    }
    let r = diagonal(rho, "rho")?;
    let s = diagonal(sigma, "sigma")?;
    let mut total = 0.0;
    for (&ri, &si) in r.iter().zip(&s) {
        if si <= 0.0 {
            if ri > 0.0 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        let x = ri / si;
        total += match f {
            FDivergence::ChiSquared => si * (x * x - 1.0),
            FDivergence::RelativeEntropy if ri > 0.0 => ri * x.ln(),
            FDivergence::RelativeEntropy => 0.0,
        };
    }
    Ok(total)
}

/// Central finite-difference slopes in `ε` of `D_{x²}(ρ‖σ_ε)` and of
/// `D_{x²}(D_p(ρ)‖D_p(σ_ε))` for the [`DivergencePair::flip_pair`] family.
pub fn chi_squared_slopes(p: f64, eps: f64, h: f64) -> Result<(f64, f64)> {
    let chi = |e: f64, depolarize: bool| -> Result<f64> {
        let pair = DivergencePair::flip_pair(e)?;
        let pair = if depolarize { pair.depolarized(p)? } else { pair };
        f_divergence_commuting(&pair.rho, &pair.sigma, FDivergence::ChiSquared)
    };
    let slope = |depolarize| -> Result<f64> {
        Ok((chi(eps + h, depolarize)? - chi(eps - h, depolarize)?) / (2.0 * h))
    };
    Ok((slope(false)?, slope(true)?))
}

/// A flip pair whose hockey-stick divergence vanishes after `D_p` but not
/// before, showing that `E_γ` (γ > 1) has zero expansion under `D_p`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HockeyWitness {
    pub eps_star: f64,
    /// Open interval of admissible `ε`.
    pub interval: (f64, f64),
    pub e_in: f64,
    pub e_out: f64,
}

/// Witness for `p ∈ (0, 1)` and `γ > 1`.
///
/// `E_γ(ρ‖σ_ε) = (1 − γ(1 − ε))₊` is positive for `ε > (γ−1)/γ`, and
/// `E_γ(D_p(ρ)‖D_p(σ_ε)) = (1 − p/2 − γ[(1−p)(1−ε) + p/2])₊` vanishes for
/// `ε ≤ (γ−1)(1 − p/2) / (γ(1−p))`. The upper end is clipped to 1 so that
/// `σ_ε` stays a state; the returned `ε*` is the interval midpoint.
pub fn expansion_witness_hockey_stick(p: f64, gamma: f64) -> Result<HockeyWitness> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            interval: "(0, 1)".into(),
        });
    }
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            interval: "(1, inf)".into(),
        });
    }
    let lo = (gamma - 1.0) / gamma;
    let hi = (lo * (1.0 - p / 2.0) / (1.0 - p)).min(1.0);
    if hi <= lo {
        return Err(Error::Internal(format!("empty witness interval ({lo}, {hi})")));
    }
    let eps_star = 0.5 * (lo + hi);
    let pair = DivergencePair::flip_pair(eps_star)?;
    let out = pair.depolarized(p)?;
    Ok(HockeyWitness {
        eps_star,
        interval: (lo, hi),
        e_in: hockey_stick(&pair.rho, &pair.sigma, gamma)?,
        e_out: hockey_stick(&out.rho, &out.sigma, gamma)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hockey_stick_rejects_small_gamma() {
        let r = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(hockey_stick(&r, &r, 0.5).is_err());
        assert_eq!(hockey_stick(&r, &r, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn support_violation_is_infinite() {
        let pair = DivergencePair::flip_pair(0.0).unwrap();
        let v = f_divergence_commuting(&pair.sigma, &pair.rho, FDivergence::RelativeEntropy);
        assert_eq!(v.unwrap(), 0.0);
        let r = HermitianMatrix::from_real_diag(&[0.5, 0.5]);
        let v = f_divergence_commuting(&r, &pair.rho, FDivergence::RelativeEntropy).unwrap();
        assert!(v.is_infinite());
    }

    #[test]
    fn witness_rejects_degenerate_parameters() {
        assert!(expansion_witness_hockey_stick(0.0, 2.0).is_err());
        assert!(expansion_witness_hockey_stick(0.5, 1.0).is_err());
    }
}
