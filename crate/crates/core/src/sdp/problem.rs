use nalgebra::DMatrix;

use crate::tol::HERM_TOL;
use crate::{Error, Result};

/// One linear matrix inequality `C − Σᵢ yᵢ Aᵢ ⪰ 0`.
///
/// Coefficient matrices are stored sparsely by variable index; variables
/// that do not enter the block are simply absent.
#[derive(Clone, Debug)]
pub struct LmiBlock {
    pub(crate) constant: DMatrix<f64>,
    pub(crate) coeffs: Vec<(usize, DMatrix<f64>)>,
}

impl LmiBlock {
    pub fn dim(&self) -> usize {
        self.constant.nrows()
    }

    pub fn constant(&self) -> &DMatrix<f64> {
        &self.constant
    }

    pub fn coeffs(&self) -> &[(usize, DMatrix<f64>)] {
        &self.coeffs
    }

    /// `C − Σ yᵢ Aᵢ` at the given point.
    pub fn slack(&self, y: &[f64]) -> DMatrix<f64> {
        let mut s = self.constant.clone();
        for (i, a) in &self.coeffs {
            s -= a * y[*i];
        }
        s
    }
}

/// A linear equality `coeffs · y = rhs`.
#[derive(Clone, Debug)]
pub struct LinearEquality {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// `maximize b·y  subject to  C_k − Σᵢ yᵢ A_{k,i} ⪰ 0` for every block `k`,
/// optional per-variable bounds, and optional linear equalities.
///
/// Variables without bounds are free. Equalities are eliminated by the
/// solver before the interior-point iteration starts.
#[derive(Clone, Debug)]
pub struct SdpProblem {
    num_vars: usize,
    objective: Vec<f64>,
    blocks: Vec<LmiBlock>,
    bounds: Vec<(Option<f64>, Option<f64>)>,
    equalities: Vec<LinearEquality>,
}

fn check_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidInput(format!("{what} is not square")));
    }
    let scale = 1.0f64.max(m.amax());
    for i in 0..m.nrows() {
        for j in i + 1..m.ncols() {
            if (m[(i, j)] - m[(j, i)]).abs() > HERM_TOL * scale {
                return Err(Error::InvalidInput(format!("{what} is not symmetric")));
            }
        }
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} has non-finite entries")));
    }
    Ok(())
}

impl SdpProblem {
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            num_vars: n,
            objective,
            blocks: Vec::new(),
            bounds: vec![(None, None); n],
            equalities: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn blocks(&self) -> &[LmiBlock] {
        &self.blocks
    }

    pub fn bounds(&self) -> &[(Option<f64>, Option<f64>)] {
        &self.bounds
    }

    pub fn equalities(&self) -> &[LinearEquality] {
        &self.equalities
    }

    /// Adds the block `constant − Σ yᵢ Aᵢ ⪰ 0`. All-zero coefficient
    /// matrices are dropped.
    pub fn add_block(
        &mut self,
        constant: DMatrix<f64>,
        coeffs: Vec<(usize, DMatrix<f64>)>,
    ) -> Result<()> {
        check_symmetric(&constant, "block constant")?;
        let dim = constant.nrows();
        let mut kept = Vec::with_capacity(coeffs.len());
        for (i, a) in coeffs {
            if i >= self.num_vars {
                return Err(Error::InvalidInput(format!(
                    "variable index {i} out of range ({} variables)",
                    self.num_vars
                )));
            }
            if a.nrows() != dim || a.ncols() != dim {
                return Err(Error::InvalidInput(format!(
                    "coefficient of variable {i} has shape {}x{}, block is {dim}x{dim}",
                    a.nrows(),
                    a.ncols()
                )));
            }
            check_symmetric(&a, "block coefficient")?;
            if a.iter().any(|&x| x != 0.0) {
                kept.push((i, a));
            }
        }
        kept.sort_by_key(|(i, _)| *i);
        for w in kept.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidInput(format!(
                    "variable {} listed twice in one block",
                    w[0].0
                )));
            }
        }
        self.blocks.push(LmiBlock {
            constant,
            coeffs: kept,
        });
        Ok(())
    }

    /// Restricts `lower ≤ y[var] ≤ upper`; either side may be absent.
    pub fn set_bounds(&mut self, var: usize, lower: Option<f64>, upper: Option<f64>) -> Result<()> {
        if var >= self.num_vars {
            return Err(Error::InvalidInput(format!("variable index {var} out of range")));
        }
        if let (Some(l), Some(u)) = (lower, upper) {
            if l > u {
                return Err(Error::InvalidInput(format!("empty bound interval [{l}, {u}]")));
            }
        }
        self.bounds[var] = (lower, upper);
        Ok(())
    }

    pub fn add_equality(&mut self, coeffs: Vec<f64>, rhs: f64) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::InvalidInput(format!(
                "equality has {} coefficients for {} variables",
                coeffs.len(),
                self.num_vars
            )));
        }
        if coeffs.iter().chain(std::iter::once(&rhs)).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite equality data".into()));
        }
        self.equalities.push(LinearEquality { coeffs, rhs });
        Ok(())
    }

    /// All inequality blocks including the 1×1 blocks that encode bounds.
    pub(crate) fn all_blocks(&self) -> Vec<LmiBlock> {
        let mut blocks = self.blocks.clone();
        for (i, (lo, hi)) in self.bounds.iter().enumerate() {
            if let Some(lo) = lo {
                // y_i − lo ≥ 0
                blocks.push(LmiBlock {
                    constant: DMatrix::from_element(1, 1, -lo),
                    coeffs: vec![(i, DMatrix::from_element(1, 1, -1.0))],
                });
            }
            if let Some(hi) = hi {
                blocks.push(LmiBlock {
                    constant: DMatrix::from_element(1, 1, *hi),
                    coeffs: vec![(i, DMatrix::from_element(1, 1, 1.0))],
                });
            }
        }
        blocks
    }

    /// Smallest eigenvalue over every slack block (bounds included) at `y`.
    pub fn min_slack_eigenvalue(&self, y: &[f64]) -> f64 {
        self.all_blocks()
            .iter()
            .map(|b| {
                b.slack(y)
                    .symmetric_eigenvalues()
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `|coeffs·y − rhs|` over the equalities.
    pub fn equality_violation(&self, y: &[f64]) -> f64 {
        self.equalities
            .iter()
            .map(|e| {
                (e.coeffs.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() - e.rhs).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn objective_at(&self, y: &[f64]) -> f64 {
        self.objective.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Returns a copy whose objective is multiplied by `factor`.
    pub fn with_scaled_objective(&self, factor: f64) -> Self {
        let mut p = self.clone();
        p.objective.iter_mut().for_each(|b| *b *= factor);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric_and_mismatched() {
        let mut p = SdpProblem::new(vec![1.0]);
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(p.add_block(bad, vec![]).is_err());
        let c = DMatrix::identity(2, 2);
        assert!(p.add_block(c.clone(), vec![(0, DMatrix::identity(3, 3))]).is_err());
        assert!(p.add_block(c.clone(), vec![(1, DMatrix::identity(2, 2))]).is_err());
        assert!(p.add_block(c, vec![(0, DMatrix::identity(2, 2))]).is_ok());
    }

    #[test]
    fn bounds_become_scalar_blocks() {
        let mut p = SdpProblem::new(vec![1.0, 1.0]);
        p.set_bounds(0, Some(-1.0), Some(2.0)).unwrap();
        assert!(p.set_bounds(1, Some(3.0), Some(2.0)).is_err());
        let blocks = p.all_blocks();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].slack(&[0.5, 0.0])[(0, 0)], 1.5);
        assert_eq!(blocks[1].slack(&[0.5, 0.0])[(0, 0)], 1.5);
    }
}
