//! Infeasible primal-dual path-following method with the HKM direction and
//! Mehrotra predictor-corrector steps.
//!
//! The dual problem is the one stored in [`SdpProblem`]:
//!
//! ```text
//!   maximize  b·y   s.t.  S_k = C_k − Σᵢ yᵢ A_{k,i} ⪰ 0
//! ```
//!
//! and its primal partner is `minimize Σ_k ⟨C_k, X_k⟩ s.t.
//! Σ_k ⟨A_{k,i}, X_k⟩ = bᵢ, X_k ⪰ 0`. Iterates keep `X, S ≻ 0` but are not
//! required to satisfy the linear constraints until convergence.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::problem::{LmiBlock, SdpProblem};
use crate::{Error, Result};

/// Largest total block dimension accepted by [`solve`].
pub const MAX_TOTAL_BLOCK_DIM: usize = 160;
/// Largest number of variables accepted by [`solve`].
pub const MAX_VARS: usize = 300;

const MAX_SCHUR_CONDITION: f64 = 1e14;
const SCHUR_SHIFTS: [f64; 4] = [0.0, 1e-14, 1e-12, 1e-10];
const DIVERGENCE_LIMIT: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Optimal,
    MaxIter,
    NumericalFailure,
}

impl SolverStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverStatus::Optimal => "optimal",
            SolverStatus::MaxIter => "max_iter",
            SolverStatus::NumericalFailure => "numerical_failure",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverSettings {
    /// Relative duality gap target.
    pub gap_tol: f64,
    /// Relative primal and dual residual target.
    pub feas_tol: f64,
    pub max_iter: usize,
    /// Fraction-to-boundary factor for step lengths.
    pub step_fraction: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            gap_tol: 1e-8,
            feas_tol: 1e-8,
            max_iter: 100,
            step_fraction: 0.98,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SolverStatus,
    pub y: Vec<f64>,
    /// Dual objective `b·y`.
    pub objective_value: f64,
    /// Primal objective `Σ ⟨C_k, X_k⟩` (plus the constant from equality elimination).
    pub primal_objective: f64,
    /// `max(|primal − dual|, ⟨X, S⟩) / (1 + |b·y|)`.
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    /// Primal certificate, one matrix per block; bound blocks follow the
    /// user blocks in variable order (lower before upper).
    pub primal: Vec<DMatrix<f64>>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolverStatus::Optimal
    }
}

pub fn solve(problem: &SdpProblem) -> Result<SdpSolution> {
    solve_with(problem, &SolverSettings::default())
}

pub fn solve_with(problem: &SdpProblem, settings: &SolverSettings) -> Result<SdpSolution> {
    let n = problem.num_vars();
    if n > MAX_VARS {
        return Err(Error::Size(format!("{n} variables exceed {MAX_VARS}")));
    }
    let blocks = problem.all_blocks();
    if blocks.is_empty() {
        return Err(Error::InvalidInput("problem has no inequality blocks".into()));
    }
    let total: usize = blocks.iter().map(LmiBlock::dim).sum();
    if total > MAX_TOTAL_BLOCK_DIM {
        return Err(Error::Size(format!(
            "total block dimension {total} exceeds {MAX_TOTAL_BLOCK_DIM}"
        )));
    }

    let (y0, z) = eliminate_equalities(problem)?;
    let reduced = Reduced::new(problem, &blocks, &y0, &z);
    let mut sol = reduced.run(settings);

    let w = DVector::from_vec(std::mem::take(&mut sol.y));
    let y = &y0 + &z * w;
    sol.y = y.iter().copied().collect();
    sol.objective_value = problem.objective_at(&sol.y);
    Ok(sol)
}

/// Writes `y = y0 + Z·w` so that every `w` satisfies the equalities.
fn eliminate_equalities(problem: &SdpProblem) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = problem.num_vars();
    let eqs = problem.equalities();
    if eqs.is_empty() {
        return Ok((DVector::zeros(n), DMatrix::identity(n, n)));
    }
    let q = eqs.len();
    let e = DMatrix::from_fn(q, n, |r, c| eqs[r].coeffs[c]);
    let f = DVector::from_fn(q, |r, _| eqs[r].rhs);

    // Eigen-decomposition of EᵀE rather than an SVD of E: the null space
    // comes out directly and squaring the condition number is harmless for
    // the well-scaled constraint systems assembled here.
    let gram = e.transpose() * &e;
    let eig = SymmetricEigen::new(gram);
    let lmax = eig.eigenvalues.amax();
    let cutoff = 1e-14 * lmax.max(1e-300);
    let mut range = Vec::new();
    let mut null = Vec::new();
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k).into_owned();
        if l > cutoff {
            range.push((l, v));
        } else {
            null.push(v);
        }
    }
    let pinv = |rhs: &DVector<f64>| -> DVector<f64> {
        let et = e.transpose() * rhs;
        let mut out = DVector::zeros(n);
        for (l, v) in &range {
            out += v * (v.dot(&et) / l);
        }
        out
    };
    let mut y0 = pinv(&f);
    let r = &f - &e * &y0;
    y0 += pinv(&r);

    let violation = (&e * &y0 - &f).amax();
    if violation > 1e-9 * (1.0 + f.amax()) {
        return Err(Error::InvalidInput(format!(
            "inconsistent equality constraints (residual {violation:.3e})"
        )));
    }
    let z = if null.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&null)
    };
    Ok((y0, z))
}

struct RBlock {
    c: DMatrix<f64>,
    a: Vec<(usize, DMatrix<f64>)>,
}

/// The problem in the equality-free variables `w`.
struct Reduced {
    m: usize,
    b: DVector<f64>,
    blocks: Vec<RBlock>,
    obj_offset: f64,
}

impl Reduced {
    fn new(problem: &SdpProblem, blocks: &[LmiBlock], y0: &DVector<f64>, z: &DMatrix<f64>) -> Self {
        let n = problem.num_vars();
        let m = z.ncols();
        let identity = problem.equalities().is_empty();
        let b_full = DVector::from_column_slice(problem.objective());
        let b = z.transpose() * &b_full;
        let obj_offset = b_full.dot(y0);

        let rblocks = blocks
            .iter()
            .map(|blk| {
                let mut c = blk.constant.clone();
                for (i, a) in &blk.coeffs {
                    if y0[*i] != 0.0 {
                        c -= a * y0[*i];
                    }
                }
                let a = if identity {
                    blk.coeffs.clone()
                } else {
                    let dim = blk.dim();
                    let mut out = Vec::new();
                    for j in 0..m {
                        let mut acc = DMatrix::zeros(dim, dim);
                        let mut touched = false;
                        for (i, a) in &blk.coeffs {
                            let w = z[(*i, j)];
                            if w.abs() > 1e-15 {
                                acc += a * w;
                                touched = true;
                            }
                        }
                        if touched && acc.amax() > 1e-14 {
                            out.push((j, acc));
                        }
                    }
                    out
                };
                RBlock { c, a }
            })
            .collect();
        debug_assert!(identity || z.nrows() == n);
        Reduced {
            m,
            b,
            blocks: rblocks,
            obj_offset,
        }
    }

    fn apply_a(&self, x: &[DMatrix<f64>]) -> DVector<f64> {
        let mut out = DVector::zeros(self.m);
        for (blk, xk) in self.blocks.iter().zip(x) {
            for (j, a) in &blk.a {
                out[*j] += a.dot(xk);
            }
        }
        out
    }

    fn apply_at(&self, y: &DVector<f64>, k: usize) -> DMatrix<f64> {
        let blk = &self.blocks[k];
        let dim = blk.c.nrows();
        let mut out = DMatrix::zeros(dim, dim);
        for (j, a) in &blk.a {
            if y[*j] != 0.0 {
                out += a * y[*j];
            }
        }
        out
    }

    fn run(&self, settings: &SolverSettings) -> SdpSolution {
        let nb = self.blocks.len();
        let total: usize = self.blocks.iter().map(|b| b.c.nrows()).sum();
        let b_norm = self.b.norm();
        let c_norm = self
            .blocks
            .iter()
            .map(|b| b.c.norm_squared())
            .sum::<f64>()
            .sqrt();

        // Standard infeasible starting point X = ξI, S = ηI, y = 0.
        let mut x = Vec::with_capacity(nb);
        let mut s = Vec::with_capacity(nb);
        for blk in &self.blocks {
            let dim = blk.c.nrows();
            let nf = dim as f64;
            let mut xi = 10.0f64.max(nf.sqrt());
            let mut eta = 10.0f64.max(nf.sqrt()).max(blk.c.norm());
            for (j, a) in &blk.a {
                let an = a.norm();
                xi = xi.max(nf * (1.0 + self.b[*j].abs()) / (1.0 + an));
                eta = eta.max(an);
            }
            x.push(DMatrix::identity(dim, dim) * xi);
            s.push(DMatrix::identity(dim, dim) * eta);
        }
        let mut y = DVector::zeros(self.m);

        let mut best: Option<(f64, SdpSolution)> = None;
        let mut status = SolverStatus::MaxIter;
        let mut iter = 0;

        loop {
            // Residuals and progress measures.
            let rp = &self.b - self.apply_a(&x);
            let rd: Vec<DMatrix<f64>> = (0..nb)
                .map(|k| &self.blocks[k].c - self.apply_at(&y, k) - &s[k])
                .collect();
            let pobj: f64 = self.blocks.iter().zip(&x).map(|(b, xk)| b.c.dot(xk)).sum();
            let dobj = self.b.dot(&y);
            let xs: f64 = x.iter().zip(&s).map(|(a, b)| a.dot(b)).sum();
            let rd_norm = rd.iter().map(|r| r.norm_squared()).sum::<f64>().sqrt();
            let pres = rp.norm() / (1.0 + b_norm);
            let dres = rd_norm / (1.0 + c_norm);
            let gap = (pobj - dobj).abs().max(xs) / (1.0 + (dobj + self.obj_offset).abs());
            let merit = gap.max(pres).max(dres);

            let snapshot = |status| SdpSolution {
                status,
                y: y.iter().copied().collect(),
                objective_value: dobj + self.obj_offset,
                primal_objective: pobj + self.obj_offset,
                gap,
                primal_residual: pres,
                dual_residual: dres,
                iterations: iter,
                primal: x.clone(),
            };
            if best.as_ref().is_none_or(|(m, _)| merit < *m) {
                best = Some((merit, snapshot(SolverStatus::MaxIter)));
            }
            if gap <= settings.gap_tol && pres <= settings.feas_tol && dres <= settings.feas_tol {
                status = SolverStatus::Optimal;
                best = Some((merit, snapshot(SolverStatus::Optimal)));
                break;
            }
            if iter >= settings.max_iter {
                break;
            }
            let blown = y.amax() > DIVERGENCE_LIMIT
                || x.iter().any(|xk| xk.amax() > DIVERGENCE_LIMIT)
                || !merit.is_finite();
            if blown {
                status = SolverStatus::NumericalFailure;
                break;
            }

            let Some(step) = self.newton_step(&x, &s, &rp, &rd, xs / total as f64, settings) else {
                status = SolverStatus::NumericalFailure;
                break;
            };
            for k in 0..nb {
                x[k] += &step.dx[k] * step.alpha_p;
                s[k] += &step.ds[k] * step.alpha_d;
                x[k] = symmetrize(&x[k]);
                s[k] = symmetrize(&s[k]);
            }
            y += &step.dy * step.alpha_d;
            iter += 1;
        }

        let (_, mut sol) = best.expect("at least one iterate is recorded");
        if sol.status != SolverStatus::Optimal {
            sol.status = status;
        }
        sol
    }

    fn newton_step(
        &self,
        x: &[DMatrix<f64>],
        s: &[DMatrix<f64>],
        rp: &DVector<f64>,
        rd: &[DMatrix<f64>],
        mu: f64,
        settings: &SolverSettings,
    ) -> Option<Step> {
        let nb = self.blocks.len();
        let total: usize = self.blocks.iter().map(|b| b.c.nrows()).sum();
        let mut sinv = Vec::with_capacity(nb);
        for sk in s {
            sinv.push(symmetrize(&sk.clone().cholesky()?.inverse()));
        }

        // Schur complement M_ij = Σ_k Tr(A_{k,i} X_k A_{k,j} S_k⁻¹).
        let mut schur = DMatrix::zeros(self.m, self.m);
        for (k, blk) in self.blocks.iter().enumerate() {
            for (j, aj) in &blk.a {
                let g = &x[k] * aj * &sinv[k];
                for (i, ai) in &blk.a {
                    schur[(*i, *j)] += ai.dot(&g);
                }
            }
        }
        let schur = symmetrize(&schur);
        let solver = SchurFactor::new(schur)?;

        // X Rd S⁻¹ is shared by predictor and corrector.
        let xrds: Vec<DMatrix<f64>> = (0..nb).map(|k| &x[k] * &rd[k] * &sinv[k]).collect();

        let direction = |target: &[DMatrix<f64>]| -> Option<Direction> {
            let mut rhs = rp.clone();
            for (k, blk) in self.blocks.iter().enumerate() {
                let t = &target[k] - &xrds[k];
                for (i, a) in &blk.a {
                    rhs[*i] -= a.dot(&t);
                }
            }
            let dy = solver.solve(&rhs)?;
            let mut dx = Vec::with_capacity(nb);
            let mut ds = Vec::with_capacity(nb);
            for k in 0..nb {
                let dsk = symmetrize(&(&rd[k] - self.apply_at(&dy, k)));
                let dxk = symmetrize(&(&target[k] - &x[k] * &dsk * &sinv[k]));
                dx.push(dxk);
                ds.push(dsk);
            }
            Some(Direction { dx, dy, ds })
        };

        // Predictor: target complementarity 0.
        let target: Vec<DMatrix<f64>> = x.iter().map(|xk| -xk).collect();
        let pred = direction(&target)?;
        let ap = step_length(x, &pred.dx, settings.step_fraction)?;
        let ad = step_length(s, &pred.ds, settings.step_fraction)?;
        let mu_aff: f64 = (0..nb)
            .map(|k| (&x[k] + &pred.dx[k] * ap).dot(&(&s[k] + &pred.ds[k] * ad)))
            .sum::<f64>()
            / total as f64;
        let sigma = if mu > 0.0 {
            (mu_aff / mu).clamp(0.0, 1.0).powi(3)
        } else {
            0.0
        };

        // Corrector with the second-order Mehrotra term.
        let target: Vec<DMatrix<f64>> = (0..nb)
            .map(|k| {
                let second = symmetrize(&(&pred.dx[k] * &pred.ds[k] * &sinv[k]));
                &sinv[k] * (sigma * mu) - &x[k] - second
            })
            .collect();
        let corr = direction(&target)?;
        let alpha_p = step_length(x, &corr.dx, settings.step_fraction)?;
        let alpha_d = step_length(s, &corr.ds, settings.step_fraction)?;
        Some(Step {
            dx: corr.dx,
            dy: corr.dy,
            ds: corr.ds,
            alpha_p,
            alpha_d,
        })
    }
}

struct Direction {
    dx: Vec<DMatrix<f64>>,
    dy: DVector<f64>,
    ds: Vec<DMatrix<f64>>,
}

struct Step {
    dx: Vec<DMatrix<f64>>,
    dy: DVector<f64>,
    ds: Vec<DMatrix<f64>>,
    alpha_p: f64,
    alpha_d: f64,
}

/// Cholesky factorization of the diagonally scaled Schur complement.
struct SchurFactor {
    scale: DVector<f64>,
    chol: Option<nalgebra::Cholesky<f64, nalgebra::Dyn>>,
}

impl SchurFactor {
    fn new(m: DMatrix<f64>) -> Option<Self> {
        let n = m.nrows();
        if n == 0 {
            return Some(Self {
                scale: DVector::zeros(0),
                chol: None,
            });
        }
        let scale = DVector::from_fn(n, |i, _| {
            let d = m[(i, i)];
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                1.0
            }
        });
        let scaled = DMatrix::from_fn(n, n, |i, j| m[(i, j)] * scale[i] * scale[j]);
        // Near the optimum the system can lose definiteness in floating
        // point; a small diagonal shift keeps the direction usable and the
        // residual checks decide convergence.
        for shift in SCHUR_SHIFTS {
            let mut shifted = scaled.clone();
            for i in 0..n {
                shifted[(i, i)] += shift;
            }
            let Some(chol) = shifted.cholesky() else {
                continue;
            };
            let l = chol.l_dirty();
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for i in 0..n {
                lo = lo.min(l[(i, i)].abs());
                hi = hi.max(l[(i, i)].abs());
            }
            if lo > 0.0 && (hi / lo).powi(2) <= MAX_SCHUR_CONDITION {
                return Some(Self {
                    scale,
                    chol: Some(chol),
                });
            }
        }
        None
    }

    fn solve(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        let Some(chol) = &self.chol else {
            return Some(DVector::zeros(0));
        };
        let scaled = rhs.component_mul(&self.scale);
        let sol = chol.solve(&scaled).component_mul(&self.scale);
        sol.iter().all(|v| v.is_finite()).then_some(sol)
    }
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest `α ≤ 1` with `X + α/τ·dX ⪰ 0`, scaled by the fraction `τ`.
fn step_length(x: &[DMatrix<f64>], dx: &[DMatrix<f64>], fraction: f64) -> Option<f64> {
    let mut alpha = 1.0f64;
    for (xk, dxk) in x.iter().zip(dx) {
        let chol = xk.clone().cholesky()?;
        let l = chol.l();
        let w1 = l.solve_lower_triangular(dxk)?;
        let w = l.solve_lower_triangular(&w1.transpose())?;
        let lmin = symmetrize(&w)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if lmin < 0.0 {
            alpha = alpha.min(fraction * (-1.0 / lmin));
        }
    }
    Some(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(x: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, x)
    }

    #[test]
    fn smallest_eigenvalue_program() {
        // maximize t s.t. diag(1,2) − t·I ⪰ 0
        let mut p = SdpProblem::new(vec![1.0]);
        p.add_block(
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0])),
            vec![(0, DMatrix::identity(2, 2))],
        )
        .unwrap();
        let sol = solve(&p).unwrap();
        assert!(sol.is_optimal(), "{sol:?}");
        assert!((sol.objective_value - 1.0).abs() < 1e-7);
    }

    #[test]
    fn diagonal_lp() {
        // maximize y1 + y2 s.t. y1 ≤ 1, y2 ≤ 2
        let mut p = SdpProblem::new(vec![1.0, 1.0]);
        p.add_block(scalar(1.0), vec![(0, scalar(1.0))]).unwrap();
        p.add_block(scalar(2.0), vec![(1, scalar(1.0))]).unwrap();
        let sol = solve(&p).unwrap();
        assert!(sol.is_optimal());
        assert!((sol.objective_value - 3.0).abs() < 1e-7);
        assert!((sol.y[0] - 1.0).abs() < 1e-6 && (sol.y[1] - 2.0).abs() < 1e-6);
    }

    #[test]
    fn bounds_and_equalities() {
        // maximize y0 + 2 y1 s.t. y0 + y1 = 1, y0, y1 ∈ [0, 1]
        let mut p = SdpProblem::new(vec![1.0, 2.0]);
        p.set_bounds(0, Some(0.0), Some(1.0)).unwrap();
        p.set_bounds(1, Some(0.0), Some(1.0)).unwrap();
        p.add_equality(vec![1.0, 1.0], 1.0).unwrap();
        let sol = solve(&p).unwrap();
        assert!(sol.is_optimal(), "{sol:?}");
        assert!((sol.objective_value - 2.0).abs() < 1e-7);
        assert!(p.equality_violation(&sol.y) < 1e-10);
    }

    #[test]
    fn inconsistent_equalities_are_rejected() {
        let mut p = SdpProblem::new(vec![1.0]);
        p.set_bounds(0, Some(0.0), Some(1.0)).unwrap();
        p.add_equality(vec![1.0], 0.2).unwrap();
        p.add_equality(vec![1.0], 0.3).unwrap();
        assert!(matches!(solve(&p), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn no_blocks_is_an_error() {
        let p = SdpProblem::new(vec![1.0]);
        assert!(solve(&p).is_err());
    }

    #[test]
    fn unbounded_problem_does_not_report_optimal() {
        let mut p = SdpProblem::new(vec![1.0]);
        p.add_block(scalar(1.0), vec![(0, scalar(-1.0))]).unwrap();
        let sol = solve(&p).unwrap();
        assert_ne!(sol.status, SolverStatus::Optimal);
    }
}
