//! Classical channels and their Doeblin-type coefficients. Entropies and
//! capacities are in bits.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::sdp::{solve, SdpProblem};
use crate::{Error, Result};

const STOCHASTIC_TOL: f64 = 1e-12;

/// Column-stochastic transition matrix, `matrix[(y, x)] = P(y|x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalChannel {
    matrix: DMatrix<f64>,
    /// Output involution `π` with `P(y|0) = P(π(y)|1)`, when one exists.
    biso_pairing: Option<Vec<usize>>,
}

impl ClassicalChannel {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (ny, nx) = matrix.shape();
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidInput("empty transition matrix".into()));
        }
        for x in 0..nx {
            let col = matrix.column(x);
            if col.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::InvalidInput(format!("column {x} has negative entries")));
            }
            if (col.sum() - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidInput(format!("column {x} sums to {}", col.sum())));
            }
        }
        let biso_pairing = find_biso_pairing(&matrix);
        Ok(Self {
            matrix,
            biso_pairing,
        })
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param("p", p, 0.0, 1.0));
        }
        Self::new(DMatrix::from_row_slice(2, 2, &[1.0 - p, p, p, 1.0 - p]))
    }

    /// Binary erasure channel; the erasure symbol is the last output.
    pub fn bec(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::param("epsilon", eps, 0.0, 1.0));
        }
        Self::new(DMatrix::from_row_slice(3, 2, &[1.0 - eps, 0.0, 0.0, 1.0 - eps, eps, eps]))
    }

    /// Random stochastic matrix with `nx` inputs and `ny` outputs.
    pub fn random(nx: usize, ny: usize, seed: u64) -> Result<Self> {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let mut m = DMatrix::from_fn(ny, nx, |_, _| rng.random_range(0.0..1.0f64) + 1e-3);
        for mut col in m.column_iter_mut() {
            let s = col.sum();
            col /= s;
        }
        normalize_columns(&mut m);
        Self::new(m)
    }

    /// Random binary-input output-symmetric channel with 2 to 6 outputs:
    /// mirrored output pairs `(a, b) / (b, a)` plus optionally one output
    /// that both inputs reach with equal probability.
    pub fn random_biso(seed: u64) -> Result<Self> {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let pairs = rng.random_range(1..=3usize);
        let fixed = 2 * pairs < 6 && rng.random_bool(0.5);
        let mut col0 = Vec::new();
        let mut col1 = Vec::new();
        for _ in 0..pairs {
            let a = rng.random_range(0.0..1.0f64);
            let b = rng.random_range(0.0..1.0f64);
            col0.extend([a, b]);
            col1.extend([b, a]);
        }
        if fixed {
            let c = rng.random_range(0.0..1.0f64);
            col0.push(c);
            col1.push(c);
        }
        let total: f64 = col0.iter().sum();
        let ny = col0.len();
        let mut m = DMatrix::from_fn(ny, 2, |y, x| if x == 0 { col0[y] / total } else { col1[y] / total });
        normalize_columns(&mut m);
        Self::new(m)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inputs(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn outputs(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_biso(&self) -> bool {
        self.biso_pairing.is_some()
    }

    pub fn biso_pairing(&self) -> Option<&[usize]> {
        self.biso_pairing.as_deref()
    }

    fn require_biso(&self) -> Result<()> {
        if self.is_biso() {
            Ok(())
        } else {
            Err(Error::InvalidInput("channel is not binary-input output-symmetric".into()))
        }
    }
}

/// Puts the rounding error of each column on its largest entry so that the
/// column sums to 1 within an ulp or two.
fn normalize_columns(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        let s: f64 = col.sum();
        let imax = col.iamax();
        col[imax] += 1.0 - s;
    }
}

fn find_biso_pairing(m: &DMatrix<f64>) -> Option<Vec<usize>> {
    if m.ncols() != 2 {
        return None;
    }
    let ny = m.nrows();
    let tol = 1e-12;
    let mut pi = vec![usize::MAX; ny];
    for y in 0..ny {
        if pi[y] != usize::MAX {
            continue;
        }
        let partner = (y..ny).find(|&z| {
            pi[z] == usize::MAX
                && (m[(y, 0)] - m[(z, 1)]).abs() <= tol
                && (m[(y, 1)] - m[(z, 0)]).abs() <= tol
        })?;
        pi[y] = partner;
        pi[partner] = y;
    }
    Some(pi)
}

/// `α = Σ_y min_x P(y|x)`.
pub fn classical_doeblin(c: &ClassicalChannel) -> f64 {
    c.matrix
        .row_iter()
        .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
        .sum()
}

/// `h(p) = −p log₂ p − (1−p) log₂(1−p)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Capacity of a BISO channel: the mutual information at uniform input.
pub fn classical_capacity_biso(c: &ClassicalChannel) -> Result<f64> {
    c.require_biso()?;
    let m = &c.matrix;
    let mut info = 0.0;
    for y in 0..m.nrows() {
        let q = 0.5 * (m[(y, 0)] + m[(y, 1)]);
        for x in 0..2 {
            let p = m[(y, x)];
            if p > 0.0 {
                info += 0.5 * p * (p / q).log2();
            }
        }
    }
    Ok(info)
}

/// `1 − C`.
pub fn classical_gamma(c: &ClassicalChannel) -> Result<f64> {
    Ok(1.0 - classical_capacity_biso(c)?)
}

/// Smallest crossover `p` such that some stochastic `D` satisfies
/// `D·P = B_p`, i.e. `P` can be degraded into a binary symmetric channel.
pub fn classical_reverse_crossover(c: &ClassicalChannel) -> Result<f64> {
    c.require_biso()?;
    let ny = c.outputs();
    // Variables: D[z, y] at z·ny + y for z ∈ {0, 1}, then p.
    let nd = 2 * ny;
    let p_index = nd;
    let mut objective = vec![0.0; nd + 1];
    objective[p_index] = -1.0;
    let mut problem = SdpProblem::new(objective);
    for v in 0..nd {
        problem.set_bounds(v, Some(0.0), None)?;
    }
    for y in 0..ny {
        let mut row = vec![0.0; nd + 1];
        row[y] = 1.0;
        row[ny + y] = 1.0;
        problem.add_equality(row, 1.0)?;
    }
    // (D·P)[z, x] = (1 − p) if z = x else p
    for z in 0..2 {
        for x in 0..2 {
            let mut row = vec![0.0; nd + 1];
            for y in 0..ny {
                row[z * ny + y] = c.matrix[(y, x)];
            }
            let rhs = if z == x {
                row[p_index] = 1.0;
                1.0
            } else {
                row[p_index] = -1.0;
                0.0
            };
            problem.add_equality(row, rhs)?;
        }
    }
    let sol = solve(&problem)?;
    if !sol.is_optimal() {
        return Err(Error::Solver {
            status: sol.status,
            detail: "degradation LP did not converge".into(),
        });
    }
    Ok(sol.y[p_index].clamp(0.0, 0.5))
}

/// `α̌ = h(p*)` for the smallest BSC crossover `p*` reachable by
/// degradation.
pub fn classical_reverse_alpha(c: &ClassicalChannel) -> Result<f64> {
    Ok(binary_entropy(classical_reverse_crossover(c)?))
}
