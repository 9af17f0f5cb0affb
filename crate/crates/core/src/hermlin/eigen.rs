//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_complex::Complex64;

use super::{ComplexMatrix, HermitianMatrix};
use crate::tol::MAX_DIM;
use crate::{Error, Result};

/// Eigendecomposition `h = V · diag(values) · V†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// Rebuilds `Σ f(λ_k) |v_k⟩⟨v_k|`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        HermitianMatrix::symmetrized(out)
    }
}

const MAX_SWEEPS: usize = 60;
const OFF_DIAG_REL_TOL: f64 = 1e-14;

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Sweeps continue until the off-diagonal Frobenius mass drops below
/// `1e-14 · ‖h‖_F`.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<Eigen> {
    let n = h.dim();
    if n > MAX_DIM {
        return Err(Error::Size(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = OFF_DIAG_REL_TOL * a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Eigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(h)?.values)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p,q]` with the unitary `G = diag(1, e^{-iφ}) · R(θ)` acting
/// on the `(p, q)` plane, where `a[p,q] = |a[p,q]| e^{iφ}`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.rows();
    let ph_conj = phase.conj();

    // A ← A·G on columns p, q.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * ph_conj * s;
        a[(k, q)] = akp * s + akq * ph_conj * c;
    }
    // A ← G†·A on rows p, q.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * mag, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * ph_conj * s;
        v[(k, q)] = vkp * s + vkq * ph_conj * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_is_sorted() {
        let h = HermitianMatrix::from_real_diag(&[2.0, 1.0]);
        let e = eig_hermitian(&h).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = eig_hermitian(&HermitianMatrix::new(x).unwrap()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_eigenvectors() {
        let y = ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap();
        let h = HermitianMatrix::new(y).unwrap();
        let e = eig_hermitian(&h).unwrap();
        let back = e.reconstruct_with(|x| x);
        assert!(back.max_abs_diff(&h) < 1e-14);
    }

    #[test]
    fn rejects_oversized() {
        let h = HermitianMatrix::identity(MAX_DIM + 1);
        assert!(matches!(eig_hermitian(&h), Err(Error::Size(_))));
    }

    #[test]
    fn degenerate_spectrum() {
        let h = HermitianMatrix::identity(5).scale(3.0);
        let e = eig_hermitian(&h).unwrap();
        assert!(e.values.iter().all(|&l| l == 3.0));
    }
}
