use super::{ChoiMatrix, HermitianChoiLike};
use crate::hermlin::{ComplexMatrix, HermitianMatrix};
use crate::{Error, Result};

/// Link product of `a` on `C ⊗ B` with `b` on `B ⊗ A`, scaled for
/// normalized Choi matrices:
///
/// `(a ⋆ b)[(c,i),(c',j)] = d_B Σ_{k,l} a[(c,k),(c',l)] · b[(k,i),(l,j)]`.
///
/// With this scaling `J(D) ⋆ J(N) = J(D ∘ N)`.
pub(crate) fn link_raw(
    a: &ComplexMatrix,
    (dc, db): (usize, usize),
    b: &ComplexMatrix,
    da: usize,
) -> ComplexMatrix {
    let scale = db as f64;
    let n = dc * da;
    let mut out = ComplexMatrix::zeros(n, n);
    for c in 0..dc {
        for c2 in 0..dc {
            for k in 0..db {
                for l in 0..db {
                    let w = a[(c * db + k, c2 * db + l)] * scale;
                    if w.re == 0.0 && w.im == 0.0 {
                        continue;
                    }
                    for i in 0..da {
                        for j in 0..da {
                            out[(c * da + i, c2 * da + j)] += w * b[(k * da + i, l * da + j)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Link product of Hermitian operators; `a` acts on `C ⊗ B`, `b` on `B ⊗ A`.
pub fn link_product_choi_like(
    a: &HermitianChoiLike,
    b: &HermitianChoiLike,
) -> Result<HermitianChoiLike> {
    if a.d_in() != b.d_out() {
        return Err(Error::InvalidInput(format!(
            "link product over mismatched systems: {} vs {}",
            a.d_in(),
            b.d_out()
        )));
    }
    let m = link_raw(a.matrix().matrix(), a.dims(), b.matrix().matrix(), b.d_in());
    HermitianChoiLike::new(HermitianMatrix::symmetrized(m), b.d_in(), a.d_out())
}

/// `J(D) ⋆ J(N) = J(D ∘ N)` for Choi matrices of channels `N: A → B` and
/// `D: B → C`.
pub fn link_product(a: &ChoiMatrix, b: &ChoiMatrix) -> Result<ChoiMatrix> {
    let like = link_product_choi_like(a.as_choi_like(), b.as_choi_like())?;
    ChoiMatrix::new(like.matrix().clone(), like.d_in(), like.d_out())
}
