//! Constructors for the standard channel families.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ChoiMatrix, QuantumChannel};
use crate::hermlin::{eig_hermitian, kron, ComplexMatrix, HermitianMatrix};
use crate::tol::{MAX_DIM, PSD_TOL};
use crate::{Error, Result};

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    // A few ulps of slack so that endpoints computed as d/(d−1) etc. pass.
    let slack = 4.0 * f64::EPSILON * hi.abs().max(1.0);
    if value.is_finite() && value >= lo - slack && value <= hi + slack {
        Ok(())
    } else {
        Err(Error::param(name, value, lo, hi))
    }
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(Error::InvalidInput(format!("dimension must be at least {min}, got {d}")));
    }
    if d * d > MAX_DIM {
        return Err(Error::Size(format!("dimension {d} exceeds the Choi limit")));
    }
    Ok(())
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `|Φ⁺⟩⟨Φ⁺|` on `d ⊗ d`, normalized to unit trace.
pub(crate) fn max_entangled(d: usize) -> ComplexMatrix {
    let n = d * d;
    let w = c(1.0 / d as f64);
    ComplexMatrix::from_fn(n, n, |r, col| {
        if r % (d + 1) == 0 && col % (d + 1) == 0 {
            w
        } else {
            c(0.0)
        }
    })
}

/// The swap operator on `d ⊗ d`.
pub(crate) fn swap(d: usize) -> ComplexMatrix {
    let n = d * d;
    ComplexMatrix::from_fn(n, n, |r, col| {
        let (a, b) = (r / d, r % d);
        if col == b * d + a {
            c(1.0)
        } else {
            c(0.0)
        }
    })
}

fn from_choi_matrix(m: ComplexMatrix, d_in: usize, d_out: usize) -> Result<QuantumChannel> {
    QuantumChannel::from_choi(ChoiMatrix::new(HermitianMatrix::symmetrized(m), d_in, d_out)?)
}

pub fn identity(d: usize) -> Result<QuantumChannel> {
    check_dim(d, 1)?;
    QuantumChannel::from_kraus(vec![ComplexMatrix::identity(d)])
}

/// `ρ ↦ (1 − ε) ρ ⊕ ε |e⟩⟨e|`, with the flag `|e⟩` the last of `d + 1`
/// output basis vectors.
pub fn erasure(eps: f64, d: usize) -> Result<QuantumChannel> {
    check_range("epsilon", eps, 0.0, 1.0)?;
    check_dim(d, 1)?;
    if d * (d + 1) > MAX_DIM {
        return Err(Error::Size(format!("dimension {d} exceeds the Choi limit")));
    }
    let keep = ComplexMatrix::from_fn(d + 1, d, |o, i| if o == i { c((1.0 - eps).sqrt()) } else { c(0.0) });
    let mut kraus = vec![keep];
    for i in 0..d {
        kraus.push(ComplexMatrix::from_fn(d + 1, d, |o, j| {
            if o == d && j == i {
                c(eps.sqrt())
            } else {
                c(0.0)
            }
        }));
    }
    QuantumChannel::from_kraus(kraus)
}

/// `ρ ↦ (1 − p) ρ + p 𝟙/d` for `p ∈ [0, d²/(d²−1)]`.
pub fn depolarizing(p: f64, d: usize) -> Result<QuantumChannel> {
    check_dim(d, 2)?;
    let d2 = (d * d) as f64;
    check_range("p", p, 0.0, d2 / (d2 - 1.0))?;
    let phi = max_entangled(d);
    let m = ComplexMatrix::from_fn(d * d, d * d, |r, col| {
        let mix = if r == col { c(p / d2) } else { c(0.0) };
        phi[(r, col)] * (1.0 - p) + mix
    });
    from_choi_matrix(m, d, d)
}

/// `ρ ↦ (1 − q) ρᵀ + q 𝟙/d` for `q ∈ [d/(d+1), d/(d−1)]`.
pub fn transpose_depolarizing(q: f64, d: usize) -> Result<QuantumChannel> {
    check_dim(d, 2)?;
    let df = d as f64;
    check_range("q", q, df / (df + 1.0), df / (df - 1.0))?;
    let sw = swap(d);
    let d2 = df * df;
    let m = ComplexMatrix::from_fn(d * d, d * d, |r, col| {
        let mix = if r == col { c(q / d2) } else { c(0.0) };
        sw[(r, col)] * ((1.0 - q) / df) + mix
    });
    from_choi_matrix(m, d, d)
}

/// `ρ ↦ (Tr(ρ) 𝟙 − ρᵀ)/(d − 1)`.
pub fn werner_holevo(d: usize) -> Result<QuantumChannel> {
    check_dim(d, 2)?;
    let df = d as f64;
    transpose_depolarizing(df / (df - 1.0), d)
}

/// Generalized amplitude damping with dissipation `p` and transmissivity
/// `eta`, both in `[0, 1]`.
pub fn gad(p: f64, eta: f64) -> Result<QuantumChannel> {
    check_range("p", p, 0.0, 1.0)?;
    check_range("eta", eta, 0.0, 1.0)?;
    let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
    let (se, sl) = (eta.sqrt(), (1.0 - eta).sqrt());
    let m = |a: f64, b: f64, cc: f64, d: f64| {
        ComplexMatrix::from_real(2, 2, &[a, b, cc, d]).expect("2x2 literal")
    };
    QuantumChannel::from_kraus(vec![
        m(sp, 0.0, 0.0, sp * se),
        m(0.0, sp * sl, 0.0, 0.0),
        m(sq * se, 0.0, 0.0, sq),
        m(0.0, 0.0, sq * sl, 0.0),
    ])
}

fn pauli(k: usize) -> ComplexMatrix {
    let z = c(0.0);
    let one = c(1.0);
    let i = Complex64::new(0.0, 1.0);
    let data = match k {
        0 => vec![one, z, z, one],
        1 => vec![z, one, one, z],
        2 => vec![z, -i, i, z],
        _ => vec![one, z, z, -one],
    };
    ComplexMatrix::from_vec(2, 2, data).expect("2x2 literal")
}

/// Qubit Pauli channel `ρ ↦ Σ_k w_k σ_k ρ σ_k` with weights on
/// `(𝟙, X, Y, Z)`.
pub fn pauli_channel(weights: [f64; 4]) -> Result<QuantumChannel> {
    for &w in &weights {
        check_range("weight", w, 0.0, 1.0)?;
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("Pauli weights sum to {total}, not 1")));
    }
    let kraus = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(k, &w)| pauli(k).scale(w.sqrt()))
        .collect();
    QuantumChannel::from_kraus(kraus)
}

/// `ρ ↦ (1 − p) ρ + p XρX`.
pub fn bitflip(p: f64) -> Result<QuantumChannel> {
    check_range("p", p, 0.0, 1.0)?;
    pauli_channel([1.0 - p, p, 0.0, 0.0])
}

/// `ρ ↦ (1 − b) ρ + b ZρZ`.
pub fn dephasing(b: f64) -> Result<QuantumChannel> {
    check_range("b", b, 0.0, 1.0)?;
    pauli_channel([1.0 - b, 0.0, 0.0, b])
}

fn check_state(sigma: &HermitianMatrix) -> Result<()> {
    if (sigma.trace() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!(
            "sigma has trace {}, expected 1",
            sigma.trace()
        )));
    }
    if eig_hermitian(sigma)?.min() < -PSD_TOL {
        return Err(Error::InvalidInput("sigma is not positive semidefinite".into()));
    }
    Ok(())
}

/// `ρ ↦ (1 − p) ρ + p σ` for `p ∈ [0, 1]` and a density matrix `σ`.
pub fn generalized_depolarizing(p: f64, sigma: &HermitianMatrix) -> Result<QuantumChannel> {
    check_range("p", p, 0.0, 1.0)?;
    check_state(sigma)?;
    let d = sigma.dim();
    check_dim(d, 1)?;
    let phi = max_entangled(d);
    let rep = kron(sigma.matrix(), &ComplexMatrix::identity(d))?.scale(1.0 / d as f64);
    let m = ComplexMatrix::from_fn(d * d, d * d, |r, col| {
        phi[(r, col)] * (1.0 - p) + rep[(r, col)] * p
    });
    from_choi_matrix(m, d, d)
}

/// `ρ ↦ Tr(ρ) σ` on inputs of dimension `d_in`.
pub fn replacer(sigma: &HermitianMatrix, d_in: usize) -> Result<QuantumChannel> {
    check_state(sigma)?;
    check_dim(d_in, 1)?;
    let d_out = sigma.dim();
    if d_in * d_out > MAX_DIM {
        return Err(Error::Size("replacer Choi dimension exceeds the limit".into()));
    }
    let m = kron(sigma.matrix(), &ComplexMatrix::identity(d_in))?.scale(1.0 / d_in as f64);
    from_choi_matrix(m, d_in, d_out)
}

/// Measure-and-prepare channel of a column-stochastic matrix with entries
/// `stochastic[(y, x)] = P(y|x)`.
pub fn classical_embed(stochastic: &DMatrix<f64>) -> Result<QuantumChannel> {
    let (ny, nx) = stochastic.shape();
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidInput("empty transition matrix".into()));
    }
    if nx * ny > MAX_DIM {
        return Err(Error::Size("transition matrix exceeds the Choi limit".into()));
    }
    for x in 0..nx {
        let col = stochastic.column(x);
        if col.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::InvalidInput(format!("column {x} has entries outside [0, 1]")));
        }
        if (col.sum() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("column {x} does not sum to 1")));
        }
    }
    let mut kraus = Vec::new();
    for x in 0..nx {
        for y in 0..ny {
            let p = stochastic[(y, x)];
            if p > 0.0 {
                kraus.push(ComplexMatrix::from_fn(ny, nx, |o, i| {
                    if o == y && i == x {
                        c(p.sqrt())
                    } else {
                        c(0.0)
                    }
                }));
            }
        }
    }
    QuantumChannel::from_kraus(kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::validate;

    fn ket_proj(d: usize, k: usize) -> HermitianMatrix {
        let mut v = vec![c(0.0); d];
        v[k] = c(1.0);
        HermitianMatrix::projector(&v)
    }

    #[test]
    fn parameter_ranges_are_enforced() {
        assert!(matches!(depolarizing(1.4, 2), Err(Error::InvalidParameter { .. })));
        assert!(depolarizing(4.0 / 3.0, 2).is_ok());
        assert!(transpose_depolarizing(0.5, 2).is_err());
        assert!(transpose_depolarizing(2.0 / 3.0, 2).is_ok());
        assert!(erasure(-0.1, 2).is_err());
        assert!(gad(0.5, 1.1).is_err());
        assert!(dephasing(1.5).is_err());
    }

    #[test]
    fn amplitude_damping_decays_excited_state() {
        let ch = gad(1.0, 0.3).unwrap();
        let out = ch.apply(&ket_proj(2, 1)).unwrap();
        assert!((out[(0, 0)].re - 0.7).abs() < 1e-15);
        assert!((out[(1, 1)].re - 0.3).abs() < 1e-15);
    }

    #[test]
    fn half_bitflip_fully_mixes_zero() {
        let out = bitflip(0.5).unwrap().apply(&ket_proj(2, 0)).unwrap();
        assert!(out.max_abs_diff(&HermitianMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn erasure_flag_is_last() {
        let ch = erasure(0.25, 2).unwrap();
        assert_eq!(ch.d_out(), 3);
        let out = ch.apply(&ket_proj(2, 0)).unwrap();
        assert!((out[(0, 0)].re - 0.75).abs() < 1e-15);
        assert!((out[(2, 2)].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn werner_holevo_is_antisymmetric_projector() {
        let ch = werner_holevo(3).unwrap();
        let flags = validate(ch.choi().as_choi_like()).unwrap();
        assert!(flags.is_cp && flags.is_tp);
        let ev = eig_hermitian(ch.choi().matrix()).unwrap();
        let positive = ev.values.iter().filter(|&&l| l > 1e-9).count();
        assert_eq!(positive, 3);
    }

    #[test]
    fn replacer_outputs_sigma() {
        let sigma = HermitianMatrix::from_real_diag(&[0.2, 0.3, 0.5]);
        let ch = replacer(&sigma, 2).unwrap();
        let out = ch.apply(&ket_proj(2, 1)).unwrap();
        assert!(out.max_abs_diff(&sigma) < 1e-12);
    }

    #[test]
    fn classical_embed_rejects_non_stochastic() {
        let bad = DMatrix::from_row_slice(2, 2, &[0.5, 0.2, 0.4, 0.8]);
        assert!(classical_embed(&bad).is_err());
    }
}
