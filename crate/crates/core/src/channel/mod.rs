//! Quantum channels held as Kraus operators with a cached normalized Choi
//! matrix.
//!
//! Composite spaces are ordered output ⊗ input, so the Choi matrix of a
//! channel with Kraus operators `A_k` is
//! `J = (1/d_in) Σ_k |A_k⟩⟩⟨⟨A_k|` with `|A⟩⟩[o·d_in + i] = A[o, i]`.

mod choi;
mod description;
mod families;
mod link;
mod random;

pub use choi::{choi_from_kraus, kraus_from_choi, validate, ChannelFlags, ChoiMatrix, HermitianChoiLike};
pub use description::{ChannelDescription, KrausEntries, FAMILY_NAMES};
pub use families::{
    bitflip, classical_embed, dephasing, depolarizing, erasure, gad, generalized_depolarizing,
    identity, pauli_channel, replacer, transpose_depolarizing, werner_holevo,
};
pub use link::{link_product, link_product_choi_like};
pub use random::random_channel;

pub(crate) use families::{max_entangled, swap};
pub(crate) use link::link_raw;

use crate::hermlin::{kron, ComplexMatrix, HermitianMatrix, Subsystem};
use crate::tol::MAX_DIM;
use crate::{Error, Result};

/// A CPTP map `ρ ↦ Σ_k A_k ρ A_k†`.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<ComplexMatrix>,
    choi: ChoiMatrix,
}

impl QuantumChannel {
    /// Builds a channel from Kraus operators of shape `d_out × d_in`.
    ///
    /// Fails when the operators disagree in shape, contain non-finite
    /// entries, or violate trace preservation by more than `1e-8`.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let (d_out, d_in) = (first.rows(), first.cols());
        let choi = choi_from_kraus(&kraus, d_in, d_out)?;
        Ok(Self {
            d_in,
            d_out,
            kraus,
            choi,
        })
    }

    /// Builds a channel from a valid Choi matrix via its eigendecomposition.
    pub fn from_choi(choi: ChoiMatrix) -> Result<Self> {
        let kraus = kraus_from_choi(&choi)?;
        Ok(Self {
            d_in: choi.d_in(),
            d_out: choi.d_out(),
            kraus,
            choi,
        })
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn choi(&self) -> &ChoiMatrix {
        &self.choi
    }

    /// `J(T ∘ N)`: the Choi matrix partially transposed on the output.
    pub fn transpose_choi(&self) -> HermitianChoiLike {
        let m = crate::hermlin::partial_transpose(
            self.choi.matrix(),
            (self.d_out, self.d_in),
            Subsystem::First,
        )
        .expect("Choi dimensions are consistent");
        HermitianChoiLike::new(m, self.d_in, self.d_out).expect("Choi dimensions are consistent")
    }

    pub fn apply(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        if rho.dim() != self.d_in {
            return Err(Error::InvalidInput(format!(
                "state of dimension {} given to channel with input dimension {}",
                rho.dim(),
                self.d_in
            )));
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for a in &self.kraus {
            out = &out + &a.matmul(rho.matrix()).matmul(&a.adjoint());
        }
        Ok(HermitianMatrix::symmetrized(out))
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &QuantumChannel) -> Result<QuantumChannel> {
        if inner.d_out != self.d_in {
            return Err(Error::InvalidInput(format!(
                "cannot compose: inner output {} does not match outer input {}",
                inner.d_out, self.d_in
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for a in &self.kraus {
            for b in &inner.kraus {
                kraus.push(a.matmul(b));
            }
        }
        Self::from_kraus(kraus)?.compacted()
    }

    /// `self ⊗ other` acting on `A₁ ⊗ A₂ → B₁ ⊗ B₂`.
    pub fn tensor(&self, other: &QuantumChannel) -> Result<QuantumChannel> {
        let choi_dim = self.d_in * self.d_out * other.d_in * other.d_out;
        if choi_dim > MAX_DIM {
            return Err(Error::Size(format!(
                "tensor product Choi dimension {choi_dim} exceeds {MAX_DIM}"
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(kron(a, b)?);
            }
        }
        Self::from_kraus(kraus)?.compacted()
    }

    /// `λ·self + (1 − λ)·other` for `λ ∈ [0, 1]`.
    pub fn mix(&self, lambda: f64, other: &QuantumChannel) -> Result<QuantumChannel> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::param("lambda", lambda, 0.0, 1.0));
        }
        if self.d_in != other.d_in || self.d_out != other.d_out {
            return Err(Error::InvalidInput("mixed channels differ in dimensions".into()));
        }
        let (a, b) = (lambda.sqrt(), (1.0 - lambda).sqrt());
        let kraus = self
            .kraus
            .iter()
            .map(|k| k.scale(a))
            .chain(other.kraus.iter().map(|k| k.scale(b)))
            .collect();
        Self::from_kraus(kraus)?.compacted()
    }

    /// Replaces an overcomplete Kraus list by the minimal one from the Choi
    /// matrix so that repeated composition does not grow without bound.
    fn compacted(self) -> Result<Self> {
        if self.kraus.len() <= self.d_in * self.d_out {
            return Ok(self);
        }
        let choi = self.choi;
        Self::from_choi(choi)
    }
}
