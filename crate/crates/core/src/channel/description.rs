//! JSON channel descriptions.
//!
//! Two shapes are accepted:
//!
//! ```json
//! {"d_in": 2, "d_out": 2, "kraus": [[[1,0],[0,0],[0,0],[1,0]]]}
//! {"name": "gad", "params": {"p": 0.3, "eta": 0.6}}
//! ```
//!
//! Kraus entries are `[re, im]` pairs, either as a flat row-major list of
//! `d_out·d_in` entries or as a list of `d_out` rows.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{families, random_channel, QuantumChannel};
use crate::hermlin::{ComplexMatrix, HermitianMatrix};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KrausEntries {
    Rows(Vec<Vec<[f64; 2]>>),
    Flat(Vec<[f64; 2]>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelDescription {
    Kraus {
        d_in: usize,
        d_out: usize,
        kraus: Vec<KrausEntries>,
    },
    Named {
        name: String,
        #[serde(default)]
        params: Map<String, Value>,
    },
}

impl KrausEntries {
    fn to_matrix(&self, d_in: usize, d_out: usize) -> Result<ComplexMatrix> {
        let flat: Vec<Complex64> = match self {
            KrausEntries::Flat(v) => v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            KrausEntries::Rows(rows) => {
                if rows.len() != d_out || rows.iter().any(|r| r.len() != d_in) {
                    return Err(Error::InvalidInput(format!(
                        "Kraus rows do not form a {d_out}x{d_in} matrix"
                    )));
                }
                rows.iter()
                    .flatten()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect()
            }
        };
        ComplexMatrix::from_vec(d_out, d_in, flat)
    }
}

fn num(params: &Map<String, Value>, keys: &[&str], default: Option<f64>) -> Result<f64> {
    for k in keys {
        if let Some(v) = params.get(*k) {
            return v
                .as_f64()
                .ok_or_else(|| Error::InvalidInput(format!("parameter {k} must be a number")));
        }
    }
    default.ok_or_else(|| Error::InvalidInput(format!("missing parameter {}", keys[0])))
}

fn count(params: &Map<String, Value>, key: &str, default: Option<usize>) -> Result<usize> {
    match params.get(key) {
        Some(v) => v
            .as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| Error::InvalidInput(format!("parameter {key} must be a nonnegative integer"))),
        None => default.ok_or_else(|| Error::InvalidInput(format!("missing parameter {key}"))),
    }
}

/// A state given either as a list of real diagonal entries or as rows of
/// `[re, im]` pairs.
fn state(params: &Map<String, Value>, key: &str) -> Result<HermitianMatrix> {
    let v = params
        .get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing parameter {key}")))?;
    if let Ok(diag) = serde_json::from_value::<Vec<f64>>(v.clone()) {
        return Ok(HermitianMatrix::from_real_diag(&diag));
    }
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(v.clone())?;
    let d = rows.len();
    let m = KrausEntries::Rows(rows).to_matrix(d, d)?;
    HermitianMatrix::new(m)
}

fn stochastic(params: &Map<String, Value>) -> Result<DMatrix<f64>> {
    let v = params
        .get("matrix")
        .ok_or_else(|| Error::InvalidInput("missing parameter matrix".into()))?;
    let rows: Vec<Vec<f64>> = serde_json::from_value(v.clone())?;
    let ny = rows.len();
    let nx = rows.first().map_or(0, Vec::len);
    if ny == 0 || rows.iter().any(|r| r.len() != nx) {
        return Err(Error::InvalidInput("transition matrix rows differ in length".into()));
    }
    Ok(DMatrix::from_fn(ny, nx, |y, x| rows[y][x]))
}

impl ChannelDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Kraus-form description of an existing channel, rows nested.
    pub fn from_channel(ch: &QuantumChannel) -> Self {
        let kraus = ch
            .kraus()
            .iter()
            .map(|a| {
                KrausEntries::Rows(
                    (0..a.rows())
                        .map(|r| (0..a.cols()).map(|c| [a[(r, c)].re, a[(r, c)].im]).collect())
                        .collect(),
                )
            })
            .collect();
        ChannelDescription::Kraus {
            d_in: ch.d_in(),
            d_out: ch.d_out(),
            kraus,
        }
    }

    pub fn build(&self) -> Result<QuantumChannel> {
        match self {
            ChannelDescription::Kraus { d_in, d_out, kraus } => {
                let ops = kraus
                    .iter()
                    .map(|k| k.to_matrix(*d_in, *d_out))
                    .collect::<Result<Vec<_>>>()?;
                QuantumChannel::from_kraus(ops)
            }
            ChannelDescription::Named { name, params } => build_named(name, params),
        }
    }
}

/// Family names accepted in `{"name": ...}` descriptions.
pub const FAMILY_NAMES: [&str; 13] = [
    "identity",
    "erasure",
    "depolarizing",
    "transpose_depolarizing",
    "werner_holevo",
    "gad",
    "pauli",
    "bitflip",
    "dephasing",
    "generalized_depolarizing",
    "replacer",
    "classical",
    "random",
];

fn build_named(name: &str, p: &Map<String, Value>) -> Result<QuantumChannel> {
    match name {
        "identity" => families::identity(count(p, "d", Some(2))?),
        "erasure" => families::erasure(num(p, &["epsilon", "eps"], None)?, count(p, "d", Some(2))?),
        "depolarizing" => families::depolarizing(num(p, &["p"], None)?, count(p, "d", Some(2))?),
        "transpose_depolarizing" => {
            families::transpose_depolarizing(num(p, &["q"], None)?, count(p, "d", Some(2))?)
        }
        "werner_holevo" => families::werner_holevo(count(p, "d", Some(3))?),
        "gad" => families::gad(num(p, &["p"], None)?, num(p, &["eta"], None)?),
        "pauli" | "pauli_channel" => {
            let w: Vec<f64> = serde_json::from_value(
                p.get("weights")
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput("missing parameter weights".into()))?,
            )?;
            let w: [f64; 4] = w
                .try_into()
                .map_err(|_| Error::InvalidInput("weights must have four entries".into()))?;
            families::pauli_channel(w)
        }
        "bitflip" => families::bitflip(num(p, &["p"], None)?),
        "dephasing" => families::dephasing(num(p, &["b"], None)?),
        "generalized_depolarizing" => {
            families::generalized_depolarizing(num(p, &["p"], None)?, &state(p, "sigma")?)
        }
        "replacer" => {
            let sigma = state(p, "sigma")?;
            let d_in = count(p, "d_in", Some(sigma.dim()))?;
            families::replacer(&sigma, d_in)
        }
        "classical" | "classical_embed" => families::classical_embed(&stochastic(p)?),
        "random" | "random_channel" => random_channel(
            count(p, "d_in", Some(2))?,
            count(p, "d_out", Some(2))?,
            count(p, "env_dim", Some(2))?,
            count(p, "seed", Some(0))? as u64,
        ),
        other => Err(Error::InvalidInput(format!("unknown channel family {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_nested_kraus_agree() {
        let flat = r#"{"d_in":2,"d_out":2,"kraus":[[[1,0],[0,0],[0,0],[1,0]]]}"#;
        let rows = r#"{"d_in":2,"d_out":2,"kraus":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        let a = ChannelDescription::from_json(flat).unwrap().build().unwrap();
        let b = ChannelDescription::from_json(rows).unwrap().build().unwrap();
        assert_eq!(a.kraus(), b.kraus());
    }

    #[test]
    fn named_family() {
        let d = ChannelDescription::from_json(r#"{"name":"gad","params":{"p":0.3,"eta":0.6}}"#)
            .unwrap();
        let ch = d.build().unwrap();
        assert_eq!(ch.kraus().len(), 4);
        let bad = ChannelDescription::from_json(r#"{"name":"gad","params":{"p":0.3}}"#).unwrap();
        assert!(bad.build().is_err());
        let unknown = ChannelDescription::from_json(r#"{"name":"nope"}"#).unwrap();
        assert!(unknown.build().is_err());
    }

    #[test]
    fn round_trip_through_json() {
        let ch = families::gad(0.2, 0.7).unwrap();
        let text = serde_json::to_string(&ChannelDescription::from_channel(&ch)).unwrap();
        let back = ChannelDescription::from_json(&text).unwrap().build().unwrap();
        assert!(back.choi().matrix().max_abs_diff(ch.choi().matrix()) < 1e-15);
    }
}
