//! Requested output columns and their evaluation on a channel.

use std::str::FromStr;

use qdoeblin::channel::QuantumChannel;
use qdoeblin::doeblin::{CoefficientKind, CoefficientResult, Doeblin};
use qdoeblin::oracles::{eta_tr_expansion_qubit, eta_tr_qubit};
use qdoeblin::sdp::SolverStatus;

use crate::error::{CliError, CliResult};
use crate::report::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    Coefficient(CoefficientKind),
    /// `1 − max{α^H, αᵀ}` (plus `α^{T,H}` with `--combine-th`).
    Upper,
    /// `1 − min{α̌, α̌ᵀ, α̌^H}`.
    Lower,
    /// Bloch-sphere estimate of the contraction coefficient.
    EtaTr,
    /// Bloch-ball estimate of the expansion coefficient.
    EtaTrExpansion,
}

pub const COLUMN_NAMES: &str =
    "alpha, alphaT, alphaH, alphaTH, p1, rev, revT, revH, upper, lower, eta_tr, eta_tr_expansion";

impl FromStr for Column {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use CoefficientKind::*;
        let kind = match s {
            "alpha" => Alpha,
            "alphaT" | "alpha_T" => AlphaT,
            "alphaH" | "alpha_H" => AlphaH,
            "alphaTH" | "alpha_TH" => AlphaTH,
            "p1" | "p1_ppt" => P1Ppt,
            "rev" | "rev_alpha" => RevAlpha,
            "revT" | "rev_alpha_T" => RevAlphaT,
            "revH" | "rev_alpha_H" => RevAlphaH,
            "upper" => return Ok(Column::Upper),
            "lower" => return Ok(Column::Lower),
            "eta_tr" => return Ok(Column::EtaTr),
            "eta_tr_expansion" => return Ok(Column::EtaTrExpansion),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown kind {other:?}; expected one of: {COLUMN_NAMES}"
                )))
            }
        };
        Ok(Column::Coefficient(kind))
    }
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::Coefficient(k) => k.as_str(),
            Column::Upper => "upper",
            Column::Lower => "lower",
            Column::EtaTr => "eta_tr",
            Column::EtaTrExpansion => "eta_tr_expansion",
        }
    }

    /// Solver-backed columns carry a status column next to the value.
    pub fn has_status(self) -> bool {
        !matches!(self, Column::EtaTr | Column::EtaTrExpansion)
    }

    pub fn header(columns: &[Column]) -> Vec<String> {
        let mut h = Vec::new();
        for c in columns {
            h.push(c.name().to_string());
            if c.has_status() {
                h.push(format!("{}_status", c.name()));
            }
        }
        h
    }
}

pub fn parse_columns(items: &[String]) -> CliResult<Vec<Column>> {
    if items.is_empty() {
        return Err(CliError::Usage(format!("no kind requested; expected some of: {COLUMN_NAMES}")));
    }
    items.iter().map(|s| s.parse()).collect()
}

fn severity(s: SolverStatus) -> u8 {
    match s {
        SolverStatus::Optimal => 0,
        SolverStatus::MaxIter => 1,
        SolverStatus::NumericalFailure => 2,
    }
}

pub fn worst(a: SolverStatus, b: SolverStatus) -> SolverStatus {
    if severity(b) > severity(a) {
        b
    } else {
        a
    }
}

/// One evaluated column: value, solver status when there is one.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub value: f64,
    pub not_applicable: bool,
    pub status: Option<SolverStatus>,
}

impl Evaluated {
    fn from_result(r: &CoefficientResult) -> Self {
        Self {
            value: r.value,
            not_applicable: r.not_applicable,
            status: Some(r.status),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status.is_none_or(|s| s == SolverStatus::Optimal)
    }

    pub fn plot_value(&self) -> f64 {
        if self.not_applicable {
            f64::NAN
        } else {
            self.value
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        let value = if self.not_applicable {
            Cell::NotPpt
        } else {
            Cell::Num(self.value)
        };
        match self.status {
            Some(s) => vec![value, Cell::Text(s.as_str().to_string())],
            None => vec![value],
        }
    }
}

/// `1 − best` over several coefficient results, skipping inapplicable ones;
/// the status is the worst of the inputs.
fn one_minus(results: &[CoefficientResult], best: fn(f64, f64) -> f64, start: f64) -> Evaluated {
    let mut value = start;
    let mut status = SolverStatus::Optimal;
    for r in results {
        status = worst(status, r.status);
        if let Some(v) = r.applicable_value() {
            value = best(value, v);
        }
    }
    Evaluated {
        value: 1.0 - value,
        not_applicable: false,
        status: Some(status),
    }
}

pub fn evaluate(doeblin: &Doeblin, column: Column, n: &QuantumChannel) -> CliResult<Evaluated> {
    Ok(match column {
        Column::Coefficient(kind) => Evaluated::from_result(&doeblin.coefficient(kind, n)?),
        Column::Upper => {
            let mut rs = vec![doeblin.alpha_hermitian(n)?, doeblin.alpha_transpose(n)?];
            if doeblin.combine_th {
                rs.push(doeblin.alpha_transpose_hermitian(n)?);
            }
            one_minus(&rs, f64::max, f64::NEG_INFINITY)
        }
        Column::Lower => {
            let rs = [
                doeblin.reverse_alpha(n)?,
                doeblin.reverse_alpha_transpose(n)?,
                doeblin.reverse_alpha_hermitian(n)?,
            ];
            one_minus(&rs, f64::min, f64::INFINITY)
        }
        Column::EtaTr => Evaluated {
            value: eta_tr_qubit(n)?,
            not_applicable: false,
            status: None,
        },
        Column::EtaTrExpansion => Evaluated {
            value: eta_tr_expansion_qubit(n)?,
            not_applicable: false,
            status: None,
        },
    })
}
