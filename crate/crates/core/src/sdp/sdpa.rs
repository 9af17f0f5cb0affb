//! Export in the sparse SDPA text format (`.dat-s`) for cross-checking with
//! external solvers.
//!
//! SDPA minimizes `c·x` subject to `Σ F_i x_i − F_0 ⪰ 0`, so the problem is
//! written with `c = −b`, `F_0 = −C` and `F_i = −A_i`. Equalities become a
//! trailing diagonal (LP) block holding both inequality directions.

use std::fmt::Write as _;
use std::path::Path;

use super::problem::SdpProblem;
use crate::Result;

fn fmt_num(x: f64) -> String {
    format!("{x:.17e}")
}

pub fn to_sdpa_sparse(problem: &SdpProblem) -> String {
    let blocks = problem.all_blocks();
    let eqs = problem.equalities();
    let mut out = String::new();
    let _ = writeln!(out, "\"qdoeblin export\"");
    let _ = writeln!(out, "{}", problem.num_vars());
    let nblocks = blocks.len() + usize::from(!eqs.is_empty());
    let _ = writeln!(out, "{nblocks}");
    let mut sizes: Vec<String> = blocks.iter().map(|b| b.dim().to_string()).collect();
    if !eqs.is_empty() {
        sizes.push(format!("-{}", 2 * eqs.len()));
    }
    let _ = writeln!(out, "{}", sizes.join(" "));
    let c: Vec<String> = problem.objective().iter().map(|b| fmt_num(-b)).collect();
    let _ = writeln!(out, "{}", c.join(" "));

    let mut entry = |mat: usize, blk: usize, i: usize, j: usize, v: f64| {
        if v != 0.0 {
            let _ = writeln!(out, "{mat} {blk} {} {} {}", i + 1, j + 1, fmt_num(v));
        }
    };
    for (k, b) in blocks.iter().enumerate() {
        let n = b.dim();
        for i in 0..n {
            for j in i..n {
                entry(0, k + 1, i, j, -b.constant[(i, j)]);
            }
        }
        for (var, a) in &b.coeffs {
            for i in 0..n {
                for j in i..n {
                    entry(var + 1, k + 1, i, j, -a[(i, j)]);
                }
            }
        }
    }
    let lp = blocks.len() + 1;
    for (r, e) in eqs.iter().enumerate() {
        let (up, down) = (2 * r, 2 * r + 1);
        entry(0, lp, up, up, e.rhs);
        entry(0, lp, down, down, -e.rhs);
        for (var, &a) in e.coeffs.iter().enumerate() {
            entry(var + 1, lp, up, up, a);
            entry(var + 1, lp, down, down, -a);
        }
    }
    out
}

pub fn write_sdpa_sparse(problem: &SdpProblem, path: &Path) -> Result<()> {
    std::fs::write(path, to_sdpa_sparse(problem))?;
    Ok(())
}
