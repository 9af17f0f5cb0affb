//! `coeff` and `sweep`.

use std::path::{Path, PathBuf};

use qdoeblin::channel::{ChannelDescription, QuantumChannel};
use qdoeblin::doeblin::Doeblin;
use qdoeblin::sdp::write_sdpa_sparse;
use rayon::prelude::*;

use crate::channel_args::{with_param, ChannelArgs};
use crate::columns::{evaluate, Column, Evaluated};
use crate::error::{CliError, CliResult};
use crate::report::{Cell, Table};
use crate::svg::{Plot, Series};

fn row_cells(evaluated: &[Evaluated]) -> Vec<Cell> {
    evaluated.iter().flat_map(Evaluated::cells).collect()
}

fn all_ok(rows: &[Vec<Evaluated>]) -> CliResult<()> {
    let bad = rows.iter().flatten().filter(|e| !e.is_ok()).count();
    if bad > 0 {
        return Err(CliError::Solver(format!("{bad} value(s) did not reach optimality")));
    }
    Ok(())
}

pub fn evaluate_all(doeblin: &Doeblin, columns: &[Column], n: &QuantumChannel) -> CliResult<Vec<Evaluated>> {
    columns.iter().map(|&c| evaluate(doeblin, c, n)).collect()
}

pub fn coeff(
    doeblin: &Doeblin,
    channel: &ChannelArgs,
    columns: &[Column],
    sdpa_dir: Option<&Path>,
) -> CliResult<()> {
    let desc = channel.description()?;
    let n = desc.build()?;

    if let Some(dir) = sdpa_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        for c in columns {
            if let Column::Coefficient(kind) = c {
                if let Some(problem) = doeblin.sdp_problem(*kind, &n)? {
                    write_sdpa_sparse(&problem, &dir.join(format!("{}.dat-s", kind.as_str())))?;
                }
            }
        }
    }

    let evaluated = evaluate_all(doeblin, columns, &n)?;
    let mut header = vec!["channel".to_string()];
    let mut cells = vec![Cell::Text(match (&desc, &channel.file) {
        (_, Some(path)) => path.display().to_string(),
        (ChannelDescription::Named { name, .. }, None) => name.clone(),
        _ => "kraus".to_string(),
    })];
    if channel.file.is_none() {
        for (k, v) in channel.numeric_params()? {
            header.push(k);
            cells.push(Cell::Num(v));
        }
    }
    header.extend(Column::header(columns));
    cells.extend(row_cells(&evaluated));
    let mut table = Table::new(header);
    table.rows.push(cells);
    table.write_to(std::io::stdout().lock())?;
    all_ok(&[evaluated])
}

/// `start, start + step, …` up to `stop`; the last point is snapped to
/// `stop` when rounding overshoots it.
pub fn grid(start: f64, stop: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(CliError::Usage(format!("step must be positive, got {step}")));
    }
    if !(start <= stop) {
        return Err(CliError::Usage(format!("start {start} exceeds stop {stop}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| (start + i as f64 * step).min(stop)).collect())
}

pub struct SweepSpec {
    pub channel: ChannelArgs,
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub columns: Vec<Column>,
}

pub fn sweep(doeblin: &Doeblin, spec: &SweepSpec, out: &Path, svg: Option<&PathBuf>) -> CliResult<()> {
    if spec.channel.file.is_some() {
        return Err(CliError::Usage("sweeps need a built-in --channel".into()));
    }
    let base = spec.channel.description()?;
    let xs = grid(spec.start, spec.stop, spec.step)?;
    // Reject inadmissible points before any solve.
    let channels = xs
        .iter()
        .map(|&x| with_param(&base, &spec.param, x).build())
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Vec<Evaluated>> = channels
        .par_iter()
        .map(|n| evaluate_all(doeblin, &spec.columns, n))
        .collect::<CliResult<_>>()?;

    let mut header = vec![spec.param.clone()];
    header.extend(Column::header(&spec.columns));
    let mut table = Table::new(header);
    for (x, r) in xs.iter().zip(&rows) {
        let mut cells = vec![Cell::Num(*x)];
        cells.extend(row_cells(r));
        table.rows.push(cells);
    }
    table.write_path(out)?;

    if let Some(path) = svg {
        let series = spec
            .columns
            .iter()
            .enumerate()
            .map(|(k, c)| Series {
                label: c.name().to_string(),
                points: xs.iter().zip(&rows).map(|(&x, r)| (x, r[k].plot_value())).collect(),
                dashed: false,
            })
            .collect();
        let plot = Plot {
            title: format!("{} sweep", spec.channel.family()?),
            x_label: spec.param.clone(),
            y_label: "value".into(),
            series,
        };
        write_text(path, &plot.render())?;
    }
    all_ok(&rows)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
