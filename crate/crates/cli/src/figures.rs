//! Data and plots for the eight figures: CSV is the ground truth, SVG the
//! picture.

use std::path::Path;

use qdoeblin::channel::{bitflip, depolarizing, gad, QuantumChannel};
use qdoeblin::doeblin::{CoefficientKind, Doeblin};
use rayon::prelude::*;

use crate::columns::{evaluate, Column, Evaluated};
use crate::commands::write_text;
use crate::error::{CliError, CliResult};
use crate::report::{Cell, Table};
use crate::svg::{Plot, Series};

pub const FIGURES: [&str; 8] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

/// 1-D sweeps use steps of 1/75, surfaces a 51×51 grid.
const LINE_STEPS: usize = 75;
const SURFACE_STEPS: usize = 50;

enum Value {
    Solver {
        column: Column,
        one_minus: bool,
        dashed: bool,
    },
    Closed {
        name: &'static str,
        f: fn(&[f64]) -> f64,
    },
}

impl Value {
    fn solver(kind: CoefficientKind, one_minus: bool, dashed: bool) -> Self {
        Value::Solver {
            column: Column::Coefficient(kind),
            one_minus,
            dashed,
        }
    }

    fn name(&self) -> String {
        match self {
            Value::Solver { column, one_minus, .. } => {
                if *one_minus {
                    format!("one_minus_{}", column.name())
                } else {
                    column.name().to_string()
                }
            }
            Value::Closed { name, .. } => name.to_string(),
        }
    }

    fn label(&self) -> String {
        match self {
            Value::Solver { column, one_minus, .. } => {
                if *one_minus {
                    format!("1 - {}", column.name())
                } else {
                    column.name().to_string()
                }
            }
            Value::Closed { name, .. } => name.to_string(),
        }
    }

    fn dashed(&self) -> bool {
        matches!(self, Value::Solver { dashed: true, .. })
    }
}

enum Layout {
    /// One series per value over parameter `x`.
    Lines { x: usize },
    /// One series per value and per selected value of parameter `group`.
    Slices { x: usize, group: usize, keep: fn(f64) -> bool },
}

struct FigureSpec {
    title: &'static str,
    params: &'static [&'static str],
    points: Vec<Vec<f64>>,
    channel: fn(&[f64]) -> qdoeblin::Result<QuantumChannel>,
    values: Vec<Value>,
    layout: Layout,
}

fn line(steps: usize, stop: f64) -> Vec<f64> {
    (0..=steps).map(|k| (k as f64 / LINE_STEPS as f64).min(stop)).collect()
}

/// `line` with extra points merged in order, for reference values that fall
/// between grid points.
fn line_with(steps: usize, stop: f64, anchors: &[f64]) -> Vec<f64> {
    let mut xs = line(steps, stop);
    for &a in anchors {
        if !xs.iter().any(|&x| (x - a).abs() < 1e-12) {
            xs.push(a);
        }
    }
    xs.sort_by(f64::total_cmp);
    xs
}

fn surface() -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..=SURFACE_STEPS).map(|k| k as f64 / SURFACE_STEPS as f64).collect();
    axis.iter()
        .flat_map(|&p| axis.iter().map(move |&eta| vec![p, eta]))
        .collect()
}

fn every_fifth_of_surface(p: f64) -> bool {
    let k = (p * SURFACE_STEPS as f64).round() as usize;
    k.is_multiple_of(10)
}

fn spec(which: &str) -> Option<FigureSpec> {
    use CoefficientKind::*;
    let depol_range = line(100, 4.0 / 3.0);
    let unit = line(LINE_STEPS, 1.0);
    let unit_with_half = line_with(LINE_STEPS, 1.0, &[0.5]);
    let gad_channel: fn(&[f64]) -> qdoeblin::Result<QuantumChannel> = |x| gad(x[0], x[1]);
    Some(match which {
        "fig1" => FigureSpec {
            title: "alpha of generalized amplitude damping",
            params: &["p", "eta"],
            points: surface(),
            channel: gad_channel,
            values: vec![Value::solver(Alpha, false, false)],
            layout: Layout::Slices { x: 1, group: 0, keep: every_fifth_of_surface },
        },
        "fig2" => FigureSpec {
            title: "alpha and alpha_T of the qubit depolarizing channel",
            params: &["p"],
            points: depol_range.iter().map(|&p| vec![p]).collect(),
            channel: |x| depolarizing(x[0], 2),
            values: vec![Value::solver(Alpha, false, false), Value::solver(AlphaT, false, false)],
            layout: Layout::Lines { x: 0 },
        },
        "fig3" => FigureSpec {
            title: "1 - alpha (dashed) and 1 - alpha_H (solid), generalized amplitude damping",
            params: &["eta", "p"],
            points: [0.5, 0.6, 0.7, 0.8]
                .iter()
                .flat_map(|&eta| unit.iter().map(move |&p| vec![eta, p]))
                .collect(),
            channel: |x| gad(x[1], x[0]),
            values: vec![Value::solver(Alpha, true, true), Value::solver(AlphaH, true, false)],
            layout: Layout::Slices { x: 1, group: 0, keep: |_| true },
        },
        "fig4" => FigureSpec {
            title: "reverse coefficients of the qubit depolarizing channel",
            params: &["p"],
            points: depol_range.iter().map(|&p| vec![p]).collect(),
            channel: |x| depolarizing(x[0], 2),
            values: vec![Value::solver(RevAlpha, false, false), Value::solver(RevAlphaT, false, false)],
            layout: Layout::Lines { x: 0 },
        },
        "fig5" => FigureSpec {
            title: "reverse alpha of generalized amplitude damping",
            params: &["p", "eta"],
            points: surface(),
            channel: gad_channel,
            values: vec![Value::solver(RevAlpha, false, false)],
            layout: Layout::Slices { x: 1, group: 0, keep: every_fifth_of_surface },
        },
        "fig6" => FigureSpec {
            title: "data processing range of generalized amplitude damping",
            params: &["p", "eta"],
            points: surface(),
            channel: gad_channel,
            values: vec![Value::solver(RevAlpha, true, true), Value::solver(Alpha, true, false)],
            layout: Layout::Slices { x: 1, group: 0, keep: every_fifth_of_surface },
        },
        "fig7" => FigureSpec {
            title: "data processing range of the bit flip channel",
            params: &["p"],
            points: unit_with_half.iter().map(|&p| vec![p]).collect(),
            channel: |x| bitflip(x[0]),
            values: vec![
                Value::solver(RevAlpha, true, false),
                Value::Closed {
                    name: "abs_one_minus_2p",
                    f: |x| (1.0 - 2.0 * x[0]).abs(),
                },
                Value::Solver {
                    column: Column::EtaTr,
                    one_minus: false,
                    dashed: false,
                },
            ],
            layout: Layout::Lines { x: 0 },
        },
        "fig8" => FigureSpec {
            title: "bounds on the data processing range of amplitude damping",
            params: &["eta"],
            points: unit_with_half.iter().map(|&eta| vec![eta]).collect(),
            channel: |x| gad(1.0, x[0]),
            values: vec![
                Value::solver(Alpha, true, false),
                Value::solver(AlphaH, true, true),
                Value::solver(RevAlphaH, true, true),
                Value::solver(RevAlpha, true, false),
            ],
            layout: Layout::Lines { x: 0 },
        },
        _ => return None,
    })
}

pub struct Figure {
    pub table: Table,
    pub plot: Plot,
    pub failures: usize,
}

fn evaluate_point(doeblin: &Doeblin, s: &FigureSpec, x: &[f64]) -> CliResult<Vec<(f64, Option<Evaluated>)>> {
    let n = (s.channel)(x)?;
    s.values
        .iter()
        .map(|v| match v {
            Value::Solver { column, one_minus, .. } => {
                let e = evaluate(doeblin, *column, &n)?;
                let shown = if e.not_applicable {
                    f64::NAN
                } else if *one_minus {
                    1.0 - e.value
                } else {
                    e.value
                };
                Ok((shown, Some(e)))
            }
            Value::Closed { f, .. } => Ok((f(x), None)),
        })
        .collect()
}

pub fn build(doeblin: &Doeblin, which: &str) -> CliResult<Figure> {
    let s = spec(which).ok_or_else(|| {
        CliError::Usage(format!("unknown figure {which:?}; expected one of: {}, all", FIGURES.join(", ")))
    })?;
    let results: Vec<Vec<(f64, Option<Evaluated>)>> = s
        .points
        .par_iter()
        .map(|x| evaluate_point(doeblin, &s, x))
        .collect::<CliResult<_>>()?;

    let mut header: Vec<String> = s.params.iter().map(|p| p.to_string()).collect();
    for v in &s.values {
        header.push(v.name());
        if let Value::Solver { column, .. } = v {
            if column.has_status() {
                header.push(format!("{}_status", column.name()));
            }
        }
    }
    let mut table = Table::new(header);
    let mut failures = 0;
    for (x, r) in s.points.iter().zip(&results) {
        let mut cells: Vec<Cell> = x.iter().map(|&v| Cell::Num(v)).collect();
        for (shown, e) in r {
            match e {
                Some(e) if e.not_applicable => cells.push(Cell::NotPpt),
                _ => cells.push(Cell::Num(*shown)),
            }
            if let Some(e) = e {
                if !e.is_ok() {
                    failures += 1;
                }
                if let Some(st) = e.status {
                    cells.push(Cell::Text(st.as_str().to_string()));
                }
            }
        }
        table.rows.push(cells);
    }

    let series = match s.layout {
        Layout::Lines { x } => s
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| Series {
                label: v.label(),
                points: s.points.iter().zip(&results).map(|(p, r)| (p[x], r[k].0)).collect(),
                dashed: v.dashed(),
            })
            .collect(),
        Layout::Slices { x, group, keep } => {
            let mut groups: Vec<f64> = Vec::new();
            for p in &s.points {
                if keep(p[group]) && !groups.contains(&p[group]) {
                    groups.push(p[group]);
                }
            }
            let mut series = Vec::new();
            for g in groups {
                for (k, v) in s.values.iter().enumerate() {
                    series.push(Series {
                        label: format!("{}, {} = {}", v.label(), s.params[group], g),
                        points: s
                            .points
                            .iter()
                            .zip(&results)
                            .filter(|(p, _)| p[group] == g)
                            .map(|(p, r)| (p[x], r[k].0))
                            .collect(),
                        dashed: v.dashed(),
                    });
                }
            }
            series
        }
    };
    let x_label = match s.layout {
        Layout::Lines { x } | Layout::Slices { x, .. } => s.params[x].to_string(),
    };
    Ok(Figure {
        table,
        plot: Plot {
            title: s.title.to_string(),
            x_label,
            y_label: "value".into(),
            series,
        },
        failures,
    })
}

pub fn run(doeblin: &Doeblin, which: &str, outdir: &Path, svg: bool) -> CliResult<()> {
    let names: Vec<&str> = if which == "all" { FIGURES.to_vec() } else { vec![which] };
    std::fs::create_dir_all(outdir).map_err(|e| CliError::Io(format!("{}: {e}", outdir.display())))?;
    let mut failures = 0;
    for name in names {
        let fig = build(doeblin, name)?;
        fig.table.write_path(&outdir.join(format!("{name}.csv")))?;
        if svg {
            write_text(&outdir.join(format!("{name}.svg")), &fig.plot.render())?;
        }
        eprintln!("{name}: {} rows", fig.table.rows.len());
        failures += fig.failures;
    }
    if failures > 0 {
        return Err(CliError::Solver(format!("{failures} value(s) did not reach optimality")));
    }
    Ok(())
}
