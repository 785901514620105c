//! `pnd`, `wigner`, `q-sweep` and `figure`.

use std::fs;

use photon_cycle::figures::{figure, sweep_points, sweep_spec, PanelContent};
use photon_cycle::{
    mandel_q, mandel_q_closed, pnd, wigner_grid_for_state, Family, GridParams, OpSequence, Prepared, StateSpec,
    VERSION,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{check_tail_tol, FigureArgs, PndArgs, SweepArgs, SweepRange, WignerArgs};
use crate::output::{emit, io_error, Cell, Table};
use crate::CliError;

type Meta = Vec<(&'static str, Value)>;

fn spec_meta(spec: &StateSpec) -> Meta {
    let mut meta = vec![("family", json!(spec.family().label()))];
    match spec {
        StateSpec::Thermal { nbar } => meta.push(("nbar", json!(nbar))),
        StateSpec::EvenCoherent { alpha } => {
            meta.push(("alpha_re", json!(alpha.re)));
            meta.push(("alpha_im", json!(alpha.im)));
        }
    }
    meta
}

fn seq_meta(seq: OpSequence) -> Meta {
    vec![("order", json!(seq.order.label())), ("p", json!(seq.p)), ("q", json!(seq.q))]
}

fn grid_meta(grid: &GridParams) -> Meta {
    vec![
        ("grid_re_min", json!(grid.re_min)),
        ("grid_re_max", json!(grid.re_max)),
        ("grid_im_min", json!(grid.im_min)),
        ("grid_im_max", json!(grid.im_max)),
        ("grid_points", json!(grid.points_per_axis)),
    ]
}

fn cutoff_meta(prepared: &Prepared) -> Meta {
    vec![
        ("seed_cutoff", json!(prepared.seed_cutoff)),
        ("cutoff", json!(prepared.cutoff())),
    ]
}

/// Photon-number distribution for `n = 0..=cutoff`.
pub fn pnd_table(spec: StateSpec, seq: OpSequence, tail_tol: f64) -> Result<(Table, Meta), CliError> {
    let prepared = Prepared::new(spec, seq, tail_tol)?;
    let mut table = Table::new(vec!["n", "probability"]);
    for (n, p) in pnd(&prepared.state).into_iter().enumerate() {
        table.rows.push(vec![Cell::Int(n as u64), Cell::Num(p)]);
    }
    Ok((table, cutoff_meta(&prepared)))
}

/// Wigner grid, imaginary part in the outer loop.
pub fn wigner_table(spec: StateSpec, seq: OpSequence, grid: GridParams, tail_tol: f64) -> Result<(Table, Meta), CliError> {
    let prepared = Prepared::new(spec, seq, tail_tol)?;
    let w = wigner_grid_for_state(&prepared.state, grid)?;
    let mut table = Table::new(vec!["re", "im", "w"]);
    for (idx, value) in w.values.iter().enumerate() {
        let pt = grid.point(idx);
        table.rows.push(vec![Cell::Num(pt.beta.re), Cell::Num(pt.beta.im), Cell::Num(*value)]);
    }
    Ok((table, cutoff_meta(&prepared)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub x: f64,
    pub q: f64,
    pub q_closed: Option<f64>,
    pub cutoff: usize,
}

/// Oracle `Q` at each sweep point, with the closed form where it evaluates.
pub fn sweep(family: Family, seq: OpSequence, range: SweepRange, tail_tol: f64) -> Result<Vec<SweepPoint>, CliError> {
    sweep_points(range.min, range.max, range.points)
        .into_par_iter()
        .map(|x| {
            let spec = sweep_spec(family, x).map_err(|e| CliError::Usage(e.to_string()))?;
            let prepared = Prepared::new(spec, seq, tail_tol)?;
            let q = mandel_q(&prepared.state)?.q;
            Ok(SweepPoint {
                x,
                q,
                q_closed: mandel_q_closed(&spec, seq).ok(),
                cutoff: prepared.cutoff(),
            })
        })
        .collect()
}

fn closed_cell(v: Option<f64>) -> Cell {
    v.map_or(Cell::Empty, Cell::Num)
}

pub fn run_pnd(args: &PndArgs) -> Result<(), CliError> {
    args.output.check()?;
    let spec = args.state.spec()?;
    let (table, _) = pnd_table(spec, args.state.sequence.seq(), args.output.tail_tol)?;
    emit(&table.render(args.output.format), args.output.out.as_deref())
}

pub fn run_wigner(args: &WignerArgs) -> Result<(), CliError> {
    args.output.check()?;
    let spec = args.state.spec()?;
    let grid = args.grid.resolve(GridParams::default())?;
    let (table, _) = wigner_table(spec, args.state.sequence.seq(), grid, args.output.tail_tol)?;
    emit(&table.render(args.output.format), args.output.out.as_deref())
}

pub fn run_q_sweep(args: &SweepArgs) -> Result<(), CliError> {
    args.output.check()?;
    let family = args.sequence.family.into();
    let range = args.range.resolve(SweepRange::default_for(family))?;
    let points = sweep(family, args.sequence.seq(), range, args.output.tail_tol)?;
    let with_closed = points.iter().any(|p| p.q_closed.is_some());
    let mut table = Table::new(if with_closed { vec!["x", "q", "q_closed"] } else { vec!["x", "q"] });
    for p in points {
        let mut row = vec![Cell::Num(p.x), Cell::Num(p.q)];
        if with_closed {
            row.push(closed_cell(p.q_closed));
        }
        table.rows.push(row);
    }
    emit(&table.render(args.output.format), args.output.out.as_deref())
}

/// Curve label such as `sa-3-1`.
pub fn curve_label(seq: OpSequence) -> String {
    format!("{}-{}-{}", seq.order.label(), seq.p, seq.q)
}

fn panel_output(content: &PanelContent, args: &FigureArgs) -> Result<(Table, Meta), CliError> {
    match content {
        PanelContent::Pnd { spec, seq } => {
            let (table, mut meta) = pnd_table(*spec, *seq, args.tail_tol)?;
            meta.splice(0..0, [("kind", json!("pnd"))].into_iter().chain(spec_meta(spec)).chain(seq_meta(*seq)));
            Ok((table, meta))
        }
        PanelContent::Wigner { spec, seq, grid } => {
            let grid = args.grid.resolve(*grid)?;
            let (table, mut meta) = wigner_table(*spec, *seq, grid, args.tail_tol)?;
            meta.splice(
                0..0,
                [("kind", json!("wigner"))]
                    .into_iter()
                    .chain(spec_meta(spec))
                    .chain(seq_meta(*seq))
                    .chain(grid_meta(&grid)),
            );
            Ok((table, meta))
        }
        PanelContent::QSweep { family, curves, x_min, x_max, points } => {
            let range = args.range.resolve(SweepRange {
                min: *x_min,
                max: *x_max,
                points: *points,
            })?;
            let mut table = Table::new(vec!["curve", "x", "q", "q_closed"]);
            let mut cutoff_max = 0;
            for seq in curves {
                for p in sweep(*family, *seq, range, args.tail_tol)? {
                    cutoff_max = cutoff_max.max(p.cutoff);
                    table.rows.push(vec![
                        Cell::Text(curve_label(*seq)),
                        Cell::Num(p.x),
                        Cell::Num(p.q),
                        closed_cell(p.q_closed),
                    ]);
                }
            }
            let labels: Vec<String> = curves.iter().map(|s| curve_label(*s)).collect();
            let meta = vec![
                ("kind", json!("q-sweep")),
                ("family", json!(family.label())),
                ("x", json!(if *family == Family::Thermal { "nbar" } else { "abs_alpha" })),
                ("curves", json!(labels.join(";"))),
                ("sweep_min", json!(range.min)),
                ("sweep_max", json!(range.max)),
                ("sweep_points", json!(range.points)),
                ("cutoff_max", json!(cutoff_max)),
            ];
            Ok((table, meta))
        }
    }
}

/// Writes every panel of the figure plus `manifest.json` into the output
/// directory.
pub fn run_figure(args: &FigureArgs) -> Result<(), CliError> {
    check_tail_tol(args.tail_tol)?;
    let panels = figure(args.id).map_err(|e| CliError::Usage(e.to_string()))?;
    let outputs: Vec<(Table, Meta)> = panels
        .par_iter()
        .map(|panel| panel_output(&panel.content, args))
        .collect::<Result<_, _>>()?;
    fs::create_dir_all(&args.out).map_err(|e| io_error(&args.out, e))?;
    let mut manifest = Map::new();
    manifest.insert("figure".into(), json!(args.id));
    manifest.insert("library_version".into(), json!(VERSION));
    manifest.insert("tail_tol".into(), json!(args.tail_tol));
    manifest.insert("format".into(), json!(args.format.extension()));
    for (panel, (table, meta)) in panels.iter().zip(outputs) {
        let file = format!("{}.{}", panel.name(), args.format.extension());
        emit(&table.render(args.format), Some(&args.out.join(&file)))?;
        manifest.insert(format!("{}.file", panel.name()), json!(file));
        for (key, value) in meta {
            manifest.insert(format!("{}.{key}", panel.name()), value);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(manifest)).expect("manifest serializes");
    text.push('\n');
    emit(&text, Some(&args.out.join("manifest.json")))
}
