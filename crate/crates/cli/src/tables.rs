use std::fs;
use std::path::Path;

use bloch_bohr::radii;
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::emit::{self, CliError};
use crate::reference::{self, TableRef};
use crate::{Format, GlobalOpts};

const DECIMALS: usize = 6;

#[allow(non_camel_case_types)]
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
#[value(rename_all = "verbatim")]
pub enum TableId {
    T1_classical,
    T2_T3_bloch_bohr,
    T4_upper_R,
    T5_T6_p_radius,
    T7_sense_preserving,
    all,
}

pub const ALL_TABLES: [TableId; 5] = [
    TableId::T1_classical,
    TableId::T2_T3_bloch_bohr,
    TableId::T4_upper_R,
    TableId::T5_T6_p_radius,
    TableId::T7_sense_preserving,
];

#[derive(Args, Debug)]
pub struct TablesArgs {
    pub table: TableId,
    /// Comma-separated gamma grid; defaults to the published one.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub gammas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub alphas: Option<Vec<f64>>,
    #[arg(long = "p", value_delimiter = ',', num_args = 0..)]
    pub ps: Option<Vec<f64>>,
    #[arg(long = "d1", value_delimiter = ',', num_args = 0..)]
    pub d1s: Option<Vec<f64>>,
}

impl TableId {
    pub fn name(self) -> &'static str {
        match self {
            TableId::T1_classical => "T1_classical",
            TableId::T2_T3_bloch_bohr => "T2_T3_bloch_bohr",
            TableId::T4_upper_R => "T4_upper_R",
            TableId::T5_T6_p_radius => "T5_T6_p_radius",
            TableId::T7_sense_preserving => "T7_sense_preserving",
            TableId::all => "all",
        }
    }

    fn columns(self) -> &'static [&'static str] {
        match self {
            TableId::T1_classical => &["gamma", "rho_gamma"],
            TableId::T2_T3_bloch_bohr => &["gamma", "alpha", "radius"],
            TableId::T4_upper_R => &["gamma", "alpha", "R"],
            TableId::T5_T6_p_radius => &["gamma", "alpha", "p", "radius"],
            TableId::T7_sense_preserving => &["gamma", "alpha", "p", "d1", "radius"],
            TableId::all => &[],
        }
    }
}

const PUBLISHED_GAMMAS: [f64; 4] = [0.1, 0.4, 0.7, 0.9];

/// Parameter grid for one table: every combination, gamma outermost.
#[derive(Debug, Clone)]
pub struct TableSpec {
    pub id: TableId,
    pub gammas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub ps: Vec<f64>,
    pub d1s: Vec<f64>,
}

impl TableSpec {
    pub fn published(id: TableId) -> Self {
        let g = PUBLISHED_GAMMAS.to_vec();
        let a = vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
        match id {
            TableId::T1_classical => Self::new(id, (0..10).map(|i| i as f64 / 10.0).collect(), vec![], vec![], vec![]),
            TableId::T2_T3_bloch_bohr => Self::new(id, g, a, vec![], vec![]),
            TableId::T4_upper_R => Self::new(id, g, vec![1.5, 2.0, 2.5, 3.0], vec![], vec![]),
            TableId::T5_T6_p_radius => Self::new(id, g, a, vec![1.0], vec![]),
            TableId::T7_sense_preserving => {
                Self::new(id, g, vec![0.0, 0.5, 1.0, 2.0, 2.5, 3.0], vec![1.0], vec![0.0])
            }
            TableId::all => unreachable!("`all` expands to the individual tables"),
        }
    }

    fn new(id: TableId, gammas: Vec<f64>, alphas: Vec<f64>, ps: Vec<f64>, d1s: Vec<f64>) -> Self {
        TableSpec { id, gammas, alphas, ps, d1s }
    }

    fn with_overrides(mut self, args: &TablesArgs) -> Result<Self, CliError> {
        let uses = match self.id {
            TableId::T1_classical => [false, false, false],
            TableId::T2_T3_bloch_bohr | TableId::T4_upper_R => [true, false, false],
            TableId::T5_T6_p_radius => [true, true, false],
            _ => [true, true, true],
        };
        let name = self.id.name();
        let set = |slot: &mut Vec<f64>, v: &Option<Vec<f64>>, used: bool, flag: &str| {
            match (v, used) {
                (Some(_), false) => Err(CliError::Usage(format!("{flag} does not apply to {name}"))),
                (Some(v), true) => {
                    *slot = v.clone();
                    Ok(())
                }
                (None, _) => Ok(()),
            }
        };
        if let Some(g) = &args.gammas {
            self.gammas = g.clone();
        }
        set(&mut self.alphas, &args.alphas, uses[0], "--alphas")?;
        set(&mut self.ps, &args.ps, uses[1], "--p")?;
        set(&mut self.d1s, &args.d1s, uses[2], "--d1")?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), CliError> {
        let grids = [
            ("gamma", &self.gammas, true),
            ("alpha", &self.alphas, self.id != TableId::T1_classical),
            ("p", &self.ps, matches!(self.id, TableId::T5_T6_p_radius | TableId::T7_sense_preserving)),
            ("d1", &self.d1s, self.id == TableId::T7_sense_preserving),
        ];
        for (name, grid, used) in grids {
            if used && grid.is_empty() {
                return Err(CliError::Usage(format!("empty {name} grid for {}", self.id.name())));
            }
            if grid.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Usage(format!("non-finite value in {name} grid")));
            }
        }
        Ok(())
    }

    /// Parameter tuples in output order.
    pub fn cells(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for &g in &self.gammas {
            match self.id {
                TableId::T1_classical => out.push(vec![g]),
                TableId::T2_T3_bloch_bohr | TableId::T4_upper_R => {
                    out.extend(self.alphas.iter().map(|&a| vec![g, a]))
                }
                TableId::T5_T6_p_radius => {
                    for &a in &self.alphas {
                        out.extend(self.ps.iter().map(|&p| vec![g, a, p]));
                    }
                }
                TableId::T7_sense_preserving => {
                    for &a in &self.alphas {
                        for &p in &self.ps {
                            out.extend(self.d1s.iter().map(|&d| vec![g, a, p, d]));
                        }
                    }
                }
                TableId::all => {}
            }
        }
        out
    }
}

fn solve_cell(id: TableId, c: &[f64]) -> bloch_bohr::Result<f64> {
    match id {
        TableId::T1_classical => radii::classical_bohr_radius(c[0]),
        TableId::T2_T3_bloch_bohr => Ok(radii::bloch_bohr_radius_shifted(c[0], c[1])?.radius),
        TableId::T4_upper_R => radii::upper_bound_r(c[0], c[1]),
        TableId::T5_T6_p_radius => Ok(radii::p_bloch_bohr_radius(c[0], c[1], c[2])?.radius),
        TableId::T7_sense_preserving => Ok(radii::sense_preserving_radius(c[0], c[1], c[2], c[3])?.radius),
        TableId::all => unreachable!(),
    }
}

fn describe(id: TableId, c: &[f64]) -> String {
    let cols = id.columns();
    let parts: Vec<String> = c.iter().zip(cols).map(|(v, n)| format!("{n}={v}")).collect();
    format!("{} [{}]", id.name(), parts.join(", "))
}

/// Rows `params ++ [value]`, computed in parallel and collected in grid order.
pub fn compute(spec: &TableSpec) -> Result<Vec<Vec<f64>>, CliError> {
    spec.cells()
        .into_par_iter()
        .map(|c| match solve_cell(spec.id, &c) {
            Ok(v) => {
                let mut row = c;
                row.push(v);
                Ok(row)
            }
            Err(e) => {
                eprintln!("failing cell: {}", describe(spec.id, &c));
                Err(CliError::Core(e))
            }
        })
        .collect()
}

#[derive(Serialize)]
struct JsonTable<'a> {
    table: &'a str,
    columns: &'a [&'a str],
    rows: &'a [Vec<f64>],
}

fn write(spec: &TableSpec, rows: &[Vec<f64>], path: Option<&Path>, format: Format) -> Result<(), CliError> {
    match format {
        Format::Csv => emit::write_csv(path, spec.id.columns(), rows, DECIMALS),
        Format::Json => emit::write_json(path, &JsonTable { table: spec.id.name(), columns: spec.id.columns(), rows }),
    }
}

/// Per-cell comparison against the embedded values; returns the number of mismatches.
fn check(spec: &TableSpec, rows: &[Vec<f64>], table: &TableRef, tol: f64) -> usize {
    let mut bad = 0;
    let mut compared = 0;
    for row in rows {
        let (params, value) = row.split_at(row.len() - 1);
        let Some(cell) = table.lookup(params) else { continue };
        compared += 1;
        let shown = table.printed(value[0]);
        let diff = (shown - cell.value).abs();
        let ok = diff <= tol;
        if !ok {
            bad += 1;
        }
        eprintln!(
            "{} {}: computed {:.6} reference {:.6} diff {:.1e}",
            if ok { "ok      " } else { "MISMATCH" },
            describe(spec.id, params),
            value[0],
            cell.value,
            diff
        );
    }
    eprintln!("{}: {compared} reference cells compared, {bad} mismatches (tol {tol:e})", spec.id.name());
    bad
}

pub fn run(args: &TablesArgs, g: &GlobalOpts) -> Result<(), CliError> {
    let ids: Vec<TableId> = if args.table == TableId::all { ALL_TABLES.to_vec() } else { vec![args.table] };
    if args.table == TableId::all {
        if args.gammas.is_some() || args.alphas.is_some() || args.ps.is_some() || args.d1s.is_some() {
            return Err(CliError::Usage("grid overrides need a single table".into()));
        }
        let Some(dir) = &g.out else {
            return Err(CliError::Usage("`tables all` needs --out <directory>".into()));
        };
        fs::create_dir_all(dir)?;
    }
    let refs = reference::load();
    let mut mismatches = 0;
    for id in ids {
        let spec = TableSpec::published(id).with_overrides(args)?;
        spec.validate()?;
        let rows = compute(&spec)?;
        let path = match (&g.out, args.table) {
            (Some(dir), TableId::all) => {
                let ext = if g.format == Format::Csv { "csv" } else { "json" };
                Some(dir.join(format!("{}.{ext}", id.name())))
            }
            (out, _) => out.clone(),
        };
        write(&spec, &rows, path.as_deref(), g.format)?;
        if g.check {
            mismatches += check(&spec, &rows, &refs[id.name()], g.tol);
        }
    }
    if mismatches > 0 {
        return Err(CliError::Check(format!("{mismatches} cells outside tolerance")));
    }
    Ok(())
}
