use std::f64::consts::TAU;

use bloch_bohr::radii::{self, RadiusEquation};
use clap::{Args, ValueEnum};
use rayon::prelude::*;

use crate::emit::{self, CliError};
use crate::GlobalOpts;

pub const SAMPLES: usize = 999;
const DECIMALS: usize = 9;

#[allow(non_camel_case_types)]
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
#[value(rename_all = "verbatim")]
pub enum Figure {
    H_shifted,
    H1,
    H3,
    circles_Cgamma,
    rho_gamma,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    pub figure: Figure,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.4, 0.7, 0.9])]
    pub gammas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6])]
    pub alphas: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub d1: f64,
}

/// `0.001, 0.002, ..., 0.999`.
pub fn radius_grid() -> Vec<f64> {
    (1..=SAMPLES).map(|i| i as f64 / 1000.0).collect()
}

fn curves(args: &FigureArgs, make: impl Fn(f64, f64) -> RadiusEquation + Sync) -> Result<Vec<Vec<f64>>, CliError> {
    let rs = radius_grid();
    let mut blocks = Vec::new();
    for &g in &args.gammas {
        for &a in &args.alphas {
            let eq = make(g, a);
            eq.validate()?;
            blocks.push((g, a, eq));
        }
    }
    Ok(blocks
        .par_iter()
        .flat_map_iter(|&(g, a, eq)| {
            let rs = &rs;
            rs.iter().map(move |&r| match eq {
                RadiusEquation::Shifted { .. } => vec![g, a, r, eq.eval(r)],
                RadiusEquation::PRadius { p, .. } => vec![g, a, p, r, eq.eval(r)],
                RadiusEquation::SensePreserving { p, d1, .. } => vec![g, a, p, d1, r, eq.eval(r)],
                RadiusEquation::BlochType { .. } => unreachable!("no figure for this family"),
            })
        })
        .collect())
}

pub fn run(args: &FigureArgs, g: &GlobalOpts) -> Result<(), CliError> {
    if args.gammas.is_empty() || args.alphas.is_empty() {
        return Err(CliError::Usage("empty parameter grid".into()));
    }
    let (header, rows): (&[&str], Vec<Vec<f64>>) = match args.figure {
        Figure::H_shifted => (
            &["gamma", "alpha", "r", "H"],
            curves(args, |gamma, alpha| RadiusEquation::Shifted { gamma, alpha })?,
        ),
        Figure::H1 => (
            &["gamma", "alpha", "p", "r", "H1"],
            curves(args, |gamma, alpha| RadiusEquation::PRadius { gamma, alpha, p: args.p })?,
        ),
        Figure::H3 => (
            &["gamma", "alpha", "p", "d1", "r", "H3"],
            curves(args, |gamma, alpha| RadiusEquation::SensePreserving { gamma, alpha, p: args.p, d1: args.d1 })?,
        ),
        Figure::circles_Cgamma => {
            let mut rows = Vec::with_capacity(args.gammas.len() * SAMPLES);
            for &gamma in &args.gammas {
                if !(0.0..1.0).contains(&gamma) {
                    return Err(CliError::Usage(format!("gamma = {gamma} outside [0, 1)")));
                }
                let centre = -gamma / (1.0 - gamma);
                let radius = 1.0 / (1.0 - gamma);
                for k in 0..SAMPLES {
                    let t = TAU * k as f64 / SAMPLES as f64;
                    rows.push(vec![gamma, t, centre + radius * t.cos(), radius * t.sin()]);
                }
            }
            (&["gamma", "theta", "x", "y"], rows)
        }
        Figure::rho_gamma => {
            let rows = radius_grid()
                .into_iter()
                .map(|gamma| Ok(vec![gamma, radii::classical_bohr_radius(gamma)?]))
                .collect::<bloch_bohr::Result<Vec<_>>>()?;
            (&["gamma", "rho_gamma"], rows)
        }
    };
    emit::write_csv(g.out.as_deref(), header, &rows, DECIMALS)
}
