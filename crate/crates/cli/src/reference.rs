use std::collections::BTreeMap;

use serde::Deserialize;

const EMBEDDED: &str = include_str!("../data/reference_values.toml");

/// Grid points are compared after rounding to this many decimals.
const KEY_DECIMALS: i32 = 9;

#[derive(Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Rounding {
    Round,
    Truncate4,
}

#[derive(Deserialize, Debug, Clone, Copy)]
pub struct Cell {
    pub gamma: f64,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub d1: Option<f64>,
    pub value: f64,
}

#[derive(Deserialize, Debug)]
pub struct TableRef {
    pub rounding: Rounding,
    pub cells: Vec<Cell>,
}

#[derive(Deserialize, Debug)]
struct File {
    #[allow(dead_code)]
    version: u32,
    #[serde(flatten)]
    tables: BTreeMap<String, TableRef>,
}

pub fn load() -> BTreeMap<String, TableRef> {
    toml::from_str::<File>(EMBEDDED).expect("embedded reference table parses").tables
}

fn key(x: f64) -> i64 {
    (x * 10f64.powi(KEY_DECIMALS)).round() as i64
}

impl Cell {
    /// Parameters in table column order (gamma, alpha, p, d1), skipping absent ones.
    pub fn params(&self) -> Vec<f64> {
        [Some(self.gamma), self.alpha, self.p, self.d1].into_iter().flatten().collect()
    }
}

impl TableRef {
    pub fn lookup(&self, params: &[f64]) -> Option<&Cell> {
        self.cells.iter().find(|c| {
            let ps = c.params();
            ps.len() == params.len() && ps.iter().zip(params).all(|(a, b)| key(*a) == key(*b))
        })
    }

    /// Value as it would be printed under this table's rounding convention.
    pub fn printed(&self, computed: f64) -> f64 {
        match self.rounding {
            Rounding::Round => computed,
            Rounding::Truncate4 => (computed * 1e4 + 1e-9).floor() / 1e4,
        }
    }
}
