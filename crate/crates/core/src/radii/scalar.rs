//! Scan-then-bisect root finding and scan-then-golden-section minimization on an interval.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const ROOT_EPS: f64 = 1e-12;
pub const BISECT_WIDTH: f64 = 1e-14;
pub const DEFAULT_SCAN_POINTS: usize = 4096;
pub const MIN_SCAN_POINTS: usize = 64;
pub const GOLDEN_TOL: f64 = 1e-12;

/// The open unit interval with a guard of `ROOT_EPS` at both ends.
pub const UNIT_INTERVAL: (f64, f64) = (ROOT_EPS, 1.0 - ROOT_EPS);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub radius: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
    /// Sign changes seen on the whole scan grid.
    pub sign_changes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootOutcome {
    Found(Root),
    /// The scan saw no sign change; not an error in itself.
    NoSignChange { scanned: usize },
}

impl RootOutcome {
    pub fn root(self) -> Option<Root> {
        match self {
            RootOutcome::Found(r) => Some(r),
            RootOutcome::NoSignChange { .. } => None,
        }
    }
}

fn scan_grid(interval: (f64, f64), points: usize) -> Vec<f64> {
    let (a, b) = interval;
    (0..=points)
        .map(|i| if i == points { b } else { a + (b - a) * i as f64 / points as f64 })
        .collect()
}

fn finite_at(x: f64, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation { point: Complex64::new(x, 0.0), value: v })
    }
}

/// Smallest root of `f` on `interval` for an infallible `f`.
pub fn find_smallest_root<F>(f: F, interval: (f64, f64), scan_points: usize) -> Result<RootOutcome>
where
    F: Fn(f64) -> f64 + Sync,
{
    try_find_smallest_root(|x| Ok(f(x)), interval, scan_points)
}

/// Scans `scan_points + 1` uniform points for the first sign change, then bisects it to
/// width `1e-14`. Non-finite values anywhere on the scan are an evaluation error.
pub fn try_find_smallest_root<F>(
    f: F,
    interval: (f64, f64),
    scan_points: usize,
) -> Result<RootOutcome>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let (a, b) = interval;
    if !(a < b) {
        return Err(Error::param(format!("empty interval [{a}, {b}]")));
    }
    if scan_points < MIN_SCAN_POINTS {
        return Err(Error::param(format!("scan needs at least {MIN_SCAN_POINTS} points")));
    }
    let xs = scan_grid(interval, scan_points);
    let values: Vec<f64> = xs
        .par_iter()
        .map(|&x| f(x).and_then(|v| finite_at(x, v)))
        .collect::<Result<_>>()?;

    let sign_changes = values.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
        + values.iter().filter(|&&v| v == 0.0).count();
    let first = values
        .windows(2)
        .position(|w| w[0] == 0.0 || w[0] * w[1] < 0.0);
    let Some(i) = first else {
        if values[scan_points] == 0.0 {
            let x = xs[scan_points];
            return Ok(RootOutcome::Found(Root {
                radius: x,
                bracket: (xs[scan_points - 1], x),
                residual: 0.0,
                iterations: 0,
                sign_changes,
            }));
        }
        return Ok(RootOutcome::NoSignChange { scanned: scan_points + 1 });
    };
    if values[i] == 0.0 {
        let lo = if i > 0 { xs[i - 1] } else { xs[i] };
        return Ok(RootOutcome::Found(Root {
            radius: xs[i],
            bracket: (lo, xs[i + 1]),
            residual: 0.0,
            iterations: 0,
            sign_changes,
        }));
    }

    let (mut lo, mut hi) = (xs[i], xs[i + 1]);
    let mut f_lo = values[i];
    let mut iterations = 0;
    while hi - lo > BISECT_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = finite_at(mid, f(mid)?)?;
        iterations += 1;
        if f_mid == 0.0 {
            return Ok(RootOutcome::Found(Root {
                radius: mid,
                bracket: (lo, hi),
                residual: 0.0,
                iterations,
                sign_changes,
            }));
        }
        if f_mid * f_lo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    let radius = 0.5 * (lo + hi);
    let residual = finite_at(radius, f(radius)?)?;
    Ok(RootOutcome::Found(Root { radius, bracket: (lo, hi), residual, iterations, sign_changes }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub bracket: (f64, f64),
    pub evaluations: usize,
}

/// Minimum of `f` on `interval`: uniform scan, then golden section on the cell pair around
/// the best scan point until the bracket is narrower than `tol`.
///
/// `+inf` values are allowed (treated as large); NaN is an evaluation error.
pub fn minimize_scan_golden<F>(
    f: F,
    interval: (f64, f64),
    scan_points: usize,
    tol: f64,
) -> Result<Minimum>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let (a, b) = interval;
    if !(a < b) {
        return Err(Error::param(format!("empty interval [{a}, {b}]")));
    }
    if scan_points < 2 {
        return Err(Error::param("scan needs at least two points"));
    }
    let eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_nan() {
            return Err(Error::Evaluation { point: Complex64::new(x, 0.0), value: v });
        }
        Ok(v)
    };
    let xs = scan_grid(interval, scan_points);
    let values: Vec<f64> = xs.par_iter().map(|&x| eval(x)).collect::<Result<_>>()?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    let mut evaluations = values.len();
    let mut lo = xs[best.saturating_sub(1)];
    let mut hi = xs[(best + 1).min(scan_points)];
    let bracket = (lo, hi);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    evaluations += 2;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2)?;
        }
        evaluations += 1;
        if x1 >= x2 {
            break;
        }
    }
    let mut result = Minimum { x: xs[best], value: values[best], bracket, evaluations };
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v < result.value {
            result.x = x;
            result.value = v;
        }
    }
    Ok(result)
}
