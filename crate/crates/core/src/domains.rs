//! Hyperbolic densities on the unit disk, the shifted disks `Omega_gamma`, and
//! domains given by a conformal map onto the disk, plus the circle integral
//! `I(r) = r^2 * mean_theta lambda^{2 alpha}(r e^{i theta})`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Points closer than this to the boundary are rejected.
pub const BOUNDARY_GUARD: f64 = 1e-12;

pub const QUADRATURE_MIN_NODES: usize = 64;
pub const QUADRATURE_MAX_NODES: usize = 1 << 20;
pub const QUADRATURE_TOL: f64 = 1e-10;

/// A conformal map of a domain onto the unit disk, given by its Taylor series.
///
/// Only the disk `|z| < sample_radius` is ever sampled; the series is trusted there.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMap {
    map: PowerSeries,
    derivative: PowerSeries,
    sample_radius: f64,
}

impl ConformalMap {
    pub fn new(map: PowerSeries, sample_radius: f64) -> Result<Self> {
        if !(sample_radius > 0.0 && sample_radius.is_finite()) {
            return Err(Error::param(format!("sample radius {sample_radius} must be positive")));
        }
        let derivative = map.derivative();
        Ok(Self { map, derivative, sample_radius })
    }

    pub fn map(&self) -> &PowerSeries {
        &self.map
    }

    pub fn sample_radius(&self) -> f64 {
        self.sample_radius
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    UnitDisk,
    ShiftedDisk { gamma: f64 },
    Conformal(ConformalMap),
}

impl DomainSpec {
    pub fn shifted(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(DomainSpec::ShiftedDisk { gamma })
    }

    /// Shift parameter when the domain is a disk of the `Omega_gamma` family (`0` for `D`).
    pub fn gamma(&self) -> Option<f64> {
        match self {
            DomainSpec::UnitDisk => Some(0.0),
            DomainSpec::ShiftedDisk { gamma } => Some(*gamma),
            DomainSpec::Conformal(_) => None,
        }
    }

    /// Disk on which the domain is sampled, as `(center, radius)`.
    pub fn sampling_disk(&self) -> (Complex64, f64) {
        match self {
            DomainSpec::UnitDisk => (Complex64::new(0.0, 0.0), 1.0),
            DomainSpec::ShiftedDisk { gamma } => {
                (Complex64::new(-gamma / (1.0 - gamma), 0.0), 1.0 / (1.0 - gamma))
            }
            DomainSpec::Conformal(c) => (Complex64::new(0.0, 0.0), c.sample_radius),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DomainSpec::UnitDisk => "unit_disk".to_string(),
            DomainSpec::ShiftedDisk { gamma } => format!("shifted_disk(gamma={gamma})"),
            DomainSpec::Conformal(c) => format!("conformal(order={})", c.map.order()),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::ShiftedDisk { gamma } => check_gamma(*gamma),
            _ => Ok(()),
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param(format!("gamma = {gamma} outside [0, 1)")));
    }
    Ok(())
}

/// `scale / (1 - |u|^2)` with the difference of squares factored; `u` must lie in the disk.
fn disk_density(scale: f64, u: Complex64, z: Complex64) -> Result<f64> {
    let s = u.norm();
    if 1.0 - s < BOUNDARY_GUARD {
        return Err(Error::domain(format!("z = {z} is on or outside the boundary")));
    }
    Ok(scale / ((1.0 - s) * (1.0 + s)))
}

/// Hyperbolic density `lambda_Omega(z)`.
pub fn hyperbolic_density(domain: &DomainSpec, z: Complex64) -> Result<f64> {
    match domain {
        DomainSpec::UnitDisk => disk_density(1.0, z, z),
        DomainSpec::ShiftedDisk { gamma } => {
            check_gamma(*gamma)?;
            let c = 1.0 - gamma;
            disk_density(c, z * c + gamma, z)
        }
        DomainSpec::Conformal(m) => {
            if z.norm() >= m.sample_radius {
                return Err(Error::domain(format!(
                    "z = {z} outside the sampled disk of radius {}",
                    m.sample_radius
                )));
            }
            let w = m.map.eval(z);
            let dw = m.derivative.eval(z).norm();
            if dw == 0.0 {
                return Err(Error::domain(format!("map derivative vanishes at z = {z}")));
            }
            disk_density(dw, w, z)
        }
    }
}

/// Pairwise summation in fixed order; the result depends only on the input sequence.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `I(r) = (r / 2 pi) * integral over |z| = r of lambda^{2 alpha} |dz|` by the periodic trapezoid rule.
///
/// Node counts double from 64 until two successive values agree to `tol` relatively.
/// `alpha = 0` is accepted and gives `r^2`.
pub fn circle_integral_i(domain: &DomainSpec, r: f64, alpha: f64, tol: f64) -> Result<f64> {
    domain.validate()?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(format!("radius {r} outside (0, 1)")));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::param(format!("alpha = {alpha} must be nonnegative")));
    }
    if !(tol > 0.0) {
        return Err(Error::param(format!("tolerance {tol} must be positive")));
    }
    let exponent = 2.0 * alpha;
    let sample = |theta: f64| -> Result<f64> {
        let z = Complex64::from_polar(r, theta);
        let v = hyperbolic_density(domain, z)?.powf(exponent);
        if !v.is_finite() {
            return Err(Error::Evaluation { point: z, value: v });
        }
        Ok(v)
    };
    // Node j of an n-point rule sits at 2 pi j / n; each doubling adds the odd nodes.
    let mut n = QUADRATURE_MIN_NODES;
    let first: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| sample(std::f64::consts::TAU * j as f64 / n as f64))
        .collect::<Result<_>>()?;
    let mut sum = pairwise_sum(&first);
    let mut value = r * r * sum / n as f64;
    while n < QUADRATURE_MAX_NODES {
        let m = 2 * n;
        let fresh: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|j| sample(std::f64::consts::TAU * (2 * j + 1) as f64 / m as f64))
            .collect::<Result<_>>()?;
        sum += pairwise_sum(&fresh);
        n = m;
        let next = r * r * sum / n as f64;
        if (next - value).abs() <= tol * next.abs() {
            return Ok(next);
        }
        if n == QUADRATURE_MAX_NODES {
            return Err(Error::Quadrature { last: next, previous: value });
        }
        value = next;
    }
    Err(Error::Quadrature { last: value, previous: value })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonReport {
    /// Largest `(lambda_outer - lambda_inner) / lambda_inner` seen; `<= 0` when the ordering holds.
    pub max_violation: f64,
    pub worst_point: (f64, f64),
    pub samples: usize,
}

/// Samples the inner domain and measures how far `lambda_outer <= lambda_inner` is from failing.
///
/// Supported pairs are disks of the `Omega_gamma` family (the unit disk being `gamma = 0`)
/// with the inner shift no larger than the outer one.
pub fn comparison_check(
    inner: &DomainSpec,
    outer: &DomainSpec,
    samples: usize,
    seed: u64,
) -> Result<ComparisonReport> {
    let (g_in, g_out) = match (inner.gamma(), outer.gamma()) {
        (Some(a), Some(b)) if a <= b => (a, b),
        _ => {
            return Err(Error::UnsupportedComparison(format!(
                "{} inside {}",
                inner.label(),
                outer.label()
            )))
        }
    };
    check_gamma(g_in)?;
    check_gamma(g_out)?;
    if samples == 0 {
        return Err(Error::param("comparison needs at least one sample"));
    }
    let (center, radius) = inner.sampling_disk();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ComparisonReport {
        max_violation: f64::NEG_INFINITY,
        worst_point: (0.0, 0.0),
        samples,
    };
    let mut taken = 0;
    while taken < samples {
        let rho = radius * rng.random::<f64>().sqrt();
        let theta = std::f64::consts::TAU * rng.random::<f64>();
        let z = center + Complex64::from_polar(rho, theta);
        let lam_in = match hyperbolic_density(inner, z) {
            Ok(v) => v,
            Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        };
        let lam_out = hyperbolic_density(outer, z)?;
        let violation = (lam_out - lam_in) / lam_in;
        if violation > report.max_violation {
            report.max_violation = violation;
            report.worst_point = (z.re, z.im);
        }
        taken += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn density_spot_values() {
        assert_eq!(hyperbolic_density(&DomainSpec::UnitDisk, z(0.0, 0.0)).unwrap(), 1.0);
        let v = hyperbolic_density(&DomainSpec::shifted(0.5).unwrap(), z(0.0, 0.0)).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        assert!(hyperbolic_density(&DomainSpec::UnitDisk, z(1.0, 0.0)).is_err());
        assert!(hyperbolic_density(&DomainSpec::UnitDisk, z(0.0, 1.0 - 1e-13)).is_err());
        // -1.5 lies in Omega_0.5 (center -1, radius 2) but not in D
        assert!(hyperbolic_density(&DomainSpec::shifted(0.5).unwrap(), z(-1.5, 0.0)).is_ok());
        assert!(DomainSpec::shifted(1.0).is_err());
    }

    #[test]
    fn conformal_affine_matches_shifted() {
        let gamma = 0.35;
        let map = PowerSeries::from_real(&[gamma, 1.0 - gamma]).unwrap();
        let conf = DomainSpec::Conformal(ConformalMap::new(map, 1.0).unwrap());
        let shifted = DomainSpec::shifted(gamma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = Complex64::from_polar(0.99 * rng.random::<f64>(), 6.3 * rng.random::<f64>());
            let a = hyperbolic_density(&conf, p).unwrap();
            let b = hyperbolic_density(&shifted, p).unwrap();
            assert!((a - b).abs() <= 1e-12 * b, "{p}: {a} vs {b}");
        }
    }

    #[test]
    fn conformal_rejects_critical_points() {
        let map = PowerSeries::from_real(&[0.0, 0.0, 0.5]).unwrap();
        let conf = DomainSpec::Conformal(ConformalMap::new(map, 1.0).unwrap());
        assert!(matches!(hyperbolic_density(&conf, z(0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn circle_integral_unit_disk_closed_form() {
        for &alpha in &[0.5, 1.0, 2.0] {
            for &r in &[0.1, 0.5, 0.9] {
                let q = circle_integral_i(&DomainSpec::UnitDisk, r, alpha, QUADRATURE_TOL).unwrap();
                let exact = r * r / (1.0 - r * r).powf(2.0 * alpha);
                assert!(((q - exact) / exact).abs() < 1e-10, "alpha={alpha} r={r}");
            }
        }
        let tiny = circle_integral_i(&DomainSpec::UnitDisk, 1e-6, 1.0, QUADRATURE_TOL).unwrap();
        assert!(tiny < 1e-11);
    }

    #[test]
    fn circle_integral_shifted_sandwich() {
        let (gamma, r) = (0.4, 0.5);
        let q = circle_integral_i(&DomainSpec::shifted(gamma).unwrap(), r, 1.0, QUADRATURE_TOL)
            .unwrap();
        let u = (1.0 - gamma) * r + gamma;
        let upper = r * r * ((1.0 - gamma) / (1.0 - u * u)).powi(2);
        let lower = r * r * (1.0 - gamma) * (1.0 - gamma);
        assert!(lower <= q && q <= upper, "{lower} <= {q} <= {upper}");
    }

    #[test]
    fn comparison_examples() {
        let unit = DomainSpec::UnitDisk;
        let s03 = DomainSpec::shifted(0.3).unwrap();
        let rep = comparison_check(&unit, &s03, 2000, 1).unwrap();
        assert!(rep.max_violation <= 1e-12);
        let same = comparison_check(&s03, &s03, 500, 2).unwrap();
        assert_eq!(same.max_violation, 0.0);
        assert!(matches!(
            comparison_check(&s03, &unit, 10, 3),
            Err(Error::UnsupportedComparison(_))
        ));
        let a = hyperbolic_density(&DomainSpec::shifted(0.5).unwrap(), z(0.0, 0.0)).unwrap();
        let b = hyperbolic_density(&DomainSpec::shifted(0.1).unwrap(), z(0.0, 0.0)).unwrap();
        assert!((a - 1.0 / 1.5).abs() < 1e-15 && (b - 1.0 / 1.1).abs() < 1e-15 && a <= b);
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
    }
}
