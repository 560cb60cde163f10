//! Bohr-type radii on the shifted disks: the classical radius, the integral criterion, the
//! `H`-family root equations and the closed-form upper bound `R_gamma(alpha)`.
//!
//! Every defining function below is positive near `r = 0` and the reported radius is its
//! smallest sign change on `(0, 1)`.

pub mod scalar;

use std::f64::consts::PI;

use serde::Serialize;

use crate::domains::{circle_integral_i, DomainSpec, QUADRATURE_TOL};
use crate::error::{Error, Result};
pub use scalar::{
    find_smallest_root, minimize_scan_golden, try_find_smallest_root, Minimum, Root, RootOutcome,
    DEFAULT_SCAN_POINTS, UNIT_INTERVAL,
};

/// Distance from `r = 1` at which the integral criterion stops and its hypothesis is probed.
pub const INTEGRAL_PROXY_GAP: f64 = 1e-4;
/// Scan resolution for the integral criterion, where each evaluation is a quadrature.
pub const INTEGRAL_SCAN_POINTS: usize = 256;

/// Target value `6 / pi^2` of the integral criterion.
pub fn integral_threshold() -> f64 {
    6.0 / (PI * PI)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusResult {
    pub radius: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
    pub equation_tag: String,
    pub sign_changes: usize,
    /// `I(1 - 1e-4)` for the integral criterion.
    pub hypothesis_proxy: Option<f64>,
}

/// `max(2^{2/p - 1}, 1)`.
pub fn k_p(p: f64) -> f64 {
    2f64.powf(2.0 / p - 1.0).max(1.0)
}

/// `(1 + gamma) / (3 + gamma)`.
pub fn classical_bohr_radius(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok((1.0 + gamma) / (3.0 + gamma))
}

/// Closed-form upper bound `R_gamma(alpha)`, defined for `alpha > 1`.
pub fn upper_bound_r(gamma: f64, alpha: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::param(format!("upper bound R needs alpha > 1, got {alpha}")));
    }
    let c = 1.0 - gamma;
    let inner = ((1.0 + gamma).powf(1.0 - alpha) + 2.0 * (alpha - 1.0)).powf(1.0 / (1.0 - alpha));
    Ok((-gamma + (1.0 - c * inner).sqrt()) / c)
}

/// The root equations of the `H` family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "equation", rename_all = "snake_case")]
pub enum RadiusEquation {
    /// `H_{gamma,alpha}`.
    Shifted { gamma: f64, alpha: f64 },
    /// `H_1`: the `pi^2` term carries `K_p`.
    PRadius { gamma: f64, alpha: f64, p: f64 },
    /// `H_2` with the dilatation bound `k` and `d = |g'(0)| / (k |h'(0)|)`.
    BlochType { gamma: f64, alpha: f64, p: f64, k: f64, d: f64 },
    /// `H_3` with `d1 = |g'(0)| / |h'(0)|`; for `p >= 2` this is `H_4`.
    SensePreserving { gamma: f64, alpha: f64, p: f64, d1: f64 },
}

impl RadiusEquation {
    pub fn tag(&self) -> &'static str {
        match self {
            RadiusEquation::Shifted { .. } => "H_shifted",
            RadiusEquation::PRadius { .. } => "H1_p_radius",
            RadiusEquation::BlochType { .. } => "H2_bloch_type",
            RadiusEquation::SensePreserving { p, .. } if *p >= 2.0 => "H4_sense_preserving",
            RadiusEquation::SensePreserving { .. } => "H3_sense_preserving",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (gamma, alpha) = self.gamma_alpha();
        check_gamma(gamma)?;
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::param(format!("alpha = {alpha} must be nonnegative")));
        }
        match *self {
            RadiusEquation::Shifted { .. } => {}
            RadiusEquation::PRadius { p, .. } => check_p(p)?,
            RadiusEquation::BlochType { p, k, d, .. } => {
                check_p(p)?;
                if !(k > 0.0 && k < 1.0) {
                    return Err(Error::param(format!("k = {k} outside (0, 1)")));
                }
                if !(0.0..=1.0).contains(&d) {
                    return Err(Error::param(format!("d = {d} outside [0, 1]")));
                }
            }
            RadiusEquation::SensePreserving { p, d1, .. } => {
                check_p(p)?;
                if !(0.0..1.0).contains(&d1) {
                    return Err(Error::param(format!("d1 = {d1} outside [0, 1)")));
                }
            }
        }
        Ok(())
    }

    fn gamma_alpha(&self) -> (f64, f64) {
        match *self {
            RadiusEquation::Shifted { gamma, alpha }
            | RadiusEquation::PRadius { gamma, alpha, .. }
            | RadiusEquation::BlochType { gamma, alpha, .. }
            | RadiusEquation::SensePreserving { gamma, alpha, .. } => (gamma, alpha),
        }
    }

    /// The defining function at `r` (no parameter checks).
    pub fn eval(&self, r: f64) -> f64 {
        let (gamma, alpha) = self.gamma_alpha();
        let c = 1.0 - gamma;
        let u = c * r + gamma;
        // 1 - u^2 = (1 - gamma)(1 - r)(1 + u)
        let a = (c * (1.0 - r) * (1.0 + u)).powf(2.0 * alpha);
        let tail = c.powf(2.0 * alpha) * PI * PI * r * r;
        match *self {
            RadiusEquation::Shifted { .. } => 6.0 * a - tail,
            RadiusEquation::PRadius { p, .. } => 6.0 * a - k_p(p) * tail,
            RadiusEquation::BlochType { p, k, d, .. } => {
                let s = 1.0 + d * r;
                let t = k * (r + d);
                6.0 * a * (s - t) * (s + t) - k_p(p) * (1.0 + k * k) * (1.0 + d) * (1.0 + d) * tail
            }
            RadiusEquation::SensePreserving { p, d1, .. } => {
                // (1 + d1 r)^2 - (r + d1)^2 = (1 - r^2)(1 - d1^2)
                let q = (1.0 - r) * (1.0 + r) * (1.0 - d1) * (1.0 + d1);
                6.0 * a * q - 2.0 * k_p(p) * (1.0 + d1) * (1.0 + d1) * tail
            }
        }
    }

    pub fn solve(&self) -> Result<RadiusResult> {
        self.validate()?;
        let outcome = find_smallest_root(|r| self.eval(r), UNIT_INTERVAL, DEFAULT_SCAN_POINTS)?;
        into_result(outcome, self.tag(), None)
    }
}

fn into_result(outcome: RootOutcome, tag: &str, proxy: Option<f64>) -> Result<RadiusResult> {
    match outcome {
        RootOutcome::Found(root) => Ok(RadiusResult {
            radius: root.radius,
            bracket: root.bracket,
            residual: root.residual,
            iterations: root.iterations,
            equation_tag: tag.to_string(),
            sign_changes: root.sign_changes,
            hypothesis_proxy: proxy,
        }),
        RootOutcome::NoSignChange { scanned } => Err(Error::NoRoot(format!(
            "{tag}: no sign change over {scanned} scan points"
        ))),
    }
}

pub fn bloch_bohr_radius_shifted(gamma: f64, alpha: f64) -> Result<RadiusResult> {
    RadiusEquation::Shifted { gamma, alpha }.solve()
}

pub fn p_bloch_bohr_radius(gamma: f64, alpha: f64, p: f64) -> Result<RadiusResult> {
    RadiusEquation::PRadius { gamma, alpha, p }.solve()
}

pub fn bloch_type_radius(gamma: f64, alpha: f64, p: f64, k: f64, d: f64) -> Result<RadiusResult> {
    RadiusEquation::BlochType { gamma, alpha, p, k, d }.solve()
}

pub fn sense_preserving_radius(gamma: f64, alpha: f64, p: f64, d1: f64) -> Result<RadiusResult> {
    RadiusEquation::SensePreserving { gamma, alpha, p, d1 }.solve()
}

/// Smallest root of `I(r) - 6/pi^2`.
///
/// The hypothesis `lim I(r) > 6/pi^2` is probed by `I(1 - 1e-4)` first; when the probe does not
/// exceed the threshold the result is a no-root error carrying the probe value. The scan stops
/// at the probe radius (or inside the sampled disk of a conformal domain).
pub fn bloch_bohr_radius_integral(domain: &DomainSpec, alpha: f64) -> Result<RadiusResult> {
    let mut top = 1.0 - INTEGRAL_PROXY_GAP;
    if let DomainSpec::Conformal(m) = domain {
        top = top.min(m.sample_radius() * (1.0 - INTEGRAL_PROXY_GAP));
    }
    let threshold = integral_threshold();
    let proxy = circle_integral_i(domain, top, alpha, QUADRATURE_TOL)?;
    let tag = "integral_criterion";
    if !(proxy > threshold) {
        return Err(Error::NoRoot(format!(
            "{tag}: I({top}) = {proxy} does not exceed 6/pi^2 = {threshold}; hypothesis inconclusive"
        )));
    }
    let outcome = try_find_smallest_root(
        |r| Ok(circle_integral_i(domain, r, alpha, QUADRATURE_TOL)? - threshold),
        (scalar::ROOT_EPS, top),
        INTEGRAL_SCAN_POINTS,
    )?;
    into_result(outcome, tag, Some(proxy))
}

/// Radius families that can be swept over `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RadiusFamily {
    Classical,
    UpperR,
    Shifted,
    PRadius { p: f64 },
    BlochType { p: f64, k: f64, d: f64 },
    SensePreserving { p: f64, d1: f64 },
}

impl RadiusFamily {
    pub fn radius(&self, gamma: f64, alpha: f64) -> Result<f64> {
        let eq = match *self {
            RadiusFamily::Classical => return classical_bohr_radius(gamma),
            RadiusFamily::UpperR => return upper_bound_r(gamma, alpha),
            RadiusFamily::Shifted => RadiusEquation::Shifted { gamma, alpha },
            RadiusFamily::PRadius { p } => RadiusEquation::PRadius { gamma, alpha, p },
            RadiusFamily::BlochType { p, k, d } => {
                RadiusEquation::BlochType { gamma, alpha, p, k, d }
            }
            RadiusFamily::SensePreserving { p, d1 } => {
                RadiusEquation::SensePreserving { gamma, alpha, p, d1 }
            }
        };
        Ok(eq.solve()?.radius)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub family: RadiusFamily,
    pub alpha: f64,
    pub gammas: Vec<f64>,
    pub radii: Vec<f64>,
    pub nondecreasing: bool,
}

/// Solves the family at each `gamma` (strictly increasing) and records whether the radii
/// are nondecreasing.
pub fn monotonicity_sweep(family: RadiusFamily, gammas: &[f64], alpha: f64) -> Result<SweepReport> {
    if gammas.is_empty() {
        return Err(Error::param("empty gamma grid"));
    }
    if gammas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::param("gamma grid must be strictly increasing"));
    }
    let radii = gammas.iter().map(|&g| family.radius(g, alpha)).collect::<Result<Vec<_>>>()?;
    let nondecreasing = radii.windows(2).all(|w| w[0] <= w[1]);
    Ok(SweepReport { family, alpha, gammas: gammas.to_vec(), radii, nondecreasing })
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param(format!("gamma = {gamma} outside [0, 1)")));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::param(format!("p = {p} must be >= 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_values() {
        assert!((classical_bohr_radius(0.0).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert!((classical_bohr_radius(0.5).unwrap() - 0.428571).abs() < 1e-6);
        assert!(classical_bohr_radius(1.0).is_err());
        assert!(classical_bohr_radius(-0.1).is_err());
    }

    #[test]
    fn k_p_values() {
        assert_eq!(k_p(1.0), 2.0);
        assert_eq!(k_p(2.0), 1.0);
        assert_eq!(k_p(5.0), 1.0);
    }

    #[test]
    fn shifted_spot_values() {
        let r = bloch_bohr_radius_shifted(0.1, 1.0).unwrap();
        assert!((r.radius - 0.554985).abs() < 1e-5);
        assert!(r.bracket.0 < r.radius && r.radius < r.bracket.1);
        assert_eq!(r.sign_changes, 1);
        let zero = bloch_bohr_radius_shifted(0.3, 0.0).unwrap().radius;
        assert!((zero - 6f64.sqrt() / PI).abs() < 1e-13);
    }

    #[test]
    fn h2_quadratic_oracle() {
        let r = bloch_type_radius(0.0, 0.0, 1.0, 0.5, 0.0).unwrap().radius;
        let exact = (6.0 / (1.5 + 2.5 * PI * PI)).sqrt();
        assert!((r - exact).abs() < 1e-13, "{r} vs {exact}");
    }

    #[test]
    fn p_at_least_two_matches_shifted() {
        for &(g, a) in &[(0.1, 0.5), (0.7, 2.0)] {
            let base = bloch_bohr_radius_shifted(g, a).unwrap().radius;
            assert_eq!(p_bloch_bohr_radius(g, a, 2.0).unwrap().radius, base);
            assert_eq!(p_bloch_bohr_radius(g, a, 3.5).unwrap().radius, base);
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(upper_bound_r(0.1, 0.5).is_err());
        assert!(upper_bound_r(0.1, 1.0).is_err());
        assert!(p_bloch_bohr_radius(0.1, 1.0, 0.5).is_err());
        assert!(bloch_type_radius(0.1, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(bloch_type_radius(0.1, 1.0, 1.0, 0.5, 1.5).is_err());
        assert!(sense_preserving_radius(0.1, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn integral_radius_hypothesis_failure_is_no_root() {
        // alpha = 0 on a tiny conformal disk: I(r) = r^2 never reaches 6/pi^2 below r = 0.5
        let map = crate::series::PowerSeries::from_real(&[0.0, 1.0]).unwrap();
        let conf = DomainSpec::Conformal(crate::domains::ConformalMap::new(map, 0.5).unwrap());
        assert!(matches!(bloch_bohr_radius_integral(&conf, 0.0), Err(Error::NoRoot(_))));
    }

    #[test]
    fn single_element_sweep() {
        let s = monotonicity_sweep(RadiusFamily::Shifted, &[0.4], 1.0).unwrap();
        assert!(s.nondecreasing);
        assert!(monotonicity_sweep(RadiusFamily::Shifted, &[0.4, 0.4], 1.0).is_err());
    }
}
