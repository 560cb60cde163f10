//! Coefficient bounds for harmonic Bloch mappings on shifted disks and the Landau radius
//! built from them.
//!
//! Infima over `(0, 1)` use a 1024-point scan followed by golden section; the closed-form
//! minimizer `t1` of `C_n(alpha, gamma, M)` is cross-checked against a dense two-stage scan.

use rayon::prelude::*;
use serde::Serialize;

use crate::domains::{circle_integral_i, DomainSpec, QUADRATURE_TOL};
use crate::error::{Error, Result};
use crate::radii::scalar::{find_smallest_root, minimize_scan_golden, GOLDEN_TOL, UNIT_INTERVAL};
use crate::radii::RootOutcome;

pub const INFIMUM_SCAN_POINTS: usize = 1024;
pub const AN_SCAN_POINTS: usize = 256;
/// Lower end of the `A_n` scan; the `n = 1` infimum is approached as `t -> 0`.
pub const AN_T_MIN: f64 = 1e-6;
/// Upper end of the `A_n` scan, where circle quadrature on a shifted disk is still affordable.
pub const AN_T_MAX: f64 = 1.0 - 1e-4;
pub const DENSE_SCAN_POINTS: usize = 100_000;
pub const CN_CONSISTENCY_TOL: f64 = 1e-8;
pub const LANDAU_MIN_TRUNCATION: usize = 16;
pub const LANDAU_MAX_TRUNCATION: usize = 4096;
pub const LANDAU_TAIL_REL: f64 = 1e-8;

/// Parameters of a coefficient bound. `norm_bound` is `M` (or `L`); `lambda` is `beta` for
/// `mu_infimum` and `lambda_f(0)` for `coeff_bound_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffBoundQuery {
    pub n: usize,
    pub norm_bound: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub alpha: f64,
}

impl CoeffBoundQuery {
    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::param(format!("n = {} must be at least 2", self.n)));
        }
        if !(self.norm_bound > 0.0 && self.norm_bound.is_finite()) {
            return Err(Error::param(format!("norm bound {} must be positive", self.norm_bound)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::param(format!("lambda = {} must be nonnegative", self.lambda)));
        }
        check_gamma(self.gamma)?;
        check_alpha(self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Infimum {
    pub value: f64,
    pub argmin: f64,
    pub evaluations: usize,
}

/// `m(r, gamma) = M (1-gamma)^alpha / (1 - (1-gamma)^2 r^2)^alpha`.
fn m_weight(norm: f64, gamma: f64, alpha: f64, r: f64) -> f64 {
    let c = 1.0 - gamma;
    let cr = c * r;
    norm * c.powf(alpha) / ((1.0 - cr) * (1.0 + cr)).powf(alpha)
}

/// `mu(r) = (m^2 - beta^2) / (n r^{n-1} (1-gamma)^{n-1} (1-gamma^2) m)`.
pub fn mu(q: &CoeffBoundQuery, r: f64) -> f64 {
    let c = 1.0 - q.gamma;
    let m = m_weight(q.norm_bound, q.gamma, q.alpha, r);
    let k = (q.n - 1) as i32;
    (m - q.lambda) * (m + q.lambda)
        / (q.n as f64 * r.powi(k) * c.powi(k) * (1.0 - q.gamma) * (1.0 + q.gamma) * m)
}

/// `(m^2 - lambda^2/(1-gamma)^2) / (n r^{n-1} (1+gamma) m)` with `m = (L/(1-gamma)) (1-gamma)^alpha / (..)^alpha`.
pub fn c_quotient(q: &CoeffBoundQuery, r: f64) -> f64 {
    let c = 1.0 - q.gamma;
    let m = m_weight(q.norm_bound / c, q.gamma, q.alpha, r);
    let l = q.lambda / c;
    (m - l) * (m + l) / (q.n as f64 * r.powi((q.n - 1) as i32) * (1.0 + q.gamma) * m)
}

fn positive_infimum<F: Fn(f64) -> f64 + Sync>(f: F, what: &str) -> Result<Infimum> {
    let min = minimize_scan_golden(|r| Ok(f(r)), UNIT_INTERVAL, INFIMUM_SCAN_POINTS, GOLDEN_TOL)?;
    if !(min.value > 0.0) {
        return Err(Error::DegenerateBound(format!(
            "{what}: numerator is nonpositive at the scan minimum r = {} (value {})",
            min.x, min.value
        )));
    }
    Ok(Infimum { value: min.value, argmin: min.x, evaluations: min.evaluations })
}

/// `inf_{0<r<1} mu(r)`, the bound on `|alpha_n| + |beta_n|`.
pub fn mu_infimum(q: &CoeffBoundQuery) -> Result<Infimum> {
    q.validate()?;
    positive_infimum(|r| mu(q, r), "mu")
}

/// `C_{n,M}(alpha, lambda, gamma)`.
pub fn coeff_bound_c(q: &CoeffBoundQuery) -> Result<Infimum> {
    q.validate()?;
    positive_infimum(|r| c_quotient(q, r), "C_{n,M}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LandauResult {
    pub rho0: f64,
    pub rho: f64,
    pub truncation: usize,
    /// Bound on the omitted part of the series for `Psi(rho0)`.
    pub tail_bound: f64,
    /// Bound on the omitted part of `sum C_n rho0^n`.
    pub rho_tail_bound: f64,
    /// `C_2, ..., C_N`.
    pub coefficients: Vec<f64>,
}

/// `Psi(r) = lambda - sum_{n>=2} C_n n r^{n-1}` over the given `C_2..C_N`.
pub fn landau_psi(lambda: f64, coefficients: &[f64], r: f64) -> f64 {
    let s = coefficients
        .iter()
        .enumerate()
        .rev()
        .fold(0.0, |acc, (i, &c)| acc * r + c * (i + 2) as f64);
    lambda - s * r
}

/// `Psi'(r) = -sum_{n>=2} C_n n (n-1) r^{n-2}`.
pub fn landau_psi_derivative(coefficients: &[f64], r: f64) -> f64 {
    -coefficients
        .iter()
        .enumerate()
        .rev()
        .fold(0.0, |acc, (i, &c)| acc * r + c * ((i + 2) * (i + 1)) as f64)
}

/// Geometric tail of `sum_{n>N} t_n` from the ratio of the last two terms.
fn ratio_tail(last: f64, previous: f64) -> Option<f64> {
    if last == 0.0 {
        return Some(0.0);
    }
    let q = last / previous;
    (q < 1.0).then(|| last * q / (1.0 - q))
}

/// Landau radii: `rho0` is the smallest root of `Psi`, and `rho = lambda rho0 - sum C_n rho0^n`.
///
/// The series is truncated at `truncation` and doubled (up to 4096) until the tail bound at
/// `rho0` is below `1e-8 lambda`.
pub fn landau_radius(
    alpha: f64,
    lambda: f64,
    gamma: f64,
    norm_bound: f64,
    truncation: usize,
) -> Result<LandauResult> {
    if truncation < LANDAU_MIN_TRUNCATION {
        return Err(Error::param(format!(
            "truncation {truncation} below {LANDAU_MIN_TRUNCATION}"
        )));
    }
    if !(lambda > 0.0) {
        return Err(Error::NoUnivalenceRadius(format!("Psi(0) = lambda = {lambda} is not positive")));
    }
    check_gamma(gamma)?;
    check_alpha(alpha)?;
    let coefficient = |n: usize| {
        coeff_bound_c(&CoeffBoundQuery { n, norm_bound, lambda, gamma, alpha }).map(|i| i.value)
    };
    let mut coefficients: Vec<f64> = Vec::new();
    let mut n_max = truncation;
    loop {
        let start = coefficients.len() + 2;
        let fresh: Vec<f64> =
            (start..=n_max).into_par_iter().map(coefficient).collect::<Result<_>>()?;
        coefficients.extend(fresh);

        let outcome = find_smallest_root(
            |r| landau_psi(lambda, &coefficients, r),
            UNIT_INTERVAL,
            crate::radii::DEFAULT_SCAN_POINTS,
        )?;
        let root = match outcome {
            RootOutcome::Found(root) => root,
            RootOutcome::NoSignChange { .. } => {
                return Err(Error::NoUnivalenceRadius("Psi has no sign change on (0, 1)".into()))
            }
        };
        let rho0 = root.radius;
        let k = coefficients.len();
        let term = |i: usize| coefficients[i] * (i + 2) as f64 * rho0.powi((i + 1) as i32);
        let power = |i: usize| coefficients[i] * rho0.powi((i + 2) as i32);
        let tail = ratio_tail(term(k - 1), term(k - 2));
        let rho_tail = ratio_tail(power(k - 1), power(k - 2));
        if let (Some(tail_bound), Some(rho_tail_bound)) = (tail, rho_tail) {
            if tail_bound <= LANDAU_TAIL_REL * lambda {
                let subtracted: f64 = (0..k).map(power).sum();
                return Ok(LandauResult {
                    rho0,
                    rho: lambda * rho0 - subtracted,
                    truncation: n_max,
                    tail_bound,
                    rho_tail_bound,
                    coefficients,
                });
            }
        }
        if n_max >= LANDAU_MAX_TRUNCATION {
            return Err(Error::Truncation(format!(
                "Landau series tail not below {LANDAU_TAIL_REL} lambda at truncation {n_max}"
            )));
        }
        n_max = (2 * n_max).min(LANDAU_MAX_TRUNCATION);
    }
}

/// `Psi_1(t) = mean_theta lambda^{2 alpha}(t e^{i theta}) / t^{2(n-1)}`.
pub fn an_psi1(domain: &DomainSpec, alpha: f64, n: usize, t: f64) -> Result<f64> {
    let i = circle_integral_i(domain, t, alpha, QUADRATURE_TOL)?;
    Ok(i / t.powi(2 * n as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnBound {
    pub value: f64,
    pub argmin: f64,
    /// `sqrt(2 A_n)`, the resulting bound on `|a_n| + |b_n|`.
    pub coefficient_bound: f64,
}

/// `A_n(Omega, M) = (M^2 / n^2) inf_t Psi_1(t)`, scanning `t` over `[1e-6, 1 - 1e-4]`.
pub fn an_bound(domain: &DomainSpec, norm_bound: f64, alpha: f64, n: usize) -> Result<AnBound> {
    if n < 1 {
        return Err(Error::param("n must be at least 1"));
    }
    check_alpha(alpha)?;
    let min = minimize_scan_golden(
        |t| an_psi1(domain, alpha, n, t),
        (AN_T_MIN, AN_T_MAX),
        AN_SCAN_POINTS,
        GOLDEN_TOL,
    )?;
    let value = norm_bound * norm_bound / (n * n) as f64 * min.value;
    Ok(AnBound { value, argmin: min.x, coefficient_bound: (2.0 * value).sqrt() })
}

/// The two roots of the derivative of `log mu(t)` for `C_n(alpha, gamma, M)`; `t1 > 0 > t2`.
pub fn cn_critical_points(alpha: f64, gamma: f64, n: usize) -> (f64, f64) {
    let k = (n - 1) as f64;
    let disc = (alpha * alpha * gamma * gamma + k * (k + 2.0 * alpha)).sqrt();
    let denom = (1.0 - gamma) * (k + 2.0 * alpha);
    let b = -gamma * (k + alpha);
    ((b + disc) / denom, (b - disc) / denom)
}

/// `(1-gamma)^{2 alpha} / (t^{2(n-1)} (1 - ((1-gamma)t + gamma)^2)^{2 alpha})`.
pub fn cn_mu(alpha: f64, gamma: f64, n: usize, t: f64) -> f64 {
    let c = 1.0 - gamma;
    let u = c * t + gamma;
    let w = c * (1.0 - t) * (1.0 + u);
    (c / w).powf(2.0 * alpha) / t.powi(2 * (n as i32 - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CnResult {
    pub value: f64,
    pub t1: f64,
    pub t2: f64,
    /// Minimum found by the dense scan, scaled like `value`.
    pub scan_value: f64,
    pub scan_argmin: f64,
}

/// Two-stage dense scan: `points` uniform points on `interval`, then `points` more over the
/// two cells around the best one.
pub fn dense_scan_min<F: Fn(f64) -> f64 + Sync>(f: F, interval: (f64, f64), points: usize) -> (f64, f64) {
    let stage = |a: f64, b: f64| -> (f64, f64) {
        (0..=points)
            .into_par_iter()
            .map(|i| {
                let x = a + (b - a) * i as f64 / points as f64;
                (x, f(x))
            })
            .reduce(
                || (f64::NAN, f64::INFINITY),
                |p, q| if q.1 < p.1 || (q.1 == p.1 && q.0 < p.0) { q } else { p },
            )
    };
    let (a, b) = interval;
    let h = (b - a) / points as f64;
    let (x, _) = stage(a, b);
    let (x, v) = stage((x - h).max(a), (x + h).min(b));
    (x, v)
}

/// `C_n(alpha, gamma, M)` at the closed-form critical point, without the scan check.
pub fn cn_at_t1(alpha: f64, gamma: f64, norm_bound: f64, n: usize) -> Result<f64> {
    check_gamma(gamma)?;
    check_alpha(alpha)?;
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    let scale = norm_bound * norm_bound / (n * n) as f64;
    if n == 1 {
        return Ok(scale / (1.0 + gamma).powf(2.0 * alpha));
    }
    let (t1, _) = cn_critical_points(alpha, gamma, n);
    Ok(scale * cn_mu(alpha, gamma, n, t1))
}

/// `C_n(alpha, gamma, M) = (M^2/n^2) mu(t1)`, checked against a dense scan of `mu`.
///
/// For `n = 1` the `t -> 0` limit `M^2 / (1+gamma)^{2 alpha}` is returned (scan fields equal it).
pub fn cn_closed(alpha: f64, gamma: f64, norm_bound: f64, n: usize) -> Result<CnResult> {
    let value = cn_at_t1(alpha, gamma, norm_bound, n)?;
    if n == 1 {
        return Ok(CnResult { value, t1: 0.0, t2: 0.0, scan_value: value, scan_argmin: 0.0 });
    }
    let (t1, t2) = cn_critical_points(alpha, gamma, n);
    if !(t1 > 0.0 && t1 < 1.0) {
        return Err(Error::Consistency(format!("critical point t1 = {t1} outside (0, 1)")));
    }
    let scale = norm_bound * norm_bound / (n * n) as f64;
    let (scan_argmin, scan_min) =
        dense_scan_min(|t| cn_mu(alpha, gamma, n, t), UNIT_INTERVAL, DENSE_SCAN_POINTS);
    let scan_value = scale * scan_min;
    if ((scan_value - value) / value).abs() > CN_CONSISTENCY_TOL {
        return Err(Error::Consistency(format!(
            "closed form {value} at t1 = {t1} vs scan {scan_value} at t = {scan_argmin}"
        )));
    }
    Ok(CnResult { value, t1, t2, scan_value, scan_argmin })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub alpha: f64,
    pub norm_bound: f64,
    pub n_max: usize,
    /// `(n, C_n / n^{2 alpha - 2})` for `n = 2..=n_max`.
    pub ratios: Vec<(usize, f64)>,
    pub sup_ratio: f64,
    pub max_lower: f64,
    pub max_upper: f64,
    /// `max_upper <= 1.05 max_lower`.
    pub bounded: bool,
}

/// Growth of `C_n(alpha, 0, M)` against `n^{2 alpha - 2}`: the ratio maximum over
/// `[n_max/2, n_max]` must stay within 5% of the maximum over `[n_max/4, n_max/2]`.
pub fn asymptotic_check(alpha: f64, norm_bound: f64, n_max: usize) -> Result<AsymptoticReport> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(Error::param(format!("asymptotic check needs alpha >= 1, got {alpha}")));
    }
    if n_max < 8 {
        return Err(Error::param("n_max must be at least 8"));
    }
    let ratios: Vec<(usize, f64)> = (2..=n_max)
        .into_par_iter()
        .map(|n| {
            cn_at_t1(alpha, 0.0, norm_bound, n).map(|c| (n, c / (n as f64).powf(2.0 * alpha - 2.0)))
        })
        .collect::<Result<_>>()?;
    let max_over = |lo: usize, hi: usize| {
        ratios
            .iter()
            .filter(|(n, _)| (lo..=hi).contains(n))
            .map(|&(_, v)| v)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let max_lower = max_over(n_max / 4, n_max / 2);
    let max_upper = max_over(n_max / 2, n_max);
    let sup_ratio = ratios.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    Ok(AsymptoticReport {
        alpha,
        norm_bound,
        n_max,
        ratios,
        sup_ratio,
        max_lower,
        max_upper,
        bounded: max_upper <= 1.05 * max_lower,
    })
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param(format!("gamma = {gamma} outside [0, 1)")));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param(format!("alpha = {alpha} must be positive")));
    }
    Ok(())
}
