//! Truncated power series about the origin with complex coefficients.
//!
//! All series here are finite coefficient vectors `c_0, ..., c_N`; `N` is the
//! truncation order. Operations never extend a series past the order the
//! caller asks for, so products and compositions are exact up to that order
//! given exact inputs.

use std::ops::Add;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default truncation order for series computations.
pub const DEFAULT_ORDER: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series from its coefficients; index `n` holds the coefficient of `z^n`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::param("a power series needs at least one coefficient"));
        }
        if let Some(n) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::param(format!("coefficient {n} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`, truncated at `order` (which must be at least 1 to hold it).
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order.max(1));
        s.coeffs[1] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`, zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Cuts or zero-pads the series to exactly `order`.
    pub fn truncate(&self, order: usize) -> Self {
        Self { coeffs: (0..=order).map(|n| self.coeff(n)).collect() }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * factor).collect() }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Cauchy product truncated at `out_order`.
    pub fn mul(&self, other: &PowerSeries, out_order: usize) -> PowerSeries {
        let mut out = vec![Complex64::new(0.0, 0.0); out_order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(out_order + 1) {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(out_order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Term-by-term derivative; the order drops by one (an order-0 input gives
    /// the zero series of order 0).
    pub fn derivative(&self) -> PowerSeries {
        if self.order() == 0 {
            return PowerSeries::zero(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(n, &c)| c * (n + 1) as f64)
            .collect();
        PowerSeries { coeffs }
    }

    /// Coefficients of `z -> f(a z + b)` up to `out_order`.
    ///
    /// Evaluated as a Horner scheme over series, `(..(c_N (az+b) + c_{N-1})(az+b) + ..) + c_0`,
    /// truncating every intermediate product at `out_order`. This is the binomial expansion of
    /// each `(az+b)^n` accumulated without forming binomial coefficients, which overflow for
    /// large orders. The caller is responsible for `|b|` lying inside the disk where the
    /// coefficients of `f` converge.
    pub fn compose_affine(&self, a: Complex64, b: Complex64, out_order: usize) -> PowerSeries {
        let mut acc = vec![Complex64::new(0.0, 0.0); out_order + 1];
        for &c in self.coeffs.iter().rev() {
            // acc <- acc * (a z + b) + c, highest index first so each slot is read before written
            for k in (0..=out_order).rev() {
                let shifted = if k > 0 { acc[k - 1] * a } else { Complex64::new(0.0, 0.0) };
                acc[k] = acc[k] * b + shifted;
            }
            acc[0] += c;
        }
        PowerSeries { coeffs: acc }
    }

    /// Coefficients of `(1 - z)^c`, i.e. `(-1)^k binom(c, k)`, by the ratio recurrence.
    pub fn binomial(c: f64, out_order: usize) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(out_order + 1);
        let mut current = 1.0;
        coeffs.push(Complex64::new(current, 0.0));
        for k in 1..=out_order {
            current *= -(c - k as f64 + 1.0) / k as f64;
            coeffs.push(Complex64::new(current, 0.0));
        }
        PowerSeries { coeffs }
    }

    /// Coefficients of `-log(1 - z) = sum z^n / n`.
    pub fn log_one_minus(out_order: usize) -> Result<PowerSeries> {
        if out_order < 1 {
            return Err(Error::param("log series needs order >= 1"));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0)];
        coeffs.extend((1..=out_order).map(|n| Complex64::new(1.0 / n as f64, 0.0)));
        Ok(PowerSeries { coeffs })
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().max(rhs.order());
        PowerSeries { coeffs: (0..=order).map(|n| self.coeff(n) + rhs.coeff(n)).collect() }
    }
}

impl Add for PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: PowerSeries) -> PowerSeries {
        &self + &rhs
    }
}

/// Coefficients of a harmonic map `f = h + conj(g)` about the origin.
///
/// `h` and `g` share one truncation order and `g(0) = 0` (canonical decomposition).
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMapSeries {
    h: PowerSeries,
    g: PowerSeries,
}

/// Partial majorant sum together with an estimate of the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorantEstimate {
    pub partial_sum: f64,
    pub tail_bound: f64,
    /// Observed per-index decay ratio of the majorant terms used for the tail.
    pub decay_ratio: f64,
    pub order: usize,
}

impl HarmonicMapSeries {
    /// Pairs two series, padding the shorter one with zeros.
    pub fn new(h: PowerSeries, g: PowerSeries) -> Result<Self> {
        if g.coeff(0) != Complex64::new(0.0, 0.0) {
            return Err(Error::param("co-analytic part must vanish at the origin"));
        }
        let order = h.order().max(g.order());
        Ok(Self { h: h.truncate(order), g: g.truncate(order) })
    }

    /// A purely analytic map, `g = 0`.
    pub fn analytic(h: PowerSeries) -> Self {
        let order = h.order();
        Self { h, g: PowerSeries::zero(order) }
    }

    pub fn h(&self) -> &PowerSeries {
        &self.h
    }

    pub fn g(&self) -> &PowerSeries {
        &self.g
    }

    pub fn order(&self) -> usize {
        self.h.order()
    }

    /// `sum_{n=0}^{N} (|a_n| + |b_n|) r^n`.
    pub fn majorant_sum(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.majorant_terms(1.0).iter().rev().fold(0.0, |acc, &t| acc * r + t))
    }

    /// `|a_0| + sum_{n>=1} (|a_n|^p + |b_n|^p)^{1/p} r^n`.
    pub fn p_majorant_sum(&self, r: f64, p: f64) -> Result<f64> {
        check_radius(r)?;
        check_exponent(p)?;
        Ok(self.majorant_terms(p).iter().rev().fold(0.0, |acc, &t| acc * r + t))
    }

    /// The p-majorant partial sum with a geometric tail bound.
    ///
    /// The tail beyond the truncation order is bounded by `E r^N (q r)/(1 - q r)` where `E` is
    /// the largest of the last two terms and `q` the decay ratio between the last two
    /// two-term windows. Fails with a truncation error when `q r >= 1`.
    pub fn majorant_estimate(&self, r: f64, p: f64) -> Result<MajorantEstimate> {
        check_radius(r)?;
        check_exponent(p)?;
        let terms = self.majorant_terms(p);
        let partial_sum = terms.iter().rev().fold(0.0, |acc, &t| acc * r + t);
        let (tail_bound, decay_ratio) = geometric_tail(&terms, r)?;
        Ok(MajorantEstimate { partial_sum, tail_bound, decay_ratio, order: self.order() })
    }

    fn majorant_terms(&self, p: f64) -> Vec<f64> {
        (0..=self.order())
            .map(|n| {
                let a = self.h.coeff(n).norm();
                let b = self.g.coeff(n).norm();
                if n == 0 {
                    a
                } else {
                    p_norm_pair(a, b, p)
                }
            })
            .collect()
    }
}

/// `(a^p + b^p)^{1/p}` for nonnegative `a, b`, scaled to avoid overflow; exact sum at `p = 1`.
fn p_norm_pair(a: f64, b: f64, p: f64) -> f64 {
    if p == 1.0 {
        return a + b;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == 0.0 {
        return 0.0;
    }
    hi * (1.0 + (lo / hi).powf(p)).powf(1.0 / p)
}

fn geometric_tail(terms: &[f64], r: f64) -> Result<(f64, f64)> {
    let n = terms.len() - 1;
    let window = |end: usize| -> f64 {
        let start = end.saturating_sub(1);
        terms[start..=end].iter().copied().fold(0.0, f64::max)
    };
    let last = window(n);
    if last == 0.0 || r == 0.0 {
        return Ok((0.0, 0.0));
    }
    if n < 3 {
        return Err(Error::Truncation(format!(
            "order {n} is too short to estimate the tail"
        )));
    }
    let previous = window(n - 2);
    if previous == 0.0 {
        return Err(Error::Truncation("majorant terms are growing at the truncation order".into()));
    }
    let ratio = (last / previous).sqrt();
    let qr = ratio * r;
    if qr >= 1.0 {
        return Err(Error::Truncation(format!(
            "tail not controlled: decay ratio {ratio} at r = {r}"
        )));
    }
    Ok((last * r.powi(n as i32) * qr / (1.0 - qr), ratio))
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("radius {r} outside [0, 1)")));
    }
    Ok(())
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("exponent p = {p} must be >= 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn real(s: &[f64]) -> PowerSeries {
        PowerSeries::from_real(s).unwrap()
    }

    #[test]
    fn add_pads_and_cancels() {
        let s = &real(&[1.0, 1.0]) + &real(&[0.0, 2.0]);
        assert_eq!(s, real(&[1.0, 3.0]));
        let f = real(&[1.0, -2.0, 0.5]);
        assert_eq!(&f + &PowerSeries::zero(0), f);
        let zero = real(&[0.0, 0.0, 1.0]) + real(&[0.0, 0.0, -1.0]);
        assert_eq!(zero, PowerSeries::zero(2));
    }

    #[test]
    fn product_examples() {
        let p = real(&[1.0, 1.0]).mul(&real(&[1.0, -1.0]), 2);
        assert_eq!(p, real(&[1.0, 0.0, -1.0]));
        let f = real(&[0.3, -1.0, 2.0, 4.0]);
        assert_eq!(f.mul(&PowerSeries::constant(c(1.0), 0), 2), f.truncate(2));
        // geometric series times (1 - z) telescopes to 1
        let geo = real(&[1.0; 6]);
        let t = geo.mul(&real(&[1.0, -1.0]), 5);
        assert_eq!(t, PowerSeries::constant(c(1.0), 5));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(real(&[0.0, 0.0, 0.0, 1.0]).derivative(), real(&[0.0, 0.0, 3.0]));
        assert_eq!(real(&[5.0]).derivative(), PowerSeries::zero(0));
        assert_eq!(real(&[5.0, 0.0]).derivative(), real(&[0.0]));
        let d = PowerSeries::log_one_minus(40).unwrap().derivative();
        for n in 0..40 {
            assert!((d.coeff(n).re - 1.0).abs() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(PowerSeries::binomial(1.0, 3), real(&[1.0, -1.0, 0.0, 0.0]));
        let geo = PowerSeries::binomial(-1.0, 10);
        assert!(geo.coeffs().iter().all(|&x| x == c(1.0)));
        assert!((PowerSeries::binomial(-0.5, 2).coeff(2).re - 0.375).abs() < 1e-16);
    }

    #[test]
    fn log_series() {
        let s = PowerSeries::log_one_minus(50).unwrap();
        assert_eq!(s.coeff(0), c(0.0));
        assert_eq!(s.coeff(1), c(1.0));
        assert_eq!(s.coeff(4), c(0.25));
        assert!((s.eval(c(0.5)).re - 2f64.ln()).abs() < 1e-10);
        assert!(PowerSeries::log_one_minus(0).is_err());
    }

    #[test]
    fn affine_composition() {
        let gamma = 0.3;
        let z = PowerSeries::identity(1);
        let img = z.compose_affine(c(1.0 - gamma), c(gamma), 1);
        assert_eq!(img, real(&[gamma, 1.0 - gamma]));

        let f = real(&[0.5, -1.0, 2.0, 0.25]);
        assert_eq!(f.compose_affine(c(1.0), c(0.0), 3), f);

        let geo = real(&[1.0; 201]);
        let comp = geo.compose_affine(c(0.9), c(0.1), 200);
        let v = comp.eval(c(0.5)).re;
        assert!((v - 1.0 / (1.0 - 0.55)).abs() < 1e-9, "{v}");
    }

    #[test]
    fn rejects_non_finite() {
        assert!(PowerSeries::from_real(&[1.0, f64::NAN]).is_err());
        assert!(PowerSeries::new(vec![]).is_err());
    }

    #[test]
    fn harmonic_requires_normalised_g() {
        assert!(HarmonicMapSeries::new(real(&[1.0]), real(&[1.0, 1.0])).is_err());
        let f = HarmonicMapSeries::new(real(&[1.0]), real(&[0.0, 1.0, 1.0])).unwrap();
        assert_eq!(f.h().order(), 2);
    }

    #[test]
    fn majorant_examples() {
        let k = HarmonicMapSeries::analytic(PowerSeries::constant(Complex64::new(0.6, 0.8), 4));
        assert!((k.majorant_sum(0.7).unwrap() - 1.0).abs() < 1e-15);

        let f = HarmonicMapSeries::new(real(&[0.25, 3.0, -2.0]), real(&[0.0, 1.0, 1.0])).unwrap();
        assert_eq!(f.majorant_sum(0.0).unwrap(), 0.25);
        assert!(f.majorant_sum(1.0).is_err());
        assert!(f.majorant_sum(-0.1).is_err());

        // a_n = b_n = 1 for n >= 1: sum is 2 r / (1 - r) up to the truncated tail
        let mut ones = vec![1.0; 200];
        ones[0] = 0.0;
        let f = HarmonicMapSeries::new(real(&ones), real(&ones)).unwrap();
        assert!((f.majorant_sum(0.25).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        let p2 = f.p_majorant_sum(0.5, 2.0).unwrap();
        assert!((p2 - 2f64.sqrt()).abs() < 1e-12, "{p2}");
        assert_eq!(f.p_majorant_sum(0.5, 1.0).unwrap(), f.majorant_sum(0.5).unwrap());
        assert!(f.p_majorant_sum(0.5, 0.9).is_err());
    }

    #[test]
    fn p_majorant_of_analytic_map_ignores_p() {
        let f = HarmonicMapSeries::analytic(real(&[0.1, -0.4, 0.3, 0.2]));
        let base = f.majorant_sum(0.6).unwrap();
        for p in [1.0, 1.5, 2.0, 7.0] {
            assert!((f.p_majorant_sum(0.6, p).unwrap() - base).abs() < 1e-15);
        }
    }

    #[test]
    fn geometric_tail_is_exact_for_constant_terms() {
        let mut ones = vec![1.0; 51];
        ones[0] = 0.0;
        let f = HarmonicMapSeries::analytic(real(&ones));
        let est = f.majorant_estimate(0.5, 1.0).unwrap();
        assert!((est.decay_ratio - 1.0).abs() < 1e-15);
        assert!((est.partial_sum + est.tail_bound - 1.0).abs() < 1e-14);
        let poly = HarmonicMapSeries::analytic(real(&[1.0, 2.0, 0.0, 0.0, 0.0]));
        assert_eq!(poly.majorant_estimate(0.9, 1.0).unwrap().tail_bound, 0.0);
        let growing = HarmonicMapSeries::analytic(real(&[1.0, 2.0, 4.0, 8.0, 16.0, 32.0]));
        assert!(matches!(growing.majorant_estimate(0.6, 1.0), Err(Error::Truncation(_))));
    }
}
