//! Named harmonic mappings with closed-form derivatives and, where available, Taylor
//! coefficients about the origin.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{HarmonicMapSeries, PowerSeries};

pub type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
pub type JacobianEvaluator = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;

/// Derivatives of the analytic and co-analytic parts of `f = h + conj(g)`.
#[derive(Clone)]
pub struct HarmonicFunctionHandle {
    h_prime: Evaluator,
    g_prime: Evaluator,
    jacobian: Option<JacobianEvaluator>,
    value_at_origin: Complex64,
    label: String,
}

impl std::fmt::Debug for HarmonicFunctionHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HarmonicFunctionHandle")
            .field("label", &self.label)
            .field("value_at_origin", &self.value_at_origin)
            .field("exact_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl HarmonicFunctionHandle {
    pub fn new(
        label: impl Into<String>,
        value_at_origin: Complex64,
        h_prime: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        g_prime: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            h_prime: Arc::new(h_prime),
            g_prime: Arc::new(g_prime),
            jacobian: None,
            value_at_origin,
            label: label.into(),
        }
    }

    /// Replaces the Jacobian `|h'|^2 - |g'|^2` by an exact expression.
    pub fn with_jacobian(mut self, j: impl Fn(Complex64) -> f64 + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(j));
        self
    }

    /// `h(z) = z`, `g = 0`.
    pub fn identity() -> Self {
        Self::new("identity", Complex64::new(0.0, 0.0), |_| Complex64::new(1.0, 0.0), |_| {
            Complex64::new(0.0, 0.0)
        })
    }

    pub fn constant(c: Complex64) -> Self {
        let zero = |_| Complex64::new(0.0, 0.0);
        Self::new("constant", c, zero, zero)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value_at_origin(&self) -> Complex64 {
        self.value_at_origin
    }

    pub fn h_prime(&self, z: Complex64) -> Complex64 {
        (self.h_prime)(z)
    }

    pub fn g_prime(&self, z: Complex64) -> Complex64 {
        (self.g_prime)(z)
    }

    /// `J_f(z) = |h'|^2 - |g'|^2`, evaluated as `(|h'| - |g'|)(|h'| + |g'|)`.
    pub fn jacobian(&self, z: Complex64) -> f64 {
        if let Some(j) = &self.jacobian {
            return j(z);
        }
        let a = self.h_prime(z).norm();
        let b = self.g_prime(z).norm();
        (a - b) * (a + b)
    }

    pub fn has_exact_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Dilatation `g'/h'`.
    pub fn dilatation(&self, z: Complex64) -> Complex64 {
        self.g_prime(z) / self.h_prime(z)
    }

    /// `a f + b conj(f)`: `H' = a h' + b g'`, `G' = conj(a) g' + conj(b) h'`.
    pub fn affine_combination(&self, a: Complex64, b: Complex64) -> Self {
        let (f1, f2) = (self.clone(), self.clone());
        let v = self.value_at_origin;
        Self::new(
            format!("({a})*{0} + ({b})*conj({0})", self.label),
            a * v + b * v.conj(),
            move |z| a * f1.h_prime(z) + b * f1.g_prime(z),
            move |z| a.conj() * f2.g_prime(z) + b.conj() * f2.h_prime(z),
        )
    }
}

/// The named mappings. `gamma` is the shift of `phi(z) = (1-gamma) z + gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CatalogFunction {
    /// `F_{alpha,t}`: `H' = (1-gamma)/(1-phi)^{alpha+1/2}`, dilatation `t + (1-t) phi`.
    FAlphaT { alpha: f64, t: f64, gamma: f64 },
    /// Extremal `f_{gamma,alpha}` for the upper bound `R_gamma(alpha)`; needs `alpha > 1`.
    FGammaAlpha { gamma: f64, alpha: f64 },
    /// `F_lambda` on the unit disk, `lambda in [1/2, 1)`.
    FLambda { lambda: f64 },
    /// `h = (1-phi)^{1-beta}/(beta-1)`, `F = h + conj(h) + z`; needs `beta > 2 alpha + 1`.
    PowerWithIdentity { alpha: f64, beta: f64, gamma: f64 },
    /// `h = exp((1+phi)/(1-phi))`, `f = h + conj(h)`; zero Jacobian.
    ExpDiagonal { gamma: f64 },
    /// `h = 1/((1-gamma)(1-z))`, `g = z/((1-gamma)(1-z))`.
    FGammaGeometric { gamma: f64 },
}

pub const CATALOG_NAMES: [&str; 6] = [
    "F_alpha_t",
    "f_gamma_alpha",
    "F_lambda",
    "power_with_identity",
    "exp_diagonal",
    "f_gamma_geometric",
];

fn take(params: &BTreeMap<String, f64>, key: &str) -> Result<f64> {
    params.get(key).copied().ok_or_else(|| Error::param(format!("missing parameter {key}")))
}

fn gamma_param(params: &BTreeMap<String, f64>) -> Result<f64> {
    let gamma = params.get("gamma").copied().unwrap_or(0.0);
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::param(format!("gamma = {gamma} outside [0, 1)")));
    }
    Ok(gamma)
}

impl CatalogFunction {
    /// Parses a catalog name and its parameters (`alpha`, `t`, `gamma`, `lambda`, `beta`).
    ///
    /// `example_2_2` and `example_2_7` are accepted as aliases of `power_with_identity` and
    /// `exp_diagonal`.
    pub fn parse(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let f = match name {
            "F_alpha_t" => CatalogFunction::FAlphaT {
                alpha: take(params, "alpha")?,
                t: take(params, "t")?,
                gamma: gamma_param(params)?,
            },
            "f_gamma_alpha" => CatalogFunction::FGammaAlpha {
                gamma: gamma_param(params)?,
                alpha: take(params, "alpha")?,
            },
            "F_lambda" => CatalogFunction::FLambda { lambda: take(params, "lambda")? },
            "power_with_identity" | "example_2_2" => CatalogFunction::PowerWithIdentity {
                alpha: take(params, "alpha")?,
                beta: take(params, "beta")?,
                gamma: gamma_param(params)?,
            },
            "exp_diagonal" | "example_2_7" => {
                CatalogFunction::ExpDiagonal { gamma: gamma_param(params)? }
            }
            "f_gamma_geometric" => CatalogFunction::FGammaGeometric { gamma: gamma_param(params)? },
            other => {
                return Err(Error::param(format!(
                    "unknown catalog function {other}; expected one of {CATALOG_NAMES:?}"
                )))
            }
        };
        f.validate()?;
        Ok(f)
    }

    pub fn name(&self) -> &'static str {
        match self {
            CatalogFunction::FAlphaT { .. } => CATALOG_NAMES[0],
            CatalogFunction::FGammaAlpha { .. } => CATALOG_NAMES[1],
            CatalogFunction::FLambda { .. } => CATALOG_NAMES[2],
            CatalogFunction::PowerWithIdentity { .. } => CATALOG_NAMES[3],
            CatalogFunction::ExpDiagonal { .. } => CATALOG_NAMES[4],
            CatalogFunction::FGammaGeometric { .. } => CATALOG_NAMES[5],
        }
    }

    pub fn gamma(&self) -> f64 {
        match *self {
            CatalogFunction::FAlphaT { gamma, .. }
            | CatalogFunction::FGammaAlpha { gamma, .. }
            | CatalogFunction::PowerWithIdentity { gamma, .. }
            | CatalogFunction::ExpDiagonal { gamma }
            | CatalogFunction::FGammaGeometric { gamma } => gamma,
            CatalogFunction::FLambda { .. } => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let gamma = self.gamma();
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::param(format!("gamma = {gamma} outside [0, 1)")));
        }
        match *self {
            CatalogFunction::FAlphaT { alpha, t, .. } => {
                positive("alpha", alpha)?;
                if !(0.0..1.0).contains(&t) {
                    return Err(Error::param(format!("t = {t} outside [0, 1)")));
                }
            }
            CatalogFunction::FGammaAlpha { alpha, .. } => {
                if !(alpha > 1.0 && alpha.is_finite()) {
                    return Err(Error::param(format!("f_gamma_alpha needs alpha > 1, got {alpha}")));
                }
            }
            CatalogFunction::FLambda { lambda } => {
                if !(0.5..1.0).contains(&lambda) {
                    return Err(Error::param(format!("lambda = {lambda} outside [1/2, 1)")));
                }
            }
            CatalogFunction::PowerWithIdentity { alpha, beta, .. } => {
                positive("alpha", alpha)?;
                if !(beta > 2.0 * alpha + 1.0 && beta.is_finite()) {
                    return Err(Error::param(format!(
                        "beta = {beta} must exceed 2 alpha + 1 = {}",
                        2.0 * alpha + 1.0
                    )));
                }
            }
            CatalogFunction::ExpDiagonal { .. } | CatalogFunction::FGammaGeometric { .. } => {}
        }
        Ok(())
    }

    pub fn handle(&self) -> HarmonicFunctionHandle {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            CatalogFunction::FAlphaT { alpha, t, gamma } => {
                let c = 1.0 - gamma;
                let h = move |z: Complex64| c * (one - (z * c + gamma)).powf(-(alpha + 0.5));
                let g = move |z: Complex64| {
                    let phi = z * c + gamma;
                    (phi * (1.0 - t) + t) * h(z)
                };
                let value = falpha_t_origin(alpha, t, gamma);
                HarmonicFunctionHandle::new(self.describe(), Complex64::new(value, 0.0), h, g)
            }
            CatalogFunction::FGammaAlpha { gamma, alpha } => {
                let c = 1.0 - gamma;
                let scale = c.powf(alpha);
                let h = move |z: Complex64| {
                    let phi = z * c + gamma;
                    phi * scale * ((one - phi) * (one + phi)).powf(-alpha)
                };
                HarmonicFunctionHandle::new(self.describe(), zero, h, move |_| zero)
            }
            CatalogFunction::FLambda { lambda } => {
                let h = move |z: Complex64| one / ((one - z) * (one + z));
                let g = move |z: Complex64| (z * (1.0 - lambda) + lambda) / ((one - z) * (one + z));
                let value = 1.0 - 2.0 * (lambda - lambda * lambda).sqrt();
                HarmonicFunctionHandle::new(self.describe(), Complex64::new(value, 0.0), h, g)
            }
            CatalogFunction::PowerWithIdentity { beta, gamma, .. } => {
                let c = 1.0 - gamma;
                let hp = move |z: Complex64| c * (one - (z * c + gamma)).powf(-beta);
                let value = 2.0 * c.powf(1.0 - beta) / (beta - 1.0);
                HarmonicFunctionHandle::new(
                    self.describe(),
                    Complex64::new(value, 0.0),
                    move |z| hp(z) + one,
                    hp,
                )
            }
            CatalogFunction::ExpDiagonal { gamma } => {
                let c = 1.0 - gamma;
                let hp = move |z: Complex64| {
                    let phi = z * c + gamma;
                    let w = one - phi;
                    ((one + phi) / w).exp() * (2.0 * c) / (w * w)
                };
                let value = 2.0 * ((1.0 + gamma) / c).exp();
                HarmonicFunctionHandle::new(self.describe(), Complex64::new(value, 0.0), hp, hp)
                    .with_jacobian(|_| 0.0)
            }
            CatalogFunction::FGammaGeometric { gamma } => {
                let c = 1.0 - gamma;
                let hp = move |z: Complex64| one / (c * (one - z) * (one - z));
                HarmonicFunctionHandle::new(self.describe(), Complex64::new(1.0 / c, 0.0), hp, hp)
            }
        }
    }

    fn describe(&self) -> String {
        match *self {
            CatalogFunction::FAlphaT { alpha, t, gamma } => {
                format!("F_alpha_t(alpha={alpha}, t={t}, gamma={gamma})")
            }
            CatalogFunction::FGammaAlpha { gamma, alpha } => {
                format!("f_gamma_alpha(gamma={gamma}, alpha={alpha})")
            }
            CatalogFunction::FLambda { lambda } => format!("F_lambda(lambda={lambda})"),
            CatalogFunction::PowerWithIdentity { alpha, beta, gamma } => {
                format!("power_with_identity(alpha={alpha}, beta={beta}, gamma={gamma})")
            }
            CatalogFunction::ExpDiagonal { gamma } => format!("exp_diagonal(gamma={gamma})"),
            CatalogFunction::FGammaGeometric { gamma } => format!("f_gamma_geometric(gamma={gamma})"),
        }
    }

    /// Taylor coefficients about the origin up to `order` (at least 4).
    pub fn taylor(&self, order: usize) -> Result<HarmonicMapSeries> {
        self.validate()?;
        if order < 4 {
            return Err(Error::param("Taylor order must be at least 4"));
        }
        let real = |x: f64| Complex64::new(x, 0.0);
        match *self {
            CatalogFunction::FGammaAlpha { gamma, alpha } => {
                // (1 - phi^2)^{1-alpha} = (1-gamma^2)^{1-alpha} (1-z)^{1-alpha} (1+qz)^{1-alpha}
                let c = 1.0 - alpha;
                let q = (1.0 - gamma) / (1.0 + gamma);
                let k = (1.0 - gamma).powf(alpha - 1.0) * (1.0 - gamma * gamma).powf(c)
                    / (2.0 * (alpha - 1.0));
                let base = PowerSeries::binomial(c, order);
                let shifted = base.compose_affine(real(-q), real(0.0), order);
                let mut coeffs = base.mul(&shifted, order).scale(real(k)).coeffs().to_vec();
                coeffs[0] = real(0.0);
                Ok(HarmonicMapSeries::analytic(PowerSeries::new(coeffs)?))
            }
            CatalogFunction::FGammaGeometric { gamma } => {
                let a = 1.0 / (1.0 - gamma);
                let mut b = vec![a; order + 1];
                b[0] = 0.0;
                HarmonicMapSeries::new(
                    PowerSeries::from_real(&vec![a; order + 1])?,
                    PowerSeries::from_real(&b)?,
                )
            }
            CatalogFunction::FLambda { lambda } => {
                let l = PowerSeries::log_one_minus(order)?;
                let l_neg = l.compose_affine(real(-1.0), real(0.0), order);
                let odd = (&l + &l_neg.scale(real(-1.0))).scale(real(0.5));
                let even = (&l + &l_neg).scale(real(-1.0));
                let a0 = 1.0 - 2.0 * (lambda - lambda * lambda).sqrt();
                let h = &odd + &PowerSeries::constant(real(a0), 0);
                let g = &even.scale(real((lambda - 1.0) / 2.0)) + &odd.scale(real(lambda));
                HarmonicMapSeries::new(h, g)
            }
            _ => Err(Error::param(format!("{} has no Taylor expansion here", self.name()))),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::param(format!("{name} = {v} must be positive")));
    }
    Ok(())
}

/// `h_{alpha,t}(gamma) + g_{alpha,t}(gamma)` (both real at the origin).
fn falpha_t_origin(alpha: f64, t: f64, gamma: f64) -> f64 {
    let w = 1.0 - gamma;
    let power = |e: f64| (w.powf(e) - 1.0) / -e;
    let h = if alpha == 0.5 { -w.ln() } else { power(0.5 - alpha) };
    let g = if alpha == 0.5 {
        -w.ln() - (1.0 - t) * gamma
    } else if alpha == 1.5 {
        gamma / w + (1.0 - t) * w.ln()
    } else {
        h - (1.0 - t) * power(1.5 - alpha)
    };
    h + g
}
