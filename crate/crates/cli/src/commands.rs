use std::collections::BTreeMap;
use std::io::Write;

use bloch_bohr::blochnorm::{self, CatalogFunction, Integrand, SupEstimate};
use bloch_bohr::coeffs::{self, CoeffBoundQuery, LANDAU_MIN_TRUNCATION};
use bloch_bohr::domains::DomainSpec;
use bloch_bohr::radii::{self, RadiusEquation};
use bloch_bohr::series::{MajorantEstimate, DEFAULT_ORDER};
use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use crate::emit::{self, CliError};
use crate::{Format, GlobalOpts};

/// Allowed slack beyond the certified tail when asserting a majorant sum of one.
const EXPECT_ONE_SLACK: f64 = 1e-6;

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("`{v}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn catalog(name: &str, params: &[(String, f64)]) -> Result<CatalogFunction, CliError> {
    let map: BTreeMap<String, f64> = params.iter().cloned().collect();
    if map.len() != params.len() {
        return Err(CliError::Usage("repeated --param key".into()));
    }
    Ok(CatalogFunction::parse(name, &map)?)
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

#[allow(non_camel_case_types)]
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
#[value(rename_all = "verbatim")]
pub enum RadiusKind {
    classical,
    integral,
    shifted,
    upperR,
    p_radius,
    bloch_type,
    sense_preserving,
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    pub equation: RadiusKind,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub d1: Option<f64>,
}

#[derive(Serialize, Default)]
struct RadiusOut {
    equation: String,
    gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    radius: f64,
    closed_form: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    equation_tag: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bracket: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sign_changes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hypothesis_proxy: Option<f64>,
}

pub fn radius(a: &RadiusArgs, g: &GlobalOpts) -> Result<(), CliError> {
    let name = format!("{:?}", a.equation);
    let closed = |radius: f64, alpha: Option<f64>| RadiusOut {
        equation: name.clone(),
        gamma: a.gamma,
        alpha,
        radius,
        closed_form: true,
        ..Default::default()
    };
    let out = match a.equation {
        RadiusKind::classical => closed(radii::classical_bohr_radius(a.gamma)?, None),
        RadiusKind::upperR => {
            let alpha = need(a.alpha, "alpha")?;
            closed(radii::upper_bound_r(a.gamma, alpha)?, Some(alpha))
        }
        kind => {
            let alpha = need(a.alpha, "alpha")?;
            let (gamma, p) = (a.gamma, a.p);
            let res = match kind {
                RadiusKind::integral => radii::bloch_bohr_radius_integral(&DomainSpec::shifted(gamma)?, alpha)?,
                RadiusKind::shifted => RadiusEquation::Shifted { gamma, alpha }.solve()?,
                RadiusKind::p_radius => RadiusEquation::PRadius { gamma, alpha, p }.solve()?,
                RadiusKind::bloch_type => {
                    let (k, d) = (need(a.k, "k")?, need(a.d, "d")?);
                    RadiusEquation::BlochType { gamma, alpha, p, k, d }.solve()?
                }
                RadiusKind::sense_preserving => {
                    let d1 = need(a.d1, "d1")?;
                    RadiusEquation::SensePreserving { gamma, alpha, p, d1 }.solve()?
                }
                RadiusKind::classical | RadiusKind::upperR => unreachable!(),
            };
            RadiusOut {
                equation: name,
                gamma,
                alpha: Some(alpha),
                radius: res.radius,
                closed_form: false,
                equation_tag: Some(res.equation_tag),
                residual: Some(res.residual),
                bracket: Some(res.bracket),
                iterations: Some(res.iterations),
                sign_changes: Some(res.sign_changes),
                hypothesis_proxy: res.hypothesis_proxy,
            }
        }
    };
    emit::write_json(g.out.as_deref(), &out)
}

#[derive(Args, Debug)]
pub struct MajorantArgs {
    /// Catalog function with computable Taylor coefficients.
    pub function: String,
    /// Function parameter as key=value (gamma, alpha, lambda).
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    #[arg(long, conflicts_with = "at_upper_r", required_unless_present = "at_upper_r")]
    pub radius: Option<f64>,
    /// Evaluate at the closed-form upper bound R for the function's (gamma, alpha).
    #[arg(long)]
    pub at_upper_r: bool,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub truncation: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Fail unless |sum - 1| <= tail bound + 1e-6.
    #[arg(long)]
    pub expect_one: bool,
}

#[derive(Serialize)]
struct MajorantOut<'a> {
    function: &'a str,
    radius: f64,
    p: f64,
    estimate: MajorantEstimate,
}

pub fn verify_majorant(a: &MajorantArgs, g: &GlobalOpts) -> Result<(), CliError> {
    let f = catalog(&a.function, &a.params)?;
    let r = match a.radius {
        Some(r) => r,
        None => match f {
            CatalogFunction::FGammaAlpha { gamma, alpha } => radii::upper_bound_r(gamma, alpha)?,
            _ => return Err(CliError::Usage("--at-upper-r needs f_gamma_alpha".into())),
        },
    };
    let est = f.taylor(a.truncation)?.majorant_estimate(r, a.p)?;
    let label = f.handle().label().to_string();
    match g.format {
        Format::Json => emit::write_json(
            g.out.as_deref(),
            &MajorantOut { function: &label, radius: r, p: a.p, estimate: est },
        )?,
        Format::Csv => {
            let mut w = emit::sink(g.out.as_deref())?;
            writeln!(w, "{:.12} ± {:.3e}", est.partial_sum, est.tail_bound)?;
            w.flush()?;
        }
    }
    if a.expect_one {
        let gap = (est.partial_sum - 1.0).abs();
        if gap > est.tail_bound + EXPECT_ONE_SLACK {
            return Err(CliError::Check(format!("|sum - 1| = {gap:e} exceeds tail {:e} + slack", est.tail_bound)));
        }
    }
    Ok(())
}

#[derive(Args, Debug, Clone, Copy)]
pub struct QueryArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Norm bound.
    #[arg(long = "M")]
    pub m: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, alias = "beta")]
    pub lambda: f64,
}

#[derive(Subcommand, Debug)]
pub enum CoeffsCommand {
    /// Infimum of mu(r) bounding |a_n| + |b_n|.
    Mu(QueryArgs),
    /// Infimum giving C_{n,M}.
    C(QueryArgs),
    /// Univalence radius rho0 and covered disk rho.
    Landau {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long = "M")]
        m: f64,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = LANDAU_MIN_TRUNCATION)]
        truncation: usize,
    },
    /// A_n bound from the circle integral on the shifted disk.
    An {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long = "M")]
        m: f64,
        #[arg(long)]
        n: usize,
    },
    /// C_n bound at the closed-form critical point.
    Cn {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long = "M")]
        m: f64,
        #[arg(long)]
        n: usize,
    },
    /// Growth of C_n against n^{2 alpha - 2}.
    Asymptotic {
        #[arg(long)]
        alpha: f64,
        #[arg(long = "M")]
        m: f64,
        #[arg(long, default_value_t = 1000)]
        n_max: usize,
    },
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[command(subcommand)]
    pub command: CoeffsCommand,
}

#[derive(Serialize)]
struct CoeffsOut<Q: Serialize, R: Serialize> {
    command: &'static str,
    query: Q,
    result: R,
}

fn query(q: QueryArgs) -> CoeffBoundQuery {
    CoeffBoundQuery { n: q.n, norm_bound: q.m, lambda: q.lambda, gamma: q.gamma, alpha: q.alpha }
}

#[derive(Serialize)]
struct Params {
    alpha: f64,
    gamma: f64,
    norm_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
}

pub fn coeffs(a: &CoeffsArgs, g: &GlobalOpts) -> Result<(), CliError> {
    let out = g.out.as_deref();
    match a.command {
        CoeffsCommand::Mu(q) => {
            let q = query(q);
            emit::write_json(out, &CoeffsOut { command: "mu", query: q, result: coeffs::mu_infimum(&q)? })
        }
        CoeffsCommand::C(q) => {
            let q = query(q);
            emit::write_json(out, &CoeffsOut { command: "c", query: q, result: coeffs::coeff_bound_c(&q)? })
        }
        CoeffsCommand::Landau { alpha, gamma, m, lambda, truncation } => {
            let result = coeffs::landau_radius(alpha, lambda, gamma, m, truncation)?;
            let query = Params { alpha, gamma, norm_bound: m, n: None, lambda: Some(lambda) };
            emit::write_json(out, &CoeffsOut { command: "landau", query, result })
        }
        CoeffsCommand::An { alpha, gamma, m, n } => {
            let result = coeffs::an_bound(&DomainSpec::shifted(gamma)?, m, alpha, n)?;
            let query = Params { alpha, gamma, norm_bound: m, n: Some(n), lambda: None };
            emit::write_json(out, &CoeffsOut { command: "an", query, result })
        }
        CoeffsCommand::Cn { alpha, gamma, m, n } => {
            let result = coeffs::cn_closed(alpha, gamma, m, n)?;
            let query = Params { alpha, gamma, norm_bound: m, n: Some(n), lambda: None };
            emit::write_json(out, &CoeffsOut { command: "cn", query, result })
        }
        CoeffsCommand::Asymptotic { alpha, m, n_max } => {
            let result = coeffs::asymptotic_check(alpha, m, n_max)?;
            let query = Params { alpha, gamma: 0.0, norm_bound: m, n: Some(n_max), lambda: None };
            emit::write_json(out, &CoeffsOut { command: "asymptotic", query, result })
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Seminorm,
    Type,
    Both,
}

#[derive(Args, Debug)]
pub struct NormArgs {
    pub function: String,
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Exponent of the density in the seminorm.
    #[arg(long, default_value_t = 1.0)]
    pub exponent: f64,
    #[arg(long, value_enum, default_value_t = NormKind::Both)]
    pub kind: NormKind,
    #[arg(long, default_value_t = blochnorm::DEFAULT_RADIAL_LEVELS)]
    pub levels: usize,
    #[arg(long, default_value_t = blochnorm::DEFAULT_ANGULAR_NODES)]
    pub angles: usize,
}

#[derive(Serialize)]
struct NormOut {
    function: String,
    domain: String,
    exponent: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    seminorm: Option<SupEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    type_seminorm: Option<SupEstimate>,
}

pub fn norm_estimate(a: &NormArgs, g: &GlobalOpts) -> Result<(), CliError> {
    let f = catalog(&a.function, &a.params)?;
    let h = f.handle();
    let domain = DomainSpec::shifted(f.gamma())?;
    let run = |kind| blochnorm::estimate_sup(kind, &h, &domain, a.exponent, a.levels, a.angles);
    let seminorm = match a.kind {
        NormKind::Seminorm | NormKind::Both => Some(run(Integrand::Seminorm)?),
        NormKind::Type => None,
    };
    let type_seminorm = match a.kind {
        NormKind::Type | NormKind::Both => Some(run(Integrand::Type)?),
        NormKind::Seminorm => None,
    };
    let out = NormOut {
        function: h.label().to_string(),
        domain: domain.label(),
        exponent: a.exponent,
        seminorm,
        type_seminorm,
    };
    emit::write_json(g.out.as_deref(), &out)
}
