//! Grid estimates of the harmonic Bloch seminorms
//! `sup (|h'| + |g'|) / lambda^alpha` and `sup sqrt|J_f| / lambda^alpha`, and the pointwise
//! checks built on the same integrands.

pub mod catalog;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::domains::{hyperbolic_density, DomainSpec};
use crate::error::{Error, Result};
pub use catalog::{CatalogFunction, HarmonicFunctionHandle, CATALOG_NAMES};

pub const DEFAULT_RADIAL_LEVELS: usize = 128;
pub const DEFAULT_ANGULAR_NODES: usize = 256;
/// Boundary distance of the outermost grid circle.
pub const OUTER_GAP: f64 = 1e-6;
pub const MIN_GRID: usize = 8;

pub const BLOWUP_GROWTH: f64 = 10.0;
pub const BLOWUP_TAIL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrand {
    /// `(|h'| + |g'|) / lambda^alpha`.
    Seminorm,
    /// `sqrt|J_f| / lambda^alpha`.
    Type,
}

/// Value of the chosen integrand at `z`. Non-finite numerators are an evaluation error.
pub fn integrand(
    kind: Integrand,
    f: &HarmonicFunctionHandle,
    domain: &DomainSpec,
    alpha: f64,
    z: Complex64,
) -> Result<f64> {
    let lam = hyperbolic_density(domain, z)?;
    let numerator = match kind {
        Integrand::Seminorm => f.h_prime(z).norm() + f.g_prime(z).norm(),
        Integrand::Type => f.jacobian(z).abs().sqrt(),
    };
    if !numerator.is_finite() {
        return Err(Error::Evaluation { point: z, value: numerator });
    }
    Ok(numerator / lam.powf(alpha))
}

/// Polar grid on the sampling disk of `domain`; level `k` sits at boundary distance
/// `R (gap/R)^{k/(levels-1)}`, so level 0 is the center. Refining `(L, A)` to `(2L-1, 2A)`
/// reproduces every earlier point exactly.
pub fn grid_points(domain: &DomainSpec, radial_levels: usize, angular_nodes: usize) -> Vec<Complex64> {
    let (center, radius) = domain.sampling_disk();
    let ratio = OUTER_GAP / radius;
    let mut points = Vec::with_capacity(radial_levels * angular_nodes);
    for k in 0..radial_levels {
        let rho = radius - radius * ratio.powf(k as f64 / (radial_levels - 1) as f64);
        for j in 0..angular_nodes {
            let theta = std::f64::consts::TAU * j as f64 / angular_nodes as f64;
            points.push(center + Complex64::from_polar(rho, theta));
        }
    }
    points
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupEstimate {
    /// Largest sampled value; a lower bound for the supremum.
    pub value: f64,
    pub argmax_point: Complex64,
    pub grid_radii: usize,
    pub grid_angles: usize,
    pub integrand: Integrand,
    /// Grid points outside the domain of a conformal map, which are skipped.
    pub skipped: usize,
}

fn check_grid(alpha: f64, radial_levels: usize, angular_nodes: usize) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param(format!("alpha = {alpha} must be positive")));
    }
    if radial_levels < MIN_GRID || angular_nodes < MIN_GRID {
        return Err(Error::param(format!("grid dimensions must be at least {MIN_GRID}")));
    }
    Ok(())
}

pub fn estimate_sup(
    kind: Integrand,
    f: &HarmonicFunctionHandle,
    domain: &DomainSpec,
    alpha: f64,
    radial_levels: usize,
    angular_nodes: usize,
) -> Result<SupEstimate> {
    check_grid(alpha, radial_levels, angular_nodes)?;
    let points = grid_points(domain, radial_levels, angular_nodes);
    let values: Vec<Result<f64>> =
        points.par_iter().map(|&z| integrand(kind, f, domain, alpha, z)).collect();
    let mut best: Option<(f64, usize)> = None;
    let mut skipped = 0;
    for (i, v) in values.into_iter().enumerate() {
        match v {
            Ok(v) => {
                if best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, i));
                }
            }
            Err(Error::Domain(_)) if matches!(domain, DomainSpec::Conformal(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let Some((value, index)) = best else {
        return Err(Error::domain("no grid point lies inside the domain"));
    };
    let argmax_point = points[index];
    let check = integrand(kind, f, domain, alpha, argmax_point)?;
    if check != value {
        return Err(Error::Consistency(format!(
            "re-evaluation at {argmax_point} gave {check}, grid maximum was {value}"
        )));
    }
    Ok(SupEstimate {
        value,
        argmax_point,
        grid_radii: radial_levels,
        grid_angles: angular_nodes,
        integrand: kind,
        skipped,
    })
}

/// Lower estimate of `beta_{H,Omega}(alpha)`.
pub fn estimate_bloch_seminorm(
    f: &HarmonicFunctionHandle,
    domain: &DomainSpec,
    alpha: f64,
    radial_levels: usize,
    angular_nodes: usize,
) -> Result<SupEstimate> {
    estimate_sup(Integrand::Seminorm, f, domain, alpha, radial_levels, angular_nodes)
}

/// Lower estimate of `beta*_{H,Omega}(alpha)`.
pub fn estimate_bloch_type_seminorm(
    f: &HarmonicFunctionHandle,
    domain: &DomainSpec,
    alpha: f64,
    radial_levels: usize,
    angular_nodes: usize,
) -> Result<SupEstimate> {
    estimate_sup(Integrand::Type, f, domain, alpha, radial_levels, angular_nodes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupReport {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub growth_threshold: f64,
    pub tail_length: usize,
    pub increasing_tail: bool,
    /// Last value above `10x` the first with a strictly increasing tail.
    pub rejected: bool,
}

/// Integrand values along the real segment toward `x = 1`, with the growth verdict.
pub fn blowup_probe(
    kind: Integrand,
    f: &HarmonicFunctionHandle,
    domain: &DomainSpec,
    exponent: f64,
    approach_radii: &[f64],
) -> Result<BlowupReport> {
    if approach_radii.len() < 2 {
        return Err(Error::param("blow-up probe needs at least two radii"));
    }
    if approach_radii.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::param("approach radii must be strictly increasing"));
    }
    let values = approach_radii
        .iter()
        .map(|&x| integrand(kind, f, domain, exponent, Complex64::new(x, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    let tail = BLOWUP_TAIL.min(values.len());
    let increasing_tail = values[values.len() - tail..].windows(2).all(|w| w[0] < w[1]);
    let rejected = increasing_tail && values[values.len() - 1] > BLOWUP_GROWTH * values[0];
    Ok(BlowupReport {
        radii: approach_radii.to_vec(),
        values,
        growth_threshold: BLOWUP_GROWTH,
        tail_length: tail,
        increasing_tail,
        rejected,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineReport {
    pub samples: usize,
    /// Largest `F-integrand - (|a|+|b|) f-integrand`, relative to the right side.
    pub max_seminorm_excess: f64,
    /// Largest relative deviation of the `F` type integrand from `sqrt||a|^2-|b|^2|` times that of `f`.
    pub max_type_deviation: f64,
    pub holds: bool,
}

pub const AFFINE_REL_TOL: f64 = 1e-12;
/// `sqrt` of a Jacobian that cancels to zero carries error near `sqrt(eps)` of the scale.
pub const AFFINE_TYPE_TOL: f64 = 1e-7;

/// Checks the seminorm bound and the Jacobian scaling for `F = a f + b conj(f)` at seeded
/// random points of the sampling disk of `domain`.
pub fn affine_invariance_check(
    f: &HarmonicFunctionHandle,
    a: Complex64,
    b: Complex64,
    domain: &DomainSpec,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> Result<AffineReport> {
    let big = f.affine_combination(a, b);
    let scale = a.norm() + b.norm();
    let jscale = ((a.norm() - b.norm()) * (a.norm() + b.norm())).abs().sqrt();
    let (center, radius) = domain.sampling_disk();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AffineReport {
        samples,
        max_seminorm_excess: f64::NEG_INFINITY,
        max_type_deviation: 0.0,
        holds: true,
    };
    let mut taken = 0;
    while taken < samples {
        let rho = 0.999 * radius * rng.random::<f64>().sqrt();
        let z = center + Complex64::from_polar(rho, std::f64::consts::TAU * rng.random::<f64>());
        let small = match integrand(Integrand::Seminorm, f, domain, alpha, z) {
            Ok(v) => v,
            Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        };
        let lhs = integrand(Integrand::Seminorm, &big, domain, alpha, z)?;
        let rhs = scale * small;
        let excess = if rhs > 0.0 { (lhs - rhs) / rhs } else { lhs };
        report.max_seminorm_excess = report.max_seminorm_excess.max(excess);

        let t_small = integrand(Integrand::Type, f, domain, alpha, z)?;
        let t_big = integrand(Integrand::Type, &big, domain, alpha, z)?;
        let expected = jscale * t_small;
        // J_F is a difference of squares; its rounding error scales with |h'|^2 + |g'|^2
        let reference = scale * small;
        let dev = if reference > 0.0 { (t_big - expected).abs() / reference } else { t_big };
        report.max_type_deviation = report.max_type_deviation.max(dev);
        taken += 1;
    }
    report.holds = report.max_seminorm_excess <= AFFINE_REL_TOL
        && report.max_type_deviation <= AFFINE_TYPE_TOL;
    Ok(report)
}
