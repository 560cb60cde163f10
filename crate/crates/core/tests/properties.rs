use bloch_bohr::blochnorm::{self, CatalogFunction, Integrand};
use bloch_bohr::coeffs::{self, CoeffBoundQuery};
use bloch_bohr::domains::{self, DomainSpec, QUADRATURE_TOL};
use bloch_bohr::radii::{self, RadiusEquation};
use bloch_bohr::series::{HarmonicMapSeries, PowerSeries};
use num_complex::Complex64;
use proptest::prelude::*;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn point_in_half_disk() -> impl Strategy<Value = Complex64> {
    (0.0..=0.5f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn rel_close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1e-300)
}

fn geometric(order: usize) -> PowerSeries {
    PowerSeries::from_real(&vec![1.0; order + 1]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn series_match_closed_forms(z in point_in_half_disk()) {
        let n = 256;
        let geo = geometric(n);
        prop_assert!(rel_close(geo.eval(z), ONE / (ONE - z), 1e-8));
        prop_assert!(rel_close(geo.mul(&geo, n).eval(z), ONE / ((ONE - z) * (ONE - z)), 1e-8));
        prop_assert!(rel_close(geo.derivative().eval(z), ONE / ((ONE - z) * (ONE - z)), 1e-8));
        let log = PowerSeries::log_one_minus(n).unwrap();
        prop_assert!(rel_close(log.eval(z), -(ONE - z).ln(), 1e-8));
        prop_assert!(rel_close(log.derivative().eval(z), ONE / (ONE - z), 1e-8));
        for c in [-2.0, -0.5, 0.5, 2.0] {
            let b = PowerSeries::binomial(c, n);
            prop_assert!(rel_close(b.eval(z), (ONE - z).powf(c), 1e-8));
            // (1 - (z/2 + 1/4))^c
            let shifted = b.compose_affine(Complex64::new(0.5, 0.0), Complex64::new(0.25, 0.0), n);
            prop_assert!(rel_close(shifted.eval(z), (ONE - z * 0.5 - 0.25).powf(c), 1e-8));
            let prod = b.mul(&geo, n);
            prop_assert!(rel_close(prod.eval(z), (ONE - z).powf(c) / (ONE - z), 1e-8));
        }
    }

    #[test]
    fn majorant_monotone_in_radius_and_order(
        coeffs in prop::collection::vec(-3.0..3.0f64, 2..40),
        r1 in 0.0..0.95f64,
        dr in 0.0..0.04f64,
    ) {
        let h = PowerSeries::from_real(&coeffs).unwrap();
        let mut gc = coeffs.iter().rev().cloned().collect::<Vec<_>>();
        gc[0] = 0.0;
        let g = PowerSeries::from_real(&gc).unwrap();
        let f = HarmonicMapSeries::new(h.clone(), g.clone()).unwrap();
        prop_assert!(f.majorant_sum(r1).unwrap() <= f.majorant_sum(r1 + dr).unwrap());
        let short = HarmonicMapSeries::new(h.truncate(coeffs.len() / 2), g.truncate(coeffs.len() / 2)).unwrap();
        prop_assert!(short.majorant_sum(r1).unwrap() <= f.majorant_sum(r1).unwrap());
    }

    #[test]
    fn compose_identity_affine_is_identity(coeffs in prop::collection::vec(-5.0..5.0f64, 1..30)) {
        let s = PowerSeries::from_real(&coeffs).unwrap();
        let c = s.compose_affine(ONE, Complex64::new(0.0, 0.0), s.order());
        prop_assert_eq!(c.coeffs(), s.coeffs());
    }

    #[test]
    fn p_majorant_nonincreasing_in_p(
        coeffs in prop::collection::vec(-3.0..3.0f64, 3..30),
        r in 0.0..0.9f64,
        p1 in 1.0..4.0f64,
        dp in 0.0..3.0f64,
    ) {
        let h = PowerSeries::from_real(&coeffs).unwrap();
        let mut gc: Vec<f64> = coeffs.iter().map(|c| 0.5 * c).collect();
        gc[0] = 0.0;
        let f = HarmonicMapSeries::new(h, PowerSeries::from_real(&gc).unwrap()).unwrap();
        let a = f.p_majorant_sum(r, p1).unwrap();
        let b = f.p_majorant_sum(r, p1 + dp).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12));
    }

    #[test]
    fn density_conjugate_symmetric(gamma in 0.0..0.95f64, re in -0.99..0.99f64, im in -0.99..0.99f64) {
        let d = DomainSpec::shifted(gamma).unwrap();
        let z = Complex64::new(re, im);
        match domains::hyperbolic_density(&d, z) {
            Ok(v) => prop_assert_eq!(v, domains::hyperbolic_density(&d, z.conj()).unwrap()),
            Err(_) => prop_assert!(domains::hyperbolic_density(&d, z.conj()).is_err()),
        }
    }

    #[test]
    fn shifted_zero_is_unit_disk(re in -0.7..0.7f64, im in -0.7..0.7f64) {
        let z = Complex64::new(re, im);
        prop_assert_eq!(
            domains::hyperbolic_density(&DomainSpec::shifted(0.0).unwrap(), z).unwrap(),
            domains::hyperbolic_density(&DomainSpec::UnitDisk, z).unwrap()
        );
    }

    #[test]
    fn inclusion_direction(
        g1 in 0.0..0.9f64,
        dg in 0.0..0.09f64,
        r in 0.0..0.95f64,
        t in 0.0..std::f64::consts::TAU,
        which in 0usize..3,
    ) {
        let g2 = g1 + dg;
        let f = match which {
            0 => CatalogFunction::FAlphaT { alpha: 1.0, t: 0.3, gamma: g1 },
            1 => CatalogFunction::FGammaGeometric { gamma: g1 },
            _ => CatalogFunction::FGammaAlpha { gamma: g1, alpha: 2.0 },
        }
        .handle();
        let z = Complex64::from_polar(r, t);
        let small = blochnorm::integrand(Integrand::Seminorm, &f, &DomainSpec::shifted(g1).unwrap(), 1.0, z).unwrap();
        let big = blochnorm::integrand(Integrand::Seminorm, &f, &DomainSpec::shifted(g2).unwrap(), 1.0, z).unwrap();
        prop_assert!(big >= small * (1.0 - 1e-12));
    }

    #[test]
    fn f_alpha_t_dilatation(
        alpha in 0.1..3.0f64,
        t in 0.0..0.99f64,
        gamma in 0.0..0.9f64,
        r in 0.0..0.99f64,
        th in 0.0..std::f64::consts::TAU,
    ) {
        let d = DomainSpec::shifted(gamma).unwrap();
        let (c, rad) = d.sampling_disk();
        let z = c + Complex64::from_polar(r * rad, th);
        let f = CatalogFunction::FAlphaT { alpha, t, gamma }.handle();
        let expected = (z * (1.0 - gamma) + gamma) * (1.0 - t) + t;
        prop_assert!((f.dilatation(z) - expected).norm() <= 1e-10);
    }

    #[test]
    fn radius_residual_and_smallest_root(
        gamma in 0.0..0.95f64,
        alpha in 0.0..3.0f64,
        p in 1.0..3.0f64,
        k in 0.05..0.95f64,
        d in 0.0..1.0f64,
        d1 in 0.0..0.9f64,
        which in 0usize..4,
    ) {
        let eq = match which {
            0 => RadiusEquation::Shifted { gamma, alpha },
            1 => RadiusEquation::PRadius { gamma, alpha, p },
            2 => RadiusEquation::BlochType { gamma, alpha, p, k, d },
            _ => RadiusEquation::SensePreserving { gamma, alpha, p, d1 },
        };
        let res = eq.solve().unwrap();
        let scale = eq.eval(0.0).abs().max(f64::MIN_POSITIVE);
        prop_assert!(res.residual.abs() / scale <= 1e-10, "{:?}", res);
        let lo = res.bracket.0;
        let sign0 = eq.eval(1e-12).signum();
        for i in 0..=4096 {
            let x = 1e-12 + (lo - 1e-12) * i as f64 / 4096.0;
            prop_assert_eq!(eq.eval(x).signum(), sign0);
        }
    }

    #[test]
    fn p_radius_below_shifted_radius(gamma in 0.0..0.95f64, alpha in 0.0..3.0f64) {
        let p1 = radii::p_bloch_bohr_radius(gamma, alpha, 1.0).unwrap().radius;
        let h = radii::bloch_bohr_radius_shifted(gamma, alpha).unwrap().radius;
        prop_assert!(p1 <= h);
    }

    #[test]
    fn critical_points_signs(n in 2usize..200, alpha in 0.01..5.0f64, gamma in 0.0..0.99f64) {
        let (t1, t2) = coeffs::cn_critical_points(alpha, gamma, n);
        prop_assert!(t1 > 0.0 && t1 < 1.0);
        prop_assert!(t2 < 0.0);
    }

    #[test]
    fn mu_and_c_coincide_at_gamma_zero(n in 2usize..12, m in 1.0..3.0f64, frac in 0.0..0.99f64, alpha in 0.2..3.0f64) {
        let q = CoeffBoundQuery { n, norm_bound: m, lambda: frac * m, gamma: 0.0, alpha };
        let a = coeffs::mu_infimum(&q).unwrap().value;
        let b = coeffs::coeff_bound_c(&q).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn landau_stable_under_doubling(alpha in 0.5..2.5f64, frac in 0.05..0.9f64, gamma in 0.0..0.6f64) {
        let c = 1.0 - gamma;
        // keep lambda below the minimum of m(r, gamma) so the bound is not degenerate
        let lambda = frac * c.powf(alpha);
        let a = coeffs::landau_radius(alpha, lambda, gamma, 1.0, 64).unwrap();
        let b = coeffs::landau_radius(alpha, lambda, gamma, 1.0, 2 * a.truncation).unwrap();
        prop_assert!((a.rho0 - b.rho0).abs() <= 1e-9);
        prop_assert!((a.rho - b.rho).abs() <= 1e-9);
        prop_assert!(a.rho < lambda * a.rho0);
    }

    #[test]
    fn grid_refinement_is_monotone(which in 0usize..4, gamma in 0.0..0.8f64, levels in 8usize..24, angles in 8usize..32) {
        let f = match which {
            0 => CatalogFunction::FAlphaT { alpha: 1.0, t: 0.5, gamma },
            1 => CatalogFunction::FGammaGeometric { gamma },
            2 => CatalogFunction::FGammaAlpha { gamma, alpha: 1.5 },
            _ => CatalogFunction::PowerWithIdentity { alpha: 1.0, beta: 3.2, gamma },
        }
        .handle();
        let d = DomainSpec::shifted(gamma).unwrap();
        for kind in [Integrand::Seminorm, Integrand::Type] {
            let coarse = blochnorm::estimate_sup(kind, &f, &d, 1.5, levels, angles).unwrap();
            let fine = blochnorm::estimate_sup(kind, &f, &d, 1.5, 2 * levels - 1, 2 * angles).unwrap();
            prop_assert!(fine.value >= coarse.value);
        }
    }
}

#[test]
fn circle_integral_strictly_increasing() {
    for d in [DomainSpec::UnitDisk, DomainSpec::shifted(0.3).unwrap(), DomainSpec::shifted(0.8).unwrap()] {
        for alpha in [0.5, 1.0, 2.0] {
            let vals: Vec<f64> = (1..=100)
                .map(|i| domains::circle_integral_i(&d, i as f64 / 101.0, alpha, QUADRATURE_TOL).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[0] < w[1]), "{} alpha={alpha}", d.label());
        }
    }
}

#[test]
fn mu_matches_million_point_scan() {
    let q = CoeffBoundQuery { n: 2, norm_bound: 1.0, lambda: 0.5, gamma: 0.0, alpha: 1.0 };
    let n = 1_000_000;
    let mut best = f64::INFINITY;
    for i in 1..n {
        let r = i as f64 / n as f64;
        let m = 1.0 / (1.0 - r * r);
        best = best.min((m * m - 0.25) / (2.0 * r * m));
    }
    let got = coeffs::mu_infimum(&q).unwrap().value;
    assert!((got - best).abs() <= 1e-9, "{got} vs {best}");
}
