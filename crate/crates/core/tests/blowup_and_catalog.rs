use bloch_bohr::blochnorm::{
    self, CatalogFunction, HarmonicFunctionHandle, Integrand, DEFAULT_ANGULAR_NODES,
    DEFAULT_RADIAL_LEVELS,
};
use bloch_bohr::domains::DomainSpec;
use num_complex::Complex64;

fn shifted(g: f64) -> DomainSpec {
    DomainSpec::shifted(g).unwrap()
}

#[test]
fn f_alpha_t_blows_up_along_real_axis() {
    let f = CatalogFunction::FAlphaT { alpha: 1.0, t: 0.0, gamma: 0.2 }.handle();
    let rep = blochnorm::blowup_probe(
        Integrand::Seminorm,
        &f,
        &shifted(0.2),
        1.0,
        &[0.9, 0.99, 0.999, 0.9999],
    )
    .unwrap();
    assert!(rep.values.windows(2).all(|w| w[0] < w[1]), "{:?}", rep.values);
    assert!(rep.rejected);
}

#[test]
fn identity_is_not_rejected() {
    let rep = blochnorm::blowup_probe(
        Integrand::Seminorm,
        &HarmonicFunctionHandle::identity(),
        &DomainSpec::UnitDisk,
        1.0,
        &[0.9, 0.99, 0.999, 0.9999, 0.99999],
    )
    .unwrap();
    assert!(!rep.rejected);
    assert!(rep.values.iter().all(|&v| v <= 1.0));
}

#[test]
fn power_with_identity_blows_up() {
    let f = CatalogFunction::PowerWithIdentity { alpha: 1.0, beta: 3.5, gamma: 0.3 }.handle();
    let radii: Vec<f64> = (1..=8).map(|k| 1.0 - 10f64.powi(-k)).collect();
    let rep = blochnorm::blowup_probe(Integrand::Seminorm, &f, &shifted(0.3), 1.0, &radii).unwrap();
    assert!(rep.rejected, "{:?}", rep.values);
}

#[test]
fn sharpness_of_half_exponent_shift() {
    // integrand ~ (1-x)^{p - alpha - 1/2}: blows up below alpha + 1/2, stays bounded at it
    let alpha = 2.0;
    let f = CatalogFunction::FAlphaT { alpha, t: 0.0, gamma: 0.0 }.handle();
    let radii: Vec<f64> = (1..=8).map(|k| 1.0 - 10f64.powi(-k)).collect();
    let below = blochnorm::blowup_probe(Integrand::Seminorm, &f, &DomainSpec::UnitDisk, alpha + 0.3, &radii)
        .unwrap();
    assert!(below.rejected, "{:?}", below.values);
    let at = blochnorm::blowup_probe(Integrand::Seminorm, &f, &DomainSpec::UnitDisk, alpha + 0.5, &radii)
        .unwrap();
    assert!(!at.rejected);
    let hi = at.values.iter().cloned().fold(f64::MIN, f64::max);
    let lo = at.values.iter().cloned().fold(f64::MAX, f64::min);
    assert!(hi / lo < 2.0, "{:?}", at.values);
}

#[test]
fn probe_rejects_unsorted_radii() {
    let f = HarmonicFunctionHandle::identity();
    assert!(blochnorm::blowup_probe(Integrand::Seminorm, &f, &DomainSpec::UnitDisk, 1.0, &[0.5, 0.4]).is_err());
}

#[test]
fn exp_diagonal_type_integrand_vanishes() {
    let f = CatalogFunction::ExpDiagonal { gamma: 0.5 }.handle();
    let d = shifted(0.5);
    for z in blochnorm::grid_points(&d, 32, 64) {
        assert_eq!(blochnorm::integrand(Integrand::Type, &f, &d, 1.0, z).unwrap(), 0.0);
    }
}

#[test]
fn equal_derivatives_give_zero_type_seminorm() {
    let f = HarmonicFunctionHandle::new(
        "diag",
        Complex64::new(0.0, 0.0),
        |z: Complex64| Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - z),
        |z: Complex64| Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - z),
    );
    let est = blochnorm::estimate_bloch_type_seminorm(&f, &DomainSpec::UnitDisk, 1.0, 32, 64).unwrap();
    assert_eq!(est.value, 0.0);
}

#[test]
fn f_lambda_seminorm_dominates_type_seminorm() {
    let f = CatalogFunction::FLambda { lambda: 0.75 }.handle();
    let d = DomainSpec::UnitDisk;
    let s = blochnorm::estimate_bloch_seminorm(&f, &d, 1.0, DEFAULT_RADIAL_LEVELS, DEFAULT_ANGULAR_NODES).unwrap();
    let t = blochnorm::estimate_bloch_type_seminorm(&f, &d, 1.0, DEFAULT_RADIAL_LEVELS, DEFAULT_ANGULAR_NODES)
        .unwrap();
    assert!(t.value <= s.value);
    let again = blochnorm::integrand(Integrand::Seminorm, &f, &d, 1.0, s.argmax_point).unwrap();
    assert_eq!(again, s.value);
}

#[test]
fn affine_check_examples() {
    let id = HarmonicFunctionHandle::identity();
    let d = DomainSpec::UnitDisk;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let rep = blochnorm::affine_invariance_check(&id, one, zero, &d, 1.0, 200, 1).unwrap();
    assert!(rep.holds && rep.max_type_deviation == 0.0);

    let f = CatalogFunction::FLambda { lambda: 0.6 }.handle();
    let a = Complex64::new(0.6, 0.8);
    let rep = blochnorm::affine_invariance_check(&f, a, one, &d, 1.0, 200, 2).unwrap();
    assert!(rep.holds, "{rep:?}");
    let big = f.affine_combination(a, one);
    for z in [Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.4)] {
        let t = blochnorm::integrand(Integrand::Type, &big, &d, 1.0, z).unwrap();
        assert!(t < 1e-7, "{t}");
    }

    let big = id.affine_combination(Complex64::new(2.0, 0.0), one);
    for z in [Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.4), Complex64::new(0.0, 0.9)] {
        let lhs = blochnorm::integrand(Integrand::Seminorm, &big, &d, 1.0, z).unwrap();
        let rhs = blochnorm::integrand(Integrand::Seminorm, &id, &d, 1.0, z).unwrap();
        assert!((lhs - 3.0 * rhs).abs() <= 1e-15 * lhs);
    }
}

#[test]
fn catalog_aliases_parse() {
    let mut p = std::collections::BTreeMap::new();
    p.insert("gamma".to_string(), 0.5);
    assert!(matches!(CatalogFunction::parse("example_2_7", &p).unwrap(), CatalogFunction::ExpDiagonal { .. }));
    p.insert("alpha".to_string(), 1.0);
    p.insert("beta".to_string(), 2.5);
    assert!(CatalogFunction::parse("example_2_2", &p).is_err());
    p.insert("beta".to_string(), 3.5);
    assert!(CatalogFunction::parse("example_2_2", &p).is_ok());
    assert!(CatalogFunction::parse("nope", &p).is_err());
}
