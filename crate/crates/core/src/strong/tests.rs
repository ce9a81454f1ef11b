use super::*;

fn m(n: usize, v: &[f64]) -> Matrix {
    Matrix::from_row_slice(n, n, v)
}

fn cfg() -> CheckConfig {
    CheckConfig::default()
}

fn mr(mid: Matrix, rad: Matrix) -> IntervalMatrix {
    IntervalMatrix::from_mid_rad(mid, rad).unwrap()
}

fn point(a: Matrix) -> IntervalMatrix {
    IntervalMatrix::degenerate(a).unwrap()
}

fn holds(p: Property, a: &IntervalMatrix) -> bool {
    let v = check(p, a, &cfg()).unwrap();
    if !v.holds {
        let c = v.certificate.as_ref().expect("false verdicts carry a certificate");
        assert_eq!(c.verified, Some(true), "{p}: certificate does not verify: {c:?}");
    }
    v.holds
}

fn skew3(factor: f64) -> IntervalMatrix {
    IntervalMatrix::relative(m(3, &[0., -1., 2., 2., 0., -2., -1., 1., 0.]), factor).unwrap()
}

#[test]
fn s_examples() {
    assert!(holds(Property::S, &point(Matrix::identity(2, 2))));
    let up = m(2, &[2., 0., 0., 2.]);
    let not_s = IntervalMatrix::from_bounds(m(2, &[1., -2., -2., 1.]), up.clone()).unwrap();
    assert!(!holds(Property::S, &not_s));
    let s = IntervalMatrix::from_bounds(m(2, &[2., -1., -1., 2.]), m(2, &[3., 0., 0., 3.])).unwrap();
    assert!(holds(Property::S, &s));
}

#[test]
fn z_examples() {
    assert!(holds(Property::Z, &point(Matrix::identity(2, 2))));
    let a = IntervalMatrix::from_bounds(m(2, &[1., 0., -1., 2.]), m(2, &[1., 0.1, -1., 2.])).unwrap();
    assert!(!holds(Property::Z, &a));
    assert!(!holds(Property::Z, &skew3(0.1)));
}

#[test]
fn copositive_examples() {
    let a = mr(Matrix::identity(2, 2), Matrix::from_element(2, 2, 0.5));
    let v = check(Property::Copositive, &a, &cfg()).unwrap();
    assert!(v.holds && v.method == Method::FastIdentity && v.boundary);
    assert!((v.rho.unwrap() - 1.0).abs() < 1e-12);
    assert!(!holds(Property::StrictlyCopositive, &a));

    let zero = point(Matrix::zeros(2, 2));
    assert!(holds(Property::Copositive, &zero));
    assert!(!holds(Property::StrictlyCopositive, &zero));

    let b = mr(m(2, &[2., -1., -1., 2.]), Matrix::from_element(2, 2, 0.1));
    let v = check(Property::StrictlyCopositive, &b, &cfg()).unwrap();
    assert!(v.holds);
    assert_eq!(v.method, Method::FastMidpointM);
}

#[test]
fn semimonotone_examples() {
    assert!(holds(Property::Semimonotone, &skew3(0.1)));
    assert!(!holds(Property::Semimonotone, &skew3(0.15)));
    let a = mr(Matrix::identity(3, 3), Matrix::from_element(3, 3, 1.0 / 3.0));
    let v = check(Property::Semimonotone, &a, &cfg()).unwrap();
    assert!(v.holds && v.method == Method::FastIdentity);
}

#[test]
fn nonsingular_examples() {
    assert!(strong_nonsingular(&point(Matrix::identity(2, 2)), &cfg()).unwrap().holds);
    let bad = strong_nonsingular(&mr(Matrix::identity(2, 2), Matrix::from_element(2, 2, 0.5)), &cfg()).unwrap();
    assert!(!bad.holds);
    let r = bad.certificate.unwrap().realization_matrix().unwrap();
    assert!(linalg::determinant(&r).abs() < 1e-9);
    assert!(strong_nonsingular(&mr(Matrix::identity(2, 2), Matrix::from_element(2, 2, 0.4)), &cfg()).unwrap().holds);
}

#[test]
fn nondegenerate_examples() {
    assert!(!holds(Property::PrincipallyNondegenerate, &skew3(0.1)));
    let a = mr(Matrix::identity(2, 2), Matrix::from_element(2, 2, 0.4));
    let v = check(Property::PrincipallyNondegenerate, &a, &cfg()).unwrap();
    assert!(v.holds && v.method == Method::FastIdentity);
    assert!((v.rho.unwrap() - 0.8).abs() < 1e-12);
    assert!(!holds(Property::PrincipallyNondegenerate, &point(m(2, &[0., -1., 0., 0.]))));
    // general path on the same box
    let off = cfg().with_fast_paths(FastPathPolicy::Off);
    assert!(check(Property::PrincipallyNondegenerate, &a, &off).unwrap().holds);
    let b = mr(Matrix::identity(2, 2), Matrix::from_element(2, 2, 0.6));
    assert!(!holds(Property::PrincipallyNondegenerate, &b));
    assert!(!check(Property::PrincipallyNondegenerate, &b, &off).unwrap().holds);
}

#[test]
fn column_sufficient_examples() {
    assert!(holds(Property::ColumnSufficient, &skew3(0.1)));
    let v = check(Property::ColumnSufficient, &skew3(0.15), &cfg()).unwrap();
    assert!(!v.holds);
    let c = v.certificate.unwrap();
    assert_eq!(c.index_set.as_deref(), Some(&[0, 1, 2][..]));
    assert_eq!(c.complement_set.as_deref(), Some(&[][..]));

    let a = mr(Matrix::identity(2, 2), m(2, &[1., 1., 0., 1.]));
    let v = check(Property::ColumnSufficient, &a, &cfg()).unwrap();
    assert!(!v.holds);
    assert_eq!(v.method, Method::General);
    assert!(v.skipped.iter().any(|s| s.method == Method::FastIdentity && s.reason.contains("reducible")));
}

#[test]
fn column_sufficient_paths_agree() {
    for f in [0.0, 0.05, 0.1, 0.12, 0.15, 0.3] {
        let a = skew3(f);
        let sys = check(Property::ColumnSufficient, &a, &cfg()).unwrap().holds;
        let ss = strong_column_sufficient_sign_vertices(&a, &cfg()).unwrap().holds;
        assert_eq!(sys, ss, "factor {f}");
    }
}

#[test]
fn r0_r_examples() {
    for p in [Property::R0, Property::R] {
        assert!(holds(p, &skew3(0.1)), "{p}");
        let v = check(p, &skew3(0.15), &cfg()).unwrap();
        assert!(!v.holds, "{p}");
        assert_eq!(v.certificate.unwrap().index_set.as_deref(), Some(&[0, 1, 2][..]));
        assert!(!holds(p, &point(Matrix::zeros(2, 2))));
    }
    let a = mr(Matrix::identity(2, 2), m(2, &[0., 2., 0., 0.]));
    let v = check(Property::R0, &a, &cfg()).unwrap();
    assert!(v.holds && v.method == Method::FastIdentity && v.rho.unwrap().abs() < 1e-12);
    let off = cfg().with_fast_paths(FastPathPolicy::Off);
    assert!(check(Property::R0, &a, &off).unwrap().holds);
    assert!(holds(Property::R, &point(Matrix::identity(2, 2))));
}

#[test]
fn direct_examples() {
    let a = IntervalMatrix::from_bounds(m(2, &[2., -1., -1., 2.]), m(2, &[3., -0.5, -0.5, 3.])).unwrap();
    assert!(holds(Property::M, &a));
    assert!(holds(Property::H, &a));
    let b = IntervalMatrix::from_bounds(m(2, &[1., -1., -1., 1.]), m(2, &[3., 1., 1., 3.])).unwrap();
    assert!(!holds(Property::H, &b));
    let c = mr(m(2, &[2., 0., 0., 2.]), Matrix::from_element(2, 2, 1.0));
    assert!(holds(Property::Psd, &c));
    assert!(!holds(Property::Pd, &c));
}

#[test]
fn unsupported_properties() {
    let a = point(Matrix::identity(2, 2));
    assert!(matches!(check(Property::P, &a, &cfg()), Err(Error::Unsupported(_))));
    assert!(matches!(check(Property::M0, &a, &cfg()), Err(Error::Unsupported(_))));
}

#[test]
fn only_policy_errors_without_fast_path() {
    let only = cfg().with_fast_paths(FastPathPolicy::Only);
    assert!(matches!(check(Property::Semimonotone, &skew3(0.1), &only), Err(Error::NoFastPath(_))));
    let a = mr(Matrix::identity(2, 2), Matrix::from_element(2, 2, 0.4));
    assert!(check(Property::Semimonotone, &a, &only).unwrap().holds);
}

#[test]
fn check_all_skew3() {
    let r = check_all(&skew3(0.1), &cfg().with_properties(&Property::TRACKED)).unwrap();
    assert!(r.all_hold);
    let r = check_all(&point(Matrix::identity(3, 3)), &cfg()).unwrap();
    assert!(r.all_hold, "{}", r.to_text());
}

#[test]
fn cap_exceeded() {
    let mut c = cfg();
    c.caps.index_pairs = 2;
    let e = check(Property::ColumnSufficient, &skew3(0.15), &c.clone().with_fast_paths(FastPathPolicy::Off));
    assert!(matches!(e, Err(Error::CapExceeded { .. })));
}
