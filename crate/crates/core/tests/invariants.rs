use ilcp::lcp::{solve_lcp_enumerate, LcpInstance};
use ilcp::strong::{self, PropertyVerdict};
use ilcp::{input, point, CheckConfig, FastPathPolicy, IntervalMatrix, Matrix, Property};
use proptest::prelude::*;

fn matrix(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(lo..hi, n * n).prop_map(move |v| Matrix::from_row_slice(n, n, &v))
}

fn boxes(max_n: usize) -> impl Strategy<Value = IntervalMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        (matrix(n, -2.0, 2.0), matrix(n, 0.0, 0.8))
            .prop_map(|(mid, rad)| IntervalMatrix::from_mid_rad(mid, rad).unwrap())
    })
}

/// Boxes shifted by a multiple of the identity, so strong column sufficiency
/// is common.
fn shifted_boxes() -> impl Strategy<Value = IntervalMatrix> {
    (boxes(3), 0.0..3.0f64).prop_map(|(a, c)| {
        let n = a.dim();
        let scale = 0.5;
        IntervalMatrix::from_mid_rad(a.mid() * scale + Matrix::identity(n, n) * c, a.rad() * scale).unwrap()
    })
}

/// Midpoints that are (diagonally dominant) M-matrices.
fn m_midpoint_boxes() -> impl Strategy<Value = IntervalMatrix> {
    (1..=4usize).prop_flat_map(|n| {
        (matrix(n, 0.0, 1.0), prop::collection::vec(0.0..2.0, n), matrix(n, 0.0, 1.0), 0.0..1.5f64).prop_map(
            move |(off, slack, rad, scale)| {
                let mut mid = -off;
                for i in 0..n {
                    let row: f64 = (0..n).filter(|&j| j != i).map(|j| -mid[(i, j)]).sum();
                    mid[(i, i)] = row + slack[i] + 0.05;
                }
                let rad = rad * (scale / n as f64);
                IntervalMatrix::from_mid_rad(mid, rad).unwrap()
            },
        )
    })
}

/// Symmetric boxes with a positive definite midpoint.
fn pd_boxes() -> impl Strategy<Value = IntervalMatrix> {
    (1..=3usize).prop_flat_map(|n| {
        (matrix(n, -1.0, 1.0), matrix(n, 0.0, 0.6)).prop_map(move |(b, r)| {
            let mid = b.transpose() * &b + Matrix::identity(n, n) * 0.2;
            let rad = (&r + r.transpose()) * 0.5;
            IntervalMatrix::from_mid_rad(mid, rad).unwrap()
        })
    })
}

const FAST_PATH_PROPERTIES: [Property; 7] = [
    Property::Copositive,
    Property::StrictlyCopositive,
    Property::Semimonotone,
    Property::PrincipallyNondegenerate,
    Property::ColumnSufficient,
    Property::R0,
    Property::R,
];

fn verdict(p: Property, a: &IntervalMatrix, cfg: &CheckConfig) -> PropertyVerdict {
    strong::check(p, a, cfg).unwrap()
}

fn assert_paths_agree(a: &IntervalMatrix) -> Result<(), TestCaseError> {
    let auto = CheckConfig::default();
    let off = CheckConfig::default().with_fast_paths(FastPathPolicy::Off);
    for p in FAST_PATH_PROPERTIES {
        let f = verdict(p, a, &auto);
        let g = verdict(p, a, &off);
        prop_assert_eq!(f.holds, g.holds, "{} via {} vs general", p, f.method.token());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, max_global_rejects: 4096, ..ProptestConfig::default() })]

    #[test]
    fn fast_paths_agree_on_m_midpoints(a in m_midpoint_boxes()) {
        assert_paths_agree(&a)?;
    }

    #[test]
    fn fast_paths_agree_on_pd_midpoints(a in pd_boxes()) {
        assert_paths_agree(&a)?;
    }

    #[test]
    fn failures_persist_under_larger_radius(a in boxes(3), grow in 1.0..2.0f64) {
        let big = IntervalMatrix::from_mid_rad(a.mid().clone(), a.rad() * grow).unwrap();
        let cfg = CheckConfig::default();
        for p in Property::STRONG {
            if !verdict(p, &a, &cfg).holds {
                prop_assert!(!verdict(p, &big, &cfg).holds, "{} holds for the larger box", p);
            }
        }
    }

    #[test]
    fn false_verdicts_carry_verified_certificates(a in boxes(4)) {
        let cfg = CheckConfig::default();
        for p in Property::STRONG {
            let v = verdict(p, &a, &cfg);
            if !v.holds {
                let c = v.certificate.expect("certificate");
                prop_assert_eq!(c.verified, Some(true), "{}", p);
                let r = c.realization_matrix().expect("realization");
                prop_assert!(!point::holds(p, &r, &cfg.tol).unwrap(), "{} holds at its own counterexample", p);
            }
        }
    }

    #[test]
    fn strong_implications(a in boxes(4)) {
        let cfg = CheckConfig::default();
        let h = |p| verdict(p, &a, &cfg).holds;
        prop_assert!(!h(Property::M) || h(Property::H));
        prop_assert!(!h(Property::Pd) || h(Property::Psd));
        prop_assert!(!h(Property::R) || h(Property::R0));
        prop_assert!(!h(Property::StrictlyCopositive) || h(Property::Copositive));
    }

    #[test]
    fn lcp_solutions_are_complementary(a in matrix(4, -3.0, 3.0), q in prop::collection::vec(-3.0..3.0f64, 4)) {
        let inst = LcpInstance::new(a.clone(), q.clone()).unwrap();
        let sols = solve_lcp_enumerate(&inst, 1e-10).unwrap();
        for s in &sols.solutions {
            let y = inst.w(&s.z);
            for ((yi, &si), &zi) in y.iter().zip(&s.y).zip(&s.z) {
                prop_assert!((yi - si).abs() <= 1e-8 * (1.0 + yi.abs()));
                prop_assert!(zi >= -1e-8 && si >= -1e-8);
                prop_assert!(zi.min(si) <= 1e-8);
            }
        }
    }

    #[test]
    fn strong_r_boxes_give_solvable_lcps(a in m_midpoint_boxes(), t in prop::collection::vec(0.0..1.0f64, 16),
                                          qs in prop::collection::vec(-3.0..3.0f64, 20 * 4)) {
        let cfg = CheckConfig::default();
        prop_assume!(verdict(Property::R, &a, &cfg).holds);
        let n = a.dim();
        let real = Matrix::from_fn(n, n, |i, j| {
            let w = t[(i * n + j) % t.len()];
            a.lower()[(i, j)] * (1.0 - w) + a.upper()[(i, j)] * w
        });
        for q in qs.chunks(4).map(|c| c[..n].to_vec()) {
            let sols = solve_lcp_enumerate(&LcpInstance::new(real.clone(), q.clone()).unwrap(), 1e-10).unwrap();
            prop_assert!(!sols.solutions.is_empty(), "no solution for q = {:?}", q);
        }
    }

    #[test]
    fn column_sufficient_solution_sets_are_convex(a in shifted_boxes(), t in 0.0..1.0f64,
                                                  q in prop::collection::vec(-3.0..3.0f64, 3)) {
        let cfg = CheckConfig::default();
        prop_assume!(verdict(Property::ColumnSufficient, &a, &cfg).holds);
        let n = a.dim();
        let real = a.lower() * (1.0 - t) + a.upper() * t;
        let inst = LcpInstance::new(real, q[..n].to_vec()).unwrap();
        let sols = solve_lcp_enumerate(&inst, 1e-10).unwrap().solutions;
        for x in &sols {
            for y in &sols {
                let z: Vec<f64> = x.z.iter().zip(&y.z).map(|(a, b)| 0.5 * (a + b)).collect();
                prop_assert!(inst.violation(&z) <= 1e-7, "midpoint of two solutions is not a solution");
            }
        }
    }

    #[test]
    fn input_roundtrip(a in boxes(4)) {
        let f = input::InputFile::from_interval(&a);
        let g = input::parse_str(&f.to_json()).unwrap();
        prop_assert_eq!(&f, &g);
        let b = g.resolve().unwrap().interval().unwrap();
        prop_assert!(b.lower() == a.lower() && b.upper() == a.upper());
    }
}
