//! Falsification oracle: evaluates point checkers on realizations drawn from
//! the box. It can refute a strong verdict but never certify one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::CheckConfig;
use crate::interval::{IntervalMatrix, SignVector};
use crate::point::{self, matrix_to_rows, Certificate, Property};
use crate::report::{box_digest, Report};
use crate::interval::submatrix;
use crate::linalg;
use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleVerdict {
    CounterexampleFound,
    NoCounterexampleInBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    /// Bounds, midpoint, comparison realization and sign vertices.
    Structured,
    Vertex,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub matrix: Vec<Vec<f64>>,
    pub property: Property,
    pub kind: SampleKind,
    /// Position in the sample sequence (0-based).
    pub sample: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub verdict: OracleVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub samples: usize,
    /// Every endpoint vertex of the box was tested.
    pub exhaustive_vertices: bool,
}

/// Largest number of free entries for which the vertex set is enumerated.
const MAX_VERTEX_BITS: usize = 24;

/// Sample realizations of `a` and test `property` on each, stopping at the
/// first failure. Order: structured points, then all endpoint vertices if
/// they fit in the budget (random vertices otherwise), then uniform interior
/// points. Deterministic in `seed`.
pub fn falsify(
    a: &IntervalMatrix,
    property: Property,
    budget: usize,
    seed: u64,
    cfg: &CheckConfig,
) -> Result<OracleOutcome> {
    if budget == 0 {
        return Err(Error::Input("oracle budget must be at least 1".into()));
    }
    let n = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = 0usize;
    // Nondegeneracy fails on a measure-zero set, so sampling alone almost
    // never hits it. Instead, a principal minor whose sign differs from the
    // first sample's puts a singular block on the segment between them.
    let track_minors = property == Property::PrincipallyNondegenerate && n <= cfg.caps.point;
    let mut reference: Option<(Matrix, Vec<f64>)> = None;
    let mut test = |m: Matrix, kind: SampleKind, used: &mut usize| -> Result<Option<Counterexample>> {
        let sample = *used;
        *used += 1;
        let c = point::check(property, &m, &cfg.tol, cfg.caps.point)?;
        if !c.holds {
            return Ok(Some(Counterexample {
                matrix: matrix_to_rows(&m),
                property,
                kind,
                sample,
                certificate: c.certificate,
            }));
        }
        if !track_minors {
            return Ok(None);
        }
        let minors = principal_minors(&m);
        let Some((r, r_minors)) = &reference else {
            reference = Some((m, minors));
            return Ok(None);
        };
        let Some(k) = (0..minors.len()).find(|&k| minors[k].signum() != r_minors[k].signum()) else {
            return Ok(None);
        };
        let idx = subset_of_mask(n, k as u64 + 1);
        let at = |t: f64| r + (&m - r) * t;
        let f = |t: f64| linalg::determinant(&submatrix(&at(t), &idx, &idx));
        let s0 = r_minors[k].signum();
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let t = 0.5 * (lo + hi);
            if f(t).signum() == s0 {
                lo = t;
            } else {
                hi = t;
            }
        }
        let x = at(0.5 * (lo + hi));
        let c = point::check(property, &x, &cfg.tol, cfg.caps.point)?;
        Ok((!c.holds).then(|| Counterexample {
            matrix: matrix_to_rows(&x),
            property,
            kind,
            sample,
            certificate: c.certificate,
        }))
    };
    let found = |cx: Counterexample, used: usize, exhaustive: bool| OracleOutcome {
        verdict: OracleVerdict::CounterexampleFound,
        counterexample: Some(cx),
        samples: used,
        exhaustive_vertices: exhaustive,
    };

    let mut structured = vec![a.lower().clone(), a.upper().clone(), a.mid().clone(), a.comparison_realization()];
    if n <= 12 && (1usize << (n - 1)) <= budget / 4 {
        for mask in 0..1u64 << (n - 1) {
            let s = SignVector::from_mask(n, mask << 1);
            structured.push(a.signed_vertex(s.as_slice(), s.as_slice())?);
        }
    }
    for m in structured {
        if used >= budget {
            break;
        }
        if let Some(cx) = test(m, SampleKind::Structured, &mut used)? {
            return Ok(found(cx, used, false));
        }
    }

    let free: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| a.rad()[(i, j)] > 0.0).collect();
    let remaining = budget.saturating_sub(used);
    let exhaustive = free.len() <= MAX_VERTEX_BITS && (1usize << free.len()) <= remaining;
    let vertex = |bits: &dyn Fn(usize) -> bool| {
        let mut m = a.lower().clone();
        for (k, &(i, j)) in free.iter().enumerate() {
            if bits(k) {
                m[(i, j)] = a.upper()[(i, j)];
            }
        }
        m
    };
    if exhaustive {
        for mask in 0..1u64 << free.len() {
            if let Some(cx) = test(vertex(&|k| mask >> k & 1 == 1), SampleKind::Vertex, &mut used)? {
                return Ok(found(cx, used, true));
            }
        }
    } else {
        for _ in 0..remaining / 2 {
            let bits: Vec<bool> = (0..free.len()).map(|_| rng.gen()).collect();
            if let Some(cx) = test(vertex(&|k| bits[k]), SampleKind::Vertex, &mut used)? {
                return Ok(found(cx, used, false));
            }
        }
    }
    while used < budget {
        let m = Matrix::from_fn(n, n, |i, j| {
            let (l, u) = (a.lower()[(i, j)], a.upper()[(i, j)]);
            if l == u {
                l
            } else {
                rng.gen_range(l..=u)
            }
        });
        if let Some(cx) = test(m, SampleKind::Interior, &mut used)? {
            return Ok(found(cx, used, exhaustive));
        }
    }
    Ok(OracleOutcome {
        verdict: OracleVerdict::NoCounterexampleInBudget,
        counterexample: None,
        samples: used,
        exhaustive_vertices: exhaustive,
    })
}

fn subset_of_mask(n: usize, mask: u64) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Determinants of all nonempty principal blocks, indexed by `mask - 1`.
fn principal_minors(m: &Matrix) -> Vec<f64> {
    let n = m.nrows();
    (1..1u64 << n)
        .map(|mask| {
            let idx = subset_of_mask(n, mask);
            linalg::determinant(&submatrix(m, &idx, &idx))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConsistencyStatus {
    /// Strong verdict true, no counterexample found.
    Consistent,
    /// Strong verdict false, and the oracle found a failing realization too.
    Confirmed,
    /// Strong verdict false, oracle found nothing (the oracle is incomplete).
    Unconfirmed,
    /// Strong verdict true but a realization fails: a hard error.
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyConsistency {
    pub property: Property,
    pub strong_holds: bool,
    pub status: ConsistencyStatus,
    pub oracle: OracleOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Consistency {
    pub budget: usize,
    pub seed: u64,
    pub checks: Vec<PropertyConsistency>,
    pub contradictions: usize,
    pub unconfirmed: usize,
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        self.contradictions == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{} ({} properties, {} contradictions, {} unconfirmed, budget {}, seed {})",
            if self.is_consistent() { "consistent" } else { "CONTRADICTION" },
            self.checks.len(),
            self.contradictions,
            self.unconfirmed,
            self.budget,
            self.seed
        )
    }
}

/// Run the oracle on every verdict of `report`.
pub fn cross_validate(
    a: &IntervalMatrix,
    report: &Report,
    budget: usize,
    seed: u64,
    cfg: &CheckConfig,
) -> Result<Consistency> {
    if report.input.digest != box_digest(a) || report.input.n != a.dim() {
        return Err(Error::Input("report was produced for a different box".into()));
    }
    let mut checks = Vec::with_capacity(report.verdicts.len());
    for v in &report.verdicts {
        let oracle = falsify(a, v.property, budget, seed, cfg)?;
        let found = oracle.verdict == OracleVerdict::CounterexampleFound;
        let status = match (v.holds, found) {
            (true, false) => ConsistencyStatus::Consistent,
            (true, true) => ConsistencyStatus::Contradiction,
            (false, true) => ConsistencyStatus::Confirmed,
            (false, false) => ConsistencyStatus::Unconfirmed,
        };
        checks.push(PropertyConsistency { property: v.property, strong_holds: v.holds, status, oracle });
    }
    let count = |s| checks.iter().filter(|c| c.status == s).count();
    Ok(Consistency {
        budget,
        seed,
        contradictions: count(ConsistencyStatus::Contradiction),
        unconfirmed: count(ConsistencyStatus::Unconfirmed),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    #[test]
    fn degenerate_identity_has_no_counterexample() {
        let a = IntervalMatrix::degenerate(Matrix::identity(2, 2)).unwrap();
        for p in [Property::M, Property::P, Property::ColumnSufficient, Property::R0, Property::Copositive] {
            let o = falsify(&a, p, 50, 1, &cfg()).unwrap();
            assert_eq!(o.verdict, OracleVerdict::NoCounterexampleInBudget, "{p}");
            assert_eq!(o.samples, 50);
        }
    }

    #[test]
    fn exhaustive_vertices_for_small_boxes() {
        let a = IntervalMatrix::from_mid_rad(Matrix::identity(2, 2), Matrix::from_element(2, 2, 0.4)).unwrap();
        let o = falsify(&a, Property::PrincipallyNondegenerate, 512, 7, &cfg()).unwrap();
        assert_eq!(o.verdict, OracleVerdict::NoCounterexampleInBudget);
        assert!(o.exhaustive_vertices);
    }

    #[test]
    fn counterexamples_lie_in_the_box() {
        let a = IntervalMatrix::from_mid_rad(Matrix::identity(2, 2), Matrix::from_element(2, 2, 0.6)).unwrap();
        let o = falsify(&a, Property::PrincipallyNondegenerate, 100, 3, &cfg()).unwrap();
        let cx = o.counterexample.unwrap();
        let m = Matrix::from_fn(2, 2, |i, j| cx.matrix[i][j]);
        assert!(a.contains(&m, 0.0));
        assert!(!point::holds(Property::PrincipallyNondegenerate, &m, &cfg().tol).unwrap());
    }

    #[test]
    fn deterministic_under_seed() {
        let mid = Matrix::from_row_slice(3, 3, &[0., -1., 2., 2., 0., -2., -1., 1., 0.]);
        let a = IntervalMatrix::relative(mid, 0.3).unwrap();
        let x = falsify(&a, Property::Semimonotone, 300, 11, &cfg()).unwrap();
        let y = falsify(&a, Property::Semimonotone, 300, 11, &cfg()).unwrap();
        assert_eq!(x, y);
        assert!(falsify(&a, Property::Semimonotone, 0, 11, &cfg()).is_err());
    }

    #[test]
    fn skew3_at_15_percent_is_refuted() {
        let mid = Matrix::from_row_slice(3, 3, &[0., -1., 2., 2., 0., -2., -1., 1., 0.]);
        let a = IntervalMatrix::relative(mid, 0.15).unwrap();
        let o = falsify(&a, Property::Semimonotone, 2000, 0, &cfg()).unwrap();
        assert_eq!(o.verdict, OracleVerdict::CounterexampleFound);
    }

    #[test]
    fn corrupted_report_is_a_contradiction() {
        let a = IntervalMatrix::from_mid_rad(Matrix::identity(2, 2), Matrix::from_element(2, 2, 0.1)).unwrap();
        let c = cfg().with_properties(&[Property::Z, Property::Semimonotone]);
        let mut report = crate::strong::check_all(&a, &c).unwrap();
        assert!(!report.verdicts[0].holds);
        assert!(cross_validate(&a, &report, 100, 0, &c).unwrap().is_consistent());
        report.verdicts[0].holds = true;
        let cons = cross_validate(&a, &report, 100, 0, &c).unwrap();
        assert_eq!(cons.contradictions, 1);
        assert_eq!(cons.checks[0].status, ConsistencyStatus::Contradiction);
        assert_eq!(cons.checks[1].status, ConsistencyStatus::Consistent);
        let other = IntervalMatrix::degenerate(Matrix::identity(2, 2)).unwrap();
        assert!(cross_validate(&other, &report, 100, 0, &c).is_err());
    }

    #[test]
    fn qp_box_with_only_semimonotonicity_is_consistent() {
        use crate::lcp::{qp_to_interval_lcp, QpInstance};
        let qp = QpInstance::new(
            Matrix::from_row_slice(2, 2, &[10., 4., 4., 5.]),
            vec![1., 1.],
            Matrix::from_row_slice(2, 2, &[2., -1., -3., 1.]),
            vec![10., 9.],
        )
        .unwrap();
        let a = qp_to_interval_lcp(&qp, &Matrix::zeros(2, 2), &qp.c.abs()).unwrap();
        let c = cfg().with_properties(&Property::TRACKED);
        let report = crate::strong::check_all(&a, &c).unwrap();
        let holding: Vec<Property> = report.verdicts.iter().filter(|v| v.holds).map(|v| v.property).collect();
        assert_eq!(holding, [Property::Semimonotone]);
        assert!(cross_validate(&a, &report, 2000, 0, &c).unwrap().is_consistent());
    }
}
