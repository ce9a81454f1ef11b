//! Matrix classes of a single real matrix.
//!
//! These are definition-level algorithms. They are the building blocks of
//! the strong checks and the ground truth for the falsification oracle.
//! Exponential enumerations follow [`crate::subsets`] order and report the
//! first failing index set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{Caps, Tolerances};
use crate::interval::{submatrix, symmetric_part};
use crate::linalg::{self, Lu, Sign, SpectralResult};
use crate::lp::{self, LinearSystem, Relation};
use crate::subsets::{index_pairs, nonempty_subsets_of};
use crate::{Error, Matrix, Result};

/// Matrix classes known to the checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "s")]
    S,
    #[serde(rename = "m")]
    M,
    #[serde(rename = "m0")]
    M0,
    #[serde(rename = "h")]
    H,
    #[serde(rename = "copositive")]
    Copositive,
    #[serde(rename = "strictly-copositive")]
    StrictlyCopositive,
    #[serde(rename = "semimonotone")]
    Semimonotone,
    #[serde(rename = "column-sufficient")]
    ColumnSufficient,
    #[serde(rename = "principally-nondegenerate")]
    PrincipallyNondegenerate,
    #[serde(rename = "p")]
    P,
    #[serde(rename = "r0")]
    R0,
    #[serde(rename = "r")]
    R,
    #[serde(rename = "pd")]
    Pd,
    #[serde(rename = "psd")]
    Psd,
}

impl Property {
    pub const ALL: [Property; 15] = [
        Property::Z,
        Property::S,
        Property::M,
        Property::M0,
        Property::H,
        Property::Copositive,
        Property::StrictlyCopositive,
        Property::Semimonotone,
        Property::ColumnSufficient,
        Property::PrincipallyNondegenerate,
        Property::P,
        Property::R0,
        Property::R,
        Property::Pd,
        Property::Psd,
    ];

    /// Classes with a strong (interval) checker.
    pub const STRONG: [Property; 13] = [
        Property::Z,
        Property::S,
        Property::M,
        Property::H,
        Property::Copositive,
        Property::StrictlyCopositive,
        Property::Semimonotone,
        Property::PrincipallyNondegenerate,
        Property::ColumnSufficient,
        Property::R0,
        Property::R,
        Property::Pd,
        Property::Psd,
    ];

    /// The four classes tracked through the worked examples.
    pub const TRACKED: [Property; 4] =
        [Property::Semimonotone, Property::ColumnSufficient, Property::R, Property::R0];

    /// Kebab-case token used by the CLI and the JSON schema.
    pub fn token(self) -> &'static str {
        match self {
            Property::Z => "z",
            Property::S => "s",
            Property::M => "m",
            Property::M0 => "m0",
            Property::H => "h",
            Property::Copositive => "copositive",
            Property::StrictlyCopositive => "strictly-copositive",
            Property::Semimonotone => "semimonotone",
            Property::ColumnSufficient => "column-sufficient",
            Property::PrincipallyNondegenerate => "principally-nondegenerate",
            Property::P => "p",
            Property::R0 => "r0",
            Property::R => "r",
            Property::Pd => "pd",
            Property::Psd => "psd",
        }
    }

    /// Conventional class name.
    pub fn name(self) -> &'static str {
        match self {
            Property::Z => "Z-matrix",
            Property::S => "S-matrix",
            Property::M => "M-matrix",
            Property::M0 => "M0-matrix",
            Property::H => "H-matrix",
            Property::Copositive => "copositive",
            Property::StrictlyCopositive => "strictly copositive",
            Property::Semimonotone => "semimonotone",
            Property::ColumnSufficient => "column sufficient",
            Property::PrincipallyNondegenerate => "principally nondegenerate",
            Property::P => "P-matrix",
            Property::R0 => "R0-matrix",
            Property::R => "R-matrix",
            Property::Pd => "positive definite",
            Property::Psd => "positive semidefinite",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace('_', "-");
        Property::ALL
            .iter()
            .copied()
            .find(|p| p.token() == t)
            .ok_or_else(|| Error::Input(format!("unknown property {s:?}")))
    }
}

/// Evidence attached to a verdict. Index sets are 0-based in memory and
/// 1-based when serialized.
///
/// For column sufficiency, `x` is indexed along `I ∪ J` in increasing order.
/// For semimonotonicity, R0 and R, `x` is indexed along `I`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "I", default, skip_serializing_if = "Option::is_none", with = "one_based")]
    pub index_set: Option<Vec<usize>>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none", with = "one_based")]
    pub complement_set: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "one_based")]
    pub entry: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<i8>>,
    /// Scalar evidence: quadratic-form value, determinant, `s - rho(N)`, ...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// A concrete matrix (inside the box, for strong verdicts) exhibiting the failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Certificate {
    pub fn realization_matrix(&self) -> Option<Matrix> {
        self.realization.as_ref().map(|rows| rows_to_matrix(rows))
    }

    pub fn with_realization(mut self, a: &Matrix) -> Self {
        self.realization = Some(matrix_to_rows(a));
        self
    }
}

pub(crate) fn matrix_to_rows(a: &Matrix) -> Vec<Vec<f64>> {
    (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect()
}

pub(crate) fn rows_to_matrix(rows: &[Vec<f64>]) -> Matrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    Matrix::from_fn(n, m, |i, j| rows[i][j])
}

mod one_based {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<usize>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|v| v.iter().map(|i| i + 1).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<usize>>, D::Error> {
        let v: Option<Vec<usize>> = Option::deserialize(d)?;
        match v {
            Some(v) if v.contains(&0) => Err(serde::de::Error::custom("indices are 1-based")),
            Some(v) => Ok(Some(v.into_iter().map(|i| i - 1).collect())),
            None => Ok(None),
        }
    }
}

/// Result of a point check.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCheck {
    pub holds: bool,
    /// Failure witness when `holds` is false; for S also the positive witness.
    pub certificate: Option<Certificate>,
    /// Some decisive quantity sat within tolerance of its threshold.
    pub marginal: bool,
}

impl PointCheck {
    fn pass() -> Self {
        Self { holds: true, certificate: None, marginal: false }
    }

    fn fail(c: Certificate) -> Self {
        Self { holds: false, certificate: Some(c), marginal: false }
    }
}

fn check_square(a: &Matrix) -> Result<()> {
    if a.is_square() && a.nrows() > 0 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!("expected nonempty square matrix, got {}x{}", a.nrows(), a.ncols())))
    }
}

// ---- Z, S, M, M0, H -------------------------------------------------------

/// First positive off-diagonal entry, or `None` for a Z-matrix.
pub fn positive_off_diagonal(a: &Matrix) -> Option<(usize, usize)> {
    let n = a.nrows();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| i != j && a[(i, j)] > 0.0)
}

pub fn is_z(a: &Matrix) -> bool {
    positive_off_diagonal(a).is_none()
}

pub fn z_check(a: &Matrix) -> PointCheck {
    match positive_off_diagonal(a) {
        None => PointCheck::pass(),
        Some((i, j)) => PointCheck::fail(Certificate {
            entry: Some(vec![i, j]),
            value: Some(a[(i, j)]),
            ..Default::default()
        }),
    }
}

pub fn s_check(a: &Matrix, tol: &Tolerances) -> Result<PointCheck> {
    check_square(a)?;
    let r = lp::feasible_positive_strict(a, true, tol)?;
    if r.feasible {
        Ok(PointCheck {
            holds: true,
            certificate: Some(Certificate { x: r.witness, ..Default::default() }),
            marginal: false,
        })
    } else {
        Ok(PointCheck::fail(Certificate {
            note: Some("Ax > 0, x > 0 is infeasible".into()),
            ..Default::default()
        }))
    }
}

/// Splitting `A = sI - N` of a Z-matrix with `s = max a_ii`.
#[derive(Debug, Clone)]
pub struct MSplit {
    pub s: f64,
    pub spectral: SpectralResult,
    /// Threshold for comparing `s` with `rho(N)`.
    pub thresh: f64,
}

impl MSplit {
    /// `s - rho(N)`.
    pub fn gap(&self) -> f64 {
        self.s - self.spectral.rho
    }

    pub fn is_m(&self) -> bool {
        self.gap() > self.thresh
    }

    pub fn is_m0(&self) -> bool {
        self.gap() >= -self.thresh
    }

    pub fn is_marginal(&self) -> bool {
        self.gap().abs() <= self.thresh
    }
}

/// `None` unless `a` is a Z-matrix.
pub fn m_split(a: &Matrix, tol: &Tolerances) -> Option<MSplit> {
    if !a.is_square() || !is_z(a) {
        return None;
    }
    let n = a.nrows();
    let s = (0..n).map(|i| a[(i, i)]).fold(f64::NEG_INFINITY, f64::max);
    let nn = Matrix::from_fn(n, n, |i, j| if i == j { s - a[(i, i)] } else { -a[(i, j)] });
    let spectral = linalg::spectral_radius_nonneg(&nn, tol).expect("N is nonnegative by construction");
    let thresh = tol.rho * 1.0_f64.max(linalg::norm_inf(&nn)).max(s.abs());
    Some(MSplit { s, spectral, thresh })
}

pub fn is_m(a: &Matrix, tol: &Tolerances) -> bool {
    m_split(a, tol).is_some_and(|m| m.is_m())
}

pub fn is_m0(a: &Matrix, tol: &Tolerances) -> bool {
    m_split(a, tol).is_some_and(|m| m.is_m0())
}

/// Z-matrix with a nonnegative inverse.
pub fn is_m_by_inverse(a: &Matrix, tol: &Tolerances) -> bool {
    is_z(a) && linalg::inverse_nonnegative(a, tol)
}

fn m_family_check(a: &Matrix, tol: &Tolerances, strict: bool) -> PointCheck {
    if let Some((i, j)) = positive_off_diagonal(a) {
        return PointCheck::fail(Certificate {
            entry: Some(vec![i, j]),
            value: Some(a[(i, j)]),
            note: Some("positive off-diagonal entry".into()),
            ..Default::default()
        });
    }
    let split = m_split(a, tol).expect("Z-matrix");
    let holds = if strict { split.is_m() } else { split.is_m0() };
    let marginal = split.is_marginal();
    if holds {
        return PointCheck { holds, certificate: None, marginal };
    }
    // Perron vector of the dominant block: A_CC x_C = (s - rho) x_C
    let block = split.spectral.block.clone();
    let x: Vec<f64> = block.iter().map(|&i| split.spectral.vector[i]).collect();
    PointCheck {
        holds,
        certificate: Some(Certificate {
            index_set: Some(block),
            x: Some(x),
            value: Some(split.gap()),
            note: Some("s - rho(N) with A = sI - N".into()),
            ..Default::default()
        }),
        marginal,
    }
}

pub fn m_check(a: &Matrix, tol: &Tolerances) -> PointCheck {
    m_family_check(a, tol, true)
}

pub fn m0_check(a: &Matrix, tol: &Tolerances) -> PointCheck {
    m_family_check(a, tol, false)
}

/// Point comparison matrix `<A>`.
pub fn comparison(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.nrows(), a.ncols(), |i, j| if i == j { a[(i, j)].abs() } else { -a[(i, j)].abs() })
}

pub fn is_h(a: &Matrix, tol: &Tolerances) -> bool {
    is_m(&comparison(a), tol)
}

pub fn h_check(a: &Matrix, tol: &Tolerances) -> PointCheck {
    let mut c = m_check(&comparison(a), tol);
    if let Some(cert) = c.certificate.as_mut() {
        cert.note = Some("comparison matrix is not an M-matrix".into());
    }
    c
}

// ---- copositivity ---------------------------------------------------------

/// Minimum of `x^T A x` over the standard simplex, computed face by face.
///
/// On a face `S` the minimizer satisfies `A_SS x = mu e`, `e^T x = 1`, and
/// the value is `mu`. For symmetric `A` the value is constant on that affine
/// set, so a nonsingular face is solved directly and a singular one is
/// settled by an LP over `{A_SS x - mu e = 0, e^T x = 1, x >= 0}`.
pub fn copositive_check(a: &Matrix, strict: bool, tol: &Tolerances, cap: usize) -> Result<PointCheck> {
    check_square(a)?;
    let n = a.nrows();
    Caps::check(cap, n, "copositivity face enumeration")?;
    let s = symmetric_part(a);
    let thresh = tol.eig * linalg::norm_inf(&s);
    let mut best: Option<(f64, Vec<f64>, Vec<usize>)> = None;
    for face in nonempty_subsets_of(n) {
        let Some(xs) = face_stationary_point(&s, &face, tol)? else { continue };
        let value = quad_form_on(&s, &face, &xs);
        if best.as_ref().is_none_or(|b| value < b.0) {
            best = Some((value, xs, face));
        }
        let b = best.as_ref().unwrap();
        let fails = if strict { b.0 <= thresh } else { b.0 < -thresh };
        if fails {
            break;
        }
    }
    let (value, xs, face) = best.expect("vertex faces are always stationary");
    let holds = if strict { value > thresh } else { value >= -thresh };
    let marginal = (value - if strict { thresh } else { -thresh }).abs() <= thresh.max(f64::MIN_POSITIVE);
    if holds {
        return Ok(PointCheck { holds, certificate: None, marginal });
    }
    let mut x = vec![0.0; n];
    for (k, &i) in face.iter().enumerate() {
        x[i] = xs[k];
    }
    Ok(PointCheck {
        holds,
        certificate: Some(Certificate {
            index_set: Some(face),
            x: Some(x),
            value: Some(value),
            note: Some("x >= 0 with x^T A x below the threshold".into()),
            ..Default::default()
        }),
        marginal,
    })
}

fn face_stationary_point(s: &Matrix, face: &[usize], tol: &Tolerances) -> Result<Option<Vec<f64>>> {
    let k = face.len();
    if k == 1 {
        return Ok(Some(vec![1.0]));
    }
    let sub = submatrix(s, face, face);
    let kkt = Matrix::from_fn(k + 1, k + 1, |i, j| match (i < k, j < k) {
        (true, true) => sub[(i, j)],
        (true, false) => -1.0,
        (false, true) => 1.0,
        (false, false) => 0.0,
    });
    let mut rhs = vec![0.0; k + 1];
    rhs[k] = 1.0;
    let lu = Lu::new(&kkt);
    if let Some(sol) = lu.solve(&rhs, tol.pivot) {
        let xs = &sol[..k];
        if xs.iter().all(|&v| v >= -1e-12) {
            return Ok(Some(normalize_simplex(xs)));
        }
        return Ok(None);
    }
    let mut sys = LinearSystem::new(k + 1);
    sys.set_lower(k, None);
    for i in 0..k {
        let mut c: Vec<f64> = (0..k).map(|j| sub[(i, j)]).collect();
        c.push(-1.0);
        sys.add_row(c, Relation::Eq, 0.0)?;
    }
    let mut c = vec![1.0; k];
    c.push(0.0);
    sys.add_row(c, Relation::Eq, 1.0)?;
    let r = lp::solve_feasibility(&sys, tol)?;
    Ok(r.witness.map(|w| normalize_simplex(&w[..k])))
}

fn normalize_simplex(x: &[f64]) -> Vec<f64> {
    let c: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    let sum: f64 = c.iter().sum();
    c.iter().map(|v| v / sum).collect()
}

fn quad_form_on(s: &Matrix, face: &[usize], xs: &[f64]) -> f64 {
    let mut v = 0.0;
    for (a, &i) in face.iter().enumerate() {
        for (b, &j) in face.iter().enumerate() {
            v += xs[a] * s[(i, j)] * xs[b];
        }
    }
    v
}

// ---- semimonotone, column sufficient ---------------------------------------

/// No nonempty `I` admits `x >= 0` with `A_II x < 0`.
pub fn semimonotone_check(a: &Matrix, tol: &Tolerances, cap: usize) -> Result<PointCheck> {
    check_square(a)?;
    let n = a.nrows();
    Caps::check(cap, n, "semimonotonicity index sets")?;
    for idx in nonempty_subsets_of(n) {
        if let Some(x) = negative_on_orthant(&submatrix(a, &idx, &idx), tol)? {
            return Ok(PointCheck::fail(Certificate {
                index_set: Some(idx),
                x: Some(x),
                note: Some("A_II x < 0 with x >= 0".into()),
                ..Default::default()
            }));
        }
    }
    Ok(PointCheck::pass())
}

/// A witness of `Mx < 0, x >= 0`, encoded as `Mx <= -e, x >= 0`.
pub(crate) fn negative_on_orthant(m: &Matrix, tol: &Tolerances) -> Result<Option<Vec<f64>>> {
    let mut sys = LinearSystem::new(m.ncols());
    sys.add_block(m, 0, Relation::Le, -1.0)?;
    Ok(lp::solve_feasibility(&sys, tol)?.witness)
}

/// For all disjoint `(I, J)` with `I ∪ J ≠ ∅` the signed block system
/// `[[A_II, -A_IJ], [-A_JI, A_JJ]] x ⪇ 0, x > 0` is infeasible.
pub fn column_sufficient_check(a: &Matrix, tol: &Tolerances, cap: usize) -> Result<PointCheck> {
    check_square(a)?;
    let n = a.nrows();
    Caps::check(cap, n, "column sufficiency index pairs")?;
    for pair in index_pairs(n) {
        let k = pair.union();
        let signs = pair.signs();
        let block = Matrix::from_fn(k.len(), k.len(), |r, c| f64::from(signs[r] * signs[c]) * a[(k[r], k[c])]);
        let r = lp::feasible_positive_strict(&block, false, tol)?;
        if r.feasible {
            return Ok(PointCheck::fail(Certificate {
                index_set: Some(pair.i().to_vec()),
                complement_set: Some(pair.j().to_vec()),
                x: r.witness,
                note: Some("signed block system is feasible (x along I ∪ J ascending)".into()),
                ..Default::default()
            }));
        }
    }
    Ok(PointCheck::pass())
}

// ---- principal minors -------------------------------------------------------

fn minors_check(a: &Matrix, tol: &Tolerances, cap: usize, positive: bool) -> Result<PointCheck> {
    check_square(a)?;
    let n = a.nrows();
    Caps::check(cap, n, "principal minor enumeration")?;
    let mut marginal = false;
    for idx in nonempty_subsets_of(n) {
        let d = linalg::det_sign(&submatrix(a, &idx, &idx), tol.pivot);
        marginal |= d.marginal;
        let bad = match d.sign {
            Sign::Zero => true,
            Sign::Negative => positive,
            Sign::Positive => false,
        };
        if bad {
            return Ok(PointCheck {
                holds: false,
                certificate: Some(Certificate {
                    index_set: Some(idx),
                    value: Some(d.det),
                    note: Some(if d.sign == Sign::Zero { "zero principal minor" } else { "negative principal minor" }.into()),
                    ..Default::default()
                }),
                marginal,
            });
        }
    }
    Ok(PointCheck { holds: true, certificate: None, marginal })
}

pub fn nondegenerate_check(a: &Matrix, tol: &Tolerances, cap: usize) -> Result<PointCheck> {
    minors_check(a, tol, cap, false)
}

pub fn p_check(a: &Matrix, tol: &Tolerances, cap: usize) -> Result<PointCheck> {
    minors_check(a, tol, cap, true)
}

// ---- R0, R ------------------------------------------------------------------

/// For every nonempty `I` (with `J` its complement):
/// `A_II x = 0, A_JI x >= 0, x > 0` infeasible.
pub fn r0_check(a: &Matrix, tol: &Tolerances, cap: usize) -> Result<PointCheck> {
    regular_family(a, tol, cap, false)
}

/// For every nonempty `I`: `A_II x + e t = 0, A_JI x + e t >= 0, x > 0, t >= 0` infeasible.
pub fn r_check(a: &Matrix, tol: &Tolerances, cap: usize) -> Result<PointCheck> {
    regular_family(a, tol, cap, true)
}

fn regular_family(a: &Matrix, tol: &Tolerances, cap: usize, with_t: bool) -> Result<PointCheck> {
    check_square(a)?;
    let n = a.nrows();
    Caps::check(cap, n, if with_t { "R-matrix index sets" } else { "R0-matrix index sets" })?;
    for idx in nonempty_subsets_of(n) {
        let comp: Vec<usize> = (0..n).filter(|i| !idx.contains(i)).collect();
        let sys = regular_system(
            &submatrix(a, &idx, &idx),
            &submatrix(a, &idx, &idx),
            &submatrix(a, &comp, &idx),
            with_t,
        )?;
        let r = lp::solve_feasibility(&sys, tol)?;
        if let Some(w) = r.witness {
            let k = idx.len();
            return Ok(PointCheck::fail(Certificate {
                index_set: Some(idx),
                complement_set: Some(comp),
                x: Some(w[..k].to_vec()),
                t: with_t.then(|| w[k]),
                note: Some("nontrivial solution of the homogeneous system".into()),
                ..Default::default()
            }));
        }
    }
    Ok(PointCheck::pass())
}

/// `{lo_II x (+ e t) <= 0, up_II x (+ e t) >= 0, lo_JI x (+ e t) >= 0, x >= e (, t >= 0)}`.
/// With `lo = up` this is the point system.
pub(crate) fn regular_system(lo_ii: &Matrix, up_ii: &Matrix, lo_ji: &Matrix, with_t: bool) -> Result<LinearSystem> {
    let k = lo_ii.ncols();
    let nv = k + usize::from(with_t);
    let mut sys = LinearSystem::new(nv);
    for j in 0..k {
        sys.set_lower(j, Some(1.0));
    }
    let push = |sys: &mut LinearSystem, m: &Matrix, rel: Relation| -> Result<()> {
        for i in 0..m.nrows() {
            let mut c: Vec<f64> = m.row(i).iter().copied().collect();
            if with_t {
                c.push(1.0);
            }
            sys.add_row(c, rel, 0.0)?;
        }
        Ok(())
    };
    if lo_ii == up_ii {
        push(&mut sys, lo_ii, Relation::Eq)?;
    } else {
        push(&mut sys, lo_ii, Relation::Le)?;
        push(&mut sys, up_ii, Relation::Ge)?;
    }
    push(&mut sys, lo_ji, Relation::Ge)?;
    Ok(sys)
}

// ---- definiteness -----------------------------------------------------------

pub fn pd_check(a: &Matrix, tol: &Tolerances) -> PointCheck {
    definiteness_check(a, tol, true)
}

pub fn psd_check(a: &Matrix, tol: &Tolerances) -> PointCheck {
    definiteness_check(a, tol, false)
}

fn definiteness_check(a: &Matrix, tol: &Tolerances, strict: bool) -> PointCheck {
    let holds = if strict { linalg::is_positive_definite(a, tol) } else { linalg::is_positive_semidefinite(a, tol) };
    if holds {
        return PointCheck::pass();
    }
    let (lmin, v) = linalg::min_eigenpair(&symmetric_part(a));
    PointCheck::fail(Certificate {
        x: Some(v),
        value: Some(lmin),
        note: Some("smallest eigenvalue of the symmetric part and its eigenvector".into()),
        ..Default::default()
    })
}

// ---- dispatch and verification ------------------------------------------------

/// Decide `property` for the real matrix `a`.
pub fn check(property: Property, a: &Matrix, tol: &Tolerances, cap: usize) -> Result<PointCheck> {
    check_square(a)?;
    Ok(match property {
        Property::Z => z_check(a),
        Property::S => s_check(a, tol)?,
        Property::M => m_check(a, tol),
        Property::M0 => m0_check(a, tol),
        Property::H => h_check(a, tol),
        Property::Copositive => copositive_check(a, false, tol, cap)?,
        Property::StrictlyCopositive => copositive_check(a, true, tol, cap)?,
        Property::Semimonotone => semimonotone_check(a, tol, cap)?,
        Property::ColumnSufficient => column_sufficient_check(a, tol, cap)?,
        Property::PrincipallyNondegenerate => nondegenerate_check(a, tol, cap)?,
        Property::P => p_check(a, tol, cap)?,
        Property::R0 => r0_check(a, tol, cap)?,
        Property::R => r_check(a, tol, cap)?,
        Property::Pd => pd_check(a, tol),
        Property::Psd => psd_check(a, tol),
    })
}

/// Convenience wrapper: verdict only, default caps.
pub fn holds(property: Property, a: &Matrix, tol: &Tolerances) -> Result<bool> {
    Ok(check(property, a, tol, Caps::default().point)?.holds)
}

fn witness_slack(a: &Matrix, x: &[f64], t: f64) -> f64 {
    1e-7 * (1.0 + linalg::max_abs(a) * x.iter().map(|v| v.abs()).sum::<f64>() + t.abs())
}

fn mat_vec(a: &Matrix, rows: &[usize], cols: &[usize], x: &[f64]) -> Vec<f64> {
    rows.iter().map(|&i| cols.iter().zip(x).map(|(&j, v)| a[(i, j)] * v).sum()).collect()
}

/// Check that `cert` demonstrates that `a` fails `property`. Witness vectors
/// are evaluated directly; properties without one are re-decided.
pub fn verify_failure(property: Property, a: &Matrix, cert: &Certificate, tol: &Tolerances) -> Result<bool> {
    let n = a.nrows();
    let in_range = |v: &Vec<usize>| v.iter().all(|&i| i < n);
    Ok(match property {
        Property::Z | Property::M | Property::M0 if cert.entry.is_some() => {
            let e = cert.entry.as_ref().unwrap();
            e.len() == 2 && in_range(e) && e[0] != e[1] && a[(e[0], e[1])] > 0.0
        }
        Property::Copositive | Property::StrictlyCopositive => match &cert.x {
            Some(x) if x.len() == n && x.iter().all(|&v| v >= 0.0) && x.iter().any(|&v| v > 0.0) => {
                let s = symmetric_part(a);
                let all: Vec<usize> = (0..n).collect();
                let v = quad_form_on(&s, &all, x);
                let scale = linalg::norm_inf(&s) * x.iter().map(|v| v * v).sum::<f64>();
                if property == Property::Copositive {
                    v < 0.0
                } else {
                    v <= tol.eig * scale.max(f64::MIN_POSITIVE)
                }
            }
            _ => false,
        },
        Property::Semimonotone => match (&cert.index_set, &cert.x) {
            (Some(idx), Some(x)) if in_range(idx) && idx.len() == x.len() && !idx.is_empty() => {
                x.iter().all(|&v| v >= 0.0) && mat_vec(a, idx, idx, x).iter().all(|&v| v < 0.0)
            }
            _ => false,
        },
        Property::ColumnSufficient => match (&cert.index_set, &cert.complement_set, &cert.x) {
            (Some(i), Some(j), Some(x)) if in_range(i) && in_range(j) => {
                let Ok(pair) = crate::IndexPair::new(i.clone(), j.clone()) else { return Ok(false) };
                let k = pair.union();
                let signs = pair.signs();
                if k.is_empty() || k.len() != x.len() || !x.iter().all(|&v| v > 0.0) {
                    return Ok(false);
                }
                let y: Vec<f64> = (0..k.len())
                    .map(|r| (0..k.len()).map(|c| f64::from(signs[r] * signs[c]) * a[(k[r], k[c])] * x[c]).sum())
                    .collect();
                let slack = witness_slack(a, x, 0.0);
                y.iter().all(|&v| v <= slack) && y.iter().any(|&v| v < -slack)
            }
            _ => false,
        },
        Property::R0 | Property::R => match (&cert.index_set, &cert.x) {
            (Some(idx), Some(x)) if in_range(idx) && idx.len() == x.len() && !idx.is_empty() => {
                let t = if property == Property::R { cert.t.unwrap_or(0.0) } else { 0.0 };
                let comp: Vec<usize> = (0..n).filter(|i| !idx.contains(i)).collect();
                let slack = witness_slack(a, x, t);
                t >= 0.0
                    && x.iter().all(|&v| v > 0.0)
                    && mat_vec(a, idx, idx, x).iter().all(|v| (v + t).abs() <= slack)
                    && mat_vec(a, &comp, idx, x).iter().all(|v| v + t >= -slack)
            }
            _ => false,
        },
        Property::PrincipallyNondegenerate | Property::P => match &cert.index_set {
            Some(idx) if in_range(idx) && !idx.is_empty() => {
                let sub = submatrix(a, idx, idx);
                let d = linalg::det_sign(&sub, tol.pivot.max(1e-8));
                match d.sign {
                    Sign::Zero => true,
                    Sign::Negative => property == Property::P,
                    Sign::Positive => false,
                }
            }
            _ => false,
        },
        other => !check(other, a, tol, Caps::default().point)?.holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
    }

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn ex1() -> Matrix {
        m(&[&[0., -1., 2.], &[2., 0., -2.], &[-1., 1., 0.]])
    }

    fn ex2() -> Matrix {
        m(&[&[0., 0., -2., 1.], &[0., 0., 3., -1.], &[2., -3., 20., 8.], &[-1., 1., 8., 10.]])
    }

    const CAP: usize = 16;

    #[test]
    fn z_and_s() {
        assert!(is_z(&Matrix::identity(2, 2)));
        assert!(is_z(&m(&[&[0., -1.], &[0., 0.]])));
        assert!(!is_z(&m(&[&[1., 0.1], &[0., 1.]])));
        assert!(s_check(&Matrix::identity(3, 3), &t()).unwrap().holds);
        assert!(!s_check(&m(&[&[1., -2.], &[-2., 1.]]), &t()).unwrap().holds);
        assert!(s_check(&m(&[&[2., -1.], &[-1., 2.]]), &t()).unwrap().holds);
    }

    #[test]
    fn m_family() {
        let tol = t();
        assert!(is_m(&Matrix::identity(2, 2), &tol) && is_m0(&Matrix::identity(2, 2), &tol));
        let c = m(&[&[0., -1.], &[0., 0.]]);
        assert!(!is_m(&c, &tol) && is_m0(&c, &tol));
        let l = m(&[&[1., -1.], &[-1., 1.]]);
        assert!(!is_m(&l, &tol) && is_m0(&l, &tol));
        assert!(!is_m_by_inverse(&l, &tol));
        assert!(is_m_by_inverse(&m(&[&[2., -1.], &[-1., 2.]]), &tol));
    }

    #[test]
    fn h_matrices() {
        let tol = t();
        assert!(is_h(&Matrix::identity(2, 2), &tol));
        assert!(!is_h(&m(&[&[1., -1.], &[-1., 1.]]), &tol));
        assert!(is_h(&m(&[&[2., -1.], &[-1., 2.]]), &tol));
        assert!(is_h(&m(&[&[-3., 1.], &[1., 2.]]), &tol));
    }

    #[test]
    fn copositivity() {
        let tol = t();
        let id = Matrix::identity(2, 2);
        assert!(copositive_check(&id, false, &tol, CAP).unwrap().holds);
        assert!(copositive_check(&id, true, &tol, CAP).unwrap().holds);
        let a = m(&[&[1., -2.], &[-2., 1.]]);
        let c = copositive_check(&a, false, &tol, CAP).unwrap();
        assert!(!c.holds);
        let cert = c.certificate.unwrap();
        assert!((cert.value.unwrap() + 0.5).abs() < 1e-12);
        assert!(verify_failure(Property::Copositive, &a, &cert, &tol).unwrap());
        let z = Matrix::zeros(2, 2);
        assert!(copositive_check(&z, false, &tol, CAP).unwrap().holds);
        assert!(!copositive_check(&z, true, &tol, CAP).unwrap().holds);
        // singular face [[1,-1],[-1,1]]: min 0 at (1/2, 1/2)
        let s = m(&[&[1., -1.], &[-1., 1.]]);
        assert!(copositive_check(&s, false, &tol, CAP).unwrap().holds);
        assert!(!copositive_check(&s, true, &tol, CAP).unwrap().holds);
    }

    #[test]
    fn semimonotonicity() {
        let tol = t();
        assert!(semimonotone_check(&Matrix::identity(3, 3), &tol, CAP).unwrap().holds);
        assert!(semimonotone_check(&ex1(), &tol, CAP).unwrap().holds);
        let c = semimonotone_check(&m(&[&[-1.]]), &tol, CAP).unwrap();
        assert!(!c.holds);
        assert_eq!(c.certificate.as_ref().unwrap().index_set, Some(vec![0]));
    }

    #[test]
    fn column_sufficiency() {
        let tol = t();
        assert!(column_sufficient_check(&Matrix::identity(2, 2), &tol, CAP).unwrap().holds);
        let a = m(&[&[0., -1.], &[0., 0.]]);
        let c = column_sufficient_check(&a, &tol, CAP).unwrap();
        assert!(!c.holds);
        let cert = c.certificate.unwrap();
        assert_eq!(cert.index_set, Some(vec![0, 1]));
        assert_eq!(cert.complement_set, Some(vec![]));
        assert!(verify_failure(Property::ColumnSufficient, &a, &cert, &tol).unwrap());
        assert!(column_sufficient_check(&ex2(), &tol, CAP).unwrap().holds);
    }

    #[test]
    fn minors() {
        let tol = t();
        assert!(nondegenerate_check(&Matrix::identity(3, 3), &tol, CAP).unwrap().holds);
        assert!(p_check(&Matrix::identity(3, 3), &tol, CAP).unwrap().holds);
        assert!(!nondegenerate_check(&ex1(), &tol, CAP).unwrap().holds);
        let a = m(&[&[2., -1.], &[-1., 2.]]);
        assert!(nondegenerate_check(&a, &tol, CAP).unwrap().holds && p_check(&a, &tol, CAP).unwrap().holds);
        assert!(!p_check(&m(&[&[-1.]]), &tol, CAP).unwrap().holds);
        assert!(nondegenerate_check(&m(&[&[-1.]]), &tol, CAP).unwrap().holds);
    }

    #[test]
    fn regular_classes() {
        let tol = t();
        let id = Matrix::identity(2, 2);
        assert!(r0_check(&id, &tol, CAP).unwrap().holds && r_check(&id, &tol, CAP).unwrap().holds);
        let z = Matrix::zeros(2, 2);
        let c = r0_check(&z, &tol, CAP).unwrap();
        assert!(!c.holds);
        assert!(verify_failure(Property::R0, &z, c.certificate.as_ref().unwrap(), &tol).unwrap());
        assert!(!r_check(&z, &tol, CAP).unwrap().holds);
        assert!(r0_check(&ex1(), &tol, CAP).unwrap().holds);
        assert!(r_check(&ex1(), &tol, CAP).unwrap().holds);
    }

    #[test]
    fn qp_point_matrix_classes() {
        let tol = t();
        let a = ex2();
        assert!(semimonotone_check(&a, &tol, CAP).unwrap().holds);
        assert!(r0_check(&a, &tol, CAP).unwrap().holds);
        assert!(r_check(&a, &tol, CAP).unwrap().holds);
        assert!(!nondegenerate_check(&a, &tol, CAP).unwrap().holds);
    }

    #[test]
    fn property_tokens() {
        for p in Property::ALL {
            assert_eq!(p.token().parse::<Property>().unwrap(), p);
            let js = serde_json::to_string(&p).unwrap();
            assert_eq!(js, format!("\"{}\"", p.token()));
        }
        assert!("nope".parse::<Property>().is_err());
    }

    #[test]
    fn certificate_serializes_one_based() {
        let c = Certificate { index_set: Some(vec![0, 2]), complement_set: Some(vec![]), ..Default::default() };
        let js = serde_json::to_value(&c).unwrap();
        assert_eq!(js["I"], serde_json::json!([1, 3]));
        let back: Certificate = serde_json::from_value(js).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn caps_enforced() {
        let a = Matrix::identity(5, 5);
        let e = semimonotone_check(&a, &t(), 4).unwrap_err();
        assert!(matches!(e, Error::CapExceeded { n: 5, cap: 4, .. }));
    }
}
