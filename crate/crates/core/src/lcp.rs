//! Small linear complementarity problems and the QP to LCP reduction.
//!
//! The LCP is: find `z` with `y = Az + q`, `y, z >= 0`, `y^T z = 0`.

use serde::{Deserialize, Serialize};

use crate::interval::{submatrix, IntervalMatrix};
use crate::linalg::{self, Lu};
use crate::subsets::nonempty_subsets_of;
use crate::{Error, Matrix, Result};

/// Largest dimension accepted by basis enumeration.
pub const MAX_ENUMERATION_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct LcpInstance {
    pub a: Matrix,
    pub q: Vec<f64>,
}

impl LcpInstance {
    pub fn new(a: Matrix, q: Vec<f64>) -> Result<Self> {
        if !a.is_square() || a.nrows() != q.len() || q.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "LCP matrix is {}x{}, q has length {}",
                a.nrows(),
                a.ncols(),
                q.len()
            )));
        }
        if a.iter().chain(&q).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { a, q })
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// Largest violation of the solution conditions at `z`: negativity of
    /// `y` or `z`, and the complementarity products `min(y_i, z_i)`.
    pub fn violation(&self, z: &[f64]) -> f64 {
        let y = self.w(z);
        y.iter()
            .zip(z)
            .map(|(&yi, &zi)| (-yi).max(-zi).max(yi.min(zi)).max(0.0))
            .fold(0.0, f64::max)
    }

    /// `Az + q`.
    pub fn w(&self, z: &[f64]) -> Vec<f64> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.a[(i, j)] * z[j]).sum::<f64>() + self.q[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcpSolution {
    pub z: Vec<f64>,
    pub y: Vec<f64>,
    /// Indices where `z` is basic (0-based in memory, 1-based when serialized).
    #[serde(with = "one_based")]
    pub basis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcpSolutions {
    pub solutions: Vec<LcpSolution>,
    /// Bases whose principal block was numerically singular.
    #[serde(with = "one_based_nested")]
    pub singular_bases: Vec<Vec<usize>>,
    pub bases_tested: usize,
}

mod one_based {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        v.into_iter().map(|i| i.checked_sub(1).ok_or_else(|| serde::de::Error::custom("indices are 1-based"))).collect()
    }
}

mod one_based_nested {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<usize>], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|b| b.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<usize>>, D::Error> {
        let v: Vec<Vec<usize>> = Vec::deserialize(d)?;
        v.into_iter()
            .map(|b| {
                b.into_iter()
                    .map(|i| i.checked_sub(1).ok_or_else(|| serde::de::Error::custom("indices are 1-based")))
                    .collect()
            })
            .collect()
    }
}

/// All solutions reachable through nonsingular complementary bases.
///
/// For each support `S` (empty first, then by cardinality and
/// lexicographically) solve `A_SS z_S = -q_S` and keep the point when
/// `z_S >= 0` and `y = Az + q >= 0`, up to a small tolerance. Duplicates are
/// removed. A degenerate problem can have solutions only on singular bases;
/// those bases are listed but not explored.
pub fn solve_lcp_enumerate(p: &LcpInstance, pivot_tol: f64) -> Result<LcpSolutions> {
    let n = p.dim();
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::CapExceeded { what: "LCP basis enumeration", n, cap: MAX_ENUMERATION_DIM });
    }
    let scale = 1.0 + linalg::max_abs(&p.a) + p.q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let eps = 1e-9 * scale;
    let mut out = LcpSolutions { solutions: Vec::new(), singular_bases: Vec::new(), bases_tested: 0 };
    let supports = std::iter::once(Vec::new()).chain(nonempty_subsets_of(n));
    for s in supports {
        out.bases_tested += 1;
        let mut z = vec![0.0; n];
        if !s.is_empty() {
            let rhs: Vec<f64> = s.iter().map(|&i| -p.q[i]).collect();
            let Some(zs) = Lu::new(&submatrix(&p.a, &s, &s)).solve(&rhs, pivot_tol) else {
                out.singular_bases.push(s);
                continue;
            };
            if zs.iter().any(|&v| v < -eps) {
                continue;
            }
            for (k, &i) in s.iter().enumerate() {
                z[i] = zs[k].max(0.0);
            }
        }
        let mut y = p.w(&z);
        if y.iter().enumerate().any(|(i, &v)| !s.contains(&i) && v < -eps) {
            continue;
        }
        for (i, v) in y.iter_mut().enumerate() {
            *v = if s.contains(&i) { 0.0 } else { v.max(0.0) };
        }
        let dup = out.solutions.iter().any(|o| o.z.iter().zip(&z).all(|(a, b)| (a - b).abs() <= 1e3 * eps));
        if !dup {
            out.solutions.push(LcpSolution { z, y, basis: s });
        }
    }
    Ok(out)
}

/// `min x^T C x + d^T x  s.t.  Bx <= b, x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QpInstance {
    pub c: Matrix,
    pub d: Vec<f64>,
    pub b_mat: Matrix,
    pub b: Vec<f64>,
}

impl QpInstance {
    pub fn new(c: Matrix, d: Vec<f64>, b_mat: Matrix, b: Vec<f64>) -> Result<Self> {
        let m = c.nrows();
        if !c.is_square() || d.len() != m || b_mat.ncols() != m || b_mat.nrows() != b.len() || m == 0 {
            return Err(Error::DimensionMismatch(format!(
                "QP with C {}x{}, d {}, B {}x{}, b {}",
                c.nrows(),
                c.ncols(),
                d.len(),
                b_mat.nrows(),
                b_mat.ncols(),
                b.len()
            )));
        }
        Ok(Self { c, d, b_mat, b })
    }

    /// Number of variables.
    pub fn m(&self) -> usize {
        self.c.nrows()
    }

    /// Number of constraints.
    pub fn k(&self) -> usize {
        self.b.len()
    }
}

fn kkt_matrix(k: usize, m: usize, off: &Matrix, diag: &Matrix, sign: f64) -> Matrix {
    Matrix::from_fn(k + m, k + m, |i, j| match (i < k, j < k) {
        (true, true) => 0.0,
        (true, false) => sign * off[(i, j - k)],
        (false, true) => off[(j, i - k)],
        (false, false) => 2.0 * diag[(i - k, j - k)],
    })
}

/// `A = [[0, -B], [B^T, 2C]]`, `q = (b, d)`, with `z = (u, x)`.
pub fn qp_to_lcp(qp: &QpInstance) -> LcpInstance {
    let a = kkt_matrix(qp.k(), qp.m(), &qp.b_mat, &qp.c, -1.0);
    let q = qp.b.iter().chain(&qp.d).copied().collect();
    LcpInstance { a, q }
}

/// Interval LCP matrix with the reduction's midpoint and radius
/// `[[0, rad_B], [rad_B^T, 2 rad_C]]`.
pub fn qp_to_interval_lcp(qp: &QpInstance, rad_b: &Matrix, rad_c: &Matrix) -> Result<IntervalMatrix> {
    if rad_b.shape() != qp.b_mat.shape() || rad_c.shape() != qp.c.shape() {
        return Err(Error::DimensionMismatch("radius shapes must match B and C".into()));
    }
    for m in [rad_b, rad_c] {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] < 0.0 {
                    return Err(Error::NegativeEntry { row: i, col: j });
                }
            }
        }
    }
    let mid = qp_to_lcp(qp).a;
    let rad = kkt_matrix(qp.k(), qp.m(), rad_b, rad_c, 1.0);
    IntervalMatrix::from_mid_rad(mid, rad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_qp() -> QpInstance {
        QpInstance::new(
            Matrix::from_row_slice(2, 2, &[10., 4., 4., 5.]),
            vec![1., 1.],
            Matrix::from_row_slice(2, 2, &[2., -1., -3., 1.]),
            vec![10., 9.],
        )
        .unwrap()
    }

    #[test]
    fn identity_instances() {
        let p = LcpInstance::new(Matrix::identity(2, 2), vec![-1., -1.]).unwrap();
        let s = solve_lcp_enumerate(&p, 1e-10).unwrap();
        assert_eq!(s.solutions.len(), 1);
        assert_eq!(s.solutions[0].z, vec![1., 1.]);
        assert_eq!(s.solutions[0].y, vec![0., 0.]);
        let p = LcpInstance::new(Matrix::identity(2, 2), vec![1., 1.]).unwrap();
        let s = solve_lcp_enumerate(&p, 1e-10).unwrap();
        assert_eq!(s.solutions.len(), 1);
        assert_eq!(s.solutions[0].z, vec![0., 0.]);
        assert_eq!(s.solutions[0].y, vec![1., 1.]);
    }

    #[test]
    fn reduction_matches_printed_matrix() {
        let lcp = qp_to_lcp(&small_qp());
        let printed = Matrix::from_row_slice(
            4,
            4,
            &[0., 0., -2., 1., 0., 0., 3., -1., 2., -3., 20., 8., -1., 1., 8., 10.],
        );
        assert_eq!(lcp.a, printed);
        assert_eq!(lcp.q, vec![10., 9., 1., 1.]);
        let s = solve_lcp_enumerate(&lcp, 1e-10).unwrap();
        assert_eq!(s.solutions.len(), 1);
        assert!(lcp.violation(&s.solutions[0].z) <= 1e-8);
    }

    #[test]
    fn zero_constraint_matrix() {
        let qp = QpInstance::new(Matrix::identity(2, 2), vec![0., 0.], Matrix::zeros(2, 2), vec![0., 0.]).unwrap();
        let a = qp_to_lcp(&qp).a;
        let mut want = Matrix::zeros(4, 4);
        want[(2, 2)] = 2.0;
        want[(3, 3)] = 2.0;
        assert_eq!(a, want);
    }

    #[test]
    fn interval_reduction() {
        let qp = small_qp();
        let rb = qp.b_mat.abs() / 10.0;
        let rc = qp.c.abs() / 10.0;
        let a = qp_to_interval_lcp(&qp, &rb, &rc).unwrap();
        assert_eq!(a.rad()[(0, 2)], 0.2);
        assert_eq!(a.rad()[(2, 0)], 0.2);
        assert_eq!(a.rad()[(2, 2)], 2.0);
        assert_eq!(a.rad()[(0, 0)], 0.0);
        assert_eq!(a.mid(), &qp_to_lcp(&qp).a);
        let zero = qp_to_interval_lcp(&qp, &Matrix::zeros(2, 2), &Matrix::zeros(2, 2)).unwrap();
        assert!(zero.is_degenerate());
        assert!(qp_to_interval_lcp(&qp, &(-rb), &rc).is_err());
    }

    #[test]
    fn dimension_errors() {
        assert!(LcpInstance::new(Matrix::identity(2, 2), vec![1.]).is_err());
        assert!(QpInstance::new(Matrix::identity(2, 2), vec![1.], Matrix::zeros(1, 2), vec![0.]).is_err());
        let big = LcpInstance::new(Matrix::identity(21, 21), vec![1.; 21]).unwrap();
        assert!(matches!(solve_lcp_enumerate(&big, 1e-10), Err(Error::CapExceeded { .. })));
    }
}
