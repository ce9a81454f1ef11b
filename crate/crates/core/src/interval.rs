//! Interval matrices, sign vectors and index pairs.

use serde::{Deserialize, Serialize};

use crate::{Error, Matrix, Result};

/// A square box `{A : lower <= A <= upper}` of real matrices.
///
/// Bound and midpoint/radius forms are both computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    lower: Matrix,
    upper: Matrix,
    mid: Matrix,
    rad: Matrix,
}

impl IntervalMatrix {
    /// Box from entrywise bounds.
    pub fn from_bounds(lower: Matrix, upper: Matrix) -> Result<Self> {
        check_square(&lower, "lower")?;
        if lower.shape() != upper.shape() {
            return Err(Error::DimensionMismatch(format!(
                "lower is {}x{}, upper is {}x{}",
                lower.nrows(),
                lower.ncols(),
                upper.nrows(),
                upper.ncols()
            )));
        }
        check_finite(&lower)?;
        check_finite(&upper)?;
        for j in 0..lower.ncols() {
            for i in 0..lower.nrows() {
                if lower[(i, j)] > upper[(i, j)] {
                    return Err(Error::LowerExceedsUpper { row: i, col: j });
                }
            }
        }
        let mid = (&lower + &upper) * 0.5;
        let rad = (&upper - &lower) * 0.5;
        Ok(Self { lower, upper, mid, rad })
    }

    /// Box from midpoint and a nonnegative radius.
    pub fn from_mid_rad(mid: Matrix, rad: Matrix) -> Result<Self> {
        check_square(&mid, "midpoint")?;
        if mid.shape() != rad.shape() {
            return Err(Error::DimensionMismatch("midpoint and radius differ in shape".into()));
        }
        check_finite(&mid)?;
        check_finite(&rad)?;
        for j in 0..rad.ncols() {
            for i in 0..rad.nrows() {
                if rad[(i, j)] < 0.0 {
                    return Err(Error::LowerExceedsUpper { row: i, col: j });
                }
            }
        }
        let lower = &mid - &rad;
        let upper = &mid + &rad;
        Ok(Self { lower, upper, mid, rad })
    }

    /// The single-point box `{a}`.
    pub fn degenerate(a: Matrix) -> Result<Self> {
        let zeros = Matrix::zeros(a.nrows(), a.ncols());
        Self::from_mid_rad(a, zeros)
    }

    /// Midpoint `mid` with radius `factor * |mid|`.
    pub fn relative(mid: Matrix, factor: f64) -> Result<Self> {
        if factor.is_nan() || factor < 0.0 {
            return Err(Error::Input(format!("radius factor must be nonnegative, got {factor}")));
        }
        let rad = mid.abs() * factor;
        Self::from_mid_rad(mid, rad)
    }

    pub fn dim(&self) -> usize {
        self.mid.nrows()
    }

    pub fn lower(&self) -> &Matrix {
        &self.lower
    }

    pub fn upper(&self) -> &Matrix {
        &self.upper
    }

    pub fn mid(&self) -> &Matrix {
        &self.mid
    }

    pub fn rad(&self) -> &Matrix {
        &self.rad
    }

    pub fn is_degenerate(&self) -> bool {
        self.rad.iter().all(|&r| r == 0.0)
    }

    /// True when midpoint and radius are both symmetric.
    pub fn is_symmetric(&self) -> bool {
        is_symmetric(&self.mid) && is_symmetric(&self.rad)
    }

    /// The box of symmetric parts `(A + A^T)/2`, `A` ranging over the box.
    pub fn symmetrized(&self) -> Self {
        let mid = symmetric_part(&self.mid);
        let rad = symmetric_part(&self.rad);
        Self { lower: &mid - &rad, upper: &mid + &rad, mid, rad }
    }

    /// Entrywise membership test with an absolute slack.
    pub fn contains(&self, a: &Matrix, slack: f64) -> bool {
        a.shape() == self.mid.shape()
            && a.iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .all(|(&v, (&l, &u))| v >= l - slack && v <= u + slack)
    }

    /// Principal sub-box on the (0-based) index set `idx`.
    pub fn principal_subbox(&self, idx: &[usize]) -> Result<Self> {
        if idx.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        let n = self.dim();
        if let Some(&bad) = idx.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        Ok(Self {
            lower: submatrix(&self.lower, idx, idx),
            upper: submatrix(&self.upper, idx, idx),
            mid: submatrix(&self.mid, idx, idx),
            rad: submatrix(&self.rad, idx, idx),
        })
    }

    /// `mid - D_y * rad * D_z`. For `y = z = s` this is the sign vertex `A_ss`.
    pub fn signed_vertex(&self, y: &[i8], z: &[i8]) -> Result<Matrix> {
        let n = self.dim();
        if y.len() != n || z.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "sign vectors of length {} and {} for dimension {n}",
                y.len(),
                z.len()
            )));
        }
        for &v in y.iter().chain(z) {
            if !(-1..=1).contains(&v) {
                return Err(Error::InvalidSign(v));
            }
        }
        Ok(Matrix::from_fn(n, n, |i, j| {
            self.mid[(i, j)] - f64::from(y[i] * z[j]) * self.rad[(i, j)]
        }))
    }

    /// Comparison matrix of the box: smallest magnitude on the diagonal
    /// (zero if the diagonal interval contains 0), minus the largest
    /// endpoint magnitude off the diagonal.
    pub fn comparison_matrix(&self) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| {
            let (l, u) = (self.lower[(i, j)], self.upper[(i, j)]);
            if i == j {
                if l <= 0.0 && u >= 0.0 {
                    0.0
                } else {
                    l.abs().min(u.abs())
                }
            } else {
                -l.abs().max(u.abs())
            }
        })
    }

    /// A realization whose point comparison matrix equals the box comparison
    /// matrix: minimal-magnitude diagonal, maximal-magnitude off-diagonals.
    pub fn comparison_realization(&self) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| {
            let (l, u) = (self.lower[(i, j)], self.upper[(i, j)]);
            if i == j {
                if l <= 0.0 && u >= 0.0 {
                    0.0
                } else if l.abs() < u.abs() {
                    l
                } else {
                    u
                }
            } else if l.abs() >= u.abs() {
                l
            } else {
                u
            }
        })
    }
}

/// A vector over {-1, +1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidSign(bad));
        }
        Ok(Self(entries))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Sign vector read from the bits of `mask`: bit `i` set means `-1`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self((0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(s: SignVector) -> Self {
        s.0
    }
}

/// A vector over {-1, 0, +1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct TriSignVector(Vec<i8>);

impl TriSignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&v| !(-1..=1).contains(&v)) {
            return Err(Error::InvalidSign(bad));
        }
        Ok(Self(entries))
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, _)| i).collect()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }
}

impl TryFrom<Vec<i8>> for TriSignVector {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<TriSignVector> for Vec<i8> {
    fn from(s: TriSignVector) -> Self {
        s.0
    }
}

impl From<SignVector> for TriSignVector {
    fn from(s: SignVector) -> Self {
        Self(s.0)
    }
}

/// A pair of disjoint index sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexPair {
    i: Vec<usize>,
    j: Vec<usize>,
}

impl IndexPair {
    pub fn new(mut i: Vec<usize>, mut j: Vec<usize>) -> Result<Self> {
        i.sort_unstable();
        j.sort_unstable();
        if i.iter().any(|k| j.binary_search(k).is_ok()) {
            return Err(Error::Input("index sets I and J must be disjoint".into()));
        }
        Ok(Self { i, j })
    }

    pub fn i(&self) -> &[usize] {
        &self.i
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    /// `I ∪ J` in increasing order.
    pub fn union(&self) -> Vec<usize> {
        let mut k: Vec<usize> = self.i.iter().chain(&self.j).copied().collect();
        k.sort_unstable();
        k
    }

    /// Signs on `I ∪ J` (in union order): `+1` on `I`, `-1` on `J`.
    pub fn signs(&self) -> Vec<i8> {
        self.union().iter().map(|k| if self.i.binary_search(k).is_ok() { 1 } else { -1 }).collect()
    }
}

pub(crate) fn submatrix(a: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    Matrix::from_fn(rows.len(), cols.len(), |r, c| a[(rows[r], cols[c])])
}

pub(crate) fn symmetric_part(a: &Matrix) -> Matrix {
    (a + a.transpose()) * 0.5
}

pub(crate) fn is_symmetric(a: &Matrix) -> bool {
    a.is_square() && (0..a.nrows()).all(|i| (0..i).all(|j| a[(i, j)] == a[(j, i)]))
}

fn check_square(a: &Matrix, name: &str) -> Result<()> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{name} must be a nonempty square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

fn check_finite(a: &Matrix) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
    }

    fn skew3(factor: f64) -> IntervalMatrix {
        let mid = m(&[&[0., -1., 2.], &[2., 0., -2.], &[-1., 1., 0.]]);
        IntervalMatrix::relative(mid, factor).unwrap()
    }

    #[test]
    fn degenerate_identity() {
        let a = IntervalMatrix::from_bounds(Matrix::identity(2, 2), Matrix::identity(2, 2)).unwrap();
        assert!(a.is_degenerate());
        assert_eq!(a.rad(), &Matrix::zeros(2, 2));
    }

    #[test]
    fn skew3_radius() {
        let a = skew3(0.1);
        let expected = m(&[&[0., 0.1, 0.2], &[0.2, 0., 0.2], &[0.1, 0.1, 0.]]);
        assert!((a.rad() - expected).abs().max() < 1e-15);
    }

    #[test]
    fn bounds_to_mid_rad() {
        let a = IntervalMatrix::from_bounds(m(&[&[0., -2.], &[-1., 0.]]), m(&[&[2., 0.], &[1., 2.]])).unwrap();
        assert_eq!(a.mid(), &m(&[&[1., -1.], &[0., 1.]]));
        assert_eq!(a.rad(), &m(&[&[1., 1.], &[1., 1.]]));
    }

    #[test]
    fn rejects_bad_bounds() {
        let e = IntervalMatrix::from_bounds(m(&[&[1.]]), m(&[&[0.]])).unwrap_err();
        assert_eq!(e, Error::LowerExceedsUpper { row: 0, col: 0 });
        let e = IntervalMatrix::from_bounds(Matrix::zeros(2, 2), Matrix::zeros(3, 3)).unwrap_err();
        assert!(matches!(e, Error::DimensionMismatch(_)));
        assert!(IntervalMatrix::from_bounds(Matrix::zeros(2, 3), Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn subbox() {
        let a = skew3(0.1);
        let s = a.principal_subbox(&[0]).unwrap();
        assert_eq!(s.lower()[(0, 0)], 0.0);
        assert_eq!(s.upper()[(0, 0)], 0.0);
        assert_eq!(a.principal_subbox(&[0, 1, 2]).unwrap(), a);

        let b = IntervalMatrix::from_bounds(m(&[&[0., -1.], &[0., 0.]]), m(&[&[2., 1.], &[0., 2.]])).unwrap();
        let s = b.principal_subbox(&[1]).unwrap();
        assert_eq!((s.lower()[(0, 0)], s.upper()[(0, 0)]), (0.0, 2.0));

        assert_eq!(a.principal_subbox(&[]).unwrap_err(), Error::EmptyIndexSet);
        assert_eq!(a.principal_subbox(&[3]).unwrap_err(), Error::IndexOutOfRange { index: 3, n: 3 });
    }

    #[test]
    fn signed_vertices() {
        let a = skew3(0.1);
        assert_eq!(a.signed_vertex(&[1, 1, 1], &[1, 1, 1]).unwrap(), *a.lower());

        let b = IntervalMatrix::from_mid_rad(Matrix::identity(2, 2), Matrix::from_element(2, 2, 0.5)).unwrap();
        let v = b.signed_vertex(&[1, -1], &[1, -1]).unwrap();
        assert_eq!(v, Matrix::from_element(2, 2, 0.5));
        assert!(b.signed_vertex(&[1], &[1, 1]).is_err());
        assert_eq!(b.signed_vertex(&[2, 1], &[1, 1]).unwrap_err(), Error::InvalidSign(2));
    }

    #[test]
    fn comparison() {
        let id = IntervalMatrix::degenerate(Matrix::identity(2, 2)).unwrap();
        assert_eq!(id.comparison_matrix(), Matrix::identity(2, 2));

        let b = IntervalMatrix::from_bounds(m(&[&[1., -1.], &[-1., 1.]]), m(&[&[3., 1.], &[1., 3.]])).unwrap();
        assert_eq!(b.comparison_matrix(), m(&[&[1., -1.], &[-1., 1.]]));

        let c = IntervalMatrix::from_bounds(m(&[&[-1.]]), m(&[&[2.]])).unwrap();
        assert_eq!(c.comparison_matrix()[(0, 0)], 0.0);
    }

    #[test]
    fn sign_vectors() {
        assert!(SignVector::new(vec![1, 0]).is_err());
        assert_eq!(SignVector::from_mask(3, 0b101).as_slice(), &[-1, 1, -1]);
        let t = TriSignVector::new(vec![0, -1, 1]).unwrap();
        assert_eq!(t.support(), vec![1, 2]);
        assert!(IndexPair::new(vec![0, 1], vec![1]).is_err());
        let p = IndexPair::new(vec![2], vec![0]).unwrap();
        assert_eq!(p.union(), vec![0, 2]);
        assert_eq!(p.signs(), vec![-1, 1]);
    }
}
