//! Dense kernels: LU, determinants, Perron roots, Jacobi eigenvalues,
//! definiteness and irreducibility.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::interval::symmetric_part;
use crate::{Error, Matrix, Result};

/// Largest absolute entry (0 for an empty matrix).
pub fn max_abs(a: &Matrix) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Infinity norm (maximum absolute row sum).
pub fn norm_inf(a: &Matrix) -> f64 {
    (0..a.nrows()).map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Row-pivoted LU factorization `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    sign: f64,
    scale: f64,
}

impl Lu {
    pub fn new(a: &Matrix) -> Self {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.nrows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].abs().total_cmp(&lu[(j, k)].abs()).then(j.cmp(&i)))
                .unwrap();
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
                sign = -sign;
            }
            let piv = lu[(k, k)];
            if piv == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Self { lu, perm, sign, scale: max_abs(a) }
    }

    pub fn determinant(&self) -> f64 {
        (0..self.lu.nrows()).fold(self.sign, |d, k| d * self.lu[(k, k)])
    }

    /// Smallest pivot magnitude (infinite for the empty matrix).
    pub fn min_pivot(&self) -> f64 {
        (0..self.lu.nrows()).map(|k| self.lu[(k, k)].abs()).fold(f64::INFINITY, f64::min)
    }

    /// Singular when some pivot is at most `tol * max|a_ij|`.
    pub fn is_singular(&self, tol: f64) -> bool {
        self.lu.nrows() > 0 && self.min_pivot() <= tol * self.scale
    }

    /// Solve `A x = b`; `None` when singular to tolerance.
    pub fn solve(&self, b: &[f64], tol: f64) -> Option<Vec<f64>> {
        if self.is_singular(tol) {
            return None;
        }
        let n = self.lu.nrows();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        Some(x)
    }

    pub fn inverse(&self, tol: f64) -> Option<Matrix> {
        let n = self.lu.nrows();
        let mut inv = Matrix::zeros(n, n);
        for c in 0..n {
            let mut e = vec![0.0; n];
            e[c] = 1.0;
            let col = self.solve(&e, tol)?;
            for r in 0..n {
                inv[(r, c)] = col[r];
            }
        }
        Some(inv)
    }
}

pub fn determinant(a: &Matrix) -> f64 {
    Lu::new(a).determinant()
}

/// `a` with its smallest singular value set to zero. The change has norm
/// `sigma_min(a)`, so a nearly singular matrix moves only by that much.
pub fn drop_smallest_singular_value(a: &Matrix) -> Matrix {
    let mut svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    if let Some(k) = (0..sv.len()).min_by(|&i, &j| sv[i].total_cmp(&sv[j])) {
        svd.singular_values[k] = 0.0;
    }
    svd.recompose().expect("both factors computed")
}

/// Sign of a determinant after tolerance classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Determinant sign; `marginal` is set when the value is nonzero in floating
/// point but classified as zero by the pivot tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetSign {
    pub sign: Sign,
    pub det: f64,
    pub marginal: bool,
}

pub fn det_sign(a: &Matrix, pivot_tol: f64) -> DetSign {
    let lu = Lu::new(a);
    let det = lu.determinant();
    if lu.is_singular(pivot_tol) {
        DetSign { sign: Sign::Zero, det, marginal: det != 0.0 }
    } else if det > 0.0 {
        DetSign { sign: Sign::Positive, det, marginal: false }
    } else {
        DetSign { sign: Sign::Negative, det, marginal: false }
    }
}

/// Nonsingular with an entrywise nonnegative inverse.
pub fn inverse_nonnegative(a: &Matrix, tol: &Tolerances) -> bool {
    match Lu::new(a).inverse(tol.pivot) {
        Some(inv) => {
            let slack = tol.eig * max_abs(&inv);
            inv.iter().all(|&v| v >= -slack)
        }
        None => false,
    }
}

/// Perron root of a nonnegative matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub rho: f64,
    /// Collatz-Wielandt bracket `lower <= rho(N) <= upper`.
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Perron vector of the dominant strongly connected block, zero elsewhere.
    pub vector: Vec<f64>,
    /// Indices of that block.
    pub block: Vec<usize>,
}

/// Spectral radius of `n >= 0`.
///
/// The Frobenius normal form reduces the problem to irreducible diagonal
/// blocks; each block `B` is handled by power iteration on the primitive
/// matrix `B/c + I`, re-centred on the current estimate `c ~ rho(B)`, with
/// Collatz-Wielandt bounds as the stopping rule.
pub fn spectral_radius_nonneg(n: &Matrix, tol: &Tolerances) -> Result<SpectralResult> {
    check_nonneg(n)?;
    let dim = n.nrows();
    if dim == 0 {
        return Ok(SpectralResult {
            rho: 0.0,
            lower: 0.0,
            upper: 0.0,
            iterations: 0,
            converged: true,
            vector: vec![],
            block: vec![],
        });
    }
    let blocks: Vec<SpectralResult> =
        strong_components(n).iter().map(|b| block_perron(n, b, tol)).collect();
    let upper = blocks.iter().map(|r| r.upper).fold(0.0, f64::max);
    let lower = blocks.iter().map(|r| r.lower).fold(0.0, f64::max);
    let iterations = blocks.iter().map(|r| r.iterations).sum();
    let converged = blocks.iter().all(|r| r.converged);
    // first block attaining the maximum
    let mut best = blocks
        .into_iter()
        .reduce(|a, b| if b.rho > a.rho { b } else { a })
        .expect("at least one component");
    best.upper = upper;
    best.lower = lower;
    best.iterations = iterations;
    best.converged = converged;
    let mut full = vec![0.0; dim];
    for (k, &i) in best.block.iter().enumerate() {
        full[i] = best.vector[k];
    }
    best.vector = full;
    Ok(best)
}

fn block_perron(n: &Matrix, block: &[usize], tol: &Tolerances) -> SpectralResult {
    let m = block.len();
    if m == 1 {
        let v = n[(block[0], block[0])];
        return SpectralResult {
            rho: v,
            lower: v,
            upper: v,
            iterations: 0,
            converged: true,
            vector: vec![1.0],
            block: block.to_vec(),
        };
    }
    let b = crate::interval::submatrix(n, block, block);
    let mut c = norm_inf(&b);
    let mut x = vec![1.0; m];
    let (mut lo, mut hi) = (0.0, c);
    let mut iters = 0;
    let mut converged = false;
    while iters < tol.power_iters {
        iters += 1;
        let bx: Vec<f64> = (0..m).map(|i| (0..m).map(|j| b[(i, j)] * x[j]).sum()).collect();
        // Collatz-Wielandt on B itself, valid for any positive x
        lo = f64::INFINITY;
        hi = 0.0_f64;
        for i in 0..m {
            let r = bx[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if hi - lo <= tol.power * hi {
            converged = true;
            break;
        }
        let y: Vec<f64> = (0..m).map(|i| bx[i] / c + x[i]).collect();
        let top = y.iter().fold(0.0_f64, |a, &v| a.max(v));
        x = y.iter().map(|v| v / top).collect();
        if iters % 50 == 0 && hi > 0.0 {
            c = hi;
        }
    }
    let sum: f64 = x.iter().sum();
    SpectralResult {
        rho: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
        iterations: iters,
        converged,
        vector: x.iter().map(|v| v / sum).collect(),
        block: block.to_vec(),
    }
}

/// Strongly connected components of the digraph `i -> j` iff `n_ij != 0`,
/// each sorted, ordered by smallest member.
pub fn strong_components(n: &Matrix) -> Vec<Vec<usize>> {
    let dim = n.nrows();
    let reach = reachability(n);
    let mut seen = vec![false; dim];
    let mut out = Vec::new();
    for i in 0..dim {
        if seen[i] {
            continue;
        }
        let comp: Vec<usize> = (0..dim).filter(|&j| j == i || (reach[i][j] && reach[j][i])).collect();
        for &j in &comp {
            seen[j] = true;
        }
        out.push(comp);
    }
    out
}

fn reachability(n: &Matrix) -> Vec<Vec<bool>> {
    let dim = n.nrows();
    (0..dim)
        .map(|s| {
            let mut r = vec![false; dim];
            let mut stack = vec![s];
            while let Some(i) = stack.pop() {
                for j in 0..dim {
                    if n[(i, j)] != 0.0 && !r[j] {
                        r[j] = true;
                        stack.push(j);
                    }
                }
            }
            r
        })
        .collect()
}

/// Irreducibility of a nonnegative matrix (strong connectivity of its
/// nonzero pattern). Every 1x1 matrix is irreducible.
pub fn is_irreducible(n: &Matrix) -> Result<bool> {
    check_nonneg(n)?;
    Ok(strong_components(n).len() <= 1)
}

fn check_nonneg(n: &Matrix) -> Result<()> {
    if !n.is_square() {
        return Err(Error::DimensionMismatch("expected a square matrix".into()));
    }
    for j in 0..n.ncols() {
        for i in 0..n.nrows() {
            if n[(i, j)] < 0.0 {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues (ascending) and the matching eigenvectors as columns.
pub fn symmetric_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.nrows();
    let mut m = symmetric_part(a);
    let mut v = Matrix::identity(n, n);
    let fro = m.norm();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * fro || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let vals = order.iter().map(|&i| m[(i, i)]).collect();
    let vecs = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (vals, vecs)
}

/// Positive definiteness of the symmetric part, by Cholesky with pivots
/// required to exceed `pivot * max|a_ij|`.
pub fn is_positive_definite(a: &Matrix, tol: &Tolerances) -> bool {
    let s = symmetric_part(a);
    let n = s.nrows();
    let thresh = tol.pivot * max_abs(&s);
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let d = s[(j, j)] - (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum::<f64>();
        if d.is_nan() || d <= thresh {
            return false;
        }
        let dj = d.sqrt();
        l[(j, j)] = dj;
        for i in j + 1..n {
            l[(i, j)] = (s[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>()) / dj;
        }
    }
    true
}

/// Smallest eigenvalue of the symmetric part with its eigenvector.
pub fn min_eigenpair(a: &Matrix) -> (f64, Vec<f64>) {
    let (vals, vecs) = symmetric_eigen(a);
    match vals.first() {
        Some(&v) => (v, vecs.column(0).iter().copied().collect()),
        None => (0.0, vec![]),
    }
}

/// Positive semidefiniteness of the symmetric part: smallest eigenvalue at
/// least `-eig * |A|_inf`.
pub fn is_positive_semidefinite(a: &Matrix, tol: &Tolerances) -> bool {
    let s = symmetric_part(a);
    let (lmin, _) = min_eigenpair(&s);
    lmin >= -tol.eig * norm_inf(&s)
}
