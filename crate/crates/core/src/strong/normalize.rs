//! Sign normalizations that turn a midpoint into an M-matrix.
//!
//! `D_u B D_u` is a Z-matrix exactly when `u_i u_j b_ij <= 0` for every
//! off-diagonal pair, which is a 2-colouring problem on the nonzero pattern.
//! Breadth-first search either finds the colouring or a conflict, so no
//! sign search is needed.

use std::collections::VecDeque;

use crate::config::{Caps, Tolerances};
use crate::interval::SignVector;
use crate::point;
use crate::{Matrix, Result};

/// `u` with `u_i u_j b_ij <= 0` for all `i != j`, fixing `u_0 = +1` in each
/// connected component.
pub fn z_colouring(b: &Matrix) -> Option<Vec<i8>> {
    let n = b.nrows();
    let mut u = vec![0i8; n];
    for start in 0..n {
        if u[start] != 0 {
            continue;
        }
        u[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if j == i {
                    continue;
                }
                let (a, c) = (b[(i, j)], b[(j, i)]);
                let (pos, neg) = (a > 0.0 || c > 0.0, a < 0.0 || c < 0.0);
                let want = match (pos, neg) {
                    (false, false) => continue,
                    (true, true) => return None,
                    (true, false) => -u[i],
                    (false, true) => u[i],
                };
                if u[j] == 0 {
                    u[j] = want;
                    queue.push_back(j);
                } else if u[j] != want {
                    return None;
                }
            }
        }
    }
    Some(u)
}

/// `D_y A D_z`.
pub fn scaled(a: &Matrix, y: &[i8], z: &[i8]) -> Matrix {
    Matrix::from_fn(a.nrows(), a.ncols(), |i, j| f64::from(y[i] * z[j]) * a[(i, j)])
}

/// Row and column signs `(y, z)` with `D_y mid D_z` an M-matrix.
pub fn nondegeneracy_frame(
    mid: &Matrix,
    tol: &Tolerances,
    exhaustive: bool,
    cap: usize,
) -> Result<Option<(Vec<i8>, Vec<i8>)>> {
    let n = mid.nrows();
    if (0..n).any(|i| mid[(i, i)] == 0.0) {
        return Ok(None);
    }
    let w: Vec<i8> = (0..n).map(|i| if mid[(i, i)] > 0.0 { 1 } else { -1 }).collect();
    let rows = scaled(mid, &w, &vec![1; n]);
    let found = if exhaustive {
        exhaustive_frame(&rows, tol, cap)?
    } else {
        z_colouring(&rows).filter(|u| point::is_m(&scaled(&rows, u, u), tol))
    };
    Ok(found.map(|u| {
        let y = u.iter().zip(&w).map(|(a, b)| a * b).collect();
        (y, u)
    }))
}

/// `s` with `D_s mid D_s` an M-matrix.
pub fn sufficiency_frame(mid: &Matrix, tol: &Tolerances, exhaustive: bool, cap: usize) -> Result<Option<Vec<i8>>> {
    if exhaustive {
        exhaustive_frame(mid, tol, cap)
    } else {
        Ok(z_colouring(mid).filter(|s| point::is_m(&scaled(mid, s, s), tol)))
    }
}

fn exhaustive_frame(b: &Matrix, tol: &Tolerances, cap: usize) -> Result<Option<Vec<i8>>> {
    let n = b.nrows();
    Caps::check(cap, n, "exhaustive sign normalization")?;
    for mask in 0..1u64 << (n - 1) {
        let s = SignVector::from_mask(n, mask << 1);
        if point::is_m(&scaled(b, s.as_slice(), s.as_slice()), tol) {
            return Ok(Some(s.as_slice().to_vec()));
        }
    }
    Ok(None)
}
