//! Strong nonsingularity by Rohn's sign-pair determinant test.

use crate::config::{Caps, CheckConfig};
use crate::interval::{submatrix, IntervalMatrix, SignVector};
use crate::linalg::{self, Sign};
use crate::point::Certificate;
use crate::{Matrix, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NonsingularCheck {
    pub holds: bool,
    pub certificate: Option<Certificate>,
    pub marginal: bool,
}

/// Every matrix in the box is nonsingular iff
/// `det(mid) det(mid - D_y rad D_z) > 0` for all `y, z` in `{±1}^n`.
pub fn strong_nonsingular(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<NonsingularCheck> {
    let n = a.dim();
    Caps::check(cfg.caps.nondegeneracy, n, "strong nonsingularity sign pairs")?;
    let all: Vec<usize> = (0..n).collect();
    let d0 = linalg::det_sign(a.mid(), cfg.tol.pivot);
    let mut marginal = d0.marginal;
    if d0.sign == Sign::Zero {
        let c = Certificate {
            index_set: Some(all),
            value: Some(d0.det),
            note: Some("singular midpoint".into()),
            ..Default::default()
        }
        .with_realization(a.mid());
        return Ok(NonsingularCheck { holds: false, certificate: Some(c), marginal });
    }
    let found = first_sign_change(a, d0.sign, cfg.tol.pivot, &mut marginal)?;
    Ok(NonsingularCheck {
        holds: found.is_none(),
        certificate: found.map(|(y, z)| support_certificate(a, &all, &y, &z)),
        marginal,
    })
}

/// First `(y, z)` (with `y_1 = +1`; `(y, z)` and `(-y, -z)` give the same
/// vertex) whose determinant does not share the sign `sign0`.
pub(super) fn first_sign_change(
    sub: &IntervalMatrix,
    sign0: Sign,
    pivot: f64,
    marginal: &mut bool,
) -> Result<Option<(Vec<i8>, Vec<i8>)>> {
    let k = sub.dim();
    for ym in 0..1u64 << (k - 1) {
        let y = SignVector::from_mask(k, ym << 1);
        for zm in 0..1u64 << k {
            let z = SignVector::from_mask(k, zm);
            let d = linalg::det_sign(&sub.signed_vertex(y.as_slice(), z.as_slice())?, pivot);
            *marginal |= d.marginal;
            if d.sign != sign0 {
                return Ok(Some((y.as_slice().to_vec(), z.as_slice().to_vec())));
            }
        }
    }
    Ok(None)
}

/// Signs `y, z` on the support `idx` extended by `+1`; the determinant of the
/// principal block changes sign along `mid - alpha D_y rad D_z` and the
/// bisection point is a singular realization.
pub(super) fn support_certificate(a: &IntervalMatrix, idx: &[usize], y: &[i8], z: &[i8]) -> Certificate {
    let n = a.dim();
    let mut yf = vec![1i8; n];
    let mut zf = vec![1i8; n];
    for (k, &i) in idx.iter().enumerate() {
        yf[i] = y[k];
        zf[i] = z[k];
    }
    let at = |alpha: f64| -> Matrix {
        Matrix::from_fn(n, n, |i, j| a.mid()[(i, j)] - alpha * f64::from(yf[i] * zf[j]) * a.rad()[(i, j)])
    };
    let det_on = |m: &Matrix| linalg::determinant(&submatrix(m, idx, idx));
    let d0 = det_on(a.mid());
    let alpha = super::bisect_bad(|t| {
        let d = det_on(&at(t));
        d != 0.0 && d.signum() == d0.signum()
    });
    let mut r = at(alpha);
    super::snap_singular(&mut r, idx);
    Certificate {
        index_set: Some(idx.to_vec()),
        y: Some(yf),
        z: Some(zf),
        value: Some(det_on(&r)),
        note: Some(format!("determinant changes sign; singular at mid - {alpha:.6} D_y rad D_z")),
        ..Default::default()
    }
    .with_realization(&r)
}
