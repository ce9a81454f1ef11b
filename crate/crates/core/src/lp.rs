//! LP feasibility by phase-1 simplex with Bland's rule, plus the exact
//! encodings of strict homogeneous systems used by the checkers.
//!
//! Every strict system the checkers meet is positively homogeneous, so
//! `x > 0` becomes `x >= e` and `Mx > 0` becomes `Mx >= e` without any
//! epsilon perturbation.

use crate::config::Tolerances;
use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub rel: Relation,
    pub rhs: f64,
}

/// Rows `a^T x (<=|>=|=) b` over variables with individual lower bounds
/// (`None` meaning unbounded below). Variables default to `x_j >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    n_vars: usize,
    rows: Vec<Row>,
    lower: Vec<Option<f64>>,
}

impl LinearSystem {
    pub fn new(n_vars: usize) -> Self {
        Self { n_vars, rows: Vec::new(), lower: vec![Some(0.0); n_vars] }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn set_lower(&mut self, var: usize, bound: Option<f64>) -> &mut Self {
        self.lower[var] = bound;
        self
    }

    pub fn lower_bounds(&self) -> &[Option<f64>] {
        &self.lower
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, rel: Relation, rhs: f64) -> Result<&mut Self> {
        if coeffs.len() != self.n_vars {
            return Err(Error::DimensionMismatch(format!(
                "row has {} coefficients, system has {} variables",
                coeffs.len(),
                self.n_vars
            )));
        }
        self.rows.push(Row { coeffs, rel, rhs });
        Ok(self)
    }

    /// Add one row per row of `block`, with the same relation and rhs,
    /// placing the block's columns at `offset`.
    pub fn add_block(&mut self, block: &Matrix, offset: usize, rel: Relation, rhs: f64) -> Result<&mut Self> {
        for i in 0..block.nrows() {
            let mut c = vec![0.0; self.n_vars];
            for j in 0..block.ncols() {
                c[offset + j] = block[(i, j)];
            }
            self.add_row(c, rel, rhs)?;
        }
        Ok(self)
    }

    /// Largest violation of `x` against rows and bounds, each relative to
    /// the magnitude of the terms involved.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0_f64;
        for row in &self.rows {
            let lhs: f64 = row.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let mag = 1.0 + row.rhs.abs() + row.coeffs.iter().zip(x).map(|(a, v)| (a * v).abs()).sum::<f64>();
            let v = match row.rel {
                Relation::Le => lhs - row.rhs,
                Relation::Ge => row.rhs - lhs,
                Relation::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(v / mag);
        }
        for (l, v) in self.lower.iter().zip(x) {
            if let Some(l) = l {
                worst = worst.max((l - v) / (1.0 + l.abs()));
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult {
    pub feasible: bool,
    pub witness: Option<Vec<f64>>,
}

impl FeasibilityResult {
    fn infeasible() -> Self {
        Self { feasible: false, witness: None }
    }
}

const PIVOT_EPS: f64 = 1e-11;
const WITNESS_SLACK: f64 = 1e-7;

/// Phase-1 simplex feasibility verdict with witness.
pub fn solve_feasibility(sys: &LinearSystem, tol: &Tolerances) -> Result<FeasibilityResult> {
    // column map: each variable is l + x' or x+ - x-
    let mut shift = vec![0.0; sys.n_vars];
    let mut cols: Vec<(usize, f64)> = Vec::new();
    let mut var_cols: Vec<Vec<usize>> = Vec::with_capacity(sys.n_vars);
    for (j, l) in sys.lower.iter().enumerate() {
        match l {
            Some(l) => {
                shift[j] = *l;
                var_cols.push(vec![cols.len()]);
                cols.push((j, 1.0));
            }
            None => {
                var_cols.push(vec![cols.len(), cols.len() + 1]);
                cols.push((j, 1.0));
                cols.push((j, -1.0));
            }
        }
    }
    let ns = cols.len();

    // equilibrated rows with nonnegative rhs
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for row in &sys.rows {
        let rhs = row.rhs - row.coeffs.iter().zip(&shift).map(|(a, s)| a * s).sum::<f64>();
        let mut a = vec![0.0; ns];
        for (c, &(j, sgn)) in cols.iter().enumerate() {
            a[c] = sgn * row.coeffs[j];
        }
        let scale = a.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            let ok = match row.rel {
                Relation::Le => rhs >= -tol.lp * (1.0 + row.rhs.abs()),
                Relation::Ge => rhs <= tol.lp * (1.0 + row.rhs.abs()),
                Relation::Eq => rhs.abs() <= tol.lp * (1.0 + row.rhs.abs()),
            };
            if !ok {
                return Ok(FeasibilityResult::infeasible());
            }
            continue;
        }
        let (mut a, mut rhs, mut rel) = (a.iter().map(|v| v / scale).collect::<Vec<_>>(), rhs / scale, row.rel);
        if rhs < 0.0 {
            a.iter_mut().for_each(|v| *v = -*v);
            rhs = -rhs;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        rows.push((a, rel, rhs));
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let n_cols = ns + n_slack + n_art;
    let art_start = ns + n_slack;
    let width = n_cols + 1;
    let mut t = vec![0.0; m * width];
    let mut basis = vec![0usize; m];
    let (mut next_slack, mut next_art) = (ns, art_start);
    for (r, (a, rel, rhs)) in rows.iter().enumerate() {
        t[r * width..r * width + ns].copy_from_slice(a);
        t[r * width + n_cols] = *rhs;
        match rel {
            Relation::Le => {
                t[r * width + next_slack] = 1.0;
                basis[r] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                t[r * width + next_slack] = -1.0;
                next_slack += 1;
                t[r * width + next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                t[r * width + next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
        }
    }

    // reduced costs of the phase-1 objective (sum of artificials)
    let mut d = vec![0.0; width];
    for r in 0..m {
        if basis[r] >= art_start {
            for c in 0..width {
                if c < art_start || c == n_cols {
                    d[c] -= t[r * width + c];
                }
            }
        }
    }

    let max_iters = 10_000 + 50 * (m + n_cols);
    let mut iters = 0;
    while let Some(enter) = (0..art_start).find(|&c| d[c] < -PIVOT_EPS) {
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..m {
            let a = t[r * width + enter];
            if a > PIVOT_EPS {
                let ratio = t[r * width + n_cols] / a;
                let tie = 1e-14 * (1.0 + best.abs());
                match leave {
                    None => {
                        leave = Some(r);
                        best = ratio;
                    }
                    Some(l) => {
                        if ratio < best - tie {
                            leave = Some(r);
                            best = ratio;
                        } else if ratio <= best + tie && basis[r] < basis[l] {
                            leave = Some(r);
                            best = best.min(ratio);
                        }
                    }
                }
            }
        }
        let Some(pr) = leave else {
            return Err(Error::Engine("unbounded phase-1 direction".into()));
        };
        pivot(&mut t, &mut d, width, m, pr, enter);
        basis[pr] = enter;
        iters += 1;
        if iters > max_iters {
            return Err(Error::Engine(format!("no convergence after {iters} pivots")));
        }
    }

    let infeas: f64 = (0..m).filter(|&r| basis[r] >= art_start).map(|r| t[r * width + n_cols]).sum();
    let rhs_scale = rows.iter().fold(1.0_f64, |a, r| a.max(r.2));
    if infeas > tol.lp * rhs_scale {
        return Ok(FeasibilityResult::infeasible());
    }

    let mut colval = vec![0.0; n_cols];
    for r in 0..m {
        colval[basis[r]] = t[r * width + n_cols].max(0.0);
    }
    let mut x: Vec<f64> = (0..sys.n_vars)
        .map(|j| {
            let v: f64 = var_cols[j].iter().map(|&c| cols[c].1 * colval[c]).sum();
            v + shift[j]
        })
        .collect();
    for (j, l) in sys.lower.iter().enumerate() {
        if let Some(l) = l {
            x[j] = x[j].max(*l);
        }
    }
    let viol = sys.violation(&x);
    if viol > WITNESS_SLACK {
        return Err(Error::Engine(format!("witness violates the system by {viol:e}")));
    }
    Ok(FeasibilityResult { feasible: true, witness: Some(x) })
}

fn pivot(t: &mut [f64], d: &mut [f64], width: usize, m: usize, pr: usize, pc: usize) {
    let p = t[pr * width + pc];
    for c in 0..width {
        t[pr * width + c] /= p;
    }
    t[pr * width + pc] = 1.0;
    let prow: Vec<f64> = t[pr * width..(pr + 1) * width].to_vec();
    for r in 0..m {
        if r == pr {
            continue;
        }
        let f = t[r * width + pc];
        if f != 0.0 {
            for c in 0..width {
                let v = t[r * width + c] - f * prow[c];
                t[r * width + c] = if v.abs() < 1e-14 { 0.0 } else { v };
            }
            t[r * width + pc] = 0.0;
        }
    }
    let f = d[pc];
    if f != 0.0 {
        for c in 0..width {
            d[c] -= f * prow[c];
        }
        d[pc] = 0.0;
    }
}

/// Outcome of a strict homogeneous system: witness `x` and, for the
/// "at least one strict" form, the row that is strictly negative.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictResult {
    pub feasible: bool,
    pub witness: Option<Vec<f64>>,
    pub row: Option<usize>,
}

/// `strict_all`: does `Mx > 0, x > 0` have a solution? Otherwise: does
/// `Mx <= 0` with `Mx != 0`, `x > 0`?
///
/// Encoded as `{Mx >= e, x >= e}`, respectively as the disjunction over rows
/// `k` of `{Mx <= 0, (Mx)_k <= -1, x >= e}`; the smallest feasible `k` wins.
pub fn feasible_positive_strict(m: &Matrix, strict_all: bool, tol: &Tolerances) -> Result<StrictResult> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let nv = m.ncols();
    let mut base = LinearSystem::new(nv);
    for j in 0..nv {
        base.set_lower(j, Some(1.0));
    }
    if strict_all {
        base.add_block(m, 0, Relation::Ge, 1.0)?;
        let r = solve_feasibility(&base, tol)?;
        return Ok(StrictResult { feasible: r.feasible, witness: r.witness, row: None });
    }
    base.add_block(m, 0, Relation::Le, 0.0)?;
    for k in 0..m.nrows() {
        let mut sys = base.clone();
        sys.add_row(m.row(k).iter().copied().collect(), Relation::Le, -1.0)?;
        let r = solve_feasibility(&sys, tol)?;
        if r.feasible {
            return Ok(StrictResult { feasible: true, witness: r.witness, row: Some(k) });
        }
    }
    Ok(StrictResult { feasible: false, witness: None, row: None })
}
