//! JSON input files.
//!
//! Four layouts are accepted, distinguished by their keys:
//!
//! ```json
//! {"n": 3, "midpoint": [[...]], "radius": [[...]]}
//! {"n": 3, "midpoint": [[...]], "radius_scale": {"of": "abs_midpoint", "factor": 0.1}}
//! {"n": 2, "lower": [[...]], "upper": [[...]]}
//! {"n": 2, "matrix": [[...]]}
//! {"qp": {"C": [[...]], "d": [...], "B": [[...]], "b": [...]}, "radB": [[...]], "radC": [[...]]}
//! ```
//!
//! Matrices are row-major nested arrays. An optional `"name"` string is kept.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::interval::IntervalMatrix;
use crate::lcp::{qp_to_interval_lcp, QpInstance};
use crate::{Error, Matrix, Result};

pub type Rows = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusScale {
    /// Only `"abs_midpoint"` is defined: radius = factor * |midpoint|.
    pub of: String,
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MidRadFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub midpoint: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_scale: Option<RadiusScale>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub lower: Rows,
    pub upper: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub matrix: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpSpec {
    #[serde(rename = "C")]
    pub c: Rows,
    pub d: Vec<f64>,
    #[serde(rename = "B")]
    pub b_mat: Rows,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub qp: QpSpec,
    #[serde(rename = "radB", default, skip_serializing_if = "Option::is_none")]
    pub rad_b: Option<Rows>,
    #[serde(rename = "radC", default, skip_serializing_if = "Option::is_none")]
    pub rad_c: Option<Rows>,
}

/// A parsed input file, kept in its source layout.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum InputFile {
    MidRad(MidRadFile),
    Bounds(BoundsFile),
    Point(PointFile),
    Qp(QpFile),
}

/// The mathematical content of an input file.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Interval(IntervalMatrix),
    Point(Matrix),
    Qp { qp: QpInstance, rad_b: Matrix, rad_c: Matrix },
}

impl Parsed {
    /// The interval matrix to check (degenerate for a point matrix).
    pub fn interval(&self) -> Result<IntervalMatrix> {
        match self {
            Parsed::Interval(a) => Ok(a.clone()),
            Parsed::Point(m) => IntervalMatrix::degenerate(m.clone()),
            Parsed::Qp { qp, rad_b, rad_c } => qp_to_interval_lcp(qp, rad_b, rad_c),
        }
    }

    /// Same midpoint with radius `factor * |midpoint|` (for QPs, of the `B`
    /// and `C` blocks).
    pub fn rescaled(&self, factor: f64) -> Result<Parsed> {
        if !(factor.is_finite() && factor >= 0.0) {
            return Err(Error::Input(format!("scale factor must be finite and >= 0, got {factor}")));
        }
        Ok(match self {
            Parsed::Interval(a) => Parsed::Interval(IntervalMatrix::relative(a.mid().clone(), factor)?),
            Parsed::Point(m) => Parsed::Interval(IntervalMatrix::relative(m.clone(), factor)?),
            Parsed::Qp { qp, .. } => Parsed::Qp {
                qp: qp.clone(),
                rad_b: qp.b_mat.abs() * factor,
                rad_c: qp.c.abs() * factor,
            },
        })
    }
}

pub fn parse_str(s: &str) -> Result<InputFile> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Input(format!("malformed JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| Error::Input("input must be a JSON object".into()))?;
    let layout = |e: serde_json::Error| Error::Input(e.to_string());
    let file = if obj.contains_key("qp") {
        InputFile::Qp(serde_json::from_value(v).map_err(layout)?)
    } else if obj.contains_key("lower") || obj.contains_key("upper") {
        InputFile::Bounds(serde_json::from_value(v).map_err(layout)?)
    } else if obj.contains_key("midpoint") {
        InputFile::MidRad(serde_json::from_value(v).map_err(layout)?)
    } else if obj.contains_key("matrix") {
        InputFile::Point(serde_json::from_value(v).map_err(layout)?)
    } else {
        return Err(Error::Input("expected one of the keys midpoint, lower/upper, matrix, qp".into()));
    };
    Ok(file)
}

pub fn parse_file(path: impl AsRef<Path>) -> Result<InputFile> {
    let path = path.as_ref();
    let s = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_str(&s)
}

fn to_matrix(rows: &Rows, r: usize, c: usize, what: &str) -> Result<Matrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        let shape: Vec<usize> = rows.iter().map(Vec::len).collect();
        return Err(Error::DimensionMismatch(format!("{what}: expected {r}x{c}, got rows of lengths {shape:?}")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(Matrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn nonnegative(m: &Matrix) -> Result<()> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)] < 0.0 {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
        }
    }
    Ok(())
}

fn rows_of(m: &Matrix) -> Rows {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl InputFile {
    pub fn name(&self) -> Option<&str> {
        match self {
            InputFile::MidRad(f) => f.name.as_deref(),
            InputFile::Bounds(f) => f.name.as_deref(),
            InputFile::Point(f) => f.name.as_deref(),
            InputFile::Qp(f) => f.name.as_deref(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("input serializes")
    }

    /// Bounds layout of an interval matrix.
    pub fn from_interval(a: &IntervalMatrix) -> Self {
        InputFile::Bounds(BoundsFile { name: None, n: a.dim(), lower: rows_of(a.lower()), upper: rows_of(a.upper()) })
    }

    /// Validate dimensions and bounds and build the matrices.
    pub fn resolve(&self) -> Result<Parsed> {
        match self {
            InputFile::MidRad(f) => {
                let mid = to_matrix(&f.midpoint, f.n, f.n, "midpoint")?;
                let rad = match (&f.radius, &f.radius_scale) {
                    (Some(_), Some(_)) => {
                        return Err(Error::Input("give either radius or radius_scale, not both".into()))
                    }
                    (Some(r), None) => to_matrix(r, f.n, f.n, "radius")?,
                    (None, Some(s)) => {
                        if s.of != "abs_midpoint" {
                            return Err(Error::Input(format!("radius_scale.of must be \"abs_midpoint\", got {:?}", s.of)));
                        }
                        if !(s.factor.is_finite() && s.factor >= 0.0) {
                            return Err(Error::Input("radius_scale.factor must be finite and >= 0".into()));
                        }
                        return Ok(Parsed::Interval(IntervalMatrix::relative(mid, s.factor)?));
                    }
                    (None, None) => Matrix::zeros(f.n, f.n),
                };
                Ok(Parsed::Interval(IntervalMatrix::from_mid_rad(mid, rad)?))
            }
            InputFile::Bounds(f) => Ok(Parsed::Interval(IntervalMatrix::from_bounds(
                to_matrix(&f.lower, f.n, f.n, "lower")?,
                to_matrix(&f.upper, f.n, f.n, "upper")?,
            )?)),
            InputFile::Point(f) => Ok(Parsed::Point(to_matrix(&f.matrix, f.n, f.n, "matrix")?)),
            InputFile::Qp(f) => {
                let m = f.qp.c.len();
                let k = f.qp.b.len();
                let qp = QpInstance::new(
                    to_matrix(&f.qp.c, m, m, "C")?,
                    f.qp.d.clone(),
                    to_matrix(&f.qp.b_mat, k, m, "B")?,
                    f.qp.b.clone(),
                )?;
                let rad_b = match &f.rad_b {
                    Some(r) => to_matrix(r, k, m, "radB")?,
                    None => Matrix::zeros(k, m),
                };
                let rad_c = match &f.rad_c {
                    Some(r) => to_matrix(r, m, m, "radC")?,
                    None => Matrix::zeros(m, m),
                };
                nonnegative(&rad_b)?;
                nonnegative(&rad_c)?;
                Ok(Parsed::Qp { qp, rad_b, rad_c })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew3_relative_radius() {
        let f = parse_str(
            r#"{"n":3, "midpoint": [[0,-1,2],[2,0,-2],[-1,1,0]], "radius_scale": {"of":"abs_midpoint", "factor":0.1}}"#,
        )
        .unwrap();
        let a = f.resolve().unwrap().interval().unwrap();
        assert_eq!(a.rad()[(0, 2)], 0.2);
        assert_eq!(a.rad()[(2, 1)], 0.1);
        assert_eq!(a.rad()[(0, 0)], 0.0);
    }

    #[test]
    fn point_and_bounds_layouts() {
        let f = parse_str(r#"{"n":2, "matrix": [[1,0],[0,1]]}"#).unwrap();
        assert_eq!(f.resolve().unwrap(), Parsed::Point(Matrix::identity(2, 2)));
        let f = parse_str(r#"{"n":2, "lower": [[0,-1],[0,0]], "upper": [[0,-1],[0,0]]}"#).unwrap();
        assert!(f.resolve().unwrap().interval().unwrap().is_degenerate());
    }

    #[test]
    fn errors() {
        assert!(parse_str("{").is_err());
        assert!(parse_str("[1]").is_err());
        assert!(parse_str(r#"{"n":2}"#).is_err());
        assert!(parse_str(r#"{"n":2, "matrix": [[1,0],[0,1]], "extra": 1}"#).is_err());
        let bad = parse_str(r#"{"n":2, "lower": [[1,0],[0,0]], "upper": [[0,0],[0,0]]}"#).unwrap();
        assert!(matches!(bad.resolve(), Err(Error::LowerExceedsUpper { row: 0, col: 0 })));
        let short = parse_str(r#"{"n":3, "matrix": [[1,0],[0,1]]}"#).unwrap();
        assert!(matches!(short.resolve(), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn roundtrip() {
        let texts = [
            r#"{"name":"x","n":2,"midpoint":[[1,0],[0,1]],"radius":[[0.5,0.5],[0.5,0.5]]}"#,
            r#"{"qp":{"C":[[10,4],[4,5]],"d":[1,1],"B":[[2,-1],[-3,1]],"b":[10,9]},"radB":[[0,0],[0,0]],"radC":[[2.5,1],[1,1.25]]}"#,
        ];
        for t in texts {
            let f = parse_str(t).unwrap();
            let again = parse_str(&f.to_json()).unwrap();
            assert_eq!(f, again);
            assert_eq!(f.resolve().unwrap(), again.resolve().unwrap());
        }
    }

    #[test]
    fn qp_interval() {
        let f = parse_str(r#"{"qp":{"C":[[10,4],[4,5]],"d":[1,1],"B":[[2,-1],[-3,1]],"b":[10,9]}}"#).unwrap();
        let p = f.resolve().unwrap();
        assert!(p.interval().unwrap().is_degenerate());
        let r = p.rescaled(0.1).unwrap().interval().unwrap();
        assert!((r.rad()[(2, 2)] - 2.0).abs() < 1e-15);
        assert!((r.rad()[(0, 2)] - 0.2).abs() < 1e-15);
    }
}
