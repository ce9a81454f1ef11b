//! Reports: aggregated verdicts plus the configuration that produced them.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Caps, CheckConfig, FastPathPolicy, Tolerances};
use crate::interval::IntervalMatrix;
use crate::oracle::Consistency;
use crate::point::{Certificate, Property};
use crate::strong::PropertyVerdict;
use crate::{Error, Result};

/// Identifier of the JSON layout, bumped on incompatible changes.
pub const SCHEMA: &str = "ilcp-report/1";

/// Hex SHA-256 of the dimension and the bit patterns of both bounds.
pub fn box_digest(a: &IntervalMatrix) -> String {
    let mut h = Sha256::new();
    h.update(b"ilcp-box");
    h.update((a.dim() as u64).to_le_bytes());
    for m in [a.lower(), a.upper()] {
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                h.update(m[(i, j)].to_bits().to_le_bytes());
            }
        }
    }
    h.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub n: usize,
    pub digest: String,
    pub degenerate: bool,
    pub symmetric: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub fast_paths: FastPathPolicy,
    pub tolerances: Tolerances,
    pub caps: Caps,
    pub exhaustive_normalization: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub input: InputEcho,
    pub config: ReportConfig,
    pub verdicts: Vec<PropertyVerdict>,
    /// Falsification cross-check. The oracle only refutes; it never certifies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Consistency>,
    pub all_hold: bool,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(a: &IntervalMatrix, cfg: &CheckConfig, verdicts: Vec<PropertyVerdict>, elapsed_ms: f64) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            input: InputEcho {
                n: a.dim(),
                digest: box_digest(a),
                degenerate: a.is_degenerate(),
                symmetric: a.is_symmetric(),
                source: None,
            },
            config: ReportConfig {
                fast_paths: cfg.fast_paths,
                tolerances: cfg.tol,
                caps: cfg.caps,
                exhaustive_normalization: cfg.exhaustive_normalization,
                seed: None,
                budget: None,
            },
            all_hold: verdicts.iter().all(|v| v.holds),
            verdicts,
            oracle: None,
            elapsed_ms,
        }
    }

    pub fn verdict(&self, p: Property) -> Option<&PropertyVerdict> {
        self.verdicts.iter().find(|v| v.property == p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(s).map_err(|e| Error::Input(format!("report: {e}")))?;
        if r.schema != SCHEMA {
            return Err(Error::Input(format!("unsupported report schema {:?}", r.schema)));
        }
        Ok(r)
    }

    /// Zero every timing field, for golden comparisons.
    pub fn without_timings(mut self) -> Self {
        self.elapsed_ms = 0.0;
        for v in &mut self.verdicts {
            v.elapsed_ms = 0.0;
        }
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "interval matrix: n = {}, digest {}", self.input.n, &self.input.digest[..16]);
        if let Some(src) = &self.input.source {
            let _ = writeln!(s, "source: {src}");
        }
        let _ = writeln!(s, "fast paths: {}", policy_token(self.config.fast_paths));
        for v in &self.verdicts {
            let _ = write!(
                s,
                "  {:<28} {:<6} {}",
                v.property.token(),
                if v.holds { "holds" } else { "fails" },
                v.method.token()
            );
            if let Some(rho) = v.rho {
                let _ = write!(s, "  rho={rho:.6}");
            }
            if v.boundary {
                s.push_str("  [boundary]");
            }
            if v.marginal {
                s.push_str("  [marginal]");
            }
            s.push('\n');
            if let Some(c) = &v.certificate {
                let line = certificate_summary(c);
                if !line.is_empty() {
                    let _ = writeln!(s, "      {line}");
                }
            }
            for sk in &v.skipped {
                let _ = writeln!(s, "      skipped {}: {}", sk.method.token(), sk.reason);
            }
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(s, "oracle: {}", o.summary());
        }
        let _ = writeln!(s, "result: {}", if self.all_hold { "all hold" } else { "some fail" });
        s
    }
}

fn policy_token(p: FastPathPolicy) -> &'static str {
    match p {
        FastPathPolicy::Auto => "auto",
        FastPathPolicy::Off => "off",
        FastPathPolicy::Only => "only",
    }
}

fn one_based(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn fmt_vec(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", items.join(", "))
}

/// One-line human summary of a certificate (1-based index sets).
pub fn certificate_summary(c: &Certificate) -> String {
    let mut parts = Vec::new();
    if let Some(i) = &c.index_set {
        parts.push(format!("I={}", one_based(i)));
    }
    if let Some(j) = &c.complement_set {
        parts.push(format!("J={}", one_based(j)));
    }
    if let Some(e) = &c.entry {
        parts.push(format!("entry={}", one_based(e).replace(['{', '}'], "")));
    }
    if let Some(x) = &c.x {
        parts.push(format!("x={}", fmt_vec(x)));
    }
    if let Some(t) = c.t {
        parts.push(format!("t={t:.6}"));
    }
    if let Some(v) = c.value {
        parts.push(format!("value={v:.6e}"));
    }
    if let Some(ok) = c.verified {
        parts.push(format!("verified={ok}"));
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;

    #[test]
    fn digest_depends_on_bounds() {
        let a = IntervalMatrix::degenerate(Matrix::identity(2, 2)).unwrap();
        let b = IntervalMatrix::degenerate(Matrix::identity(2, 2) * 2.0).unwrap();
        assert_eq!(box_digest(&a), box_digest(&a.clone()));
        assert_ne!(box_digest(&a), box_digest(&b));
        assert_eq!(box_digest(&a).len(), 64);
    }

    #[test]
    fn summary_is_one_based() {
        let c = Certificate { index_set: Some(vec![0, 1, 2]), complement_set: Some(vec![]), ..Default::default() };
        assert_eq!(certificate_summary(&c), "I={1,2,3} J={}");
    }
}
