//! Tolerances, enumeration caps and check configuration.

use serde::{Deserialize, Serialize};

use crate::point::Property;
use crate::{Error, Result};

/// Environment variable overriding the default decision tolerance.
pub const TOL_ENV: &str = "ILCP_TOL";

/// Numerical tolerances. All are scale-relative unless noted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Pivot threshold relative to the largest absolute entry.
    pub pivot: f64,
    /// Eigenvalue / quadratic-form threshold relative to the infinity norm.
    pub eig: f64,
    /// Spectral-radius threshold comparisons (absolute, scaled by max(1, |N|)).
    pub rho: f64,
    /// Power-iteration convergence tolerance on the Collatz-Wielandt bracket.
    pub power: f64,
    /// Iteration cap for the power method.
    pub power_iters: usize,
    /// LP feasibility tolerance, relative to the row-equilibrated system.
    pub lp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pivot: 1e-10,
            eig: 1e-9,
            rho: 1e-9,
            power: 1e-10,
            power_iters: 10_000,
            lp: 1e-9,
        }
    }
}

impl Tolerances {
    /// Defaults, with `eig` and `rho` replaced by `ILCP_TOL` when it parses.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Some(v) = std::env::var(TOL_ENV).ok().and_then(|s| s.trim().parse::<f64>().ok()) {
            if v.is_finite() && v > 0.0 {
                tol = tol.with_decision_tol(v);
            }
        }
        tol
    }

    /// Replace the decision tolerances (eigenvalue, copositivity and
    /// spectral-radius thresholds).
    pub fn with_decision_tol(mut self, tol: f64) -> Self {
        self.eig = tol;
        self.rho = tol;
        self
    }
}

/// Maximum dimensions for the exponential enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// 2^n and 3^n enumerations on a single real matrix.
    pub point: usize,
    /// 5^n supports-and-signs enumeration (also bounds the 4^n nonsingularity test).
    pub nondegeneracy: usize,
    /// 2^n sign-vertex enumerations.
    pub sign_vertices: usize,
    /// 3^n (I, J) enumerations on interval systems.
    pub index_pairs: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self { point: 16, nondegeneracy: 8, sign_vertices: 14, index_pairs: 10 }
    }
}

impl Caps {
    /// Every cap set to the same dimension.
    pub fn uniform(n: usize) -> Self {
        Self { point: n, nondegeneracy: n, sign_vertices: n, index_pairs: n }
    }

    pub(crate) fn check(cap: usize, n: usize, what: &'static str) -> Result<()> {
        if n > cap {
            Err(Error::CapExceeded { what, n, cap })
        } else {
            Ok(())
        }
    }
}

/// Which decision paths the strong checkers may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FastPathPolicy {
    /// Use a fast path when its precondition holds, else the general path.
    #[default]
    Auto,
    /// Always use the general characterization.
    Off,
    /// Use fast paths only; properties without an applicable one are errors.
    Only,
}

impl std::str::FromStr for FastPathPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "off" => Ok(Self::Off),
            "only" => Ok(Self::Only),
            other => Err(Error::Input(format!("unknown fast-path policy {other:?}"))),
        }
    }
}

/// Configuration for [`crate::check_all`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub properties: Vec<Property>,
    pub fast_paths: FastPathPolicy,
    pub tol: Tolerances,
    pub caps: Caps,
    /// Search all 2^n sign normalizations instead of the 2-colouring step.
    /// The 2-colouring is already exact, so this only serves cross-checks.
    pub exhaustive_normalization: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            properties: Property::STRONG.to_vec(),
            fast_paths: FastPathPolicy::Auto,
            tol: Tolerances::default(),
            caps: Caps::default(),
            exhaustive_normalization: false,
        }
    }
}

impl CheckConfig {
    pub fn with_properties(mut self, properties: &[Property]) -> Self {
        self.properties = properties.to_vec();
        self
    }

    pub fn with_fast_paths(mut self, policy: FastPathPolicy) -> Self {
        self.fast_paths = policy;
        self
    }
}
