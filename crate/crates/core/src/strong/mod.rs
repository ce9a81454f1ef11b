//! Strong (robust) matrix classes of an interval matrix.
//!
//! Each checker decides whether a class holds for every realization of the
//! box. The general path uses the finite characterization in terms of the
//! bound matrices; fast paths apply when the midpoint has special structure
//! (identity, M / M0, or positive (semi)definite after symmetrization).
//! Every negative verdict carries a certificate with a concrete realization,
//! which is re-verified by the point checkers before it is returned.

mod nonsingular;
pub mod normalize;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{Caps, CheckConfig, FastPathPolicy, Tolerances};
use crate::interval::{submatrix, IntervalMatrix, SignVector};
use crate::linalg::{self, SpectralResult};
use crate::lp;
use crate::point::{self, Certificate, Property};
use crate::report::Report;
use crate::subsets::{index_pairs, nonempty_subsets_of};
use crate::{Error, Matrix, Result};

pub use nonsingular::{strong_nonsingular, NonsingularCheck};
use normalize::scaled;

/// The code path that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Closed-form characterization through the bound matrices.
    Direct,
    /// Finite characterization (bound-matrix systems or sign supports).
    General,
    /// Enumeration of the sign vertices `mid - D_s rad D_s`.
    GeneralSignVertex,
    /// Midpoint is the identity; threshold on the spectral radius of the radius.
    FastIdentity,
    /// Midpoint is an M-matrix.
    FastMidpointM,
    /// Midpoint is an M0-matrix.
    FastMidpointM0,
    /// A sign scaling of the midpoint is an M-matrix.
    FastNormalizedM,
    /// Symmetric box with positive definite midpoint.
    FastMidpointPd,
    /// Symmetric box with positive semidefinite midpoint.
    FastMidpointPsd,
}

impl Method {
    pub fn token(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::General => "general",
            Method::GeneralSignVertex => "general-sign-vertex",
            Method::FastIdentity => "fast-identity",
            Method::FastMidpointM => "fast-midpoint-m",
            Method::FastMidpointM0 => "fast-midpoint-m0",
            Method::FastNormalizedM => "fast-normalized-m",
            Method::FastMidpointPd => "fast-midpoint-pd",
            Method::FastMidpointPsd => "fast-midpoint-psd",
        }
    }

    pub fn is_fast(self) -> bool {
        !matches!(self, Method::Direct | Method::General | Method::GeneralSignVertex)
    }
}

/// A fast path whose precondition did not hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPath {
    pub method: Method,
    pub reason: String,
}

/// Verdict on one strong property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub name: String,
    pub holds: bool,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Spectral radius within tolerance of the threshold 1.
    #[serde(default)]
    pub boundary: bool,
    /// Some other decisive quantity within tolerance of its threshold.
    #[serde(default)]
    pub marginal: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedPath>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
struct Outcome {
    holds: bool,
    method: Method,
    certificate: Option<Certificate>,
    boundary: bool,
    marginal: bool,
    rho: Option<f64>,
}

impl Outcome {
    fn new(holds: bool, method: Method) -> Self {
        Self { holds, method, certificate: None, boundary: false, marginal: false, rho: None }
    }

    fn cert(mut self, c: Option<Certificate>) -> Self {
        self.certificate = c;
        self
    }
}

/// A fast-path attempt: `Ok(Err(reason))` when the precondition fails.
type Attempt = Result<std::result::Result<Outcome, String>>;

struct Ctx<'a> {
    a: &'a IntervalMatrix,
    cfg: &'a CheckConfig,
    skipped: Vec<SkippedPath>,
}

impl<'a> Ctx<'a> {
    fn tol(&self) -> &'a Tolerances {
        &self.cfg.tol
    }

    fn caps(&self) -> &'a Caps {
        &self.cfg.caps
    }

    /// Try `method` under the configured policy; `None` means fall through.
    fn fast(&mut self, method: Method, f: impl FnOnce(&mut Self) -> Attempt) -> Result<Option<Outcome>> {
        if self.cfg.fast_paths == FastPathPolicy::Off {
            return Ok(None);
        }
        match f(self)? {
            Ok(o) => Ok(Some(o)),
            Err(reason) => {
                self.skipped.push(SkippedPath { method, reason });
                Ok(None)
            }
        }
    }

    fn general(&self, property: Property, f: impl FnOnce(&Self) -> Result<Outcome>) -> Result<Outcome> {
        if self.cfg.fast_paths == FastPathPolicy::Only {
            let why: Vec<String> = self.skipped.iter().map(|s| format!("{}: {}", s.method.token(), s.reason)).collect();
            return Err(Error::NoFastPath(format!("{} ({})", property.token(), why.join("; "))));
        }
        f(self)
    }
}

macro_rules! try_fast {
    ($ctx:expr, $method:expr, $f:expr) => {
        if let Some(o) = $ctx.fast($method, $f)? {
            return Ok(o);
        }
    };
}

// ---- entry points -------------------------------------------------------

/// Decide one strong property.
pub fn check(property: Property, a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    let start = Instant::now();
    let mut ctx = Ctx { a, cfg, skipped: Vec::new() };
    let mut out = match property {
        Property::Z => Ok(strong_z_outcome(a)),
        Property::S => strong_s_outcome(&ctx),
        Property::M => Ok(strong_m_outcome(a, ctx.tol())),
        Property::H => Ok(strong_h_outcome(a, ctx.tol())),
        Property::Copositive => copositive(&mut ctx, false),
        Property::StrictlyCopositive => copositive(&mut ctx, true),
        Property::Semimonotone => semimonotone(&mut ctx),
        Property::PrincipallyNondegenerate => nondegenerate(&mut ctx),
        Property::ColumnSufficient => column_sufficient(&mut ctx),
        Property::R0 => regular(&mut ctx, false),
        Property::R => regular(&mut ctx, true),
        Property::Pd => definiteness_outcome(a, ctx.tol(), ctx.caps(), true),
        Property::Psd => definiteness_outcome(a, ctx.tol(), ctx.caps(), false),
        Property::M0 | Property::P => {
            Err(Error::Unsupported(format!("no strong checker for {}", property.name())))
        }
    }?;
    if !out.holds {
        let mut c = out.certificate.take().unwrap_or_default();
        c.verified = Some(certify(property, a, &c, ctx.tol())?);
        out.certificate = Some(c);
    }
    Ok(PropertyVerdict {
        property,
        name: property.name().to_string(),
        holds: out.holds,
        method: out.method,
        certificate: out.certificate,
        boundary: out.boundary,
        marginal: out.marginal,
        skipped: ctx.skipped,
        rho: out.rho,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Run every configured property and collect a report.
pub fn check_all(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<Report> {
    let start = Instant::now();
    let verdicts = cfg.properties.iter().map(|&p| check(p, a, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(Report::new(a, cfg, verdicts, start.elapsed().as_secs_f64() * 1e3))
}

/// The realization lies in the box and exhibits the point-level failure.
pub fn certify(property: Property, a: &IntervalMatrix, c: &Certificate, tol: &Tolerances) -> Result<bool> {
    let Some(r) = c.realization_matrix() else { return Ok(false) };
    let slack = 1e-9 * (1.0 + linalg::max_abs(a.lower()).max(linalg::max_abs(a.upper())));
    if r.shape() != a.lower().shape() || !a.contains(&r, slack) {
        return Ok(false);
    }
    point::verify_failure(property, &r, c, tol)
}

// ---- direct characterizations --------------------------------------------

fn with_realization(c: Option<Certificate>, r: &Matrix) -> Option<Certificate> {
    Some(c.unwrap_or_default().with_realization(r))
}

fn strong_z_outcome(a: &IntervalMatrix) -> Outcome {
    let c = point::z_check(a.upper());
    Outcome::new(c.holds, Method::Direct).cert((!c.holds).then(|| with_realization(c.certificate, a.upper())).flatten())
}

fn strong_s_outcome(ctx: &Ctx) -> Result<Outcome> {
    let a = ctx.a;
    let c = point::s_check(a.lower(), ctx.tol())?;
    let cert = if c.holds { c.certificate } else { with_realization(c.certificate, a.lower()) };
    Ok(Outcome::new(c.holds, Method::Direct).cert(cert))
}

fn strong_m_outcome(a: &IntervalMatrix, tol: &Tolerances) -> Outcome {
    if let Some((i, j)) = point::positive_off_diagonal(a.upper()) {
        let c = Certificate {
            entry: Some(vec![i, j]),
            value: Some(a.upper()[(i, j)]),
            note: Some("positive off-diagonal entry in the upper bound".into()),
            ..Default::default()
        };
        return Outcome::new(false, Method::Direct).cert(with_realization(Some(c), a.upper()));
    }
    let c = point::m_check(a.lower(), tol);
    let mut o = Outcome::new(c.holds, Method::Direct);
    o.marginal = c.marginal;
    o.cert((!c.holds).then(|| with_realization(c.certificate, a.lower())).flatten())
}

fn strong_h_outcome(a: &IntervalMatrix, tol: &Tolerances) -> Outcome {
    let comp = a.comparison_matrix();
    let c = point::m_check(&comp, tol);
    let mut o = Outcome::new(c.holds, Method::Direct);
    o.marginal = c.marginal;
    if !c.holds {
        let mut cert = c.certificate.unwrap_or_default();
        cert.note = Some("comparison matrix of the box is not an M-matrix".into());
        o.certificate = with_realization(Some(cert), &a.comparison_realization());
    }
    o
}

pub fn strong_z(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::Z, a, cfg)
}

pub fn strong_s(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::S, a, cfg)
}

pub fn strong_m(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::M, a, cfg)
}

pub fn strong_h(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::H, a, cfg)
}

pub fn strong_pd(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::Pd, a, cfg)
}

pub fn strong_psd(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::Psd, a, cfg)
}

pub fn strong_copositive(a: &IntervalMatrix, strict: bool, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(if strict { Property::StrictlyCopositive } else { Property::Copositive }, a, cfg)
}

pub fn strong_semimonotone(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::Semimonotone, a, cfg)
}

pub fn strong_principally_nondegenerate(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::PrincipallyNondegenerate, a, cfg)
}

pub fn strong_column_sufficient(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::ColumnSufficient, a, cfg)
}

pub fn strong_r0(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::R0, a, cfg)
}

pub fn strong_r(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    check(Property::R, a, cfg)
}

/// Sign vector, smallest eigenvalue and its eigenvector.
type SignFailure = (Vec<i8>, f64, Vec<f64>);

/// First sign vector `s` (with `s_1 = +1`) whose vertex `mid - D_s rad D_s`
/// of the symmetrized box fails (semi)definiteness.
fn definiteness_failure(
    a: &IntervalMatrix,
    tol: &Tolerances,
    caps: &Caps,
    strict: bool,
) -> Result<Option<SignFailure>> {
    let n = a.dim();
    Caps::check(caps.sign_vertices, n, "definiteness sign vertices")?;
    let sym = a.symmetrized();
    for mask in 0..1u64 << (n - 1) {
        let s = SignVector::from_mask(n, mask << 1);
        let v = sym.signed_vertex(s.as_slice(), s.as_slice())?;
        let ok = if strict { linalg::is_positive_definite(&v, tol) } else { linalg::is_positive_semidefinite(&v, tol) };
        if !ok {
            let (lmin, x) = linalg::min_eigenpair(&v);
            return Ok(Some((s.as_slice().to_vec(), lmin, x)));
        }
    }
    Ok(None)
}

fn definiteness_outcome(a: &IntervalMatrix, tol: &Tolerances, caps: &Caps, strict: bool) -> Result<Outcome> {
    let Some((s, lmin, x)) = definiteness_failure(a, tol, caps, strict)? else {
        return Ok(Outcome::new(true, Method::Direct));
    };
    let r = a.signed_vertex(&s, &s)?;
    let c = Certificate {
        s: Some(s),
        x: Some(x),
        value: Some(lmin),
        note: Some("sign vertex mid - D_s rad D_s fails; x is an eigenvector of its symmetric part".into()),
        ..Default::default()
    };
    Ok(Outcome::new(false, Method::Direct).cert(with_realization(Some(c), &r)))
}

// ---- shared fast-path pieces ------------------------------------------------

fn is_identity(m: &Matrix) -> bool {
    m.is_square() && m.iter().enumerate().all(|(k, &v)| v == if k % (m.nrows() + 1) == 0 { 1.0 } else { 0.0 })
}

/// Spectral radius of the radius when the midpoint is exactly the identity.
fn identity_rho(ctx: &Ctx, mid: &Matrix, rad: &Matrix) -> Result<std::result::Result<SpectralResult, String>> {
    if !is_identity(mid) {
        return Ok(Err("midpoint is not the identity".into()));
    }
    Ok(Ok(linalg::spectral_radius_nonneg(rad, ctx.tol())?))
}

/// `rho <= 1` (non-strict) or `rho < 1` (strict), ties resolved per the inequality.
fn rho_test(rho: f64, strict: bool, tol: &Tolerances) -> (bool, bool) {
    let boundary = (rho - 1.0).abs() <= tol.rho;
    let holds = if strict { rho < 1.0 - tol.rho } else { rho <= 1.0 + tol.rho };
    (holds, boundary)
}

/// Witness `(C, x_C)` with `B_CC x_C = (s - rho) x_C` from the Perron block
/// of `B = sI - N`; under a failed M0 test every entry is negative.
fn perron_witness(sp: &SpectralResult) -> (Vec<usize>, Vec<f64>) {
    let x = sp.block.iter().map(|&i| sp.vector[i]).collect();
    (sp.block.clone(), x)
}

fn embed(n: usize, idx: &[usize], xs: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for (k, &i) in idx.iter().enumerate() {
        x[i] = xs[k];
    }
    x
}

/// Point-check certificate on a realization, capped by the point cap.
fn point_certificate(property: Property, r: &Matrix, ctx: &Ctx) -> Result<Option<Certificate>> {
    let c = match point::check(property, r, ctx.tol(), ctx.caps().point) {
        Ok(c) => c,
        Err(Error::CapExceeded { .. }) => {
            return Ok(with_realization(
                Some(Certificate { note: Some("witness search skipped: dimension exceeds cap".into()), ..Default::default() }),
                r,
            ))
        }
        Err(e) => return Err(e),
    };
    Ok(with_realization(c.certificate, r))
}

/// The general path's certificate, used to document a fast-path failure.
fn general_certificate(property: Property, ctx: &Ctx, general: fn(&Ctx) -> Result<Outcome>) -> Result<Option<Certificate>> {
    match general(ctx) {
        Ok(o) if !o.holds => Ok(o.certificate),
        Ok(_) => Ok(Some(Certificate {
            note: Some(format!("general path found no witness for {}", property.token())),
            ..Default::default()
        })),
        Err(Error::CapExceeded { .. }) => Ok(Some(Certificate {
            note: Some("witness search skipped: dimension exceeds cap".into()),
            ..Default::default()
        })),
        Err(e) => Err(e),
    }
}

/// Largest `alpha` in `[0, 1]` with `good(alpha)`, given `good(0)`.
/// Returns the first bad point found by bisection.
fn bisect_bad(good: impl Fn(f64) -> bool) -> f64 {
    if !good(1.0) {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let m = 0.5 * (lo + hi);
            if good(m) {
                lo = m;
            } else {
                hi = m;
            }
            if hi - lo <= f64::EPSILON {
                break;
            }
        }
        hi
    } else {
        1.0
    }
}

// ---- copositivity -------------------------------------------------------------

fn copositive(ctx: &mut Ctx, strict: bool) -> Result<Outcome> {
    let property = if strict { Property::StrictlyCopositive } else { Property::Copositive };
    let sym = ctx.a.symmetrized();
    try_fast!(ctx, Method::FastIdentity, |ctx| {
        let sp = match identity_rho(ctx, sym.mid(), sym.rad())? {
            Ok(sp) => sp,
            Err(r) => return Ok(Err(r)),
        };
        let (holds, boundary) = rho_test(sp.rho, strict, ctx.tol());
        let mut o = Outcome::new(holds, Method::FastIdentity);
        o.boundary = boundary;
        o.rho = Some(sp.rho);
        if !holds {
            o.certificate = Some(copositive_perron_certificate(ctx, &sp, 1.0));
        }
        Ok(Ok(o))
    });
    try_fast!(ctx, Method::FastMidpointM, |ctx| {
        if !point::is_m(sym.mid(), ctx.tol()) {
            return Ok(Err("symmetrized midpoint is not an M-matrix".into()));
        }
        let split = point::m_split(sym.lower(), ctx.tol());
        let holds = split.as_ref().is_some_and(|m| if strict { m.is_m() } else { m.is_m0() });
        let mut o = Outcome::new(holds, Method::FastMidpointM);
        o.marginal = split.as_ref().is_some_and(|m| m.is_marginal());
        if !holds {
            o.certificate = match split {
                Some(m) => Some(copositive_perron_certificate(ctx, &m.spectral, m.s)),
                None => point_certificate(property, ctx.a.lower(), ctx)?,
            };
        }
        Ok(Ok(o))
    });
    ctx.general(property, |ctx| {
        let c = point::copositive_check(ctx.a.symmetrized().lower(), strict, ctx.tol(), ctx.caps().point)?;
        let mut o = Outcome::new(c.holds, Method::General);
        o.marginal = c.marginal;
        if !c.holds {
            o.certificate = with_realization(c.certificate, ctx.a.lower());
        }
        Ok(o)
    })
}

/// `x^T L x = (s - rho) |x|^2 < 0` for the Perron vector of the dominant
/// block of `N` where the symmetrized lower bound is `L = sI - N`.
fn copositive_perron_certificate(ctx: &Ctx, sp: &SpectralResult, s: f64) -> Certificate {
    let (block, xs) = perron_witness(sp);
    let x = embed(ctx.a.dim(), &block, &xs);
    Certificate {
        index_set: Some(block),
        value: Some((s - sp.rho) * xs.iter().map(|v| v * v).sum::<f64>()),
        x: Some(x),
        note: Some("Perron vector of the lower bound's splitting; x^T A x <= 0".into()),
        ..Default::default()
    }
    .with_realization(ctx.a.lower())
}

// ---- semimonotonicity ---------------------------------------------------------

fn semimonotone(ctx: &mut Ctx) -> Result<Outcome> {
    let a = ctx.a;
    try_fast!(ctx, Method::FastIdentity, |ctx| {
        let sp = match identity_rho(ctx, a.mid(), a.rad())? {
            Ok(sp) => sp,
            Err(r) => return Ok(Err(r)),
        };
        let (holds, boundary) = rho_test(sp.rho, false, ctx.tol());
        let mut o = Outcome::new(holds, Method::FastIdentity);
        o.boundary = boundary;
        o.rho = Some(sp.rho);
        if !holds {
            o.certificate = Some(semimonotone_perron_certificate(a, &sp));
        }
        Ok(Ok(o))
    });
    try_fast!(ctx, Method::FastMidpointM0, |ctx| {
        if !point::is_m0(a.mid(), ctx.tol()) {
            return Ok(Err("midpoint is not an M0-matrix".into()));
        }
        let split = point::m_split(a.lower(), ctx.tol());
        let holds = split.as_ref().is_some_and(|m| m.is_m0());
        let mut o = Outcome::new(holds, Method::FastMidpointM0);
        o.marginal = split.as_ref().is_some_and(|m| m.is_marginal());
        if !holds {
            o.certificate = match split {
                Some(m) => Some(semimonotone_perron_certificate(a, &m.spectral)),
                None => point_certificate(Property::Semimonotone, a.lower(), ctx)?,
            };
        }
        Ok(Ok(o))
    });
    ctx.general(Property::Semimonotone, semimonotone_general)
}

fn semimonotone_perron_certificate(a: &IntervalMatrix, sp: &SpectralResult) -> Certificate {
    let (block, x) = perron_witness(sp);
    Certificate {
        index_set: Some(block),
        x: Some(x),
        note: Some("Perron block of the lower bound's splitting: A_II x < 0".into()),
        ..Default::default()
    }
    .with_realization(a.lower())
}

fn semimonotone_general(ctx: &Ctx) -> Result<Outcome> {
    let c = point::semimonotone_check(ctx.a.lower(), ctx.tol(), ctx.caps().point)?;
    let mut o = Outcome::new(c.holds, Method::General);
    if !c.holds {
        o.certificate = with_realization(c.certificate, ctx.a.lower());
    }
    Ok(o)
}

// ---- principal nondegeneracy ------------------------------------------------

fn nondegenerate(ctx: &mut Ctx) -> Result<Outcome> {
    let a = ctx.a;
    let n = a.dim();
    try_fast!(ctx, Method::FastIdentity, |ctx| {
        let sp = match identity_rho(ctx, a.mid(), a.rad())? {
            Ok(sp) => sp,
            Err(r) => return Ok(Err(r)),
        };
        let (holds, boundary) = rho_test(sp.rho, true, ctx.tol());
        let mut o = Outcome::new(holds, Method::FastIdentity);
        o.boundary = boundary;
        o.rho = Some(sp.rho);
        if !holds {
            o.certificate = Some(m_segment_certificate(a, &vec![1; n], &vec![1; n], ctx.tol()));
        }
        Ok(Ok(o))
    });
    try_fast!(ctx, Method::FastNormalizedM, |ctx| {
        let frame =
            normalize::nondegeneracy_frame(a.mid(), ctx.tol(), ctx.cfg.exhaustive_normalization, ctx.caps().sign_vertices)?;
        let Some((y, z)) = frame else {
            return Ok(Err("no sign scaling D_y mid D_z is an M-matrix".into()));
        };
        let lower = &scaled(a.mid(), &y, &z) - a.rad();
        let split = point::m_split(&lower, ctx.tol());
        let holds = split.as_ref().is_some_and(|m| m.is_m());
        let mut o = Outcome::new(holds, Method::FastNormalizedM);
        o.marginal = split.as_ref().is_some_and(|m| m.is_marginal());
        if !holds {
            o.certificate = Some(m_segment_certificate(a, &y, &z, ctx.tol()));
        }
        Ok(Ok(o))
    });
    try_fast!(ctx, Method::FastMidpointPd, |ctx| {
        if !a.is_symmetric() {
            return Ok(Err("midpoint and radius are not both symmetric".into()));
        }
        if !linalg::is_positive_definite(a.mid(), ctx.tol()) {
            return Ok(Err("midpoint is not positive definite".into()));
        }
        let fail = definiteness_failure(a, ctx.tol(), ctx.caps(), true)?;
        let mut o = Outcome::new(fail.is_none(), Method::FastMidpointPd);
        if let Some((s, _, _)) = fail {
            o.certificate = Some(pd_segment_certificate(a, &s));
        }
        Ok(Ok(o))
    });
    ctx.general(Property::PrincipallyNondegenerate, nondegenerate_general)
}

/// Replace the principal block `idx` of a nearly singular `r` by the nearest
/// singular matrix, so that point tests see a zero minor whatever the
/// block's own scale. The change is of the order of the bisection error.
pub(super) fn snap_singular(r: &mut Matrix, idx: &[usize]) {
    let snapped = linalg::drop_smallest_singular_value(&submatrix(r, idx, idx));
    for (p, &i) in idx.iter().enumerate() {
        for (q, &j) in idx.iter().enumerate() {
            r[(i, j)] = snapped[(p, q)];
        }
    }
}

/// Along `mid - alpha D_y rad D_z`, the normalized matrix stops being an
/// M-matrix at some `alpha*`; there it is singular on the Perron block.
fn m_segment_certificate(a: &IntervalMatrix, y: &[i8], z: &[i8], tol: &Tolerances) -> Certificate {
    let mid_n = scaled(a.mid(), y, z);
    let at = |alpha: f64| &mid_n - a.rad() * alpha;
    let gap = |alpha: f64| point::m_split(&at(alpha), tol).map_or(f64::NEG_INFINITY, |m| m.gap());
    let alpha = bisect_bad(|t| gap(t) > 0.0);
    let rn = at(alpha);
    let split = point::m_split(&rn, tol).expect("Z-matrix on the segment");
    let block = split.spectral.block.clone();
    let mut r = scaled(&rn, y, z);
    snap_singular(&mut r, &block);
    Certificate {
        value: Some(linalg::determinant(&submatrix(&r, &block, &block))),
        index_set: Some(block),
        y: Some(y.to_vec()),
        z: Some(z.to_vec()),
        note: Some(format!("singular principal submatrix of mid - {alpha:.6} D_y rad D_z")),
        ..Default::default()
    }
    .with_realization(&r)
}

/// Along `mid - alpha D_s rad D_s` definiteness is lost at a singular matrix.
fn pd_segment_certificate(a: &IntervalMatrix, s: &[i8]) -> Certificate {
    let at = |alpha: f64| a.mid() - scaled(a.rad(), s, s) * alpha;
    let alpha = bisect_bad(|t| linalg::symmetric_eigen(&at(t)).0[0] > 0.0);
    let mut r = at(alpha);
    snap_singular(&mut r, &(0..a.dim()).collect::<Vec<_>>());
    let (lmin, x) = linalg::min_eigenpair(&r);
    Certificate {
        index_set: Some((0..a.dim()).collect()),
        s: Some(s.to_vec()),
        x: Some(x),
        value: Some(lmin),
        note: Some(format!("singular realization mid - {alpha:.6} D_s rad D_s")),
        ..Default::default()
    }
    .with_realization(&r)
}

fn nondegenerate_general(ctx: &Ctx) -> Result<Outcome> {
    let a = ctx.a;
    let n = a.dim();
    Caps::check(ctx.caps().nondegeneracy, n, "strong nondegeneracy supports and signs")?;
    let pivot = ctx.tol().pivot;
    let mut marginal = false;
    for idx in nonempty_subsets_of(n) {
        let sub = a.principal_subbox(&idx)?;
        let d0 = linalg::det_sign(sub.mid(), pivot);
        marginal |= d0.marginal;
        if d0.sign == linalg::Sign::Zero {
            let c = Certificate {
                index_set: Some(idx),
                value: Some(d0.det),
                note: Some("singular principal submatrix of the midpoint".into()),
                ..Default::default()
            }
            .with_realization(a.mid());
            let mut o = Outcome::new(false, Method::General).cert(Some(c));
            o.marginal = marginal;
            return Ok(o);
        }
        if let Some((y, z)) = nonsingular::first_sign_change(&sub, d0.sign, pivot, &mut marginal)? {
            let mut o = Outcome::new(false, Method::General).cert(Some(nonsingular::support_certificate(a, &idx, &y, &z)));
            o.marginal = marginal;
            return Ok(o);
        }
    }
    let mut o = Outcome::new(true, Method::General);
    o.marginal = marginal;
    Ok(o)
}

// ---- column sufficiency ---------------------------------------------------------

fn column_sufficient(ctx: &mut Ctx) -> Result<Outcome> {
    let a = ctx.a;
    let n = a.dim();
    let irreducible = linalg::is_irreducible(a.rad())?;
    try_fast!(ctx, Method::FastIdentity, |ctx| {
        if !irreducible {
            return Ok(Err("radius is reducible".into()));
        }
        let sp = match identity_rho(ctx, a.mid(), a.rad())? {
            Ok(sp) => sp,
            Err(r) => return Ok(Err(r)),
        };
        let (holds, boundary) = rho_test(sp.rho, false, ctx.tol());
        let mut o = Outcome::new(holds, Method::FastIdentity);
        o.boundary = boundary;
        o.rho = Some(sp.rho);
        if !holds {
            o.certificate = Some(sufficiency_perron_certificate(a, &vec![1; n], &sp));
        }
        Ok(Ok(o))
    });
    try_fast!(ctx, Method::FastNormalizedM, |ctx| {
        if !irreducible {
            return Ok(Err("radius is reducible".into()));
        }
        let frame =
            normalize::sufficiency_frame(a.mid(), ctx.tol(), ctx.cfg.exhaustive_normalization, ctx.caps().sign_vertices)?;
        let Some(s) = frame else {
            return Ok(Err("no sign scaling D_s mid D_s is an M-matrix".into()));
        };
        let lower = &scaled(a.mid(), &s, &s) - a.rad();
        let split = point::m_split(&lower, ctx.tol());
        let holds = split.as_ref().is_some_and(|m| m.is_m0());
        let mut o = Outcome::new(holds, Method::FastNormalizedM);
        o.marginal = split.as_ref().is_some_and(|m| m.is_marginal());
        if !holds {
            o.certificate = match split {
                Some(m) => Some(sufficiency_perron_certificate(a, &s, &m.spectral)),
                None => general_certificate(Property::ColumnSufficient, ctx, column_sufficient_general)?,
            };
        }
        Ok(Ok(o))
    });
    try_fast!(ctx, Method::FastMidpointPsd, |ctx| {
        if !a.is_symmetric() {
            return Ok(Err("midpoint and radius are not both symmetric".into()));
        }
        if !linalg::is_positive_semidefinite(a.mid(), ctx.tol()) {
            return Ok(Err("midpoint is not positive semidefinite".into()));
        }
        let fail = definiteness_failure(a, ctx.tol(), ctx.caps(), false)?;
        let mut o = Outcome::new(fail.is_none(), Method::FastMidpointPsd);
        if fail.is_some() {
            o.certificate = general_certificate(Property::ColumnSufficient, ctx, column_sufficient_general)?;
        }
        Ok(Ok(o))
    });
    ctx.general(Property::ColumnSufficient, column_sufficient_general)
}

/// In the frame `D_s box D_s` the lower bound `L'` satisfies
/// `L'_CC x_C < 0` on the Perron block; mapped back this is the signed
/// block system for the pair split of `C` by `s`.
fn sufficiency_perron_certificate(a: &IntervalMatrix, s: &[i8], sp: &SpectralResult) -> Certificate {
    let (block, x) = perron_witness(sp);
    let lead = s[block[0]];
    let (i, j): (Vec<usize>, Vec<usize>) = block.iter().partition(|&&k| s[k] == lead);
    let r = scaled(&(&scaled(a.mid(), s, s) - a.rad()), s, s);
    Certificate {
        index_set: Some(i),
        complement_set: Some(j),
        x: Some(x),
        s: Some(s.to_vec()),
        note: Some("Perron block of the normalized lower bound".into()),
        ..Default::default()
    }
    .with_realization(&r)
}

/// `[[lower_II, -upper_IJ], [-upper_JI, lower_JJ]] = D_σ mid_KK D_σ - rad_KK`.
fn sufficiency_block(a: &IntervalMatrix, k: &[usize], signs: &[i8]) -> Matrix {
    Matrix::from_fn(k.len(), k.len(), |r, c| {
        f64::from(signs[r] * signs[c]) * a.mid()[(k[r], k[c])] - a.rad()[(k[r], k[c])]
    })
}

fn column_sufficient_general(ctx: &Ctx) -> Result<Outcome> {
    let a = ctx.a;
    let n = a.dim();
    Caps::check(ctx.caps().index_pairs, n, "strong column sufficiency index pairs")?;
    for pair in index_pairs(n) {
        let k = pair.union();
        let r = lp::feasible_positive_strict(&sufficiency_block(a, &k, &pair.signs()), false, ctx.tol())?;
        if r.feasible {
            let s: Vec<i8> = (0..n).map(|i| if pair.i().contains(&i) { 1 } else { -1 }).collect();
            let c = Certificate {
                index_set: Some(pair.i().to_vec()),
                complement_set: Some(pair.j().to_vec()),
                x: r.witness,
                s: Some(s.clone()),
                note: Some("bound system feasible; realization A_ss with s = +1 on I".into()),
                ..Default::default()
            }
            .with_realization(&a.signed_vertex(&s, &s)?);
            return Ok(Outcome::new(false, Method::General).cert(Some(c)));
        }
    }
    Ok(Outcome::new(true, Method::General))
}

/// Secondary general path: column sufficiency of every sign vertex
/// `A_ss = mid - D_s rad D_s` (`A_ss = A_(-s)(-s)`, so `s_1 = +1`).
pub fn strong_column_sufficient_sign_vertices(a: &IntervalMatrix, cfg: &CheckConfig) -> Result<PropertyVerdict> {
    let start = Instant::now();
    let n = a.dim();
    Caps::check(cfg.caps.sign_vertices, n, "column sufficiency sign vertices")?;
    let mut out = Outcome::new(true, Method::GeneralSignVertex);
    for mask in 0..1u64 << (n - 1) {
        let s = SignVector::from_mask(n, mask << 1);
        let v = a.signed_vertex(s.as_slice(), s.as_slice())?;
        let c = point::column_sufficient_check(&v, &cfg.tol, cfg.caps.point)?;
        if !c.holds {
            let mut cert = c.certificate.unwrap_or_default().with_realization(&v);
            cert.s = Some(s.as_slice().to_vec());
            cert.verified = Some(certify(Property::ColumnSufficient, a, &cert, &cfg.tol)?);
            out = Outcome::new(false, Method::GeneralSignVertex).cert(Some(cert));
            break;
        }
    }
    Ok(PropertyVerdict {
        property: Property::ColumnSufficient,
        name: Property::ColumnSufficient.name().to_string(),
        holds: out.holds,
        method: out.method,
        certificate: out.certificate,
        boundary: false,
        marginal: false,
        skipped: Vec::new(),
        rho: None,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

// ---- R0 and R -------------------------------------------------------------------

fn regular(ctx: &mut Ctx, with_t: bool) -> Result<Outcome> {
    let property = if with_t { Property::R } else { Property::R0 };
    let general: fn(&Ctx) -> Result<Outcome> = if with_t { |c| regular_general(c, true) } else { |c| regular_general(c, false) };
    let a = ctx.a;
    try_fast!(ctx, Method::FastIdentity, |ctx| {
        let sp = match identity_rho(ctx, a.mid(), a.rad())? {
            Ok(sp) => sp,
            Err(r) => return Ok(Err(r)),
        };
        let (holds, boundary) = rho_test(sp.rho, true, ctx.tol());
        let mut o = Outcome::new(holds, Method::FastIdentity);
        o.boundary = boundary;
        o.rho = Some(sp.rho);
        if !holds {
            o.certificate = general_certificate(property, ctx, general)?;
        }
        Ok(Ok(o))
    });
    try_fast!(ctx, Method::FastMidpointM, |ctx| {
        if !point::is_m(a.mid(), ctx.tol()) {
            return Ok(Err("midpoint is not an M-matrix".into()));
        }
        let h = strong_h_outcome(a, ctx.tol());
        let mut o = Outcome::new(h.holds, Method::FastMidpointM);
        o.marginal = h.marginal;
        if !h.holds {
            o.certificate = general_certificate(property, ctx, general)?;
        }
        Ok(Ok(o))
    });
    ctx.general(property, general)
}

fn regular_general(ctx: &Ctx, with_t: bool) -> Result<Outcome> {
    let a = ctx.a;
    let n = a.dim();
    Caps::check(ctx.caps().point, n, if with_t { "strong R-matrix index sets" } else { "strong R0-matrix index sets" })?;
    for idx in nonempty_subsets_of(n) {
        let comp: Vec<usize> = (0..n).filter(|i| !idx.contains(i)).collect();
        let lo_ii = submatrix(a.lower(), &idx, &idx);
        let up_ii = submatrix(a.upper(), &idx, &idx);
        let lo_ji = submatrix(a.lower(), &comp, &idx);
        let sys = point::regular_system(&lo_ii, &up_ii, &lo_ji, with_t)?;
        if let Some(w) = lp::solve_feasibility(&sys, ctx.tol())?.witness {
            let k = idx.len();
            let x = w[..k].to_vec();
            let t = if with_t { w[k] } else { 0.0 };
            let r = regular_realization(a, &idx, &comp, &x, t);
            let c = Certificate {
                index_set: Some(idx),
                complement_set: Some(comp),
                x: Some(x),
                t: with_t.then_some(t),
                note: Some("bound system feasible; rows of I interpolated so that A_II x + e t = 0".into()),
                ..Default::default()
            }
            .with_realization(&r);
            return Ok(Outcome::new(false, Method::General).cert(Some(c)));
        }
    }
    Ok(Outcome::new(true, Method::General))
}

/// Rows in `I` move between lower and upper so that `a_iI x + t = 0`; rows in
/// `J` take the lower bound on the columns `I`; all other entries the midpoint.
fn regular_realization(a: &IntervalMatrix, idx: &[usize], comp: &[usize], x: &[f64], t: f64) -> Matrix {
    let mut r = a.mid().clone();
    for &i in idx {
        let lo: f64 = idx.iter().zip(x).map(|(&j, v)| a.lower()[(i, j)] * v).sum::<f64>() + t;
        let span: f64 = idx.iter().zip(x).map(|(&j, v)| (a.upper()[(i, j)] - a.lower()[(i, j)]) * v).sum();
        let lambda = if span > 0.0 { (-lo / span).clamp(0.0, 1.0) } else { 0.0 };
        for &j in idx {
            r[(i, j)] = a.lower()[(i, j)] + lambda * (a.upper()[(i, j)] - a.lower()[(i, j)]);
        }
        // Cancel the rounding residual on the largest component so the
        // equality holds exactly even when the row itself is tiny.
        if lambda > 0.0 && lambda < 1.0 {
            let res: f64 = idx.iter().zip(x).map(|(&j, v)| r[(i, j)] * v).sum::<f64>() + t;
            let (k, xk) = idx.iter().zip(x).max_by(|p, q| p.1.total_cmp(q.1)).expect("nonempty support");
            r[(i, *k)] -= res / xk;
        }
    }
    for &i in comp {
        for &j in idx {
            r[(i, j)] = a.lower()[(i, j)];
        }
    }
    r
}

/// Point verdict of the midpoint.
pub fn point_verdict(property: Property, a: &IntervalMatrix, cfg: &CheckConfig) -> Result<bool> {
    Ok(point::check(property, a.mid(), &cfg.tol, cfg.caps.point)?.holds)
}

#[cfg(test)]
mod tests;
