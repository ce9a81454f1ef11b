//! Robust LCP matrix classes under interval uncertainty.
//!
//! An [`IntervalMatrix`] is the box of all real matrices between an entrywise
//! lower and upper bound. A matrix property holds *strongly* for the box when
//! it holds for every realization inside it. This crate decides the strong
//! versions of the classes that matter for the linear complementarity problem
//! (S, Z, M, H, copositive, semimonotone, principally nondegenerate, column
//! sufficient, R0, R, PD, PSD), using exact finite characterizations in terms
//! of the bound matrices plus polynomial fast paths for structured midpoints.
//!
//! Every negative verdict carries a certificate: a concrete realization inside
//! the box together with a witness of the point-level failure. The
//! [`oracle`] module independently samples the box to try to refute positive
//! verdicts.
//!
//! Indices are 0-based in the API and 1-based in serialized reports.

pub mod config;
pub mod input;
pub mod interval;
pub mod lcp;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod point;
pub mod report;
pub mod strong;
pub mod subsets;

mod error;

pub use config::{Caps, CheckConfig, FastPathPolicy, Tolerances};
pub use error::{Error, Result};
pub use interval::{IndexPair, IntervalMatrix, SignVector, TriSignVector};
pub use point::{Certificate, PointCheck, Property};
pub use report::Report;
pub use strong::{check_all, Method, PropertyVerdict};

/// Dense real matrix used throughout the crate.
pub type Matrix = nalgebra::DMatrix<f64>;
