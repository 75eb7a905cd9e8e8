//! Seeley-type extension operators for `C^k` maps on half-spaces, quadrants
//! and balls, together with explicit continuous extensions of every
//! differential up to order `k`.
//!
//! The central object is [`halfline::ExtendedFunction`]: given a source
//! `f` on `(a, b] x V` that exposes its boundary jets through the
//! [`JetFunction`] trait, it evaluates the extension `f~` and its
//! differentials `d^l f~((t, x), w_1, ..., w_l)` on `(a, inf) x V`.
//!
//! ```
//! use seeley_core::halfline::{extend, OperatorConfig};
//! use seeley_core::jets::{JetFunction, Point};
//! use seeley_core::source::{AnalyticSource, Domain};
//! use seeley_core::testfns::TestFunction;
//!
//! let config = OperatorConfig::new(f64::NEG_INFINITY, -1.0, 0.0, 3).unwrap();
//! let f = AnalyticSource::new(TestFunction::monomial(1, 2), Domain::half_space(0.0), 3);
//! let ext = extend(f, config).unwrap();
//! // f(t) = t^2 is reproduced just beyond the boundary ...
//! let v = ext.jet(&Point::new(0.01, &[]), &[]).unwrap();
//! assert!((v[0] - 1e-4).abs() < 1e-16);
//! // ... and the extension vanishes beyond 2b - tau.
//! assert_eq!(ext.jet(&Point::new(1.0, &[]), &[]).unwrap()[0], 0.0);
//! ```
#![no_std]
#![deny(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod coeffs;
pub mod error;
pub mod geometry;
pub mod halfline;
pub mod jets;
pub mod math;
pub mod multidual;
pub mod quadrant;
pub mod smoothstep;
pub mod source;
pub mod taylor;
pub mod testfns;
pub mod value;
pub mod verify;

pub use coeffs::SeeleyCoefficients;
pub use error::{Error, Result};
pub use halfline::{ExtendedFunction, OperatorConfig};
pub use jets::{JetFunction, Point, Tangent};
pub use smoothstep::SmoothStep;

/// Highest differentiation order certified when `k = infinity` is requested.
pub const DEFAULT_K_MAX: usize = 8;
