//! Hyperbolic geometry of the bidisc and numerical certification of the
//! Julia lemma, the Lindelöf principle and the Julia-Wolff-Carathéodory
//! theorem for holomorphic self-maps of the bidisc, together with the Wolff
//! point classification of fixed-point-free self-maps.
//!
//! The disc and bidisc metrics are generic over the scalar type (see
//! [`scalar::Real`]); everything built on boundary limits works in `f64`,
//! and the crate root re-exports `f64` aliases of the generic types.

// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod curves;
pub mod disc;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod holomap;
pub mod julia;
pub mod limits;
pub mod sampling;
pub mod scalar;
pub mod scenario;
pub mod syntax;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use geometry::{BidiscBoundaryPoint, ComplexGeodesic, DeviceKind, Orientation, ProjectionDevice};
pub use holomap::{BidiscExpr, BidiscMap, DiscMap};
pub use limits::{LimitEstimate, LimitOptions, LimitStatus};

/// Point of the open unit disc in double precision.
pub type DiscPoint = disc::DiscPoint<f64>;
/// Point of the unit circle in double precision.
pub type BoundaryPoint = disc::BoundaryPoint<f64>;
/// Horocycle in double precision.
pub type Horocycle = disc::Horocycle<f64>;
/// Point of the open bidisc in double precision.
pub type BidiscPoint = geometry::BidiscPoint<f64>;
