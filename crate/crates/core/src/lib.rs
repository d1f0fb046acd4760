//! C¹ splines built from a two-point Hermite midpoint subdivision rule with
//! a tension parameter per interval.
//!
//! A GQS on a partition `a = x_0 < … < x_n = b` is a C¹ function whose
//! restriction to each interval `[x_{i-1}, x_i]` is produced by the Merrien
//! midpoint rule with a per-interval parameter `β_i ∈ [-1, 0)`. `β_i = -1`
//! gives classical C¹ quadratic splines with an extra knot at each midpoint.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: partitions, β sequences and the derived abscissae.
//! * [`msa`]: the subdivision kernel (midpoint rule, dyadic tables, point
//!   evaluation).
//! * [`basis`]: the global B-spline basis, Hermite conversion and control
//!   polygons.
//! * [`shape`]: shape diagnosis and automatic β selection for monotone and
//!   convex interpolation.
//! * [`refine`]: midpoint refinement and the corner-cutting algorithm.
//! * [`operators`]: quasi-interpolant, Lagrange interpolant and the
//!   tridiagonal solver behind it.
//! * [`testkit`]: closed-form oracles and seeded generators shared by the
//!   test suites.

pub mod basis;
pub mod error;
pub mod geometry;
pub mod msa;
pub mod operators;
pub mod refine;
pub mod shape;
pub mod testkit;

pub use basis::{ControlPolygon, GqsSpline, HermiteData, LocalCoeffs};
pub use error::{GqsError, Result};
pub use geometry::{BetaSequence, GqsSpace, Partition};
pub use msa::HermiteEndpointState;
