//! Merging of composite Bézier curves.
//!
//! A composite curve made of `s` adjacent Bézier segments is approximated by a
//! single Bézier curve of degree `m`. The squared L2 error is minimized
//! exactly, subject to parametric continuity at both endpoints and, optionally,
//! to axis-aligned box bounds on the control points that remain free after the
//! continuity conditions are eliminated.
//!
//! The pipeline is:
//!
//! 1. [`subdivision`] expresses the restriction of the merged curve to every
//!    sub-interval of the partition in the local Bernstein basis.
//! 2. [`merge`] eliminates the endpoint-constrained control points and
//!    assembles, per coordinate, a strictly convex quadratic objective using
//!    the Bernstein Gramians from [`bernstein`].
//! 3. [`qpbox`] solves the resulting box-constrained quadratic program with a
//!    primal active-set method and certifies the answer through its KKT
//!    conditions.
//!
//! ```
//! use bezmerge::bezier::{BezierSegment, CompositeBezier};
//! use bezmerge::merge::{merge, MergeSpec};
//!
//! let a = BezierSegment::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 0.0]]).unwrap();
//! let b = BezierSegment::new(vec![vec![2.0, 0.0], vec![3.0, -1.0], vec![4.0, 0.0]]).unwrap();
//! let curve = CompositeBezier::with_arc_length_partition(vec![a, b]).unwrap();
//! let result = merge(&curve, &MergeSpec::new(5, 1, 1)).unwrap();
//! assert_eq!(result.control_points.len(), 6);
//! assert!(result.e2 < 0.1);
//! ```

pub mod bernstein;
pub mod bezier;
mod error;
pub mod matrix;
pub mod merge;
pub mod qpbox;
pub mod quadrature;
pub mod subdivision;

pub use error::{Error, Result, SpecViolation};
