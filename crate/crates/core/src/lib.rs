//! Incremental Delaunay complexes of ordered point clouds and the sublevel
//! Delaunay bifiltrations graded on top of them.
//!
//! The pipeline is:
//!
//! 1. read a point cloud with a function value per point ([`functions`]),
//! 2. order the points by function value and insert them one by one into a
//!    Bowyer-Watson triangulation, recording every conflict pair
//!    ([`triangulation`]),
//! 3. assemble the incremental Delaunay complex from those pairs
//!    ([`complex`]),
//! 4. grade every simplex by a radius (minimum enclosing ball, or the smallest
//!    witness sphere) and the function value of its last vertex, and write the
//!    result as an `scc2020` chain complex ([`bifiltration`]).
//!
//! [`pipeline`] wires the steps together with per-phase timings.

pub mod bifiltration;
pub mod complex;
pub mod error;
pub mod functions;
pub mod pipeline;
pub mod predicates;
pub mod triangulation;

pub use complex::{IncrementalComplex, OrderedPoints, Simplex};
pub use error::{Error, Result};
