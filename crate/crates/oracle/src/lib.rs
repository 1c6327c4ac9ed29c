//! Brute-force references for `delbif-core`.
//!
//! Everything that decides membership or feasibility runs in exact rational
//! arithmetic and shares no geometric code with the core crate: the
//! incremental complex and the Delaunay triangulation are recomputed from
//! their sphere definitions by linear feasibility over all subsets, minimum
//! enclosing balls by support-set enumeration, and witness radii by
//! active-set enumeration. Homology is computed over GF(2).

pub mod equivalence;
pub mod exact;
pub mod geometry;
pub mod homology;
pub mod instances;

pub use equivalence::{equivalence_suite, EquivalenceReport, Mismatch};
pub use geometry::{
    cech_at, general_position, oracle_delaunay, oracle_incremental, oracle_meb, oracle_meb_exact,
    oracle_witness_radius_sq, SimplexSet,
};
pub use homology::{betti_curve, betti_gf2};
