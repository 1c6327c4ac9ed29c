//! Exact geometric predicates and the sphere computations built on them.
//!
//! Orientation and in-sphere decisions are exact for all finite float inputs.
//! Sphere constructions ([`smallest_circumsphere`], [`meb`],
//! [`min_witness_radius`]) are evaluated in floating point; radii are carried
//! squared and rooted only for output.

mod det;
pub mod linalg;
mod meb;
mod witness;

use crate::error::{Error, Result};
use std::cmp::Ordering;

pub use meb::{meb, meb_with_support, MinBall};
pub use witness::{min_witness_radius, min_witness_radius_sq, witness_radius_sq_with};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl From<Ordering> for Sign {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Greater => Sign::Positive,
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SideOfSphere {
    Inside,
    On,
    Outside,
}

/// A sphere stored by center and squared radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Sphere {
    pub center: Vec<f64>,
    pub radius_sq: f64,
}

impl Sphere {
    pub fn radius(&self) -> f64 {
        self.radius_sq.sqrt()
    }
}

fn check_simplex(pts: &[&[f64]]) -> Result<usize> {
    let d = pts.len().saturating_sub(1);
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if let Some(p) = pts.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.len(),
        });
    }
    Ok(d)
}

/// Orientation of `d + 1` points in R^d: the sign of
/// `det [p_1 - p_0, ..., p_d - p_0]`.
pub fn orientation(pts: &[&[f64]]) -> Result<Sign> {
    check_simplex(pts)?;
    Ok(det::orientation_sign(pts).into())
}

/// Orientation without argument checks, for hot loops that already know the
/// shapes are consistent.
pub(crate) fn orientation_unchecked(pts: &[&[f64]]) -> Sign {
    det::orientation_sign(pts).into()
}

/// Position of `q` relative to the circumsphere of `d + 1` affinely
/// independent points. Invariant under permutation of `defining`.
pub fn in_sphere(defining: &[&[f64]], q: &[f64]) -> Result<SideOfSphere> {
    let d = check_simplex(defining)?;
    if q.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: q.len(),
        });
    }
    let orient = det::orientation_sign(defining);
    if orient == Ordering::Equal {
        return Err(Error::AffinelyDependent);
    }
    Ok(in_sphere_oriented(defining, q, orient))
}

/// In-sphere test for a simplex of known (nonzero) orientation.
pub(crate) fn in_sphere_oriented(defining: &[&[f64]], q: &[f64], orient: Ordering) -> SideOfSphere {
    let mut s = det::lifted_sign(defining, q);
    if q.len() % 2 == 1 {
        s = s.reverse();
    }
    if orient == Ordering::Less {
        s = s.reverse();
    }
    match s {
        Ordering::Greater => SideOfSphere::Inside,
        Ordering::Less => SideOfSphere::Outside,
        Ordering::Equal => SideOfSphere::On,
    }
}

/// The circumsphere of `1..=d+1` affinely independent points whose center
/// lies in their affine hull.
pub fn smallest_circumsphere(pts: &[&[f64]]) -> Result<Sphere> {
    let first = pts.first().ok_or(Error::Empty)?;
    let d = first.len();
    if let Some(p) = pts.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.len(),
        });
    }
    if pts.len() > d + 1 {
        return Err(Error::AffinelyDependent);
    }
    let owned: Vec<Vec<f64>> = pts.iter().map(|p| p.to_vec()).collect();
    let (center, radius_sq) = linalg::circumsphere(&owned).ok_or(Error::AffinelyDependent)?;
    Ok(Sphere { center, radius_sq })
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
