use crate::complex::IncrementalComplex;
use crate::error::{Error, Result};
use crate::predicates::{dist_sq, meb, witness_radius_sq_with};
use rayon::prelude::*;
use smallvec::SmallVec;

/// A vertex this far inside a ball (relative to its squared radius) is
/// certainly not on its boundary.
const INTERIOR_MARGIN: f64 = 1e-9;

/// Squared radius per simplex, indexed like the complex's levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Radii {
    pub squared: Vec<Vec<f64>>,
    /// Largest relative increase applied to make radii monotone under
    /// inclusion. Anything beyond rounding noise points to a bug.
    pub max_clamp: f64,
}

impl Radii {
    pub fn radius(&self, k: usize, i: usize) -> f64 {
        self.squared[k][i].sqrt()
    }
}

fn without(s: &[u32], skip: usize) -> SmallVec<[u32; 8]> {
    s.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, &v)| v)
        .collect()
}

/// Drops bit `v` and shifts the higher bits down, matching the positions of
/// the facet that omits vertex `v`.
fn drop_position(mask: u32, v: usize) -> u32 {
    (mask & ((1 << v) - 1)) | ((mask >> (v + 1)) << v)
}

fn clamp_monotone(c: &IncrementalComplex, squared: &mut [Vec<f64>]) -> f64 {
    let mut max_clamp: f64 = 0.0;
    for k in 1..squared.len() {
        let (lower, upper) = squared.split_at_mut(k);
        let lower = &lower[k - 1];
        for (i, s) in c.level(k).enumerate() {
            for skip in 0..=k {
                let f = lower[c
                    .index_of(&without(s, skip))
                    .expect("complex is face-closed")];
                if f > upper[0][i] {
                    max_clamp = max_clamp.max((f - upper[0][i]) / f);
                    upper[0][i] = f;
                }
            }
        }
    }
    max_clamp
}

/// Minimum enclosing ball radii, computed from the top dimension down. A
/// facet obtained by dropping a vertex that lies strictly inside its parent's
/// ball has the same ball and is not recomputed.
pub fn meb_radii(c: &IncrementalComplex) -> Radii {
    let pts = c.points();
    let levels = c.num_levels();
    let mut squared: Vec<Vec<f64>> = (0..levels).map(|k| vec![f64::NAN; c.count(k)]).collect();
    let mut interior: Vec<Vec<u32>> = (0..levels).map(|k| vec![0; c.count(k)]).collect();
    for k in (1..levels).rev() {
        let todo: Vec<usize> = (0..c.count(k))
            .filter(|&i| squared[k][i].is_nan())
            .collect();
        let balls: Vec<(f64, u32)> = todo
            .par_iter()
            .map(|&i| {
                let s: SmallVec<[&[f64]; 8]> =
                    c.simplex(k, i).iter().map(|&v| pts.point(v)).collect();
                let ball = meb(&s).expect("simplices are nonempty");
                let limit = ball.radius_sq * (1.0 - INTERIOR_MARGIN);
                let mask = s
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| dist_sq(&ball.center, p) < limit)
                    .fold(0u32, |m, (j, _)| m | 1 << j);
                (ball.radius_sq, mask)
            })
            .collect();
        for (&i, (r, mask)) in todo.iter().zip(balls) {
            squared[k][i] = r;
            interior[k][i] = mask;
        }
        for i in 0..c.count(k) {
            let mask = interior[k][i];
            let mut bits = mask;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let j = c
                    .index_of(&without(c.simplex(k, i), v))
                    .expect("complex is face-closed");
                if squared[k - 1][j].is_nan() {
                    squared[k - 1][j] = squared[k][i];
                    interior[k - 1][j] = drop_position(mask & !(1 << v), v);
                }
            }
        }
    }
    if levels > 0 {
        squared[0].fill(0.0);
    }
    let max_clamp = clamp_monotone(c, &mut squared);
    Radii { squared, max_clamp }
}

/// Smallest witness sphere radii: for each simplex, the smallest sphere
/// through all but its last vertex with the last vertex inside or on it and
/// every earlier point outside or on it.
///
/// Fails with [`Error::Infeasible`] if some simplex has no witness, which
/// contradicts its membership in the complex.
pub fn incremental_radii(c: &IncrementalComplex) -> Result<Radii> {
    let pts = c.points();
    let mut squared = Vec::with_capacity(c.num_levels());
    for k in 0..c.num_levels() {
        let level: Vec<f64> = (0..c.count(k))
            .into_par_iter()
            .map(|i| {
                let s = c.simplex(k, i);
                let (&last, rest) = s.split_last().unwrap();
                let sp: SmallVec<[&[f64]; 8]> = rest.iter().map(|&v| pts.point(v)).collect();
                let r = witness_radius_sq_with(&sp, pts.point(last), |f| {
                    for v in 0..last {
                        if !rest.contains(&v) {
                            f(pts.point(v));
                        }
                    }
                })?;
                r.ok_or_else(|| Error::Infeasible {
                    simplex: s.to_vec(),
                })
            })
            .collect::<Result<_>>()?;
        squared.push(level);
    }
    let max_clamp = clamp_monotone(c, &mut squared);
    Ok(Radii { squared, max_clamp })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drop_position_shifts_higher_bits() {
        assert_eq!(drop_position(0b1011, 1), 0b101);
        assert_eq!(drop_position(0b1000, 0), 0b100);
        assert_eq!(drop_position(0b0111, 3), 0b111);
    }
}
