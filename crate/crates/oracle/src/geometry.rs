//! Brute-force references over subsets, all decided in exact arithmetic.
//!
//! Spheres are handled through the parabolic lift: the sphere with center
//! `c` and radius `r` is the affine function `h(x) = <a, x> + b` with
//! `a = 2c`, `b = r^2 - |c|^2`, and a point `p` is inside, on or outside it
//! as `|p|^2` is less than, equal to or greater than `h(p)`.

use crate::exact::{dot, feasible, min_norm_point, q, qs, rank, sub, Constraint, Rel, Q};
use itertools::Itertools;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeSet;

pub type SimplexSet = BTreeSet<Vec<u32>>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    InsideOrOn,
    On,
    OutsideOrOn,
}

fn lifted(p: &[Q], side: Side) -> Constraint {
    let mut coef = p.to_vec();
    coef.push(Q::from_integer(1.into()));
    Constraint {
        coef,
        rel: match side {
            Side::InsideOrOn => Rel::Ge,
            Side::On => Rel::Eq,
            Side::OutsideOrOn => Rel::Le,
        },
        rhs: dot(p, p),
    }
}

fn exact_points(points: &[Vec<f64>]) -> Vec<Vec<Q>> {
    points.iter().map(|p| qs(p)).collect()
}

fn subsets(n: usize, max_size: usize) -> Vec<Vec<u32>> {
    (1..=max_size.min(n))
        .flat_map(|k| (0..n as u32).combinations(k))
        .collect()
}

/// The incremental Delaunay complex of points given in insertion order:
/// `sigma` is a member iff some sphere passes through `sigma` minus its last
/// vertex, has the last vertex inside or on it, and has every earlier point
/// outside or on it.
pub fn oracle_incremental(points: &[Vec<f64>]) -> SimplexSet {
    let d = points.first().map_or(0, Vec::len);
    let pts = exact_points(points);
    subsets(points.len(), d + 2)
        .into_par_iter()
        .filter(|s| {
            let (&last, rest) = s.split_last().unwrap();
            let mut rows: Vec<Constraint> = rest
                .iter()
                .map(|&v| lifted(&pts[v as usize], Side::On))
                .collect();
            rows.push(lifted(&pts[last as usize], Side::InsideOrOn));
            rows.extend(
                (0..last)
                    .filter(|v| !rest.contains(v))
                    .map(|v| lifted(&pts[v as usize], Side::OutsideOrOn)),
            );
            feasible(&rows, d + 1)
        })
        .collect()
}

/// Simplices with an empty circumsphere: a sphere through all vertices with
/// every other point outside or on it.
pub fn oracle_delaunay(points: &[Vec<f64>]) -> SimplexSet {
    let d = points.first().map_or(0, Vec::len);
    let pts = exact_points(points);
    subsets(points.len(), d + 1)
        .into_par_iter()
        .filter(|s| {
            let rows: Vec<Constraint> = (0..points.len() as u32)
                .map(|v| {
                    let side = if s.contains(&v) {
                        Side::On
                    } else {
                        Side::OutsideOrOn
                    };
                    lifted(&pts[v as usize], side)
                })
                .collect();
            feasible(&rows, d + 1)
        })
        .collect()
}

fn affinely_independent(pts: &[&Vec<Q>]) -> bool {
    let rows: Vec<Vec<Q>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    rows.is_empty() || rank(&rows) == rows.len()
}

/// Center and squared radius of the smallest sphere through affinely
/// independent points.
fn exact_circumsphere(pts: &[&Vec<Q>]) -> Option<(Vec<Q>, Q)> {
    let dim = pts[0].len();
    let p0 = pts[0];
    // offsets y = c - p0 satisfying <2 w_j, y> = |w_j|^2, of minimum norm
    let rows: Vec<Vec<Q>> = pts[1..]
        .iter()
        .map(|p| {
            sub(p, p0)
                .into_iter()
                .map(|x| x * Q::from_integer(2.into()))
                .collect()
        })
        .collect();
    let rhs: Vec<Q> = pts[1..]
        .iter()
        .map(|p| {
            let w = sub(p, p0);
            dot(&w, &w)
        })
        .collect();
    let y = min_norm_point(&rows, &rhs, dim)?;
    let c: Vec<Q> = p0.iter().zip(&y).map(|(a, b)| a + b).collect();
    Some((c, dot(&y, &y)))
}

fn dist_sq(a: &[Q], b: &[Q]) -> Q {
    let w = sub(a, b);
    dot(&w, &w)
}

/// Exact minimum enclosing ball: the smallest circumsphere, over all
/// affinely independent subsets of at most `d + 1` points, that encloses
/// every point. Returns the center and squared radius.
pub fn oracle_meb_exact(points: &[Vec<f64>]) -> (Vec<Q>, Q) {
    let d = points[0].len();
    let pts = exact_points(points);
    let mut best: Option<(Vec<Q>, Q)> = None;
    for s in subsets(points.len(), d + 1) {
        let chosen: Vec<&Vec<Q>> = s.iter().map(|&v| &pts[v as usize]).collect();
        if !affinely_independent(&chosen) {
            continue;
        }
        let Some((c, r)) = exact_circumsphere(&chosen) else {
            continue;
        };
        if best.as_ref().is_some_and(|(_, b)| *b <= r) {
            continue;
        }
        if pts.iter().all(|p| dist_sq(p, &c) <= r) {
            best = Some((c, r));
        }
    }
    best.expect("some support set encloses everything")
}

/// Radius of the minimum enclosing ball.
pub fn oracle_meb(points: &[Vec<f64>]) -> f64 {
    oracle_meb_exact(points).1.to_f64().unwrap().sqrt()
}

/// Cech complex at radius `r`: subsets of at most `max_dim + 1` points whose
/// minimum enclosing ball has radius at most `r`.
pub fn cech_at(points: &[Vec<f64>], r: f64, max_dim: usize) -> SimplexSet {
    let r_sq = q(r) * q(r);
    subsets(points.len(), max_dim + 1)
        .into_iter()
        .filter(|s| {
            let chosen: Vec<Vec<f64>> = s.iter().map(|&v| points[v as usize].clone()).collect();
            oracle_meb_exact(&chosen).1 <= r_sq
        })
        .collect()
}

/// Exact smallest witness radius squared: over spheres through
/// `sigma_prime` with `cover` inside or on and `avoid` outside or on.
///
/// Works in the offset `y = c - p0` of the center from the first point of
/// `sigma_prime`, where all conditions are linear and the squared radius is
/// `|y|^2`. The optimum is the minimum-norm point of the flat cut out by its
/// active constraints, so it is found by enumerating independent active sets
/// and keeping the smallest feasible candidate. `None` means infeasible.
pub fn oracle_witness_radius_sq(
    sigma_prime: &[Vec<f64>],
    cover: &[f64],
    avoid: &[Vec<f64>],
) -> Option<Q> {
    let dim = cover.len();
    if sigma_prime.is_empty() {
        return Some(Q::zero());
    }
    let p0 = qs(&sigma_prime[0]);
    let two = Q::from_integer(2.into());
    let row = |p: &[f64]| -> (Vec<Q>, Q) {
        let w = sub(&qs(p), &p0);
        let rhs = dot(&w, &w);
        (w.into_iter().map(|x| x * &two).collect(), rhs)
    };
    // <2w, y> = |w|^2 on, >= inside or on, <= outside or on
    let eqs: Vec<(Vec<Q>, Q)> = sigma_prime[1..].iter().map(|p| row(p)).collect();
    let mut ineqs: Vec<(Vec<Q>, Q, Rel)> = vec![];
    let (a, b) = row(cover);
    ineqs.push((a, b, Rel::Ge));
    for p in avoid {
        let (a, b) = row(p);
        ineqs.push((a, b, Rel::Le));
    }
    let holds = |y: &[Q]| {
        eqs.iter().all(|(a, b)| dot(a, y) == *b)
            && ineqs.iter().all(|(a, b, rel)| {
                let v = dot(a, y);
                match rel {
                    Rel::Ge => v >= *b,
                    Rel::Le => v <= *b,
                    Rel::Eq => v == *b,
                }
            })
    };
    let free = dim.checked_sub(eqs.len())?;
    let mut best: Option<Q> = None;
    for size in 0..=free {
        for active in (0..ineqs.len()).combinations(size) {
            let rows: Vec<Vec<Q>> = eqs
                .iter()
                .map(|(a, _)| a.clone())
                .chain(active.iter().map(|&i| ineqs[i].0.clone()))
                .collect();
            if rank(&rows) != rows.len() {
                continue;
            }
            let rhs: Vec<Q> = eqs
                .iter()
                .map(|(_, b)| b.clone())
                .chain(active.iter().map(|&i| ineqs[i].1.clone()))
                .collect();
            let Some(y) = min_norm_point(&rows, &rhs, dim) else {
                continue;
            };
            if holds(&y) {
                let r = dot(&y, &y);
                if best.as_ref().is_none_or(|b| r < *b) {
                    best = Some(r);
                }
            }
        }
    }
    best
}

/// General position: every set of at most `d + 1` points is affinely
/// independent and no other point lies on its smallest circumsphere.
/// Also rejects repeated points.
pub fn general_position(points: &[Vec<f64>]) -> bool {
    let Some(first) = points.first() else {
        return true;
    };
    let d = first.len();
    let pts = exact_points(points);
    subsets(points.len(), d + 1).into_par_iter().all(|s| {
        let chosen: Vec<&Vec<Q>> = s.iter().map(|&v| &pts[v as usize]).collect();
        if !affinely_independent(&chosen) {
            return false;
        }
        if s.len() == 1 {
            return true;
        }
        let (c, r) = exact_circumsphere(&chosen).expect("independent points have a circumsphere");
        (0..pts.len() as u32)
            .filter(|v| !s.contains(v))
            .all(|v| dist_sq(&pts[v as usize], &c) != r)
    })
}
