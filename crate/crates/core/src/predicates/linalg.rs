//! Small dense linear algebra, generic over `f64` and exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, Zero};
use std::fmt::Debug;

/// Field used by the solvers below.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed {
    /// Whether a pivot of this magnitude should be treated as zero, given the
    /// largest magnitude seen in the matrix.
    fn negligible(&self, scale: &Self) -> bool;

    fn from_f64(v: f64) -> Self;
}

impl Scalar for f64 {
    fn negligible(&self, scale: &Self) -> bool {
        self.abs() <= 1e-13 * scale.abs() || *self == 0.0
    }

    fn from_f64(v: f64) -> Self {
        v
    }
}

impl Scalar for BigRational {
    fn negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite coordinate")
    }
}

/// Exact rational from a finite float.
pub fn rational(v: f64) -> BigRational {
    <BigRational as Scalar>::from_f64(v)
}

pub fn rational_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Solves the square system `a * x = b` by Gaussian elimination with partial
/// pivoting. Returns `None` when the matrix is singular.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    if n == 0 {
        return Some(Vec::new());
    }
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .map(|v| v.abs())
        .fold(T::zero(), |m, v| if v > m { v } else { m });

    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col][col].abs();
        for (r, row) in a.iter().enumerate().skip(col + 1) {
            let v = row[col].abs();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best.negligible(&scale) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                let delta = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - delta;
            }
            let delta = factor * b[col].clone();
            b[r] = b[r].clone() - delta;
        }
    }

    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Some(x)
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub fn norm_sq<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

/// Center and squared radius of the smallest sphere through all `pts`, i.e.
/// the circumsphere whose center lies in their affine hull.
///
/// Returns `None` when the points are affinely dependent.
pub fn circumsphere<T: Scalar>(pts: &[Vec<T>]) -> Option<(Vec<T>, T)> {
    let first = pts.first()?;
    let edges: Vec<Vec<T>> = pts[1..].iter().map(|p| sub(p, first)).collect();
    let k = edges.len();
    let gram: Vec<Vec<T>> = (0..k)
        .map(|i| (0..k).map(|j| dot(&edges[i], &edges[j])).collect())
        .collect();
    let two = T::one() + T::one();
    let rhs: Vec<T> = edges.iter().map(|e| norm_sq(e) / two.clone()).collect();
    let lambda = solve(gram, rhs)?;
    let mut offset = vec![T::zero(); first.len()];
    for (l, e) in lambda.iter().zip(&edges) {
        for (o, x) in offset.iter_mut().zip(e) {
            *o = o.clone() + l.clone() * x.clone();
        }
    }
    let radius_sq = norm_sq(&offset);
    let center = first
        .iter()
        .zip(&offset)
        .map(|(p, o)| p.clone() + o.clone())
        .collect();
    Some((center, radius_sq))
}

/// Rank of a list of vectors over an exact field.
pub fn rank_exact(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone() / m[rank][col].clone();
                for c in col..cols {
                    let delta = factor.clone() * m[rank][c].clone();
                    m[r][c] = m[r][c].clone() - delta;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Whether the given points (as exact rationals) are affinely independent.
pub fn affinely_independent_exact(pts: &[Vec<BigRational>]) -> bool {
    match pts.split_first() {
        None => true,
        Some((first, rest)) => {
            let rows: Vec<Vec<BigRational>> = rest.iter().map(|p| sub(p, first)).collect();
            rank_exact(&rows) == rows.len()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let x = solve(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
    }

    #[test]
    fn singular_system_is_rejected() {
        assert!(solve(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0]).is_none());
        let r = |v: i64| rational_int(v);
        assert!(solve(vec![vec![r(1), r(2)], vec![r(2), r(4)]], vec![r(1), r(2)]).is_none());
    }

    #[test]
    fn rational_circumsphere_is_exact() {
        let r = |v: i64| rational_int(v);
        let (c, rsq) =
            circumsphere(&[vec![r(0), r(0)], vec![r(4), r(0)], vec![r(0), r(4)]]).unwrap();
        assert_eq!(c, vec![r(2), r(2)]);
        assert_eq!(rsq, r(8));
    }

    #[test]
    fn exact_rank() {
        let r = |v: i64| rational_int(v);
        assert!(!affinely_independent_exact(&[
            vec![r(0), r(0)],
            vec![r(1), r(1)],
            vec![r(2), r(2)]
        ]));
        assert!(affinely_independent_exact(&[
            vec![r(0), r(0)],
            vec![r(1), r(0)],
            vec![r(0), r(1)]
        ]));
    }
}
