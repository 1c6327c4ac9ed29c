//! Determinant signs with a floating-point filter and an exact fallback.
//!
//! The float stage expands the determinant over column subsets and bounds its
//! rounding error by a multiple of the permanent of the absolute entries. When
//! the computed value does not clear that bound, the matrix is rebuilt from
//! the original coordinates as scaled big integers and its sign is decided by
//! fraction-free Bareiss elimination.

use num_bigint::BigInt;
use num_traits::{float::FloatCore, Signed, Zero};
use std::cmp::Ordering;

const UNIT_ROUNDOFF: f64 = f64::EPSILON * 0.5;
const MAX_FILTER_ORDER: usize = 12;

/// Determinant and permanent of `|m|` for an `n x n` row-major matrix, both
/// evaluated in floating point by Laplace expansion over column subsets.
fn det_and_permanent(m: &[f64], n: usize) -> (f64, f64) {
    let full = (1usize << n) - 1;
    let mut det = vec![0.0; full + 1];
    let mut perm = vec![0.0; full + 1];
    det[0] = 1.0;
    perm[0] = 1.0;
    for mask in 1..=full {
        let row = mask.count_ones() as usize - 1;
        let (mut d, mut p) = (0.0, 0.0);
        let mut bits = mask;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let sub = mask ^ (1 << j);
            let entry = m[row * n + j];
            let term = entry * det[sub];
            if (mask >> (j + 1)).count_ones() % 2 == 1 {
                d -= term;
            } else {
                d += term;
            }
            p += entry.abs() * perm[sub];
        }
        det[mask] = d;
        perm[mask] = p;
    }
    (det[full], perm[full])
}

/// Float sign of the determinant if it is certified, `None` otherwise.
///
/// `entry_ops` is the number of rounding operations spent computing each
/// matrix entry from the input coordinates.
fn filtered_sign(m: &[f64], n: usize, entry_ops: usize) -> Option<Ordering> {
    if n == 0 {
        return Some(Ordering::Greater);
    }
    if n > MAX_FILTER_ORDER {
        return None;
    }
    let (det, perm) = det_and_permanent(m, n);
    if !det.is_finite() || !perm.is_finite() || perm < 1e-280 {
        return None;
    }
    let ops = (entry_ops + n * (n + 1) + 2) as f64;
    let bound = 2.0 * ops * UNIT_ROUNDOFF * perm;
    if det > bound {
        Some(Ordering::Greater)
    } else if det < -bound {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Maps every value to an integer after multiplying by a common power of two.
fn scaled_integers(values: &[f64]) -> Vec<BigInt> {
    let decoded: Vec<(u64, i16, i8)> = values
        .iter()
        .map(|v| {
            let (m, e, s) = v.integer_decode();
            // strip trailing zero bits to keep the integers small
            let tz = if m == 0 { 0 } else { m.trailing_zeros() };
            (m >> tz, e + tz as i16, s)
        })
        .collect();
    let min_exp = decoded
        .iter()
        .filter(|(m, _, _)| *m != 0)
        .map(|&(_, e, _)| e)
        .min()
        .unwrap_or(0);
    decoded
        .into_iter()
        .map(|(mantissa, exp, sign)| {
            if mantissa == 0 {
                return BigInt::zero();
            }
            let v = BigInt::from(mantissa) << ((exp - min_exp) as usize);
            if sign < 0 {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// Sign of the determinant of an exact integer matrix (Bareiss elimination).
pub(crate) fn bareiss_sign(mut m: Vec<Vec<BigInt>>) -> Ordering {
    let n = m.len();
    let mut sign = Ordering::Greater;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Ordering::Equal;
            };
            m.swap(k, swap);
            sign = sign.reverse();
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let last = &m[n - 1][n - 1];
    match (last.is_positive(), last.is_negative()) {
        (true, _) => sign,
        (_, true) => sign.reverse(),
        _ => Ordering::Equal,
    }
}

/// Sign of `det [p_1 - p_0, ..., p_d - p_0]` for `d + 1` points in R^d.
pub(crate) fn orientation_sign(pts: &[&[f64]]) -> Ordering {
    let d = pts.len() - 1;
    let base = pts[0];
    let mut m = Vec::with_capacity(d * d);
    for p in &pts[1..] {
        m.extend(p.iter().zip(base).map(|(a, b)| a - b));
    }
    if let Some(s) = filtered_sign(&m, d, 1) {
        return s;
    }
    let flat: Vec<f64> = pts.iter().flat_map(|p| p.iter().copied()).collect();
    let ints = scaled_integers(&flat);
    let rows: Vec<Vec<BigInt>> = (1..=d)
        .map(|i| (0..d).map(|j| &ints[i * d + j] - &ints[j]).collect())
        .collect();
    bareiss_sign(rows)
}

/// Sign of `det [p_i - q, |p_i - q|^2]_{i=0..d}` for `d + 1` points and a
/// query point in R^d. Multiplied by `(-1)^d` times the orientation of the
/// `p_i`, it is positive exactly when `q` lies inside their circumsphere.
pub(crate) fn lifted_sign(pts: &[&[f64]], q: &[f64]) -> Ordering {
    let d = q.len();
    let n = d + 1;
    let mut m = Vec::with_capacity(n * n);
    for p in pts {
        let mut lift = 0.0;
        for (a, b) in p.iter().zip(q) {
            let diff = a - b;
            m.push(diff);
            lift += diff * diff;
        }
        m.push(lift);
    }
    if let Some(s) = filtered_sign(&m, n, d + 2) {
        return s;
    }
    let flat: Vec<f64> = pts
        .iter()
        .flat_map(|p| p.iter().copied())
        .chain(q.iter().copied())
        .collect();
    let ints = scaled_integers(&flat);
    let qi = &ints[n * d..];
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let diff: Vec<BigInt> = (0..d).map(|j| &ints[i * d + j] - &qi[j]).collect();
            let lift = diff.iter().map(|x| x * x).sum::<BigInt>();
            diff.into_iter().chain(std::iter::once(lift)).collect()
        })
        .collect();
    bareiss_sign(rows)
}
