//! Smallest sphere through a point set that covers one point and avoids others.
//!
//! Spheres through `sigma'` are parametrized by their center `c`; with
//! `y = c - p0` for a fixed `p0` in `sigma'`, every membership condition is a
//! linear constraint on `y`:
//!
//! * `q` inside or on:  `<y, 2(q - p0)> >= |q - p0|^2`
//! * `q` outside or on: `<y, 2(q - p0)> <= |q - p0|^2`
//! * `q` on:            equality
//!
//! and the squared radius is `|y|^2`. The optimum is thus the projection of the
//! origin onto a polyhedron inside the equidistant flat of `sigma'`. It is
//! found with a move-to-front recursion over the inequality constraints (at
//! most `d - |sigma'| + 1` of them are ever tight simultaneously), and the
//! avoid set is fed in lazily: only points violated by the current optimum
//! are turned into constraints.

use super::linalg;
use crate::error::{Error, Result};

const VIOLATION_TOL: f64 = 1e-10;
const MAX_ROUNDS: usize = 64;

#[derive(Debug, Clone)]
struct Half {
    normal: Vec<f64>,
    offset: f64,
}

impl Half {
    fn through(p0: &[f64], q: &[f64], inside: bool) -> Half {
        let w: Vec<f64> = q.iter().zip(p0).map(|(a, b)| a - b).collect();
        let offset: f64 = w.iter().map(|x| x * x).sum();
        let sign = if inside { -2.0 } else { 2.0 };
        Half {
            normal: w.into_iter().map(|x| sign * x).collect(),
            offset: if inside { -offset } else { offset },
        }
    }

    fn violated_by(&self, y: &[f64]) -> bool {
        let lhs = linalg::dot(&self.normal, y);
        let scale =
            linalg::norm_sq(&self.normal).sqrt() * linalg::norm_sq(y).sqrt() + self.offset.abs();
        lhs - self.offset > VIOLATION_TOL * scale.max(f64::MIN_POSITIVE)
    }
}

struct Program<'a> {
    equalities: &'a [Half],
    inequalities: &'a [Half],
    dim: usize,
}

impl Program<'_> {
    /// Point of minimum norm on the flat where the equalities and the `tight`
    /// inequalities all hold with equality.
    ///
    /// The rows are orthonormalized (Gram-Schmidt, applied twice) instead of
    /// solving the normal equations, whose condition number is the square of
    /// the rows' and costs digits on nearly parallel constraints.
    fn project(&self, tight: &[usize]) -> Option<Vec<f64>> {
        let rows: Vec<&Half> = self
            .equalities
            .iter()
            .chain(tight.iter().map(|&i| &self.inequalities[i]))
            .collect();
        if rows.len() > self.dim {
            return None;
        }
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
        let mut y = vec![0.0; self.dim];
        for h in &rows {
            let mut v = h.normal.clone();
            for _ in 0..2 {
                for q in &basis {
                    let c = linalg::dot(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= c * qi;
                    }
                }
            }
            let norm = linalg::norm_sq(&v).sqrt();
            if norm <= 1e-13 * linalg::norm_sq(&h.normal).sqrt() || norm == 0.0 {
                return None;
            }
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            // y stays in span(basis); fix its component along the new vector
            let z = (h.offset - linalg::dot(&h.normal, &y)) / norm;
            for (yi, vi) in y.iter_mut().zip(&v) {
                *yi += z * vi;
            }
            basis.push(v);
        }
        Some(y)
    }

    /// Optimum subject to `order[..end]` with `tight` held at equality, or
    /// `None` if that subproblem is infeasible.
    fn solve(&self, order: &mut [usize], end: usize, tight: &mut Vec<usize>) -> Option<Vec<f64>> {
        let mut y = self.project(tight)?;
        for i in 0..end {
            let h = order[i];
            if !self.inequalities[h].violated_by(&y) {
                continue;
            }
            tight.push(h);
            let next = self.solve(order, i, tight);
            tight.pop();
            y = next?;
            order[..=i].rotate_right(1);
        }
        Some(y)
    }

    fn optimum(&self) -> Option<Vec<f64>> {
        let mut order: Vec<usize> = (0..self.inequalities.len()).collect();
        let n = order.len();
        self.solve(&mut order, n, &mut Vec::new())
    }
}

/// Squared minimum witness radius with the avoid set supplied as a visitor,
/// so callers can stream large candidate sets without materializing them.
///
/// `Ok(None)` means no sphere through `sigma_prime` covers `cover` while
/// keeping every avoid point outside or on it.
pub fn witness_radius_sq_with<V>(
    sigma_prime: &[&[f64]],
    cover: &[f64],
    visit_avoid: V,
) -> Result<Option<f64>>
where
    V: Fn(&mut dyn FnMut(&[f64])),
{
    let dim = cover.len();
    let Some((p0, rest)) = sigma_prime.split_first() else {
        // a sphere of radius zero centred at the cover point
        return Ok(Some(0.0));
    };
    if let Some(p) = sigma_prime.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    if sigma_prime.len() > dim + 1 {
        return Err(Error::AffinelyDependent);
    }
    let equalities: Vec<Half> = rest.iter().map(|q| Half::through(p0, q, false)).collect();
    if !rest.is_empty() {
        let probe = Program {
            equalities: &equalities,
            inequalities: &[],
            dim,
        };
        probe.project(&[]).ok_or(Error::AffinelyDependent)?;
    }

    let solve = |inequalities: &[Half]| {
        Program {
            equalities: &equalities,
            inequalities,
            dim,
        }
        .optimum()
    };
    let mut inequalities = vec![Half::through(p0, cover, true)];
    for _ in 0..MAX_ROUNDS {
        let Some(y) = solve(&inequalities) else {
            return Ok(None);
        };
        let mut added = Vec::new();
        visit_avoid(&mut |q: &[f64]| {
            let h = Half::through(p0, q, false);
            if h.violated_by(&y) {
                added.push(h);
            }
        });
        if added.is_empty() {
            return Ok(Some(linalg::norm_sq(&y)));
        }
        inequalities.extend(added);
    }
    // rounding kept reintroducing constraints; fall back to the full set
    inequalities.truncate(1);
    visit_avoid(&mut |q: &[f64]| inequalities.push(Half::through(p0, q, false)));
    Ok(solve(&inequalities).map(|y| linalg::norm_sq(&y)))
}

/// Squared radius of the smallest sphere through `sigma_prime` having `cover`
/// inside or on it and every point of `avoid` outside or on it.
pub fn min_witness_radius_sq(
    sigma_prime: &[&[f64]],
    cover: &[f64],
    avoid: &[&[f64]],
) -> Result<Option<f64>> {
    if let Some(p) = avoid.iter().find(|p| p.len() != cover.len()) {
        return Err(Error::DimensionMismatch {
            expected: cover.len(),
            found: p.len(),
        });
    }
    witness_radius_sq_with(sigma_prime, cover, |f| {
        for q in avoid {
            f(q)
        }
    })
}

/// Radius of the smallest witness sphere; `None` when infeasible.
pub fn min_witness_radius(
    sigma_prime: &[&[f64]],
    cover: &[f64],
    avoid: &[&[f64]],
) -> Result<Option<f64>> {
    Ok(min_witness_radius_sq(sigma_prime, cover, avoid)?.map(f64::sqrt))
}
