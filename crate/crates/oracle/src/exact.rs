//! Exact rational linear algebra and linear feasibility.

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(v: f64) -> Q {
    BigRational::from_float(v).expect("finite coordinate")
}

pub fn qs(p: &[f64]) -> Vec<Q> {
    p.iter().map(|&v| q(v)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Brings `m` to reduced row echelon form in place and returns the pivot
/// column of each nonzero row.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(&mut rows.to_vec()).len()
}

/// Basis of `{x : rows * x = 0}`.
pub fn nullspace(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![Q::zero(); cols];
            x[free] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][free].clone();
            }
            x
        })
        .collect()
}

/// Unique solution of a square system, `None` if singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = b.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(v.clone()))
                .collect()
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Point of minimum norm on `{x : rows * x = rhs}` for linearly independent
/// rows.
pub fn min_norm_point(rows: &[Vec<Q>], rhs: &[Q], dim: usize) -> Option<Vec<Q>> {
    let gram: Vec<Vec<Q>> = rows
        .iter()
        .map(|a| rows.iter().map(|b| dot(a, b)).collect())
        .collect();
    let mu = solve(&gram, rhs)?;
    let mut x = vec![Q::zero(); dim];
    for (m, row) in mu.iter().zip(rows) {
        for (xi, ai) in x.iter_mut().zip(row) {
            *xi += m * ai;
        }
    }
    Some(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coef: Vec<Q>,
    pub rel: Rel,
    pub rhs: Q,
}

impl Constraint {
    pub fn holds(&self, x: &[Q]) -> bool {
        let v = dot(&self.coef, x);
        match self.rel {
            Rel::Eq => v == self.rhs,
            Rel::Le => v <= self.rhs,
            Rel::Ge => v >= self.rhs,
        }
    }
}

/// Whether the constraints have a common solution in `Q^vars`.
///
/// The lineality space of the constraint matrix is cut away by extra
/// equalities, which leaves a pointed polyhedron; it is nonempty iff one of
/// its basic solutions (a full-rank choice of tight constraints) satisfies
/// everything.
pub fn feasible(constraints: &[Constraint], vars: usize) -> bool {
    let all: Vec<Vec<Q>> = constraints.iter().map(|c| c.coef.clone()).collect();
    let mut eq_rows: Vec<(Vec<Q>, Q)> = nullspace(&all, vars)
        .into_iter()
        .map(|u| (u, Q::zero()))
        .collect();
    eq_rows.extend(
        constraints
            .iter()
            .filter(|c| c.rel == Rel::Eq)
            .map(|c| (c.coef.clone(), c.rhs.clone())),
    );

    // an independent subset of the equalities
    let mut basis: Vec<(Vec<Q>, Q)> = Vec::new();
    for row in eq_rows {
        let mut trial: Vec<Vec<Q>> = basis.iter().map(|(a, _)| a.clone()).collect();
        trial.push(row.0.clone());
        if rank(&trial) == trial.len() {
            basis.push(row);
        }
    }
    if basis.len() > vars {
        return false;
    }
    let need = vars - basis.len();
    let inequalities: Vec<&Constraint> = constraints.iter().filter(|c| c.rel != Rel::Eq).collect();
    inequalities.iter().combinations(need).any(|chosen| {
        let a: Vec<Vec<Q>> = basis
            .iter()
            .map(|(r, _)| r.clone())
            .chain(chosen.iter().map(|c| c.coef.clone()))
            .collect();
        let b: Vec<Q> = basis
            .iter()
            .map(|(_, v)| v.clone())
            .chain(chosen.iter().map(|c| c.rhs.clone()))
            .collect();
        match solve(&a, &b) {
            Some(x) => constraints.iter().all(|c| c.holds(&x)),
            None => false,
        }
    })
}
