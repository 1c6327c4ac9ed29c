//! Betti-number comparison of the Cech, Delaunay-Cech and Delaunay
//! bifiltrations at every critical bigrade.

use crate::geometry::oracle_meb_exact;
use crate::homology::betti_curve;
use delbif_core::bifiltration::{incremental_radii, meb_radii, Radii};
use delbif_core::{IncrementalComplex, OrderedPoints, Result};
use itertools::Itertools;
use num_traits::ToPrimitive;

/// Radii closer than this (relative) are treated as the same critical value.
const CLUSTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    /// Squared radius and function value of the offending grade.
    pub r_sq: f64,
    pub s: f64,
    pub cech: Vec<usize>,
    pub delcech: Vec<usize>,
    pub del: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct EquivalenceReport {
    pub grades_checked: usize,
    pub mismatches: Vec<Mismatch>,
    /// Largest Betti number seen in each dimension anywhere on the grid.
    pub max_betti: Vec<usize>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

struct Graded {
    simplices: Vec<Vec<u32>>,
    r_sq: Vec<f64>,
}

fn from_complex(c: &IncrementalComplex, radii: &Radii) -> Graded {
    let mut g = Graded {
        simplices: Vec::new(),
        r_sq: Vec::new(),
    };
    for k in 0..c.num_levels() {
        for (i, s) in c.level(k).enumerate() {
            g.simplices.push(s.to_vec());
            g.r_sq.push(radii.squared[k][i]);
        }
    }
    g
}

/// Representatives of the distinct critical values, ascending.
fn clusters(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut all: Vec<f64> = values.collect();
    all.sort_by(f64::total_cmp);
    let mut reps: Vec<f64> = Vec::new();
    for v in all {
        match reps.last() {
            Some(&last) if v - last <= CLUSTER_TOL * v.abs() => {}
            _ => reps.push(v),
        }
    }
    reps
}

fn cluster_index(reps: &[f64], v: f64) -> usize {
    // the last representative within tolerance below or at v
    let i = reps.partition_point(|&r| r <= v + CLUSTER_TOL * v.abs());
    i.saturating_sub(1)
}

/// Compares the Betti numbers `beta_0 .. beta_d` of all three bifiltrations
/// at every pair (critical radius, function value). Between consecutive
/// critical values nothing changes, so checking the critical values covers
/// the midpoints as well.
pub fn equivalence_suite(points: &[Vec<f64>], gamma: &[f64]) -> Result<EquivalenceReport> {
    let ordered = OrderedPoints::from_points(points, gamma)?;
    let d = ordered.dim();
    let n = ordered.len();
    let complex = IncrementalComplex::build(ordered.clone())?;
    let delcech = from_complex(&complex, &meb_radii(&complex));
    let del = from_complex(&complex, &incremental_radii(&complex)?);

    let ranked: Vec<Vec<f64>> = (0..n as u32).map(|r| ordered.point(r).to_vec()).collect();
    let mut cech = Graded {
        simplices: Vec::new(),
        r_sq: Vec::new(),
    };
    for size in 1..=(d + 2).min(n) {
        for s in (0..n as u32).combinations(size) {
            let pts: Vec<Vec<f64>> = s.iter().map(|&v| ranked[v as usize].clone()).collect();
            cech.r_sq.push(oracle_meb_exact(&pts).1.to_f64().unwrap());
            cech.simplices.push(s);
        }
    }

    let reps = clusters(
        [&cech, &delcech, &del]
            .iter()
            .flat_map(|g| g.r_sq.iter().copied())
            .collect::<Vec<_>>()
            .into_iter(),
    );
    let max_time = reps.len() - 1;
    let s_values: Vec<f64> = (0..n as u32).map(|r| ordered.gamma(r)).dedup().collect();

    let mut report = EquivalenceReport {
        max_betti: vec![0; d + 1],
        ..Default::default()
    };
    for &s in &s_values {
        let curve = |g: &Graded| {
            let keep: Vec<usize> = (0..g.simplices.len())
                .filter(|&i| ordered.gamma(*g.simplices[i].last().unwrap()) <= s)
                .collect();
            let simplices: Vec<Vec<u32>> = keep.iter().map(|&i| g.simplices[i].clone()).collect();
            let times: Vec<usize> = keep
                .iter()
                .map(|&i| cluster_index(&reps, g.r_sq[i]))
                .collect();
            betti_curve(&simplices, &times, d, max_time)
                .map_err(delbif_core::Error::InvalidArgument)
        };
        let (a, b, c) = (curve(&cech)?, curve(&delcech)?, curve(&del)?);
        for t in 0..=max_time {
            report.grades_checked += 1;
            for (m, &v) in report.max_betti.iter_mut().zip(&a[t]) {
                *m = (*m).max(v);
            }
            if a[t] != b[t] || a[t] != c[t] {
                report.mismatches.push(Mismatch {
                    r_sq: reps[t],
                    s,
                    cech: a[t].clone(),
                    delcech: b[t].clone(),
                    del: c[t].clone(),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustering_merges_near_equal_values() {
        let reps = clusters([1.0, 1.0 + 1e-12, 2.0, 0.0].into_iter());
        assert_eq!(reps, vec![0.0, 1.0, 2.0]);
        assert_eq!(cluster_index(&reps, 1.0 + 1e-12), 1);
        assert_eq!(cluster_index(&reps, 1.0 - 1e-12), 1);
        assert_eq!(cluster_index(&reps, 0.0), 0);
    }

    #[test]
    fn single_point_agrees() {
        let r = equivalence_suite(&[vec![1.0, 2.0]], &[0.5]).unwrap();
        assert!(r.passed());
        assert_eq!(r.grades_checked, 1);
    }

    #[test]
    fn height_on_the_ordered_line() {
        let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
        let r = equivalence_suite(&pts, &[0.0, 1.0, 2.0]).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        // radii 0, 1/2 and 1; three function values
        assert_eq!(r.grades_checked, 9);
    }

    #[test]
    fn points_near_a_circle_show_a_loop() {
        let pts: Vec<Vec<f64>> = (0..8)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 8.0 + 0.05 * (i * i) as f64;
                let r = 1.0 + 0.03 * ((i * 7 % 5) as f64);
                vec![r * t.cos(), r * t.sin()]
            })
            .collect();
        let gamma = delbif_core::functions::codensity(2, &pts.concat()).unwrap();
        let r = equivalence_suite(&pts, &gamma).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches);
        assert!(r.max_betti[1] >= 1);
    }
}
