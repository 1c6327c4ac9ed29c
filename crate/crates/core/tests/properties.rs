use delbif_core::bifiltration::{
    grade_del, grade_delcech, incremental_radii, meb_radii, validate, GradedComplex,
};
use delbif_core::predicates::{in_sphere, meb, SideOfSphere};
use delbif_core::triangulation::Triangulation;
use delbif_core::{IncrementalComplex, OrderedPoints};
use proptest::prelude::*;
use std::collections::BTreeSet;

/// Distinct points with small integer coordinates; general position is not
/// guaranteed, so cases the builder rejects as degenerate are discarded.
fn cloud(max_n: usize) -> impl Strategy<Value = (usize, Vec<Vec<f64>>, Vec<f64>)> {
    (1usize..=3, 1usize..=max_n).prop_flat_map(|(d, n)| {
        (
            Just(d),
            prop::collection::btree_set(prop::collection::vec(-40i32..=40, d), n),
            prop::collection::vec(0.0f64..1.0, n),
        )
            .prop_map(|(d, pts, gamma)| {
                let pts: Vec<Vec<f64>> = pts
                    .into_iter()
                    .map(|p| p.into_iter().map(f64::from).collect())
                    .collect();
                let gamma = gamma[..pts.len()].to_vec();
                (d, pts, gamma)
            })
    })
}

fn build(pts: &[Vec<f64>], gamma: &[f64]) -> Option<IncrementalComplex> {
    let ordered = OrderedPoints::from_points(pts, gamma).ok()?;
    IncrementalComplex::build(ordered).ok()
}

fn set(lists: Vec<Vec<u32>>) -> BTreeSet<Vec<u32>> {
    lists.into_iter().collect()
}

fn restriction_is_closed(g: &GradedComplex, r: f64, s: f64) -> bool {
    let inside = |k: usize, i: usize| {
        let c = &g.blocks[k][i];
        c.grade.r <= r && c.grade.s <= s
    };
    (1..g.blocks.len()).all(|k| {
        (0..g.blocks[k].len()).filter(|&i| inside(k, i)).all(|i| {
            g.blocks[k][i]
                .boundary
                .iter()
                .all(|&f| inside(k - 1, f as usize))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn face_closure_and_prefix_monotonicity((_d, pts, gamma) in cloud(11)) {
        let c = build(&pts, &gamma);
        prop_assume!(c.is_some(), "not in general position");
        let c = c.unwrap();
        let all = set(c.simplices());
        for s in &all {
            if s.len() < 2 {
                continue;
            }
            for skip in 0..s.len() {
                let mut f = s.clone();
                f.remove(skip);
                prop_assert!(all.contains(&f), "facet {f:?} of {s:?} missing");
            }
        }
        let ordered = c.points();
        let mut previous = BTreeSet::new();
        for i in 1..=ordered.len() {
            let current = set(IncrementalComplex::build(ordered.prefix(i)).unwrap().simplices());
            prop_assert!(previous.is_subset(&current));
            previous = current;
        }
        prop_assert_eq!(previous, all);
    }

    #[test]
    fn contains_every_prefix_triangulation_and_counts_conflicts((d, pts, gamma) in cloud(11)) {
        let c = build(&pts, &gamma);
        prop_assume!(c.is_some(), "not in general position");
        let c = c.unwrap();
        let all = set(c.simplices());
        let ordered = c.points();
        let mut t = Triangulation::new(d).unwrap();
        let mut pairs = 0;
        for r in 0..ordered.len() as u32 {
            let p = ordered.point(r);
            let conflicts = t.insert(p).unwrap();
            for pair in &conflicts {
                // the inserted point lies strictly inside every removed cell
                let cell: Vec<&[f64]> = pair.cell_vertices.iter().map(|&v| ordered.point(v)).collect();
                prop_assert_eq!(in_sphere(&cell, p).unwrap(), SideOfSphere::Inside);
                prop_assert!(pair.cell_vertices.iter().all(|&v| v < pair.inserted));
                let mut s = pair.cell_vertices.clone();
                s.push(pair.inserted);
                prop_assert!(all.contains(&s));
            }
            pairs += conflicts.len();
            t.check_consistency().map_err(TestCaseError::fail)?;
            for s in t.finite_simplices() {
                prop_assert!(all.contains(&s), "{s:?} of Del(X_{}) missing", r + 1);
            }
        }
        let top = if c.num_levels() > d + 1 { c.count(d + 1) } else { 0 };
        prop_assert_eq!(pairs, top);
        prop_assert_eq!(c.conflict_pairs(), top);
    }

    #[test]
    fn gradings_are_valid_and_del_dominates((_d, pts, gamma) in cloud(10)) {
        let c = build(&pts, &gamma);
        prop_assume!(c.is_some(), "not in general position");
        let c = c.unwrap();
        let delcech = grade_delcech(&c);
        let del = grade_del(&c).unwrap();
        prop_assert!(validate(&delcech).is_empty());
        prop_assert!(validate(&del).is_empty());
        let m = meb_radii(&c);
        let r = incremental_radii(&c).unwrap();
        prop_assert!(m.max_clamp < 1e-9 && r.max_clamp < 1e-9, "clamps {} {}", m.max_clamp, r.max_clamp);
        for (mk, rk) in m.squared.iter().zip(&r.squared) {
            for (a, b) in mk.iter().zip(rk) {
                prop_assert!(*b >= a * (1.0 - 1e-12), "rho^2 {b} < meb^2 {a}");
            }
        }
        let mut radii: Vec<f64> = delcech.blocks.iter().chain(&del.blocks).flatten().map(|c| c.grade.r).collect();
        radii.sort_by(f64::total_cmp);
        for &r in radii.iter().step_by(3) {
            for &s in gamma.iter().step_by(2) {
                prop_assert!(restriction_is_closed(&delcech, r, s));
                prop_assert!(restriction_is_closed(&del, r, s));
            }
        }
    }

    #[test]
    fn meb_contains_all_points(pts in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 1..12)) {
        let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
        let ball = meb(&refs).unwrap();
        let r = ball.radius();
        for p in &pts {
            let d: f64 = p.iter().zip(&ball.center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            prop_assert!(d <= r * (1.0 + 1e-9) + 1e-300);
        }
    }
}

#[test]
fn size_stays_polynomial() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for (d, n) in [(2usize, 400usize), (3, 300)] {
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let gamma: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
        let c = build(&pts, &gamma).unwrap();
        let bound = 50.0 * (n as f64).powi((d + 1).div_ceil(2) as i32);
        let total = c.stats().total as f64;
        assert!(total <= bound, "d={d}: {total} simplices exceed {bound}");
    }
}
