//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use delbif_core::bifiltration::{
    grade_del, grade_delcech, incremental_radii, meb_radii, read_scc2020, validate, write_scc2020,
    Bigrade, GradedCell, GradedComplex,
};
use delbif_core::functions::{self, Function, Shape};
use delbif_core::pipeline::{self, Grading};
use delbif_core::predicates::meb;
use delbif_core::{IncrementalComplex, OrderedPoints};
use delbif_oracle::instances::{
    evaluate, function_for, function_name, in_rank_order, random_points,
};
use delbif_oracle::{
    equivalence_suite, oracle_delaunay, oracle_incremental, oracle_meb, oracle_witness_radius_sq,
};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::time::Instant;

struct Instance {
    /// Points in rank order.
    ranked: Vec<Vec<f64>>,
    function: Function,
    complex: IncrementalComplex,
}

fn instances(
    count: usize,
    seed: u64,
    n_range: std::ops::RangeInclusive<usize>,
    dims: &[usize],
) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs: Vec<(usize, usize, Function, Vec<Vec<f64>>)> = (0..count)
        .map(|i| {
            let n = rng.gen_range(n_range.clone());
            let d = dims[i % dims.len()];
            let f = function_for(i / dims.len(), rng.gen());
            (n, d, f, random_points(&mut rng, n, d, 50))
        })
        .collect();
    specs
        .into_par_iter()
        .map(|(_, _, function, points)| {
            let gamma = evaluate(function, &points);
            let ranked = in_rank_order(&points, &gamma);
            let ordered = OrderedPoints::from_points(&points, &gamma).expect("valid instance");
            let complex = IncrementalComplex::build(ordered).expect("general position");
            Instance {
                ranked,
                function,
                complex,
            }
        })
        .collect()
}

fn describe(inst: &Instance) -> String {
    format!(
        "n={} d={} {}",
        inst.ranked.len(),
        inst.complex.dim(),
        function_name(inst.function)
    )
}

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

fn report(id: usize, title: &str, start: Instant, o: Outcome) -> bool {
    let ok = o.failures.is_empty();
    println!(
        "[{}] {id:>2} {title}: {} ({:.1} s)",
        if ok { "PASS" } else { "FAIL" },
        o.summary,
        start.elapsed().as_secs_f64()
    );
    for f in o.failures.iter().take(5) {
        println!("       {f}");
    }
    ok
}

fn collect(results: Vec<Option<String>>, total: usize, what: &str) -> Outcome {
    let failures: Vec<String> = results.into_iter().flatten().collect();
    Outcome {
        summary: format!("{}/{total} {what}", total - failures.len()),
        failures,
    }
}

fn as_set(lists: Vec<Vec<u32>>) -> BTreeSet<Vec<u32>> {
    lists.into_iter().collect()
}

fn oracle_equivalence(all: &[Instance]) -> Outcome {
    let results = all
        .par_iter()
        .map(|inst| {
            let got = as_set(inst.complex.simplices());
            let want = oracle_incremental(&inst.ranked);
            (got != want).then(|| {
                format!(
                    "{}: extra {:?}, missing {:?}",
                    describe(inst),
                    got.difference(&want).collect::<Vec<_>>(),
                    want.difference(&got).collect::<Vec<_>>()
                )
            })
        })
        .collect();
    collect(results, all.len(), "instances match")
}

fn delaunay_correctness(all: &[Instance]) -> Outcome {
    let results = all
        .par_iter()
        .map(|inst| {
            let got = as_set(inst.complex.delaunay_simplices());
            let want = oracle_delaunay(&inst.ranked);
            (got != want).then(|| format!("{}: triangulation differs", describe(inst)))
        })
        .collect();
    collect(results, all.len(), "instances match")
}

fn conflict_pair_count(all: &[Instance]) -> Outcome {
    let results = all
        .iter()
        .map(|inst| {
            let d = inst.complex.dim();
            let top = if inst.complex.num_levels() > d + 1 {
                inst.complex.count(d + 1)
            } else {
                0
            };
            let pairs = inst.complex.conflict_pairs();
            (top != pairs).then(|| {
                format!(
                    "{}: {top} top simplices, {pairs} conflict pairs",
                    describe(inst)
                )
            })
        })
        .collect();
    collect(results, all.len(), "instances match")
}

fn topological_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let specs: Vec<(Vec<Vec<f64>>, Function)> = (0..50)
        .map(|i| {
            let n = rng.gen_range(3..=10);
            (
                random_points(&mut rng, n, 2, 50),
                function_for(i, rng.gen()),
            )
        })
        .collect();
    let results: Vec<(Option<String>, usize)> = specs
        .par_iter()
        .map(|(points, f)| {
            let gamma = evaluate(*f, points);
            match equivalence_suite(points, &gamma) {
                Ok(r) if r.passed() => (None, r.grades_checked),
                Ok(r) => (
                    Some(format!(
                        "n={} {}: {} mismatches, first {:?}",
                        points.len(),
                        function_name(*f),
                        r.mismatches.len(),
                        r.mismatches[0]
                    )),
                    r.grades_checked,
                ),
                Err(e) => (
                    Some(format!("n={} {}: {e}", points.len(), function_name(*f))),
                    0,
                ),
            }
        })
        .collect();
    let grades: usize = results.iter().map(|r| r.1).sum();
    let mut o = collect(
        results.into_iter().map(|r| r.0).collect(),
        50,
        "instances agree",
    );
    o.summary += &format!(", {grades} bigrades");
    o
}

/// `d o d` over GF(2), recomputed from the facet lists.
fn boundary_squares_to_zero(g: &GradedComplex) -> bool {
    (2..g.blocks.len()).all(|k| {
        g.blocks[k].iter().all(|c| {
            let mut parity = vec![false; g.blocks[k - 2].len()];
            for &f in &c.boundary {
                for &ff in &g.blocks[k - 1][f as usize].boundary {
                    parity[ff as usize] ^= true;
                }
            }
            parity.iter().all(|&p| !p)
        })
    })
}

fn graded_complexes(all: &[Instance]) -> Vec<(String, GradedComplex)> {
    all.par_iter()
        .flat_map_iter(|inst| {
            let del = grade_del(&inst.complex).expect("witness radii exist");
            [
                (
                    format!("{} delcech", describe(inst)),
                    grade_delcech(&inst.complex),
                ),
                (format!("{} del", describe(inst)), del),
            ]
        })
        .collect()
}

fn bifiltration_validity(graded: &[(String, GradedComplex)]) -> Outcome {
    let results = graded
        .par_iter()
        .map(|(name, g)| {
            let v = validate(g);
            if let Some(first) = v.first() {
                Some(format!("{name}: {} violations, first: {first}", v.len()))
            } else if !boundary_squares_to_zero(g) {
                Some(format!("{name}: boundary of boundary is nonzero"))
            } else {
                None
            }
        })
        .collect();
    collect(results, graded.len(), "complexes valid")
}

fn meb_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sets: Vec<Vec<Vec<f64>>> = (0..500)
        .map(|_| {
            let n = rng.gen_range(1..=10);
            let d = rng.gen_range(1..=4);
            (0..n)
                .map(|_| (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect())
                .collect()
        })
        .collect();
    let worst = std::sync::Mutex::new(0.0f64);
    let results = sets
        .par_iter()
        .map(|pts| {
            let refs: Vec<&[f64]> = pts.iter().map(Vec::as_slice).collect();
            let got = meb(&refs).expect("nonempty").radius();
            let want = oracle_meb(pts);
            let err = if want == 0.0 {
                got.abs()
            } else {
                (got - want).abs() / want
            };
            let mut w = worst.lock().unwrap();
            *w = w.max(err);
            (err > 1e-9).then(|| format!("n={} d={}: {got} vs {want}", pts.len(), pts[0].len()))
        })
        .collect();
    let mut o = collect(results, sets.len(), "sets match");
    o.summary += &format!(", worst relative error {:.1e}", worst.into_inner().unwrap());
    o
}

fn rho_checks(all: &[Instance]) -> Outcome {
    let mut failures = Vec::new();
    let mut simplices = 0usize;
    for inst in all {
        let meb_sq = meb_radii(&inst.complex).squared;
        let rho_sq = incremental_radii(&inst.complex)
            .expect("witness radii exist")
            .squared;
        for (k, (m, r)) in meb_sq.iter().zip(&rho_sq).enumerate() {
            for (i, (&m, &r)) in m.iter().zip(r).enumerate() {
                simplices += 1;
                // equal radii computed along different routes may differ in the last bits
                if r < m * (1.0 - 1e-12) {
                    failures.push(format!(
                        "{}: {:?} has rho^2 {r} < meb^2 {m}",
                        describe(inst),
                        inst.complex.simplex(k, i)
                    ));
                }
            }
        }
    }
    let dominance = simplices;

    let mut exact_checked = 0usize;
    let exact: Vec<(Vec<String>, f64)> = all
        .par_iter()
        .take(100)
        .map(|inst| {
            let rho_sq = incremental_radii(&inst.complex)
                .expect("witness radii exist")
                .squared;
            let mut bad = Vec::new();
            let mut worst: f64 = 0.0;
            for k in 1..inst.complex.num_levels() {
                for (i, s) in inst.complex.level(k).enumerate() {
                    let (&top, rest) = s.split_last().unwrap();
                    let sigma: Vec<Vec<f64>> = rest
                        .iter()
                        .map(|&v| inst.ranked[v as usize].clone())
                        .collect();
                    let avoid: Vec<Vec<f64>> = (0..top)
                        .filter(|v| !s.contains(v))
                        .map(|v| inst.ranked[v as usize].clone())
                        .collect();
                    let Some(want) =
                        oracle_witness_radius_sq(&sigma, &inst.ranked[top as usize], &avoid)
                    else {
                        bad.push(format!(
                            "{}: {s:?} infeasible in exact arithmetic",
                            describe(inst)
                        ));
                        continue;
                    };
                    let want = want.to_f64().unwrap();
                    let got = rho_sq[k][i];
                    let err = (got - want).abs() / want.max(f64::MIN_POSITIVE);
                    worst = worst.max(err);
                    if err > 1e-9 {
                        bad.push(format!(
                            "{}: {s:?} rho^2 {got} vs exact {want}",
                            describe(inst)
                        ));
                    }
                }
            }
            (bad, worst)
        })
        .collect();
    let worst = exact.iter().map(|e| e.1).fold(0.0, f64::max);
    for inst in all.iter().take(100) {
        exact_checked += inst.complex.simplices().len() - inst.complex.count(0);
    }
    failures.extend(exact.into_iter().flat_map(|e| e.0));
    Outcome {
        summary: format!(
            "{dominance} simplices dominated, {exact_checked} witness radii vs exact oracle \
             (worst relative error {worst:.1e}), {} failures",
            failures.len()
        ),
        failures,
    }
}

fn size_bands() -> Outcome {
    let cases = [
        (Shape::Square, Function::Random { seed: 8 }, 2.5, 4.5),
        (Shape::Circle, Function::Coeccentricity, 5.0, 9.0),
        (Shape::Torus, Function::Height, 6.0, 12.0),
    ];
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for (shape, f, lo, hi) in cases {
        let mut cloud = functions::sample(shape, 1000, 8);
        cloud.gamma = f
            .evaluate(cloud.dim, &cloud.coords)
            .expect("distinct points");
        let complex = IncrementalComplex::build(cloud.ordered().expect("valid cloud"))
            .expect("generic sample");
        let ratio = complex.stats().ratio;
        parts.push(format!("{shape:?}/{} {ratio:.2}", function_name(f)));
        if !(lo..=hi).contains(&ratio) {
            failures.push(format!(
                "{shape:?}/{}: ratio {ratio:.3} outside [{lo}, {hi}]",
                function_name(f)
            ));
        }
    }
    Outcome {
        summary: parts.join(", "),
        failures,
    }
}

fn performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 10_000;
    let coords: Vec<f64> = (0..3 * n).map(|_| rng.gen::<f64>()).collect();
    let gamma = functions::random(n, 9);
    let lines: Vec<usize> = (1..=n).collect();
    let start = Instant::now();
    let result = OrderedPoints::new(3, &coords, &gamma, &lines)
        .and_then(|p| pipeline::run(p, Grading::DelCech, std::io::sink(), &[]));
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(out) => {
            let t = out.times;
            Outcome {
                summary: format!(
                    "{} cells in {secs:.1} s (construction {:.1}, meb {:.1}, serialization {:.1})",
                    out.graded.num_cells(),
                    t.construction.as_secs_f64(),
                    t.grading.as_secs_f64(),
                    t.serialization.as_secs_f64()
                ),
                failures: if secs < 120.0 {
                    vec![]
                } else {
                    vec![format!("took {secs:.1} s")]
                },
            }
        }
        Err(e) => Outcome {
            summary: "pipeline failed".into(),
            failures: vec![e.to_string()],
        },
    }
}

fn write(g: &GradedComplex) -> Vec<u8> {
    let mut out = Vec::new();
    write_scc2020(g, &mut out, &["acceptance".into()]).unwrap();
    out
}

fn scc_round_trip(graded: &[(String, GradedComplex)]) -> Outcome {
    let mut results: Vec<Option<String>> = graded
        .par_iter()
        .map(|(name, g)| {
            let first = write(g);
            let again = read_scc2020(first.as_slice()).map(|h| write(&h));
            match again {
                Ok(second) if second == first => None,
                Ok(_) => Some(format!("{name}: second write differs")),
                Err(e) => Some(format!("{name}: {e}")),
            }
        })
        .collect();
    let cell = |r, s, b: &[u32]| GradedCell {
        grade: Bigrade { r, s },
        boundary: b.to_vec(),
    };
    let example = GradedComplex {
        blocks: vec![
            vec![cell(0.0, 1.0, &[]), cell(0.0, 2.0, &[])],
            vec![cell(0.5, 2.0, &[0, 1])],
        ],
    };
    let mut text = Vec::new();
    write_scc2020(&example, &mut text, &[]).unwrap();
    if text != b"scc2020\n2\n1 2 0\n0.5 2 ; 0 1\n0 1 ;\n0 2 ;\n" {
        results.push(Some(format!(
            "literal example differs: {:?}",
            String::from_utf8_lossy(&text)
        )));
    }
    let total = results.len();
    collect(results, total, "files round-trip (incl. literal example)")
}

fn prefix_monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let specs: Vec<(Vec<Vec<f64>>, Function)> = (0..50)
        .map(|i| {
            let n = rng.gen_range(3..=14);
            let d = 1 + i % 3;
            (
                random_points(&mut rng, n, d, 50),
                function_for(i / 3, rng.gen()),
            )
        })
        .collect();
    let results = specs
        .par_iter()
        .map(|(points, f)| {
            let gamma = evaluate(*f, points);
            let ordered = OrderedPoints::from_points(points, &gamma).unwrap();
            let mut previous: BTreeSet<Vec<u32>> = BTreeSet::new();
            for i in 1..=ordered.len() {
                let current = as_set(
                    IncrementalComplex::build(ordered.prefix(i))
                        .unwrap()
                        .simplices(),
                );
                if !previous.is_subset(&current) {
                    return Some(format!(
                        "n={} d={}: prefix {} loses {:?}",
                        points.len(),
                        ordered.dim(),
                        i,
                        previous.difference(&current).next()
                    ));
                }
                previous = current;
            }
            None
        })
        .collect();
    collect(results, 50, "instances monotone")
}

fn main() {
    // criteria 1-3, 5, 7 and 10 share 200 instances
    let all = instances(200, 1, 3..=12, &[1, 2, 3]);
    let graded = graded_complexes(&all);
    let mut ok = true;
    let t = Instant::now();
    ok &= report(
        1,
        "incremental complex equals the oracle",
        t,
        oracle_equivalence(&all),
    );
    let t = Instant::now();
    ok &= report(
        2,
        "Delaunay triangulation equals the oracle",
        t,
        delaunay_correctness(&all),
    );
    let t = Instant::now();
    ok &= report(
        3,
        "top simplices match conflict pairs",
        t,
        conflict_pair_count(&all),
    );
    let t = Instant::now();
    ok &= report(
        4,
        "Cech, DelCech and Del Betti numbers agree",
        t,
        topological_equivalence(),
    );
    let t = Instant::now();
    ok &= report(
        5,
        "graded complexes are valid",
        t,
        bifiltration_validity(&graded),
    );
    let t = Instant::now();
    ok &= report(6, "meb matches support enumeration", t, meb_correctness());
    let t = Instant::now();
    ok &= report(
        7,
        "witness radius dominates meb and matches exact",
        t,
        rho_checks(&all),
    );
    let t = Instant::now();
    ok &= report(8, "size ratios within bands at n=1000", t, size_bands());
    let t = Instant::now();
    ok &= report(9, "10k points in R^3 end to end", t, performance());
    let t = Instant::now();
    ok &= report(10, "scc2020 round trip", t, scc_round_trip(&graded));
    let t = Instant::now();
    ok &= report(11, "prefix monotonicity", t, prefix_monotonicity());
    if !ok {
        std::process::exit(1);
    }
}
