//! Random small instances in general position.

use crate::geometry::general_position;
use delbif_core::functions::Function;
use rand::Rng;

/// `n` points with integer coordinates in `[-range, range]^d`, resampled
/// until they are in general position.
pub fn random_points<R: Rng>(rng: &mut R, n: usize, d: usize, range: i32) -> Vec<Vec<f64>> {
    loop {
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| rng.gen_range(-range..=range) as f64)
                    .collect()
            })
            .collect();
        if general_position(&pts) {
            return pts;
        }
    }
}

/// The four function generators, cycled by `i`.
pub fn function_for(i: usize, seed: u64) -> Function {
    match i % 4 {
        0 => Function::Codensity,
        1 => Function::Coeccentricity,
        2 => Function::Height,
        _ => Function::Random { seed },
    }
}

pub fn function_name(f: Function) -> &'static str {
    match f {
        Function::Codensity => "codensity",
        Function::Coeccentricity => "coeccentricity",
        Function::Height => "height",
        Function::Random { .. } => "random",
    }
}

/// Function values of `f` on `points`.
pub fn evaluate(f: Function, points: &[Vec<f64>]) -> Vec<f64> {
    let d = points[0].len();
    f.evaluate(d, &points.concat()).expect("distinct points")
}

/// Points listed in rank order: sorted by function value, ties by index.
pub fn in_rank_order(points: &[Vec<f64>], gamma: &[f64]) -> Vec<Vec<f64>> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| gamma[a].total_cmp(&gamma[b]).then(a.cmp(&b)));
    idx.into_iter().map(|i| points[i].clone()).collect()
}
