//! Point-cloud input and the function values used to order and grade it.
//!
//! Input is plain text: one point per line, whitespace-separated decimals,
//! with the function value as the last column when present. Blank lines and
//! lines starting with `#` are skipped.

use crate::complex::OrderedPoints;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;
use std::io::{self, BufRead, Write};

/// Points stored flat, `dim` coordinates each, with their 1-based input line
/// numbers. `gamma` is empty until function values are attached.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub dim: usize,
    pub coords: Vec<f64>,
    pub gamma: Vec<f64>,
    pub lines: Vec<usize>,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Positions from a flat coordinate list, numbered from line 1.
    pub fn from_coords(dim: usize, coords: Vec<f64>) -> PointCloud {
        let n = coords.len().checked_div(dim).unwrap_or(0);
        PointCloud {
            dim,
            coords,
            gamma: Vec::new(),
            lines: (1..=n).collect(),
        }
    }

    pub fn ordered(&self) -> Result<OrderedPoints> {
        if self.gamma.len() != self.len() {
            return Err(Error::InvalidArgument("function values are missing".into()));
        }
        OrderedPoints::new(self.dim, &self.coords, &self.gamma, &self.lines)
    }
}

fn parse_rows<R: BufRead>(
    source: R,
    mut row: impl FnMut(usize, Vec<f64>) -> Result<()>,
) -> Result<()> {
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let values: Vec<f64> = trimmed
            .split_whitespace()
            .map(|t| {
                let v: f64 = t.parse().map_err(|_| Error::Parse {
                    line: n,
                    message: format!("`{t}` is not a number"),
                })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFinite { line: n })
                }
            })
            .collect::<Result<_>>()?;
        row(n, values)?;
    }
    Ok(())
}

/// Reads points with a function value in the last column. Without a hint the
/// dimension is one less than the column count of the first point line.
pub fn parse_input<R: BufRead>(source: R, dimension_hint: Option<usize>) -> Result<PointCloud> {
    let mut cloud = PointCloud {
        dim: dimension_hint.unwrap_or(0),
        ..Default::default()
    };
    let mut columns = dimension_hint.map(|d| d + 1);
    parse_rows(source, |line, mut values| {
        let expected = *columns.get_or_insert(values.len());
        if expected < 2 {
            return Err(Error::Parse {
                line,
                message: "need at least one coordinate and a function value".into(),
            });
        }
        if values.len() != expected {
            return Err(Error::ColumnCount {
                line,
                expected,
                found: values.len(),
            });
        }
        cloud.dim = expected - 1;
        cloud.gamma.push(values.pop().unwrap());
        cloud.coords.extend(values);
        cloud.lines.push(line);
        Ok(())
    })?;
    Ok(cloud)
}

/// Reads positions only; function values are synthesized afterwards.
pub fn parse_positions<R: BufRead>(source: R, dimension_hint: Option<usize>) -> Result<PointCloud> {
    let mut cloud = PointCloud {
        dim: dimension_hint.unwrap_or(0),
        ..Default::default()
    };
    let mut columns = dimension_hint;
    parse_rows(source, |line, values| {
        let expected = *columns.get_or_insert(values.len());
        if values.len() != expected {
            if dimension_hint.is_some() && values.len() == expected + 1 {
                return Err(Error::GammaColumnPresent {
                    line,
                    dim: expected,
                    found: values.len(),
                });
            }
            return Err(Error::ColumnCount {
                line,
                expected,
                found: values.len(),
            });
        }
        if expected == 0 {
            return Err(Error::ZeroDimension);
        }
        cloud.dim = expected;
        cloud.coords.extend(values);
        cloud.lines.push(line);
        Ok(())
    })?;
    Ok(cloud)
}

/// Writes one point per line, followed by its function value when present.
pub fn write_points<W: Write>(cloud: &PointCloud, out: W) -> io::Result<()> {
    let mut w = io::BufWriter::new(out);
    for i in 0..cloud.len() {
        let mut first = true;
        for v in cloud.point(i).iter().chain(cloud.gamma.get(i)) {
            if !first {
                write!(w, " ")?;
            }
            write!(w, "{v}")?;
            first = false;
        }
        writeln!(w)?;
    }
    w.flush()
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Gaussian-kernel codensity, `-sum_{q != p} exp(-|p - q|^2 / sigma^2)`, with
/// `sigma` the nearest-rank 0.1st percentile of the nonzero pairwise
/// distances.
pub fn codensity(dim: usize, coords: &[f64]) -> Result<Vec<f64>> {
    let n = coords.len() / dim;
    let p = |i: usize| &coords[i * dim..(i + 1) * dim];
    let nonzero = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).filter(|&j| dist_sq(p(i), p(j)) > 0.0).count())
        .sum::<usize>();
    if nonzero == 0 {
        return Err(Error::InvalidArgument(
            "codensity needs at least two distinct points".into(),
        ));
    }
    let rank = ((nonzero as f64) * 0.001).ceil().max(1.0) as usize;
    // the `rank` smallest squared distances; bit patterns of nonnegative
    // floats sort like the floats
    let smallest = (0..n)
        .into_par_iter()
        .fold(BinaryHeap::new, |mut heap: BinaryHeap<u64>, i| {
            for j in i + 1..n {
                let d = dist_sq(p(i), p(j));
                if d == 0.0 {
                    continue;
                }
                if heap.len() < rank {
                    heap.push(d.to_bits());
                } else if d.to_bits() < *heap.peek().unwrap() {
                    heap.pop();
                    heap.push(d.to_bits());
                }
            }
            heap
        })
        .reduce(BinaryHeap::new, |mut a, b| {
            for d in b {
                if a.len() < rank {
                    a.push(d);
                } else if d < *a.peek().unwrap() {
                    a.pop();
                    a.push(d);
                }
            }
            a
        });
    let sigma_sq = f64::from_bits(*smallest.peek().unwrap());
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            -(0..n)
                .filter(|&j| j != i)
                .map(|j| (-dist_sq(p(i), p(j)) / sigma_sq).exp())
                .sum::<f64>()
        })
        .collect())
}

/// L1 coeccentricity, `-(1/n) sum_q |p - q|`.
pub fn coeccentricity(dim: usize, coords: &[f64]) -> Vec<f64> {
    let n = coords.len() / dim;
    let p = |i: usize| &coords[i * dim..(i + 1) * dim];
    (0..n)
        .into_par_iter()
        .map(|i| -(0..n).map(|j| dist_sq(p(i), p(j)).sqrt()).sum::<f64>() / n as f64)
        .collect()
}

/// The last coordinate.
pub fn height(dim: usize, coords: &[f64]) -> Vec<f64> {
    coords.chunks_exact(dim).map(|p| p[dim - 1]).collect()
}

/// Independent uniform values in `[0, 1)` from a ChaCha8 stream seeded with
/// `seed`, one draw per point in input order.
pub fn random(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Codensity,
    Coeccentricity,
    Height,
    Random { seed: u64 },
}

impl Function {
    pub fn evaluate(&self, dim: usize, coords: &[f64]) -> Result<Vec<f64>> {
        if dim == 0 {
            return Ok(Vec::new());
        }
        Ok(match *self {
            Function::Codensity => codensity(dim, coords)?,
            Function::Coeccentricity => coeccentricity(dim, coords),
            Function::Height => height(dim, coords),
            Function::Random { seed } => random(coords.len() / dim, seed),
        })
    }
}

/// Adds `eps * u * diag` to every coordinate, `u` uniform in `[-1, 1]` and
/// `diag` the bounding-box diagonal.
pub fn jitter(dim: usize, coords: &mut [f64], eps: f64, seed: u64) {
    if coords.is_empty() {
        return;
    }
    let diag = bounding_box(dim, coords)
        .iter()
        .map(|(lo, hi)| (hi - lo) * (hi - lo))
        .sum::<f64>()
        .sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for x in coords.iter_mut() {
        *x += eps * diag * rng.gen_range(-1.0..=1.0);
    }
}

fn bounding_box(dim: usize, coords: &[f64]) -> Vec<(f64, f64)> {
    let mut bb = vec![(f64::INFINITY, f64::NEG_INFINITY); dim];
    for p in coords.chunks_exact(dim) {
        for (b, &x) in bb.iter_mut().zip(p) {
            b.0 = b.0.min(x);
            b.1 = b.1.max(x);
        }
    }
    bb
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Unit circle in the plane.
    Circle,
    /// Unit 2-sphere in R^3.
    Sphere,
    /// Torus in R^3 with tube radius 1 around a core circle of radius 2.
    Torus,
    /// Unit square.
    Square,
    /// Unit cube.
    Cube,
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Circle | Shape::Square => 2,
            Shape::Sphere | Shape::Torus | Shape::Cube => 3,
        }
    }
}

impl std::str::FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "circle" => Shape::Circle,
            "sphere" => Shape::Sphere,
            "torus" => Shape::Torus,
            "square" => Shape::Square,
            "cube" => Shape::Cube,
            _ => return Err(Error::InvalidArgument(format!("unknown shape `{s}`"))),
        })
    }
}

/// Fraction of sample points replaced by uniform noise from the bounding box.
pub const NOISE_FRACTION: f64 = 0.05;
/// Relative amplitude of the perturbation applied to every coordinate.
pub const PERTURBATION: f64 = 0.05;

/// `n` points on `shape`. The last `5%` of them are replaced by uniform
/// samples from the bounding box of the clean sample, then every coordinate
/// `x` becomes `x * (1 + 0.05 u)` with `u` uniform in `[-1, 1]`.
pub fn sample(shape: Shape, n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = shape.dim();
    let mut coords = Vec::with_capacity(n * dim);
    for _ in 0..n {
        match shape {
            Shape::Circle => {
                let t = rng.gen_range(0.0..TAU);
                coords.extend([t.cos(), t.sin()]);
            }
            Shape::Sphere => {
                let z: f64 = rng.gen_range(-1.0..=1.0);
                let t = rng.gen_range(0.0..TAU);
                let rho = (1.0 - z * z).sqrt();
                coords.extend([rho * t.cos(), rho * t.sin(), z]);
            }
            Shape::Torus => {
                // rejection sampling for the area measure
                let (big, small) = (2.0, 1.0);
                let (u, v) = loop {
                    let u = rng.gen_range(0.0..TAU);
                    let v: f64 = rng.gen_range(0.0..TAU);
                    if rng.gen_range(0.0..big + small) <= big + small * v.cos() {
                        break (u, v);
                    }
                };
                let w = big + small * v.cos();
                coords.extend([w * u.cos(), w * u.sin(), small * v.sin()]);
            }
            Shape::Square | Shape::Cube => coords.extend((0..dim).map(|_| rng.gen::<f64>())),
        }
    }
    let noisy = (n as f64 * NOISE_FRACTION).round() as usize;
    if n > 0 {
        let bb = bounding_box(dim, &coords);
        for p in coords[(n - noisy) * dim..].chunks_exact_mut(dim) {
            for (x, &(lo, hi)) in p.iter_mut().zip(&bb) {
                *x = rng.gen_range(lo..=hi);
            }
        }
    }
    for x in coords.iter_mut() {
        *x *= 1.0 + PERTURBATION * rng.gen_range(-1.0..=1.0);
    }
    PointCloud::from_coords(dim, coords)
}
