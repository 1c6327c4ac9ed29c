//! The incremental Delaunay complex of an ordered point cloud.
//!
//! A simplex belongs to the complex iff some sphere through all but its last
//! vertex has the last vertex inside or on it and every earlier point outside
//! or on it. Every maximal simplex of that complex is either `sigma + x` for a
//! finite conflict pair `(sigma, x)` met during Bowyer-Watson insertion, or a
//! cell of the final Delaunay triangulation, so the complex is assembled as
//! the face closure of those two families.

use crate::error::{Error, Result};
use crate::triangulation::Triangulation;
use rayon::prelude::*;
use smallvec::SmallVec;
use std::cmp::Ordering;

/// A nonempty, strictly increasing list of vertex ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(SmallVec<[u32; 6]>);

impl Simplex {
    /// Sorts and deduplicates `vertices`; `None` if empty.
    pub fn new(vertices: &[u32]) -> Option<Simplex> {
        let mut v: SmallVec<[u32; 6]> = vertices.into();
        v.sort_unstable();
        v.dedup();
        (!v.is_empty()).then_some(Simplex(v))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn max(&self) -> u32 {
        *self.0.last().unwrap()
    }
}

/// Points sorted by function value, ties broken by input position. Rank `i`
/// is the `i`-th point in that order (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedPoints {
    dim: usize,
    coords: Vec<f64>,
    gamma: Vec<f64>,
    lines: Vec<usize>,
}

impl OrderedPoints {
    /// `coords` holds `dim` values per point; `lines` identifies each point in
    /// the caller's input (used in error messages).
    pub fn new(dim: usize, coords: &[f64], gamma: &[f64], lines: &[usize]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let n = gamma.len();
        if coords.len() != n * dim || lines.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{n} function values for {} coordinates and {} line numbers",
                coords.len(),
                lines.len()
            )));
        }
        if let Some(i) = gamma.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFinite { line: lines[i] });
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| gamma[a].total_cmp(&gamma[b]).then(a.cmp(&b)));
        Ok(OrderedPoints {
            dim,
            coords: order
                .iter()
                .flat_map(|&i| coords[i * dim..(i + 1) * dim].iter().copied())
                .collect(),
            gamma: order.iter().map(|&i| gamma[i]).collect(),
            lines: order.iter().map(|&i| lines[i]).collect(),
        })
    }

    /// Convenience constructor; points are identified by their 0-based index.
    pub fn from_points(points: &[Vec<f64>], gamma: &[f64]) -> Result<Self> {
        let dim = points.first().ok_or(Error::Empty)?.len();
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        let coords: Vec<f64> = points.iter().flatten().copied().collect();
        let lines: Vec<usize> = (0..points.len()).collect();
        Self::new(dim, &coords, gamma, &lines)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn point(&self, rank: u32) -> &[f64] {
        let r = rank as usize;
        &self.coords[r * self.dim..(r + 1) * self.dim]
    }

    pub fn gamma(&self, rank: u32) -> f64 {
        self.gamma[rank as usize]
    }

    pub fn line(&self, rank: u32) -> usize {
        self.lines[rank as usize]
    }

    /// The first `len` points in order.
    pub fn prefix(&self, len: usize) -> OrderedPoints {
        OrderedPoints {
            dim: self.dim,
            coords: self.coords[..len * self.dim].to_vec(),
            gamma: self.gamma[..len].to_vec(),
            lines: self.lines[..len].to_vec(),
        }
    }
}

/// Simplices stored per dimension as flat, lexicographically sorted vertex
/// lists (`k + 1` entries per `k`-simplex).
#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct Levels(Vec<Vec<u32>>);

impl Levels {
    /// Face closure of `generators`, which may have any sizes.
    fn closure(generators: Vec<Vec<u32>>) -> Levels {
        let mut levels: Vec<Vec<u32>> = generators;
        while levels.last().is_some_and(Vec::is_empty) {
            levels.pop();
        }
        for k in (0..levels.len()).rev() {
            let width = k + 1;
            let data = std::mem::take(&mut levels[k]);
            let data = sort_dedup(data, width);
            if k > 0 {
                let mut facets = Vec::with_capacity(data.len() / width * width * k);
                for s in data.chunks_exact(width) {
                    for skip in 0..width {
                        facets.extend(
                            s.iter()
                                .enumerate()
                                .filter(|&(i, _)| i != skip)
                                .map(|(_, &v)| v),
                        );
                    }
                }
                levels[k - 1].extend(facets);
            }
            levels[k] = data;
        }
        Levels(levels)
    }

    pub(crate) fn top(&self) -> usize {
        self.0.len()
    }

    pub(crate) fn count(&self, k: usize) -> usize {
        self.0.get(k).map_or(0, |l| l.len() / (k + 1))
    }

    pub(crate) fn get(&self, k: usize, i: usize) -> &[u32] {
        &self.0[k][i * (k + 1)..(i + 1) * (k + 1)]
    }

    pub(crate) fn iter(&self, k: usize) -> std::slice::ChunksExact<'_, u32> {
        self.0
            .get(k)
            .map_or(&[][..], |l| l.as_slice())
            .chunks_exact(k + 1)
    }

    pub(crate) fn index_of(&self, vertices: &[u32]) -> Option<usize> {
        let k = vertices.len().checked_sub(1)?;
        let n = self.count(k);
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(k, mid).cmp(vertices) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    fn total(&self) -> usize {
        (0..self.top()).map(|k| self.count(k)).sum()
    }

    fn to_lists(&self) -> Vec<Vec<u32>> {
        (0..self.top())
            .flat_map(|k| self.iter(k).map(<[u32]>::to_vec))
            .collect()
    }
}

fn sort_dedup(data: Vec<u32>, width: usize) -> Vec<u32> {
    let n = data.len() / width;
    let row = |i: u32| &data[i as usize * width..(i as usize + 1) * width];
    let mut idx: Vec<u32> = (0..n as u32).collect();
    idx.par_sort_unstable_by(|&a, &b| row(a).cmp(row(b)));
    idx.dedup_by(|a, b| row(*a) == row(*b));
    let mut out = Vec::with_capacity(idx.len() * width);
    for i in idx {
        out.extend_from_slice(row(i));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stats {
    /// Number of simplices per dimension, from 0 up.
    pub counts: Vec<usize>,
    pub total: usize,
    /// Size of the Delaunay triangulation of all points, faces included.
    pub delaunay_size: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct IncrementalComplex {
    points: OrderedPoints,
    simplices: Levels,
    delaunay: Levels,
    conflict_pairs: usize,
}

impl IncrementalComplex {
    pub fn build(points: OrderedPoints) -> Result<IncrementalComplex> {
        let d = points.dim();
        let n = points.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut tri = Triangulation::new(d)?;
        let mut tops: Vec<u32> = Vec::new();
        let mut conflict_pairs = 0;
        for rank in 0..n as u32 {
            tri.insert_with(points.point(rank), |cell| {
                tops.extend_from_slice(cell);
                tops.push(rank);
                conflict_pairs += 1;
            })
            .map_err(|e| to_input_lines(e, &points))?;
        }

        let mut final_cells = vec![Vec::new(); d + 1];
        if tri.num_cells() == 0 {
            final_cells[n - 1] = (0..n as u32).collect();
        } else {
            final_cells[d] = tri.finite_cells().concat();
        }
        let delaunay = Levels::closure(final_cells.clone());

        let mut generators = final_cells;
        generators.push(tops);
        let simplices = Levels::closure(generators);

        Ok(IncrementalComplex {
            points,
            simplices,
            delaunay,
            conflict_pairs,
        })
    }

    pub fn points(&self) -> &OrderedPoints {
        &self.points
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    /// Number of nonempty dimension levels (highest simplex dimension + 1).
    pub fn num_levels(&self) -> usize {
        self.simplices.top()
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.count(k)
    }

    /// The `k`-simplices in lexicographic order.
    pub fn level(&self, k: usize) -> std::slice::ChunksExact<'_, u32> {
        self.simplices.iter(k)
    }

    pub fn simplex(&self, k: usize, i: usize) -> &[u32] {
        self.simplices.get(k, i)
    }

    /// Position of a sorted vertex list within its level.
    pub fn index_of(&self, vertices: &[u32]) -> Option<usize> {
        self.simplices.index_of(vertices)
    }

    pub fn contains(&self, sigma: &Simplex) -> bool {
        self.index_of(sigma.vertices()).is_some()
    }

    /// Every simplex as a sorted vertex list, by dimension then
    /// lexicographically.
    pub fn simplices(&self) -> Vec<Vec<u32>> {
        self.simplices.to_lists()
    }

    /// The Delaunay triangulation of all points, faces included, in the same
    /// order as [`IncrementalComplex::simplices`].
    pub fn delaunay_simplices(&self) -> Vec<Vec<u32>> {
        self.delaunay.to_lists()
    }

    /// Number of finite conflict pairs met during construction.
    pub fn conflict_pairs(&self) -> usize {
        self.conflict_pairs
    }

    pub fn stats(&self) -> Stats {
        let counts: Vec<usize> = (0..self.simplices.top()).map(|k| self.count(k)).collect();
        let total = self.simplices.total();
        let delaunay_size = self.delaunay.total();
        Stats {
            counts,
            total,
            delaunay_size,
            ratio: total as f64 / delaunay_size as f64,
        }
    }
}

fn to_input_lines(e: Error, points: &OrderedPoints) -> Error {
    match e {
        Error::Degenerate { points: ranks } => {
            let mut lines: Vec<usize> = ranks.into_iter().map(|r| points.line(r as u32)).collect();
            lines.sort_unstable();
            Error::Degenerate { points: lines }
        }
        Error::DuplicatePoint { first, second } => {
            let (a, b) = (points.line(first as u32), points.line(second as u32));
            Error::DuplicatePoint {
                first: a.min(b),
                second: a.max(b),
            }
        }
        e => e,
    }
}
