//! Incremental Delaunay triangulation in R^d (Bowyer-Watson) with a single
//! symbolic vertex at infinity.
//!
//! Every cell stores `d + 1` vertex ids and the neighbor opposite each of
//! them. Finite cells are positively oriented. An infinite cell stores the
//! infinite vertex in place of one finite vertex; it is oriented so that
//! substituting a point strictly beyond its hull facet for the infinite vertex
//! yields a positive orientation.
//!
//! The first `d + 1` points are held back until they span a full-dimensional
//! simplex; any subset of them is trivially Delaunay.

use crate::error::{Error, Result};
use crate::predicates::{in_sphere_oriented, orientation_unchecked, SideOfSphere, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use std::cmp::Ordering;

/// Vertex id of the symbolic point at infinity.
pub const INFINITE: u32 = u32::MAX;

pub type CellId = u32;

const NO_CELL: CellId = u32::MAX;

type Key = SmallVec<[u32; 8]>;

/// A finite `d`-cell removed by an insertion, together with the vertex whose
/// insertion removed it. `cell_vertices` is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConflictPair {
    pub cell_vertices: Vec<u32>,
    pub inserted: u32,
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    dim: usize,
    coords: Vec<f64>,
    positions: FxHashMap<Vec<u64>, u32>,
    // cell storage, `dim + 1` slots per cell
    verts: Vec<u32>,
    nbrs: Vec<CellId>,
    alive: Vec<bool>,
    mark: Vec<u32>,
    epoch: u32,
    free: Vec<CellId>,
    live_cells: usize,
    hint: CellId,
    rng: ChaCha8Rng,
}

fn position_key(p: &[f64]) -> Vec<u64> {
    // -0.0 and 0.0 are the same point
    p.iter()
        .map(|&x| if x == 0.0 { 0 } else { x.to_bits() })
        .collect()
}

impl Triangulation {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Triangulation {
            dim,
            coords: Vec::new(),
            positions: FxHashMap::default(),
            verts: Vec::new(),
            nbrs: Vec::new(),
            alive: Vec::new(),
            mark: Vec::new(),
            epoch: 0,
            free: Vec::new(),
            live_cells: 0,
            hint: NO_CELL,
            rng: ChaCha8Rng::seed_from_u64(0x5eed),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn point(&self, v: u32) -> &[f64] {
        let d = self.dim;
        &self.coords[v as usize * d..(v as usize + 1) * d]
    }

    /// Number of live cells, infinite ones included.
    pub fn num_cells(&self) -> usize {
        self.live_cells
    }

    pub fn num_finite_cells(&self) -> usize {
        self.live_cell_ids()
            .filter(|&c| !self.is_infinite(c))
            .count()
    }

    pub fn cell_vertices(&self, c: CellId) -> &[u32] {
        let k = self.dim + 1;
        &self.verts[c as usize * k..(c as usize + 1) * k]
    }

    pub fn cell_neighbors(&self, c: CellId) -> &[CellId] {
        let k = self.dim + 1;
        &self.nbrs[c as usize * k..(c as usize + 1) * k]
    }

    pub fn is_infinite(&self, c: CellId) -> bool {
        self.cell_vertices(c).contains(&INFINITE)
    }

    fn live_cell_ids(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.alive.len() as CellId).filter(|&c| self.alive[c as usize])
    }

    /// Sorted vertex lists of all finite `d`-cells.
    pub fn finite_cells(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self
            .live_cell_ids()
            .filter(|&c| !self.is_infinite(c))
            .map(|c| {
                let mut v = self.cell_vertices(c).to_vec();
                v.sort_unstable();
                v
            })
            .collect();
        out.sort();
        out
    }

    /// All simplices of the current Delaunay triangulation, faces included,
    /// as sorted vertex lists in sorted order.
    pub fn finite_simplices(&self) -> Vec<Vec<u32>> {
        let tops: Vec<Vec<u32>> = if self.live_cells == 0 {
            let n = self.num_vertices() as u32;
            if n == 0 {
                return Vec::new();
            }
            vec![(0..n).collect()]
        } else {
            self.finite_cells()
        };
        let mut seen: std::collections::BTreeSet<Vec<u32>> = Default::default();
        for top in &tops {
            for mask in 1u32..(1 << top.len()) {
                seen.insert(
                    top.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect(),
                );
            }
        }
        seen.into_iter().collect()
    }

    fn cell_points<'a>(
        &'a self,
        c: CellId,
        replace: Option<(usize, &'a [f64])>,
    ) -> SmallVec<[&'a [f64]; 6]> {
        self.cell_vertices(c)
            .iter()
            .enumerate()
            .map(|(i, &v)| match replace {
                Some((j, p)) if i == j => p,
                _ => self.point(v),
            })
            .collect()
    }

    fn degenerate(&self, c: CellId, v: u32) -> Error {
        let mut points: Vec<usize> = self
            .cell_vertices(c)
            .iter()
            .filter(|&&u| u != INFINITE)
            .map(|&u| u as usize)
            .collect();
        points.push(v as usize);
        points.sort_unstable();
        Error::Degenerate { points }
    }

    /// Whether `p` (to become vertex `v`) conflicts with cell `c`.
    fn conflicts(&self, c: CellId, p: &[f64], v: u32) -> Result<bool> {
        if let Some(i) = self.cell_vertices(c).iter().position(|&u| u == INFINITE) {
            let pts = self.cell_points(c, Some((i, p)));
            return match orientation_unchecked(&pts) {
                Sign::Positive => Ok(true),
                Sign::Negative => Ok(false),
                Sign::Zero => Err(self.degenerate(c, v)),
            };
        }
        let pts = self.cell_points(c, None);
        match in_sphere_oriented(&pts, p, Ordering::Greater) {
            SideOfSphere::Inside => Ok(true),
            SideOfSphere::Outside => Ok(false),
            SideOfSphere::On => Err(self.degenerate(c, v)),
        }
    }

    fn check_new_point(&self, p: &[f64]) -> Result<Vec<u64>> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        let key = position_key(p);
        if let Some(&first) = self.positions.get(&key) {
            return Err(Error::DuplicatePoint {
                first: first as usize,
                second: self.num_vertices(),
            });
        }
        Ok(key)
    }

    /// A cell in conflict with `p`: remembering stochastic visibility walk
    /// from the most recent insertion, then a linear scan once the step
    /// budget of four times the cell count is spent.
    pub fn locate(&mut self, p: &[f64]) -> Result<CellId> {
        self.check_new_point(p)?;
        if self.live_cells == 0 {
            return Err(Error::InvalidArgument(
                "locate needs a full-dimensional triangulation".into(),
            ));
        }
        self.locate_unchecked(p, self.num_vertices() as u32)
    }

    fn locate_unchecked(&mut self, p: &[f64], v: u32) -> Result<CellId> {
        if let Some(c) = self.walk(p, v)? {
            if self.conflicts(c, p, v)? {
                return Ok(c);
            }
        }
        for c in self.live_cell_ids().collect::<Vec<_>>() {
            if self.conflicts(c, p, v)? {
                return Ok(c);
            }
        }
        unreachable!("every point conflicts with some cell")
    }

    fn walk(&mut self, p: &[f64], v: u32) -> Result<Option<CellId>> {
        let k = self.dim + 1;
        let mut c = if self.hint != NO_CELL && self.alive[self.hint as usize] {
            self.hint
        } else {
            self.live_cell_ids()
                .next()
                .expect("triangulation has cells")
        };
        let mut prev = NO_CELL;
        for _ in 0..4 * self.live_cells {
            if let Some(i) = self.cell_vertices(c).iter().position(|&u| u == INFINITE) {
                if self.conflicts(c, p, v)? {
                    return Ok(Some(c));
                }
                prev = c;
                c = self.cell_neighbors(c)[i];
                continue;
            }
            let offset = self.rng.gen_range(0..k);
            let mut next = None;
            for j in 0..k {
                let i = (j + offset) % k;
                let n = self.cell_neighbors(c)[i];
                if n == prev {
                    continue;
                }
                let pts = self.cell_points(c, Some((i, p)));
                if orientation_unchecked(&pts) == Sign::Negative {
                    next = Some(n);
                    break;
                }
            }
            match next {
                Some(n) => {
                    prev = c;
                    c = n;
                }
                None => return Ok(Some(c)),
            }
        }
        Ok(None)
    }

    fn alloc(&mut self, vertices: &[u32]) -> CellId {
        let k = self.dim + 1;
        self.live_cells += 1;
        if let Some(c) = self.free.pop() {
            let at = c as usize * k;
            self.verts[at..at + k].copy_from_slice(vertices);
            self.nbrs[at..at + k].fill(NO_CELL);
            self.alive[c as usize] = true;
            return c;
        }
        let c = self.alive.len() as CellId;
        self.verts.extend_from_slice(vertices);
        self.nbrs.extend(std::iter::repeat_n(NO_CELL, k));
        self.alive.push(true);
        self.mark.push(0);
        c
    }

    fn kill(&mut self, c: CellId) {
        self.alive[c as usize] = false;
        self.live_cells -= 1;
        self.free.push(c);
    }

    fn facet_key(&self, c: CellId, skip: usize) -> Key {
        let mut key: Key = self
            .cell_vertices(c)
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &u)| u)
            .collect();
        key.sort_unstable();
        key
    }

    /// Pairs up the still-unlinked facets of `cells` by their vertex sets.
    fn link(&mut self, cells: &[CellId]) {
        let k = self.dim + 1;
        let mut open: FxHashMap<Key, (CellId, usize)> = FxHashMap::default();
        for &c in cells {
            for i in 0..k {
                if self.cell_neighbors(c)[i] != NO_CELL {
                    continue;
                }
                let key = self.facet_key(c, i);
                match open.remove(&key) {
                    Some((o, j)) => {
                        self.nbrs[c as usize * k + i] = o;
                        self.nbrs[o as usize * k + j] = c;
                    }
                    None => {
                        open.insert(key, (c, i));
                    }
                }
            }
        }
        debug_assert!(open.is_empty(), "unmatched facets");
    }

    fn build_initial(&mut self) -> Result<()> {
        let d = self.dim;
        let mut first: Vec<u32> = (0..=d as u32).collect();
        let pts: Vec<&[f64]> = first.iter().map(|&v| self.point(v)).collect();
        match orientation_unchecked(&pts) {
            Sign::Zero => {
                return Err(Error::Degenerate {
                    points: (0..=d).collect(),
                })
            }
            Sign::Negative => first.swap(0, 1),
            Sign::Positive => {}
        }
        let mut cells = vec![self.alloc(&first)];
        for i in 0..=d {
            let mut v = first.clone();
            v[i] = INFINITE;
            v.swap(i, if i == 0 { 1 } else { 0 });
            cells.push(self.alloc(&v));
        }
        self.link(&cells);
        self.hint = cells[0];
        Ok(())
    }

    /// Inserts `p`, reporting every finite cell it removes to `on_conflict`
    /// (as a sorted vertex list) before the cell is deleted. Returns the new
    /// vertex id.
    pub fn insert_with(&mut self, p: &[f64], mut on_conflict: impl FnMut(&[u32])) -> Result<u32> {
        let key = self.check_new_point(p)?;
        let v = self.num_vertices() as u32;
        let k = self.dim + 1;

        if self.live_cells == 0 {
            self.coords.extend_from_slice(p);
            self.positions.insert(key, v);
            if self.num_vertices() == k {
                if let Err(e) = self.build_initial() {
                    self.coords.truncate(self.coords.len() - self.dim);
                    self.positions.remove(&position_key(p));
                    return Err(e);
                }
            }
            return Ok(v);
        }

        let seed = self.locate_unchecked(p, v)?;

        // conflict zone by breadth-first search
        self.epoch += 2;
        let (inside, outside) = (self.epoch, self.epoch + 1);
        self.mark[seed as usize] = inside;
        let mut zone = vec![seed];
        let mut boundary: Vec<(CellId, usize, CellId)> = Vec::new();
        let mut head = 0;
        while head < zone.len() {
            let c = zone[head];
            head += 1;
            for i in 0..k {
                let n = self.cell_neighbors(c)[i];
                let m = self.mark[n as usize];
                if m == inside {
                    continue;
                }
                if m != outside {
                    if self.conflicts(n, p, v)? {
                        self.mark[n as usize] = inside;
                        zone.push(n);
                        continue;
                    }
                    self.mark[n as usize] = outside;
                }
                boundary.push((c, i, n));
            }
        }

        for &c in &zone {
            if !self.is_infinite(c) {
                let mut cell = self.cell_vertices(c).to_vec();
                cell.sort_unstable();
                on_conflict(&cell);
            }
        }

        // new cells: each boundary facet coned to v
        let planned: Vec<(SmallVec<[u32; 6]>, usize, CellId, usize)> = boundary
            .iter()
            .map(|&(c, i, n)| {
                let mut cell: SmallVec<[u32; 6]> = self.cell_vertices(c).into();
                cell[i] = v;
                let mirror = self
                    .cell_neighbors(n)
                    .iter()
                    .position(|&x| x == c)
                    .expect("symmetric neighbors");
                (cell, i, n, mirror)
            })
            .collect();
        for &c in &zone {
            self.kill(c);
        }
        let mut created = Vec::with_capacity(planned.len());
        for (cell, i, n, mirror) in planned {
            let c = self.alloc(&cell);
            self.nbrs[c as usize * k + i] = n;
            self.nbrs[n as usize * k + mirror] = c;
            created.push(c);
        }
        self.link(&created);

        self.coords.extend_from_slice(p);
        self.positions.insert(key, v);
        self.hint = created[0];
        Ok(v)
    }

    /// Inserts `p` and returns its finite conflict pairs.
    pub fn insert(&mut self, p: &[f64]) -> Result<Vec<ConflictPair>> {
        let mut cells = Vec::new();
        let v = self.insert_with(p, |c| cells.push(c.to_vec()))?;
        Ok(cells
            .into_iter()
            .map(|cell_vertices| ConflictPair {
                cell_vertices,
                inserted: v,
            })
            .collect())
    }

    /// Structural self-check: neighbor symmetry, shared facets, and the
    /// orientation conventions. Returns a description of the first problem.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let k = self.dim + 1;
        let mut count = 0;
        for c in self.live_cell_ids() {
            count += 1;
            let vs = self.cell_vertices(c);
            for i in 0..k {
                let n = self.cell_neighbors(c)[i];
                if n == NO_CELL || !self.alive[n as usize] {
                    return Err(format!("cell {c} has a dead or missing neighbor {i}"));
                }
                let back: Vec<usize> = (0..k).filter(|&j| self.cell_neighbors(n)[j] == c).collect();
                if back.len() != 1 {
                    return Err(format!("cells {c} and {n} are not mutual neighbors"));
                }
                if self.facet_key(c, i) != self.facet_key(n, back[0]) {
                    return Err(format!("cells {c} and {n} disagree on their shared facet"));
                }
            }
            match vs.iter().position(|&u| u == INFINITE) {
                None => {
                    let pts = self.cell_points(c, None);
                    if orientation_unchecked(&pts) != Sign::Positive {
                        return Err(format!("finite cell {c} is not positively oriented"));
                    }
                }
                Some(i) => {
                    // the opposite vertex of the finite neighbor lies on the
                    // inner side of the hull facet
                    let n = self.cell_neighbors(c)[i];
                    let j = (0..k).find(|&j| self.cell_neighbors(n)[j] == c).unwrap();
                    let inner = self.point(self.cell_vertices(n)[j]);
                    let pts = self.cell_points(c, Some((i, inner)));
                    if orientation_unchecked(&pts) != Sign::Negative {
                        return Err(format!("infinite cell {c} has the wrong orientation"));
                    }
                }
            }
        }
        if count != self.live_cells {
            return Err("live cell count out of sync".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(dim: usize, pts: &[&[f64]]) -> (Triangulation, Vec<Vec<ConflictPair>>) {
        let mut t = Triangulation::new(dim).unwrap();
        let pairs = pts.iter().map(|p| t.insert(p).unwrap()).collect();
        t.check_consistency().unwrap();
        (t, pairs)
    }

    #[test]
    fn new_triangulation_is_empty() {
        let t = Triangulation::new(2).unwrap();
        assert_eq!(t.num_vertices(), 0);
        assert_eq!(t.num_finite_cells(), 0);
        assert!(t.finite_simplices().is_empty());
        assert!(matches!(Triangulation::new(0), Err(Error::ZeroDimension)));
    }

    #[test]
    fn first_simplex_and_hull_cells() {
        let (t, _) = build(2, &[&[0.0, 0.0], &[4.0, 0.0], &[0.0, 4.0]]);
        assert_eq!(t.num_finite_cells(), 1);
        assert_eq!(t.num_cells(), 4);
        assert_eq!(t.finite_simplices().len(), 7);
    }

    #[test]
    fn fewer_than_d_plus_one_points() {
        let (t, _) = build(2, &[&[0.0, 0.0], &[4.0, 0.0]]);
        assert_eq!(t.num_finite_cells(), 0);
        assert_eq!(t.finite_simplices(), vec![vec![0], vec![0, 1], vec![1]]);
    }

    #[test]
    fn interior_insertion_in_the_plane() {
        let (mut t, _) = build(2, &[&[0.0, 0.0], &[4.0, 0.0], &[0.0, 4.0]]);
        let c = t.locate(&[1.0, 1.0]).unwrap();
        assert!(!t.is_infinite(c));
        let pairs = t.insert(&[1.0, 1.0]).unwrap();
        assert_eq!(
            pairs,
            vec![ConflictPair {
                cell_vertices: vec![0, 1, 2],
                inserted: 3
            }]
        );
        assert_eq!(t.num_finite_cells(), 3);
        t.check_consistency().unwrap();
    }

    #[test]
    fn locate_outside_hull_returns_infinite_cell() {
        let (mut t, _) = build(2, &[&[0.0, 0.0], &[4.0, 0.0], &[0.0, 4.0]]);
        let c = t.locate(&[10.0, -3.0]).unwrap();
        assert!(t.is_infinite(c));
    }

    #[test]
    fn one_dimensional_conflicts() {
        let (_, pairs) = build(1, &[&[0.0], &[2.0], &[1.0]]);
        assert_eq!(
            pairs[2],
            vec![ConflictPair {
                cell_vertices: vec![0, 1],
                inserted: 2
            }]
        );
        let (t, pairs) = build(1, &[&[0.0], &[1.0], &[2.0]]);
        assert!(pairs[2].is_empty());
        assert_eq!(t.finite_cells(), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn duplicates_and_degeneracy_are_rejected() {
        let (mut t, _) = build(2, &[&[0.0, 0.0], &[4.0, 0.0], &[0.0, 4.0]]);
        assert!(matches!(
            t.insert(&[4.0, 0.0]),
            Err(Error::DuplicatePoint {
                first: 1,
                second: 3
            })
        ));
        assert!(matches!(
            t.insert(&[-0.0, 0.0]),
            Err(Error::DuplicatePoint { first: 0, .. })
        ));
        // cocircular with the first triangle
        assert!(matches!(
            t.insert(&[4.0, 4.0]),
            Err(Error::Degenerate { .. })
        ));

        let mut t = Triangulation::new(2).unwrap();
        t.insert(&[0.0, 0.0]).unwrap();
        t.insert(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            t.insert(&[2.0, 2.0]),
            Err(Error::Degenerate { .. })
        ));
        // a failed insertion leaves the triangulation untouched
        assert_eq!(t.num_vertices(), 2);
    }

    #[test]
    fn deterministic_on_repeat() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
            .collect();
        let run = || {
            let mut t = Triangulation::new(2).unwrap();
            let mut all = Vec::new();
            for p in &pts {
                all.push(t.insert(p).unwrap());
            }
            (t.finite_cells(), all)
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn random_three_dimensional_runs_stay_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut t = Triangulation::new(3).unwrap();
        for _ in 0..400 {
            let p: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
            t.insert(&p).unwrap();
        }
        t.check_consistency().unwrap();
        assert!(t.num_finite_cells() > 400);
    }
}
