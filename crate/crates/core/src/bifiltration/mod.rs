//! Bigraded chain complexes over `[0, inf) x R` built from an incremental
//! Delaunay complex.
//!
//! A simplex enters at `(radius, gamma(max vertex))`, where the radius is
//! either the minimum enclosing ball radius (Delaunay-Cech) or the smallest
//! witness sphere radius (Delaunay).

mod grading;
mod scc2020;

pub use grading::{incremental_radii, meb_radii, Radii};
pub use scc2020::{read_scc2020, read_scc2020_with_comments, write_scc2020};

use crate::complex::IncrementalComplex;
use crate::error::Result;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bigrade {
    pub r: f64,
    pub s: f64,
}

impl Bigrade {
    /// Product order on the grading poset.
    pub fn le(&self, other: &Bigrade) -> bool {
        self.r <= other.r && self.s <= other.s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradedCell {
    pub grade: Bigrade,
    /// Indices of the facets within the block one dimension down, ascending.
    pub boundary: Vec<u32>,
}

/// Cells grouped by dimension: `blocks[k]` holds the `k`-cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GradedComplex {
    pub blocks: Vec<Vec<GradedCell>>,
}

impl GradedComplex {
    pub fn num_cells(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// Grades every simplex of `c` by `(radius, gamma(max))` and orders each
/// block by `(r, s, vertex list)`.
pub fn assemble(c: &IncrementalComplex, radii: &Radii) -> GradedComplex {
    let pts = c.points();
    let mut blocks = Vec::with_capacity(c.num_levels());
    let mut prev_position: Vec<u32> = Vec::new();
    for k in 0..c.num_levels() {
        let grades: Vec<Bigrade> = c
            .level(k)
            .enumerate()
            .map(|(i, s)| Bigrade {
                r: radii.radius(k, i),
                s: pts.gamma(*s.last().unwrap()),
            })
            .collect();
        // lexicographic index breaks ties, since levels are stored in that order
        let mut order: Vec<u32> = (0..grades.len() as u32).collect();
        order.sort_by(|&a, &b| {
            let (ga, gb) = (grades[a as usize], grades[b as usize]);
            ga.r.total_cmp(&gb.r)
                .then(ga.s.total_cmp(&gb.s))
                .then(a.cmp(&b))
        });
        let mut position = vec![0u32; order.len()];
        for (p, &i) in order.iter().enumerate() {
            position[i as usize] = p as u32;
        }
        let block = order
            .iter()
            .map(|&i| {
                let s = c.simplex(k, i as usize);
                let mut boundary: Vec<u32> = if k == 0 {
                    Vec::new()
                } else {
                    (0..=k)
                        .map(|skip| {
                            let facet: Vec<u32> = s
                                .iter()
                                .enumerate()
                                .filter(|&(j, _)| j != skip)
                                .map(|(_, &v)| v)
                                .collect();
                            prev_position[c.index_of(&facet).expect("complex is face-closed")]
                        })
                        .collect()
                };
                boundary.sort_unstable();
                GradedCell {
                    grade: grades[i as usize],
                    boundary,
                }
            })
            .collect();
        blocks.push(block);
        prev_position = position;
    }
    GradedComplex { blocks }
}

/// Delaunay-Cech bifiltration: minimum enclosing ball radius.
pub fn grade_delcech(c: &IncrementalComplex) -> GradedComplex {
    assemble(c, &meb_radii(c))
}

/// Delaunay bifiltration: smallest witness sphere radius.
pub fn grade_del(c: &IncrementalComplex) -> Result<GradedComplex> {
    Ok(assemble(c, &incremental_radii(c)?))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// A facet enters after the cell it bounds.
    Monotonicity {
        dim: usize,
        cell: usize,
        facet: usize,
    },
    /// A `k`-cell with other than `k + 1` facets.
    Cardinality {
        dim: usize,
        cell: usize,
        found: usize,
    },
    FacetOutOfRange {
        dim: usize,
        cell: usize,
        facet: usize,
    },
    /// The boundary of the boundary is nonzero over GF(2).
    NotACycle { dim: usize, cell: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Monotonicity { dim, cell, facet } => {
                write!(f, "{dim}-cell {cell}: facet {facet} has a larger grade")
            }
            Violation::Cardinality { dim, cell, found } => {
                write!(f, "{dim}-cell {cell}: {found} facets, expected {}", dim + 1)
            }
            Violation::FacetOutOfRange { dim, cell, facet } => {
                write!(f, "{dim}-cell {cell}: facet index {facet} out of range")
            }
            Violation::NotACycle { dim, cell } => {
                write!(f, "{dim}-cell {cell}: boundary of boundary is nonzero")
            }
        }
    }
}

/// Checks grade monotonicity, boundary sizes and `d o d = 0`.
pub fn validate(g: &GradedComplex) -> Vec<Violation> {
    let mut out = Vec::new();
    for (dim, block) in g.blocks.iter().enumerate() {
        let below: &[GradedCell] = if dim == 0 { &[] } else { &g.blocks[dim - 1] };
        for (cell, c) in block.iter().enumerate() {
            let expected = if dim == 0 { 0 } else { dim + 1 };
            if c.boundary.len() != expected {
                out.push(Violation::Cardinality {
                    dim,
                    cell,
                    found: c.boundary.len(),
                });
            }
            let mut in_range = true;
            for &f in &c.boundary {
                match below.get(f as usize) {
                    None => {
                        in_range = false;
                        out.push(Violation::FacetOutOfRange {
                            dim,
                            cell,
                            facet: f as usize,
                        });
                    }
                    Some(facet) if !facet.grade.le(&c.grade) => out.push(Violation::Monotonicity {
                        dim,
                        cell,
                        facet: f as usize,
                    }),
                    Some(_) => {}
                }
            }
            if dim >= 2 && in_range {
                let mut faces: Vec<u32> = c
                    .boundary
                    .iter()
                    .flat_map(|&f| below[f as usize].boundary.iter().copied())
                    .collect();
                faces.sort_unstable();
                let odd = faces.chunk_by(|a, b| a == b).any(|run| run.len() % 2 == 1);
                if odd {
                    out.push(Violation::NotACycle { dim, cell });
                }
            }
        }
    }
    out
}
