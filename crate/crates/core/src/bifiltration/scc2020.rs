//! Plain-text `scc2020` chain complexes.
//!
//! ```text
//! scc2020
//! # optional comments
//! 2
//! 1 2 0
//! 0.5 2 ; 0 1
//! 0 1 ;
//! 0 2 ;
//! ```
//!
//! The counts line lists block sizes from the top dimension down, then a `0`
//! for the empty block below the vertices. Each cell line is its bigrade, a
//! `;`, and the indices of its facets in the next block.

use super::{Bigrade, GradedCell, GradedComplex};
use crate::error::{Error, Result};
use std::io::{self, BufRead, Write};

pub fn write_scc2020<W: Write>(g: &GradedComplex, out: W, comments: &[String]) -> io::Result<()> {
    let mut w = io::BufWriter::new(out);
    writeln!(w, "scc2020")?;
    for line in comments.iter().flat_map(|c| c.lines()) {
        if line.starts_with('#') {
            writeln!(w, "{line}")?;
        } else if line.is_empty() {
            writeln!(w, "#")?;
        } else {
            writeln!(w, "# {line}")?;
        }
    }
    writeln!(w, "2")?;
    let counts: Vec<String> = g
        .blocks
        .iter()
        .rev()
        .map(|b| b.len().to_string())
        .chain(std::iter::once("0".to_string()))
        .collect();
    writeln!(w, "{}", counts.join(" "))?;
    for block in g.blocks.iter().rev() {
        for cell in block {
            write!(w, "{} {} ;", cell.grade.r, cell.grade.s)?;
            for b in &cell.boundary {
                write!(w, " {b}")?;
            }
            writeln!(w)?;
        }
    }
    w.flush()
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_scc2020<R: BufRead>(input: R) -> Result<GradedComplex> {
    read_scc2020_with_comments(input).map(|(g, _)| g)
}

/// Also returns the comment lines verbatim, `#` included.
pub fn read_scc2020_with_comments<R: BufRead>(input: R) -> Result<(GradedComplex, Vec<String>)> {
    let mut comments = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            comments.push(line);
        } else if !trimmed.is_empty() {
            lines.push((i + 1, trimmed.to_string()));
        }
    }
    let mut it = lines.into_iter();

    match it.next() {
        Some((_, h)) if h == "scc2020" => {}
        Some((n, _)) => return Err(parse_err(n, "missing scc2020 header")),
        None => return Err(parse_err(1, "missing scc2020 header")),
    }
    let (n, params) = it
        .next()
        .ok_or_else(|| parse_err(0, "missing parameter count"))?;
    if params != "2" {
        return Err(parse_err(
            n,
            format!("expected 2 parameters, found `{params}`"),
        ));
    }
    let (n, counts) = it
        .next()
        .ok_or_else(|| parse_err(0, "missing block counts"))?;
    let mut sizes: Vec<usize> = counts
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(n, format!("bad block count `{t}`")))
        })
        .collect::<Result<_>>()?;
    if sizes.pop() != Some(0) {
        return Err(parse_err(n, "block counts must end with 0"));
    }
    sizes.reverse();

    let mut blocks: Vec<Vec<GradedCell>> = vec![Vec::new(); sizes.len()];
    for k in (0..sizes.len()).rev() {
        let below = if k == 0 { 0 } else { sizes[k - 1] };
        for _ in 0..sizes[k] {
            let (n, line) = it.next().ok_or_else(|| {
                parse_err(
                    0,
                    format!("block of dimension {k} has fewer than {} cells", sizes[k]),
                )
            })?;
            let (grade, boundary) = line
                .split_once(';')
                .ok_or_else(|| parse_err(n, "missing `;`"))?;
            let values: Vec<f64> = grade
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| parse_err(n, format!("bad grade `{t}`")))
                })
                .collect::<Result<_>>()?;
            let [r, s] = values[..] else {
                return Err(parse_err(
                    n,
                    format!("expected 2 grade values, found {}", values.len()),
                ));
            };
            let boundary: Vec<u32> = boundary
                .split_whitespace()
                .map(|t| {
                    let f: u32 = t
                        .parse()
                        .map_err(|_| parse_err(n, format!("bad facet index `{t}`")))?;
                    if f as usize >= below {
                        return Err(parse_err(
                            n,
                            format!("facet index {f} out of range (block has {below} cells)"),
                        ));
                    }
                    Ok(f)
                })
                .collect::<Result<_>>()?;
            blocks[k].push(GradedCell {
                grade: Bigrade { r, s },
                boundary,
            });
        }
    }
    if let Some((n, _)) = it.next() {
        return Err(parse_err(n, "more cells than the block counts announce"));
    }
    Ok((GradedComplex { blocks }, comments))
}
