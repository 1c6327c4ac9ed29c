//! Betti numbers over GF(2) by boundary-matrix column reduction.

use std::collections::HashMap;

/// Boundary columns of a simplex list, as sorted indices into the list, in
/// the given order. Fails if a facet is missing.
fn boundaries(simplices: &[Vec<u32>]) -> Result<Vec<Vec<usize>>, String> {
    let index: HashMap<&[u32], usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    simplices
        .iter()
        .map(|s| {
            if s.len() < 2 {
                return Ok(Vec::new());
            }
            let mut col: Vec<usize> = (0..s.len())
                .map(|skip| {
                    let facet: Vec<u32> = s
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    index
                        .get(facet.as_slice())
                        .copied()
                        .ok_or_else(|| format!("facet {facet:?} of {s:?} is missing"))
                })
                .collect::<Result<_, _>>()?;
            col.sort_unstable();
            Ok(col)
        })
        .collect()
}

fn add_mod2(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Incremental Betti tracking: simplices are added one at a time, each
/// either creating a cycle or killing one.
struct Reducer {
    pivots: HashMap<usize, Vec<usize>>,
    betti: Vec<i64>,
}

impl Reducer {
    fn new(up_to: usize) -> Self {
        Reducer {
            pivots: HashMap::new(),
            betti: vec![0; up_to + 1],
        }
    }

    fn add(&mut self, dim: usize, mut col: Vec<usize>) {
        while let Some(&low) = col.last() {
            match self.pivots.get(&low) {
                Some(other) => col = add_mod2(&col, other),
                None => break,
            }
        }
        match col.last() {
            None => {
                if let Some(b) = self.betti.get_mut(dim) {
                    *b += 1;
                }
            }
            Some(&low) => {
                self.pivots.insert(low, col);
                if let Some(b) = self.betti.get_mut(dim - 1) {
                    *b -= 1;
                }
            }
        }
    }
}

fn sort_by_dim(simplices: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut sorted: Vec<Vec<u32>> = simplices
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.sort_unstable();
            s
        })
        .collect();
    sorted.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    sorted.dedup();
    sorted
}

/// `beta_0 .. beta_up_to` of a face-closed complex.
pub fn betti_gf2(simplices: &[Vec<u32>], up_to: usize) -> Result<Vec<usize>, String> {
    let sorted = sort_by_dim(simplices);
    let cols = boundaries(&sorted)?;
    let mut r = Reducer::new(up_to);
    for (s, col) in sorted.iter().zip(cols) {
        r.add(s.len() - 1, col);
    }
    Ok(r.betti.into_iter().map(|b| b as usize).collect())
}

/// Betti numbers of every sublevel set of a filtration. `values[i]` is the
/// integer entry time of `simplices[i]`; faces must not enter after their
/// cofaces. Returns one vector `beta_0 .. beta_up_to` per time
/// `0 ..= max_time`.
pub fn betti_curve(
    simplices: &[Vec<u32>],
    values: &[usize],
    up_to: usize,
    max_time: usize,
) -> Result<Vec<Vec<usize>>, String> {
    let mut order: Vec<usize> = (0..simplices.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .cmp(&values[b])
            .then(simplices[a].len().cmp(&simplices[b].len()))
            .then(simplices[a].cmp(&simplices[b]))
    });
    let sorted: Vec<Vec<u32>> = order.iter().map(|&i| simplices[i].clone()).collect();
    let cols = boundaries(&sorted)?;
    for (pos, col) in cols.iter().enumerate() {
        if col.iter().any(|&f| f > pos) {
            return Err(format!("a face of {:?} enters after it", sorted[pos]));
        }
    }
    let mut r = Reducer::new(up_to);
    let mut out = Vec::with_capacity(max_time + 1);
    let mut next = 0;
    for t in 0..=max_time {
        while next < order.len() && values[order[next]] <= t {
            r.add(sorted[next].len() - 1, cols[next].clone());
            next += 1;
        }
        out.push(r.betti.iter().map(|&b| b as usize).collect());
    }
    Ok(out)
}
