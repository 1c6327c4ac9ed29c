use super::{dist_sq, linalg, Sphere};
use crate::error::{Error, Result};

/// Minimum enclosing ball together with the input indices of the points that
/// determine it.
#[derive(Debug, Clone, PartialEq)]
pub struct MinBall {
    pub sphere: Sphere,
    pub support: Vec<usize>,
}

const CONTAINS_TOL: f64 = 1e-12;

struct Welzl<'a> {
    pts: &'a [&'a [f64]],
    dim: usize,
}

impl Welzl<'_> {
    fn ball_of(&self, support: &[usize]) -> Option<Sphere> {
        match support {
            [] => None,
            [p] => Some(Sphere {
                center: self.pts[*p].to_vec(),
                radius_sq: 0.0,
            }),
            _ => {
                let owned: Vec<Vec<f64>> = support.iter().map(|&i| self.pts[i].to_vec()).collect();
                let (center, radius_sq) = linalg::circumsphere(&owned)?;
                Some(Sphere { center, radius_sq })
            }
        }
    }

    fn contains(ball: &Option<Sphere>, p: &[f64]) -> bool {
        match ball {
            None => false,
            Some(s) => dist_sq(&s.center, p) <= s.radius_sq * (1.0 + CONTAINS_TOL),
        }
    }

    /// Smallest ball enclosing `order[..end]` with `support` on its boundary.
    fn solve(&self, order: &mut [usize], end: usize, support: &mut Vec<usize>) -> Option<Sphere> {
        let mut ball = self.ball_of(support);
        if support.len() == self.dim + 1 {
            return ball;
        }
        for i in 0..end {
            let p = order[i];
            if Self::contains(&ball, self.pts[p]) {
                continue;
            }
            support.push(p);
            let candidate = self.solve(order, i, support);
            support.pop();
            // A numerically singular support set leaves the previous ball in
            // place; `p` is then only missed by rounding noise.
            if let Some(c) = candidate {
                ball = Some(c);
                order[..=i].rotate_right(1);
            }
        }
        ball
    }
}

/// Minimum enclosing ball with its support set, via move-to-front Welzl.
pub fn meb_with_support(pts: &[&[f64]]) -> Result<MinBall> {
    let first = pts.first().ok_or(Error::Empty)?;
    let dim = first.len();
    if let Some(p) = pts.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    let solver = Welzl { pts, dim };
    let mut order: Vec<usize> = (0..pts.len()).collect();
    let mut support = Vec::with_capacity(dim + 1);
    let sphere = solver
        .solve(&mut order, pts.len(), &mut support)
        .expect("nonempty input yields a ball");
    // support: the input points on the boundary of the final ball
    let support = (0..pts.len())
        .filter(|&i| {
            let d = dist_sq(&sphere.center, pts[i]);
            (d - sphere.radius_sq).abs() <= 1e-9 * sphere.radius_sq.max(f64::MIN_POSITIVE)
        })
        .collect();
    Ok(MinBall { sphere, support })
}

/// Minimum enclosing ball of a nonempty point set.
pub fn meb(pts: &[&[f64]]) -> Result<Sphere> {
    meb_with_support(pts).map(|b| b.sphere)
}
