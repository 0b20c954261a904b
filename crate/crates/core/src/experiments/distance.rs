use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compression::gap_sq;
use crate::error::{check_dim, Error, Result};
use crate::line::line_of;
use crate::rat::Rat;
use crate::scalar::{dist_sq, Scalar};
use crate::tuple::{NatTuple, Scale, Tuple};

/// Float tolerance for "distance equals one".
pub const UNIT_DISTANCE_TOL: f64 = 1e-12;

/// Number of unordered pairs at distance exactly 1 (within `tol` on floats).
pub fn unit_distance_pairs<S: Scalar>(points: &[Vec<S>], tol: f64) -> Result<usize> {
    let Some(first) = points.first() else {
        return Ok(0);
    };
    for p in points {
        check_dim(first.len(), p.len())?;
    }
    let mut count = 0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let d = dist_sq(p, q);
            let unit = if S::EXACT {
                d == S::one()
            } else {
                (d.to_f64().sqrt() - 1.0).abs() <= tol
            };
            count += usize::from(unit);
        }
    }
    Ok(count)
}

const UNIT_GAP_DRAWS: usize = 1000;
const BISECTION_STEPS: usize = 80;

/// A point with every coordinate above 1 and `gap(x, 1) = 1`, so `x` and its
/// reciprocal are at unit distance. The first `n - 1` coordinates are drawn
/// from `(1, 1.2]`; the last solves `(t - 1/t)^2 = 1 - rest` by bisection on
/// `(1, 10]`. Draws whose first coordinates already exceed gap 1 are
/// discarded.
pub fn unit_gap_point(n: usize, seed: u64) -> Result<Tuple<f64>> {
    if n < 2 {
        return Err(Error::Precondition(format!("dimension must be >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..UNIT_GAP_DRAWS {
        let mut x: Vec<f64> = (0..n - 1)
            .map(|_| 1.2 - 0.2 * rng.random::<f64>())
            .collect();
        let rest: f64 = x.iter().map(|c| (c - 1.0 / c).powi(2)).sum();
        if rest >= 1.0 {
            continue;
        }
        let target = (1.0 - rest).sqrt();
        let (mut lo, mut hi) = (1.0f64, 10.0f64);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid - 1.0 / mid < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        x.push(0.5 * (lo + hi));
        let x = Tuple::new(x)?;
        if (gap_sq(&x, Scale::ONE) - 1.0).abs() <= UNIT_DISTANCE_TOL {
            return Ok(x);
        }
    }
    Err(Error::Construction(format!(
        "no unit-gap point found in dimension {n} after {UNIT_GAP_DRAWS} draws"
    )))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalFamily {
    pub gap_sq: Rat,
    /// `gap * x`; irrational in general, so a float.
    pub center: Vec<f64>,
    /// Unit direction along which the points are placed.
    pub direction: Vec<Rat>,
    /// `gap^2 / (2k)` for `k = 1..=depth`.
    pub radii: Vec<Rat>,
    /// `radii[k-1] - radii[k] = gap^2 / (2k(k+1))`.
    pub widths: Vec<Rat>,
    pub points: Vec<Vec<f64>>,
}

impl RationalFamily {
    /// Distance between points `i` and `j`: the difference of their radii.
    pub fn distance(&self, i: usize, j: usize) -> Rat {
        (&self.radii[i] - &self.radii[j]).abs()
    }
}

/// Points on a ray from `gap * x` at the rational radii `gap^2 / (2k)`;
/// every pairwise distance along the ray is rational.
pub fn rational_distance_family(x: &NatTuple, m: Scale, depth: usize) -> Result<RationalFamily> {
    check_dim(2, x.n())?;
    if depth == 0 {
        return Err(Error::Precondition("depth must be >= 1".into()));
    }
    let g2 = gap_sq(&x.to_rat(), m);
    if g2 <= Rat::one() {
        return Err(Error::Precondition(format!("gap^2 = {g2} must exceed 1")));
    }
    let gap = g2.to_f64().sqrt();
    let center: Vec<f64> = x.coords().iter().map(|&c| gap * c as f64).collect();
    let direction = vec![Rat::one(), Rat::zero()];
    let radii: Vec<Rat> = (1..=depth as u64).map(|k| &g2 / &Rat::from(2 * k)).collect();
    let widths = radii.windows(2).map(|w| &w[0] - &w[1]).collect();
    let points = radii
        .iter()
        .map(|r| {
            center
                .iter()
                .zip(&direction)
                .map(|(c, d)| c + r.to_f64() * d.to_f64())
                .collect()
        })
        .collect();
    Ok(RationalFamily { gap_sq: g2, center, direction, radii, widths, points })
}


#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegerDistanceLine {
    /// Integer multiples of the unit direction, starting at `x`.
    pub parameters: Vec<i64>,
    pub points: Vec<Vec<f64>>,
    /// Brute-force confirmation that every pair is at integer distance.
    pub pairwise_integer: bool,
}

/// Points `x + k u` for `k = 0..=bound` on the compression line of `x`, with
/// `u` its unit direction.
pub fn integer_distance_line(x: &NatTuple, m: Scale, bound: u64) -> Result<IntegerDistanceLine> {
    if bound < 1 {
        return Err(Error::Precondition("bound must be >= 1".into()));
    }
    let line = line_of(&x.to_tuple::<f64>(), m)?;
    let norm = line.direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    let parameters: Vec<i64> = (0..=bound as i64).collect();
    let points: Vec<Vec<f64>> = parameters
        .iter()
        .map(|&k| line.point_at(&(k as f64 / norm)))
        .collect();
    let pairwise_integer = pairwise_integer_distances(&points, 1e-9);
    Ok(IntegerDistanceLine { parameters, points, pairwise_integer })
}

/// Every pairwise distance lies within `tol` of an integer.
pub fn pairwise_integer_distances(points: &[Vec<f64>], tol: f64) -> bool {
    points.iter().enumerate().all(|(i, p)| {
        points[i + 1..].iter().all(|q| {
            let d = dist_sq(p, q).sqrt();
            (d - d.round()).abs() <= tol * d.max(1.0)
        })
    })
}

/// `sqrt(n) * cluster_size * sum_{k=2}^{max_gap} 1/k`.
pub fn anning_lower_bound(n: usize, cluster_size: u64, max_gap: u64) -> Result<f64> {
    if cluster_size < 1 || max_gap < 2 {
        return Err(Error::Precondition(format!(
            "need cluster_size >= 1 and max_gap >= 2, got {cluster_size}, {max_gap}"
        )));
    }
    let harmonic: f64 = (2..=max_gap).map(|k| 1.0 / k as f64).sum();
    Ok((n as f64).sqrt() * cluster_size as f64 * harmonic)
}
