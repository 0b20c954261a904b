//! Balls induced by compression: the closed ball whose diameter is the
//! segment from `x` to `V_m[x]`.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::compression::{compress, gap_sq};
use crate::error::{check_dim, Error, Result};
use crate::scalar::{add, dist_sq, Scalar, REL_TOL};
use crate::tuple::{NatTuple, Scale, Tuple};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct Ball<S> {
    pub generator: Tuple<S>,
    pub m: Scale,
    pub center: Vec<S>,
    pub radius_sq: S,
    /// Total translation applied since construction, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<S>>,
}

/// Balls are equal when their centers and squared radii are.
impl<S: Scalar> PartialEq for Ball<S> {
    fn eq(&self, other: &Self) -> bool {
        self.center == other.center && self.radius_sq == other.radius_sq
    }
}

pub fn ball_of<S: Scalar>(x: &Tuple<S>, m: Scale) -> Ball<S> {
    let two = S::from_u64(2);
    let four = S::from_u64(4);
    let center = x
        .iter()
        .zip(compress(x, m).iter())
        .map(|(a, b)| (a.clone() + b.clone()) / two.clone())
        .collect();
    Ball {
        generator: x.clone(),
        m,
        center,
        radius_sq: gap_sq(x, m) / four,
        translation: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    /// Metric test `||z - c||^2 <= r^2`.
    pub direct: bool,
    /// Gap comparison `gap(z) <= gap(y)`.
    pub criterion: bool,
    pub agree: bool,
}

impl<S: Scalar> Ball<S> {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn is_point(&self) -> bool {
        self.radius_sq.is_zero()
    }

    pub fn contains(&self, z: &[S]) -> Result<bool> {
        check_dim(self.dim(), z.len())?;
        Ok(dist_sq(z, &self.center).le_tol(&self.radius_sq, REL_TOL))
    }

    /// Whether `y` lies on the boundary sphere.
    pub fn is_admissible(&self, y: &[S]) -> Result<bool> {
        check_dim(self.dim(), y.len())?;
        Ok(dist_sq(y, &self.center).near(&self.radius_sq, REL_TOL))
    }

    /// `ball_of(t * generator, m)`.
    pub fn dilate(&self, t: &S) -> Result<Ball<S>> {
        if *t <= S::zero() {
            return Err(Error::Domain(format!("dilation factor must be positive, got {t}")));
        }
        Ok(ball_of(&self.generator.scaled(t)?, self.m))
    }

    /// Shifts the center by `v`; the radius is unchanged.
    pub fn translate(&self, v: &[S]) -> Result<Ball<S>> {
        check_dim(self.dim(), v.len())?;
        let translation = match &self.translation {
            Some(t) => add(t, v),
            None => v.to_vec(),
        };
        let translation = if translation.iter().all(Zero::is_zero) {
            None
        } else {
            Some(translation)
        };
        Ok(Ball {
            generator: self.generator.clone(),
            m: self.m,
            center: add(&self.center, v),
            radius_sq: self.radius_sq.clone(),
            translation,
        })
    }

    /// `k` points on the boundary sphere, uniform by direction and
    /// deterministic per seed. A point-ball yields its center once.
    pub fn sample_admissible(&self, k: usize, seed: u64) -> Vec<Vec<f64>> {
        let center: Vec<f64> = self.center.iter().map(Scalar::to_f64).collect();
        if k == 0 {
            return Vec::new();
        }
        if self.is_point() {
            return vec![center];
        }
        let radius = self.radius_sq.to_f64().sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..k)
            .map(|_| {
                let dir = unit_direction(&mut rng, center.len());
                center.iter().zip(&dir).map(|(c, d)| c + radius * d).collect()
            })
            .collect()
    }

    fn to_f64_ball(&self) -> Ball<f64> {
        Ball {
            generator: self.generator.to_f64(),
            m: self.m,
            center: self.center.iter().map(Scalar::to_f64).collect(),
            radius_sq: self.radius_sq.to_f64(),
            translation: self
                .translation
                .as_ref()
                .map(|t| t.iter().map(Scalar::to_f64).collect()),
        }
    }
}

pub(crate) fn unit_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Compares the metric membership of `z` in `ball_of(y, m)` with the gap
/// comparison `gap(z, m) <= gap(y, m)`. The two agree on many inputs but not
/// on all of them, so both are returned.
pub fn gap_criterion<S: Scalar>(z: &Tuple<S>, y: &Tuple<S>, m: Scale) -> Result<MembershipVerdict> {
    check_dim(y.dim(), z.dim())?;
    let direct = ball_of(y, m).contains(z)?;
    let criterion = gap_sq(z, m).le_tol(&gap_sq(y, m), REL_TOL);
    Ok(MembershipVerdict {
        direct,
        criterion,
        agree: direct == criterion,
    })
}

/// `||c_in - c_out|| + r_in <= r_out`. On exact scalars this is decided
/// without square roots.
pub fn nested<S: Scalar>(inner: &Ball<S>, outer: &Ball<S>) -> Result<bool> {
    check_dim(outer.dim(), inner.dim())?;
    let d = dist_sq(&inner.center, &outer.center);
    let (a, b) = (&inner.radius_sq, &outer.radius_sq);
    if S::EXACT {
        if b < a {
            return Ok(false);
        }
        // sqrt(d) <= sqrt(b) - sqrt(a)  <=>  2 sqrt(ab) <= b + a - d
        let slack = b.clone() + a.clone() - d;
        if slack < S::zero() {
            return Ok(false);
        }
        Ok(S::from_u64(4) * a.clone() * b.clone() <= slack.clone() * slack)
    } else {
        let (d, a, b) = (d.to_f64().sqrt(), a.to_f64().sqrt(), b.to_f64().sqrt());
        Ok(d + a <= b + REL_TOL * (d + a).max(b).max(1.0))
    }
}

/// Closed balls with no common point: `||c1 - c2|| > r1 + r2`.
pub fn disjoint<S: Scalar>(p: &Ball<S>, q: &Ball<S>) -> Result<bool> {
    check_dim(p.dim(), q.dim())?;
    let d = dist_sq(&p.center, &q.center);
    let (a, b) = (&p.radius_sq, &q.radius_sq);
    if S::EXACT {
        // sqrt(d) > sqrt(a) + sqrt(b)  <=>  d - a - b > 2 sqrt(ab)
        let excess = d - a.clone() - b.clone();
        if excess <= S::zero() {
            return Ok(false);
        }
        Ok(excess.clone() * excess > S::from_u64(4) * a.clone() * b.clone())
    } else {
        let (d, a, b) = (d.to_f64().sqrt(), a.to_f64().sqrt(), b.to_f64().sqrt());
        Ok(d > a + b + REL_TOL * d.max(a + b).max(1.0))
    }
}

/// The scale `t > 0` with `x = t * y`, or `None` when no such scalar exists
/// (`y` is free in the ball of `x`). Fails when `y` lies outside
/// `ball_of(x, m)`.
pub fn order_of<S: Scalar>(y: &Tuple<S>, x: &Tuple<S>, m: Scale) -> Result<Option<S>> {
    check_dim(x.dim(), y.dim())?;
    if !ball_of(x, m).contains(y)? {
        return Err(Error::Precondition(format!("{y:?} is outside the ball of {x:?}")));
    }
    let t = x[0].clone() / y[0].clone();
    if t <= S::zero() {
        return Ok(None);
    }
    let multiple = y
        .iter()
        .zip(x.iter())
        .all(|(a, b)| (t.clone() * a.clone()).near(b, REL_TOL));
    Ok(multiple.then_some(t))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct DescentChain<S> {
    pub balls: Vec<Ball<S>>,
    /// Squared gap of each ball's generator; strictly decreasing.
    pub gap_sq: Vec<S>,
    /// `nested[i]` tells whether `balls[i + 1]` lies inside `balls[i]`.
    pub nested: Vec<bool>,
    /// Whether the last ball is a point-ball.
    pub reached_limit: bool,
}

/// Follows `picker` from `start`, each step moving to a point of the current
/// ball with strictly smaller gap. Stops at a point-ball, when the picker
/// returns `None`, or after `max_steps` steps.
pub fn descend_to_limit<S, F>(start: &Ball<S>, mut picker: F, max_steps: usize) -> Result<DescentChain<S>>
where
    S: Scalar,
    F: FnMut(&Ball<S>) -> Option<Tuple<S>>,
{
    if max_steps == 0 {
        return Err(Error::Precondition("max_steps must be >= 1".into()));
    }
    let mut chain = DescentChain {
        balls: vec![start.clone()],
        gap_sq: vec![gap_sq(&start.generator, start.m)],
        nested: Vec::new(),
        reached_limit: start.is_point(),
    };
    for _ in 0..max_steps {
        let current = chain.balls.last().expect("chain is non-empty");
        if current.is_point() {
            break;
        }
        let Some(next) = picker(current) else { break };
        if !current.contains(&next)? {
            return Err(Error::Construction(format!(
                "picked point {next:?} is outside the current ball"
            )));
        }
        let g = gap_sq(&next, current.m);
        let last_gap = chain.gap_sq.last().expect("chain is non-empty");
        if g.partial_cmp(last_gap) != Some(std::cmp::Ordering::Less) {
            return Err(Error::Construction(format!(
                "picked point {next:?} has gap^2 {g}, not below {last_gap}"
            )));
        }
        let ball = ball_of(&next, current.m);
        chain.nested.push(nested(&ball, current)?);
        chain.reached_limit = ball.is_point();
        chain.balls.push(ball);
        chain.gap_sq.push(g);
    }
    Ok(chain)
}

/// Picker for scale-1 descents: moves the coordinate farthest from a fixed
/// value one unit toward `+-1` (or onto it when closer than one unit). The
/// moved point stays in the ball and has strictly smaller gap.
pub fn toward_unit_picker<S: Scalar>(ball: &Ball<S>) -> Option<Tuple<S>> {
    let x = &ball.generator;
    let one = S::one();
    let excess = |c: &S| {
        let f = c.clone() - one.clone() / c.clone();
        f.clone() * f
    };
    let (j, _) = x
        .iter()
        .enumerate()
        .filter(|(_, c)| !excess(c).is_zero())
        .max_by(|a, b| excess(a.1).partial_cmp(&excess(b.1)).expect("comparable"))?;
    let c = x[j].clone();
    let negative = c < S::zero();
    let mag = c.abs();
    let two = S::from_u64(2);
    let new_mag = if mag >= two { mag - one.clone() } else { one };
    let mut coords = x.coords().to_vec();
    coords[j] = if negative { -new_mag } else { new_mag };
    Tuple::new(coords).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Overlap {
    /// One ball lies inside the other.
    Nested,
    Disjoint,
    PartialOverlap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub first: NatTuple,
    pub second: NatTuple,
    pub relation: Overlap,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub pairs: Vec<PairRecord>,
    /// Pairs left out: identical tuples, equal norms or unequal dimensions.
    pub skipped: usize,
    pub nested: usize,
    pub disjoint: usize,
    pub partial: usize,
}

/// Classifies every pair of induced balls. Partial overlaps are recorded,
/// not treated as errors.
pub fn overlap_audit(xs: &[NatTuple], m: Scale) -> Result<OverlapReport> {
    let balls: Vec<_> = xs.iter().map(|x| ball_of(&x.to_rat(), m)).collect();
    let mut report = OverlapReport::default();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let (x, y) = (&xs[i], &xs[j]);
            if x == y || x.n() != y.n() || x.norm_sq() == y.norm_sq() {
                report.skipped += 1;
                continue;
            }
            let (p, q) = (&balls[i], &balls[j]);
            let relation = if nested(p, q)? || nested(q, p)? {
                report.nested += 1;
                Overlap::Nested
            } else if disjoint(p, q)? {
                report.disjoint += 1;
                Overlap::Disjoint
            } else {
                report.partial += 1;
                Overlap::PartialOverlap
            };
            report.pairs.push(PairRecord {
                first: x.clone(),
                second: y.clone(),
                relation,
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteriorVerdict {
    pub hits: usize,
    pub probes: usize,
    pub interior: bool,
}

/// Default number of probe points for [`interior_point_test`].
pub const DEFAULT_PROBES: usize = 64;

/// Tests whether `z` is an interior point of `ball`: `ball_of(z)` must lie
/// inside `ball_of(x)` for strictly more than half of `probes` points `x`
/// drawn uniformly from `ball`.
pub fn interior_point_test<S: Scalar>(
    ball: &Ball<S>,
    z: &Tuple<S>,
    probes: usize,
    seed: u64,
) -> Result<InteriorVerdict> {
    if !ball.contains(z)? {
        return Err(Error::Precondition(format!("{z:?} is outside the ball")));
    }
    let fb = ball.to_f64_ball();
    let zb = ball_of(&z.to_f64(), ball.m);
    let radius = fb.radius_sq.sqrt();
    let n = fb.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    let mut drawn = 0;
    while drawn < probes {
        let dir = unit_direction(&mut rng, n);
        let u: f64 = rand::Rng::random(&mut rng);
        let r = radius * u.powf(1.0 / n as f64);
        let x: Vec<f64> = fb.center.iter().zip(&dir).map(|(c, d)| c + r * d).collect();
        let Ok(x) = Tuple::new(x) else { continue };
        drawn += 1;
        if nested(&zb, &ball_of(&x, ball.m))? {
            hits += 1;
        }
    }
    Ok(InteriorVerdict {
        hits,
        probes,
        interior: 2 * hits > probes,
    })
}
