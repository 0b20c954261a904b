//! Needle walks: polylines that alternate compression steps `x -> V_m[x]`
//! with translations into a ball that avoids the previous compression line.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ball::{ball_of, nested, Ball};
use crate::bounds::{BoundForm, BoundPair, Value};
use crate::compression::{compress, gap_sq};
use crate::error::{Error, Result};
use crate::line::line_of;
use crate::rat::Rat;
use crate::scalar::{dist_sq, dot, norm_sq, sub, Scalar};
use crate::tuple::{Scale, Tuple};

/// Distance below which float segments count as touching.
pub const SEGMENT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Compression,
    Translation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar", deny_unknown_fields)]
pub struct Walk<S> {
    pub m: Scale,
    pub vertices: Vec<Tuple<S>>,
    pub step_kinds: Vec<StepKind>,
    /// One vector per translation step, in walk order.
    pub translations: Vec<Vec<S>>,
}

impl<S: Scalar> Walk<S> {
    pub fn steps(&self) -> usize {
        self.step_kinds.len()
    }

    pub fn dim(&self) -> usize {
        self.vertices.first().map_or(0, Tuple::dim)
    }

    /// Consecutive vertex index pairs.
    pub fn segments(&self) -> Vec<(usize, usize)> {
        (0..self.steps()).map(|i| (i, i + 1)).collect()
    }

    /// Generators: the vertices each compression step starts from.
    pub fn generators(&self) -> impl Iterator<Item = &Tuple<S>> {
        self.step_kinds
            .iter()
            .zip(&self.vertices)
            .filter(|(k, _)| **k == StepKind::Compression)
            .map(|(_, v)| v)
    }

    /// Structural and arithmetic consistency: alternation starting with a
    /// compression, every compression step lands on the image, every
    /// translation step adds its recorded vector.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let bad = |msg: String| Err(Error::Construction(format!("malformed walk: {msg}")));
        if self.step_kinds.is_empty() {
            return bad("no steps".into());
        }
        if self.vertices.len() != self.step_kinds.len() + 1 {
            return bad(format!(
                "{} vertices for {} steps",
                self.vertices.len(),
                self.step_kinds.len()
            ));
        }
        let n = self.dim();
        if let Some(v) = self.vertices.iter().find(|v| v.dim() != n) {
            return bad(format!("vertex {v:?} has dimension {}, expected {n}", v.dim()));
        }
        let mut translations = self.translations.iter();
        for (i, kind) in self.step_kinds.iter().enumerate() {
            let expected = if i % 2 == 0 {
                StepKind::Compression
            } else {
                StepKind::Translation
            };
            if *kind != expected {
                return bad(format!("step {i} is {kind:?}, expected {expected:?}"));
            }
            let (from, to) = (&self.vertices[i], &self.vertices[i + 1]);
            let target: Vec<S> = match kind {
                StepKind::Compression => compress(from, self.m).into_coords(),
                StepKind::Translation => {
                    let Some(a) = translations.next() else {
                        return bad("fewer translations than translation steps".into());
                    };
                    if a.len() != n {
                        return bad(format!("translation {a:?} has wrong dimension"));
                    }
                    from.iter().zip(a).map(|(p, q)| p.clone() + q.clone()).collect()
                }
            };
            if !target.iter().zip(to.iter()).all(|(p, q)| p.near(q, tol)) {
                return bad(format!("step {i} does not reach vertex {}", i + 1));
            }
        }
        if translations.next().is_some() {
            return bad("more translations than translation steps".into());
        }
        Ok(())
    }

    pub fn to_f64(&self) -> Walk<f64> {
        Walk {
            m: self.m,
            vertices: self.vertices.iter().map(Tuple::to_f64).collect(),
            step_kinds: self.step_kinds.clone(),
            translations: self
                .translations
                .iter()
                .map(|a| a.iter().map(Scalar::to_f64).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("walk serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: Walk<S> = serde_json::from_str(text)?;
        Ok(w)
    }
}

// ---------------------------------------------------------------------------
// Self-avoidance oracle

/// Sign of the 2D orientation of `(a, b, c)`.
fn orient<S: Scalar>(a: &[S], b: &[S], c: &[S]) -> std::cmp::Ordering {
    let v = (b[0].clone() - a[0].clone()) * (c[1].clone() - a[1].clone())
        - (b[1].clone() - a[1].clone()) * (c[0].clone() - a[0].clone());
    v.partial_cmp(&S::zero()).expect("ordered scalar")
}

/// `c` inside the bounding box of `a, b` (used only when collinear).
fn within_box<S: Scalar>(a: &[S], b: &[S], c: &[S]) -> bool {
    (0..2).all(|k| {
        let (lo, hi) = if a[k] <= b[k] { (&a[k], &b[k]) } else { (&b[k], &a[k]) };
        *lo <= c[k] && c[k] <= *hi
    })
}

/// Closed planar segments `pq` and `rs` share a point.
fn planar_segments_meet<S: Scalar>(p: &[S], q: &[S], r: &[S], s: &[S]) -> bool {
    use std::cmp::Ordering::Equal;
    let (o1, o2) = (orient(p, q, r), orient(p, q, s));
    let (o3, o4) = (orient(r, s, p), orient(r, s, q));
    if o1 != o2 && o3 != o4 && o1 != Equal && o2 != Equal && o3 != Equal && o4 != Equal {
        return true;
    }
    (o1 == Equal && within_box(p, q, r))
        || (o2 == Equal && within_box(p, q, s))
        || (o3 == Equal && within_box(r, s, p))
        || (o4 == Equal && within_box(r, s, q))
}

fn clamp01<S: Scalar>(v: S) -> S {
    if v < S::zero() {
        S::zero()
    } else if v > S::one() {
        S::one()
    } else {
        v
    }
}

/// Squared distance between closed segments `p1q1` and `p2q2` in any
/// dimension. The minimizing parameters are rational, so this is exact on
/// [`Rat`].
pub fn segment_dist_sq<S: Scalar>(p1: &[S], q1: &[S], p2: &[S], q2: &[S]) -> S {
    let d1 = sub(q1, p1);
    let d2 = sub(q2, p2);
    let r = sub(p1, p2);
    let a = norm_sq(&d1);
    let e = norm_sq(&d2);
    let f = dot(&d2, &r);
    let (s, t) = if a.is_zero() && e.is_zero() {
        (S::zero(), S::zero())
    } else if a.is_zero() {
        (S::zero(), clamp01(f / e))
    } else {
        let c = dot(&d1, &r);
        if e.is_zero() {
            (clamp01(-c / a), S::zero())
        } else {
            let b = dot(&d1, &d2);
            let denom = a.clone() * e.clone() - b.clone() * b.clone();
            let mut s = if denom.is_zero() {
                S::zero()
            } else {
                clamp01((b.clone() * f.clone() - c.clone() * e.clone()) / denom)
            };
            let t = (b.clone() * s.clone() + f) / e;
            let t = if t < S::zero() {
                s = clamp01(-c / a);
                S::zero()
            } else if t > S::one() {
                s = clamp01((b - c) / a);
                S::one()
            } else {
                t
            };
            (s, t)
        }
    };
    let gap: Vec<S> = (0..p1.len())
        .map(|k| {
            r[k].clone() + s.clone() * d1[k].clone() - t.clone() * d2[k].clone()
        })
        .collect();
    norm_sq(&gap)
}

/// Segments `ab` and `bc` overlap beyond `b`: collinear and pointing the
/// same way out of `b`.
fn adjacent_overlap<S: Scalar>(a: &[S], b: &[S], c: &[S], tol: f64) -> bool {
    let u = sub(a, b);
    let v = sub(c, b);
    let uv = dot(&u, &v);
    let scale = norm_sq(&u) * norm_sq(&v);
    let residual = scale.clone() - uv.clone() * uv.clone();
    residual.negligible(&scale, tol) && uv > S::zero()
}

fn segments_meet<S: Scalar>(p: &[S], q: &[S], r: &[S], s: &[S], tol: f64) -> bool {
    if S::EXACT && p.len() == 2 {
        planar_segments_meet(p, q, r, s)
    } else if S::EXACT {
        segment_dist_sq(p, q, r, s).is_zero()
    } else {
        segment_dist_sq(p, q, r, s).to_f64().sqrt() <= tol
    }
}

fn degenerate<S: Scalar>(p: &[S], q: &[S], tol: f64) -> bool {
    let d = dist_sq(p, q);
    if S::EXACT {
        d.is_zero()
    } else {
        d.to_f64().sqrt() <= tol
    }
}

/// Checks every segment starting at index `>= first` against all earlier
/// segments of the polyline `points`.
fn polyline_avoids_from<S: Scalar, P: AsRef<[S]>>(points: &[P], first: usize, tol: f64) -> bool {
    let seg = |i: usize| (points[i].as_ref(), points[i + 1].as_ref());
    for j in first..points.len().saturating_sub(1) {
        let (r, s) = seg(j);
        if degenerate(r, s, tol) {
            return false;
        }
        for i in 0..j {
            let (p, q) = seg(i);
            let hit = if i + 1 == j {
                adjacent_overlap(p, q, s, tol)
            } else {
                segments_meet(p, q, r, s, tol)
            };
            if hit {
                return false;
            }
        }
    }
    true
}

/// No two non-adjacent segments meet and adjacent segments share only their
/// common endpoint. Exact on rationals (orientation predicates in the plane,
/// exact segment distance otherwise); floats use distance `<= tol`.
pub fn is_self_avoiding<S: Scalar>(w: &Walk<S>, tol: f64) -> bool {
    polyline_avoids_from(&w.vertices, 0, tol)
}

// ---------------------------------------------------------------------------
// Generation

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WalkPolicy {
    /// Candidate draws allowed per translation step.
    pub retry_budget: usize,
    /// Geometrically valid candidates gathered before ranking by
    /// translation norm.
    pub pool_size: usize,
    /// Candidate offsets are at most `spread` times the distance from the
    /// fixed point to the current line.
    pub spread: f64,
    /// Random bits per candidate coordinate.
    pub bits: u32,
}

impl Default for WalkPolicy {
    fn default() -> Self {
        WalkPolicy {
            retry_budget: 256,
            pool_size: 8,
            spread: 0.6,
            bits: 16,
        }
    }
}

impl WalkPolicy {
    fn check(&self) -> Result<()> {
        if self.retry_budget == 0 || self.pool_size == 0 {
            return Err(Error::Config("retry_budget and pool_size must be >= 1".into()));
        }
        if !(self.spread > 0.0 && self.spread <= 1.0) {
            return Err(Error::Config(format!("spread {} outside (0, 1]", self.spread)));
        }
        if !(1..=48).contains(&self.bits) {
            return Err(Error::Config(format!("bits {} outside 1..=48", self.bits)));
        }
        Ok(())
    }
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// Smallest `e >= 0` with `2^-e <= sqrt(v)` for a positive rational `v`.
fn sqrt_exponent(v: &Rat) -> u64 {
    let (p, q) = v.stored_bits();
    // v > 2^(p - 1 - q)
    (q + 1).saturating_sub(p).div_ceil(2)
}

struct Candidate {
    target: Tuple<Rat>,
    cost: Rat,
}

/// Builds an `l`-step walk from `x0`. Translation targets are drawn near the
/// fixed point `sqrt(m) * (1, ..., 1)`: a candidate `u` (all coordinates
/// above `sqrt(m)`) is kept when its ball sits inside the current ball and
/// misses the current compression line, and the walk then moves to whichever
/// of `u`, `V_m[u]` is closer. Among valid candidates the shortest
/// translation that keeps the walk self-avoiding wins.
pub fn generate_walk(
    x0: &Tuple<Rat>,
    m: Scale,
    l: usize,
    policy: &WalkPolicy,
    seed: u64,
) -> Result<Walk<Rat>> {
    policy.check()?;
    if l == 0 {
        return Err(Error::Precondition("walk needs at least one step".into()));
    }
    let root = m.get().sqrt();
    if root * root != m.get() {
        return Err(Error::Precondition(format!(
            "walk generation needs a square scale, got m = {}",
            m.get()
        )));
    }
    let root = Rat::from(root);
    if let Some(c) = x0.iter().find(|c| **c <= root) {
        return Err(Error::Precondition(format!(
            "start coordinates must exceed {root}, found {c}"
        )));
    }
    let n = x0.dim();
    let fixed = vec![root.clone(); n];
    if line_of(x0, m)?.dist_sq_to(&fixed)?.is_zero() {
        return Err(Error::Precondition(format!(
            "the compression line of {x0} passes through the fixed point"
        )));
    }
    // 4^h >= n, so n offsets each below delta / 2^h stay below delta
    let h = (0u64..).find(|h| 1u128 << (2 * h) >= n as u128).unwrap();
    let span = ((policy.spread * 2f64.powi(policy.bits as i32)) as u64).max(1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut walk = Walk {
        m,
        vertices: vec![x0.clone()],
        step_kinds: Vec::with_capacity(l),
        translations: Vec::new(),
    };
    let mut generator = x0.clone();
    for step in 0..l {
        if step % 2 == 0 {
            walk.vertices.push(compress(&generator, m));
            walk.step_kinds.push(StepKind::Compression);
            continue;
        }
        let last = walk.vertices.last().unwrap().clone();
        let ball = ball_of(&generator, m);
        let line = line_of(&generator, m)?;
        let e = sqrt_exponent(&line.dist_sq_to(&fixed)?);
        let denom = pow2(e + h + u64::from(policy.bits));
        let continues = step + 1 < l;

        let mut chosen = None;
        let mut pool: Vec<Candidate> = Vec::with_capacity(policy.pool_size);
        let mut draws = 0;
        let mut valid = 0;
        while chosen.is_none() && draws < policy.retry_budget {
            draws += 1;
            let u: Vec<Rat> = (0..n)
                .map(|_| {
                    let k = rng.random_range(1..=span);
                    root.clone() + Rat::new(k, denom.clone()).expect("nonzero denominator")
                })
                .collect();
            let u = Tuple::new(u)?;
            if let Some(c) = admissible_candidate(&u, m, &ball, &line, &fixed, &last)? {
                valid += 1;
                pool.push(c);
            }
            if pool.len() == policy.pool_size || (draws == policy.retry_budget && !pool.is_empty())
            {
                pool.sort_by(|a, b| a.cost.cmp(&b.cost));
                chosen = pool.drain(..).find(|c| {
                    let mut tail = vec![last.coords(), c.target.coords()];
                    let image;
                    if continues {
                        image = compress(&c.target, m);
                        tail.push(image.coords());
                    }
                    extends_self_avoiding(&walk.vertices, &tail)
                });
            }
        }
        let Some(c) = chosen else {
            return Err(Error::Generation {
                steps_done: step,
                steps_requested: l,
                reason: format!(
                    "{draws} draws gave {valid} admissible candidates, none keeping the walk self-avoiding"
                ),
                partial_walk: walk.to_json(),
            });
        };
        walk.translations.push(sub(&c.target, &last));
        walk.vertices.push(c.target.clone());
        walk.step_kinds.push(StepKind::Translation);
        generator = c.target;
    }
    Ok(walk)
}

fn admissible_candidate(
    u: &Tuple<Rat>,
    m: Scale,
    current: &Ball<Rat>,
    line: &crate::line::CompressionLine<Rat>,
    fixed: &[Rat],
    last: &Tuple<Rat>,
) -> Result<Option<Candidate>> {
    let ball = ball_of(u, m);
    if ball.radius_sq.is_zero() || !nested(&ball, current)? {
        return Ok(None);
    }
    // the whole new ball must miss the current line
    if line.dist_sq_to(&ball.center)? <= ball.radius_sq {
        return Ok(None);
    }
    let own = line_of(u, m)?;
    if own.dist_sq_to(fixed)?.is_zero() {
        return Ok(None);
    }
    let image = compress(u, m);
    let (du, di) = (dist_sq(u, last), dist_sq(&image, last));
    let (target, cost) = if di < du { (image, di) } else { (u.clone(), du) };
    Ok(Some(Candidate { target, cost }))
}

/// Whether appending the polyline `tail` (whose first point is the current
/// last vertex) keeps the walk self-avoiding.
fn extends_self_avoiding(vertices: &[Tuple<Rat>], tail: &[&[Rat]]) -> bool {
    let mut points: Vec<&[Rat]> = vertices.iter().map(Tuple::coords).collect();
    let first = points.len() - 1;
    points.extend_from_slice(&tail[1..]);
    polyline_avoids_from(&points, first, 0.0)
}

// ---------------------------------------------------------------------------
// Length

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthReport {
    pub steps: usize,
    pub length: f64,
    /// Sum of gaps of the generators.
    pub gap_total: f64,
    pub translation_total: f64,
    /// Every segment's squared length equals the gap or translation norm it
    /// stands for (exactly on rationals).
    pub decomposition_exact: bool,
    pub bounds: BoundPair,
    pub lower_ratio: Option<f64>,
    pub upper_ratio: Option<f64>,
}

/// Sum of the segment norms.
pub fn walk_length<S: Scalar>(w: &Walk<S>) -> f64 {
    w.vertices
        .windows(2)
        .map(|p| dist_sq(&p[0], &p[1]).to_f64().sqrt())
        .sum()
}

/// `(l/2) sqrt(n) (min inf x_j + min inf a_j)` and
/// `(l/2) sqrt(n) (max sup x_j + max sup a_j)` over the generators and
/// translations of the walk. A walk without translations contributes 0 for
/// the translation terms.
pub fn walk_length_bounds<S: Scalar>(w: &Walk<S>) -> BoundPair {
    let half = w.steps() as f64 / 2.0;
    let root_n = (w.dim() as f64).sqrt();
    let fold = |vals: Vec<f64>, pick: fn(f64, f64) -> f64| vals.into_iter().reduce(pick);
    let gens: Vec<f64> = w.generators().flat_map(|g| g.iter().map(Scalar::to_f64)).collect();
    let trans: Vec<f64> = w.translations.iter().flatten().map(Scalar::to_f64).collect();
    let lo = fold(gens.clone(), f64::min).unwrap_or(0.0) + fold(trans.clone(), f64::min).unwrap_or(0.0);
    let hi = fold(gens, f64::max).unwrap_or(0.0) + fold(trans, f64::max).unwrap_or(0.0);
    BoundPair {
        lower: Value::Float(half * root_n * lo),
        upper: Value::Float(half * root_n * hi),
        form: BoundForm::LogAsymptotic,
    }
}

pub fn length_report<S: Scalar>(w: &Walk<S>, tol: f64) -> Result<LengthReport> {
    w.validate(tol)?;
    let mut decomposition_exact = true;
    let mut gap_total = 0.0;
    let mut translation_total = 0.0;
    let mut translations = w.translations.iter();
    for (i, kind) in w.step_kinds.iter().enumerate() {
        let seg = dist_sq(&w.vertices[i], &w.vertices[i + 1]);
        let part = match kind {
            StepKind::Compression => gap_sq(&w.vertices[i], w.m),
            StepKind::Translation => norm_sq(translations.next().expect("validated")),
        };
        decomposition_exact &= seg.near(&part, tol);
        let len = part.to_f64().sqrt();
        match kind {
            StepKind::Compression => gap_total += len,
            StepKind::Translation => translation_total += len,
        }
    }
    let length = walk_length(w);
    let bounds = walk_length_bounds(w);
    Ok(LengthReport {
        steps: w.steps(),
        length,
        gap_total,
        translation_total,
        decomposition_exact,
        lower_ratio: Value::Float(length).ratio_to(&bounds.lower),
        upper_ratio: Value::Float(length).ratio_to(&bounds.upper),
        bounds,
    })
}

/// One CSV row per report: `steps,length,gap_total,translation_total,...`.
pub fn write_length_csv<W: std::io::Write>(reports: &[LengthReport], out: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Config(format!("csv write failed: {e}"));
    wr.write_record([
        "steps",
        "length",
        "gap_total",
        "translation_total",
        "decomposition_exact",
        "lower_bound",
        "upper_bound",
        "lower_ratio",
        "upper_ratio",
    ])
    .map_err(io)?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
    for r in reports {
        wr.write_record([
            r.steps.to_string(),
            r.length.to_string(),
            r.gap_total.to_string(),
            r.translation_total.to_string(),
            r.decomposition_exact.to_string(),
            r.bounds.lower.to_f64().to_string(),
            r.bounds.upper.to_f64().to_string(),
            opt(r.lower_ratio),
            opt(r.upper_ratio),
        ])
        .map_err(io)?;
    }
    wr.flush().map_err(|e| Error::Config(format!("csv flush failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::REL_TOL;

    fn t(v: &[i64]) -> Tuple<Rat> {
        Tuple::from_ints(v).unwrap()
    }

    fn q(p: i64, d: i64) -> Rat {
        Rat::new(p, d).unwrap()
    }

    fn polyline(points: &[(i64, i64)]) -> Walk<Rat> {
        // shifted off the axes; step kinds are irrelevant to the oracle
        Walk {
            m: Scale::ONE,
            vertices: points.iter().map(|&(a, b)| Tuple::new(vec![q(a + 10, 1), q(b + 10, 1)]).unwrap()).collect(),
            step_kinds: vec![StepKind::Compression; points.len() - 1],
            translations: vec![],
        }
    }

    #[test]
    fn one_step_walk() {
        let w = generate_walk(&t(&[2, 3]), Scale::ONE, 1, &WalkPolicy::default(), 0).unwrap();
        assert_eq!(w.vertices, vec![t(&[2, 3]), Tuple::new(vec![q(1, 2), q(1, 3)]).unwrap()]);
        assert_eq!(w.segments(), vec![(0, 1)]);
        assert!(is_self_avoiding(&w, 0.0));
        let r = length_report(&w, REL_TOL).unwrap();
        assert!((r.length - 337f64.sqrt() / 6.0).abs() < 1e-12);
        assert!(r.decomposition_exact);
    }

    #[test]
    fn seeded_walk_is_valid_and_reproducible() {
        let p = WalkPolicy::default();
        let w = generate_walk(&t(&[5, 7]), Scale::ONE, 4, &p, 42).unwrap();
        assert_eq!(w.vertices.len(), 5);
        assert_eq!(w.translations.len(), 2);
        assert!(is_self_avoiding(&w, 0.0));
        w.validate(0.0).unwrap();
        assert_eq!(w, generate_walk(&t(&[5, 7]), Scale::ONE, 4, &p, 42).unwrap());
        let back: Walk<Rat> = Walk::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn three_step_pattern() {
        let w = generate_walk(&t(&[5, 7]), Scale::ONE, 3, &WalkPolicy::default(), 7).unwrap();
        use StepKind::*;
        assert_eq!(w.step_kinds, vec![Compression, Translation, Compression]);
        assert_eq!(w.vertices[1], compress(&w.vertices[0], Scale::ONE));
        assert_eq!(w.vertices[3], compress(&w.vertices[2], Scale::ONE));
    }

    #[test]
    fn long_walks_stay_exact() {
        let p = WalkPolicy::default();
        for seed in 0..5 {
            let w = generate_walk(&t(&[5, 7]), Scale::ONE, 20, &p, seed).unwrap();
            assert!(is_self_avoiding(&w, 0.0));
            assert!(length_report(&w, 0.0).unwrap().decomposition_exact);
        }
        let w = generate_walk(&t(&[3, 5, 8]), Scale::ONE, 8, &p, 1).unwrap();
        assert!(is_self_avoiding(&w, 0.0));
        let w = generate_walk(&t(&[3, 7]), Scale::new(4).unwrap(), 6, &p, 1).unwrap();
        assert!(is_self_avoiding(&w, 0.0));
    }

    #[test]
    fn generation_preconditions() {
        let p = WalkPolicy::default();
        assert!(matches!(generate_walk(&t(&[2, 3]), Scale::ONE, 0, &p, 0), Err(Error::Precondition(_))));
        assert!(matches!(generate_walk(&t(&[1, 3]), Scale::ONE, 2, &p, 0), Err(Error::Precondition(_))));
        assert!(matches!(generate_walk(&t(&[5, 5]), Scale::ONE, 2, &p, 0), Err(Error::Precondition(_))));
        assert!(matches!(
            generate_walk(&t(&[5, 7]), Scale::new(2).unwrap(), 2, &p, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn exhausted_budget_reports_partial_walk() {
        // one coarse draw per step: equal offsets put the fixed point on the
        // candidate's line, so some seeds must fail
        let p = WalkPolicy { retry_budget: 1, pool_size: 1, spread: 1.0, bits: 1 };
        let failures: Vec<_> = (0..32)
            .filter_map(|seed| match generate_walk(&t(&[5, 7]), Scale::ONE, 6, &p, seed) {
                Err(Error::Generation { steps_done, partial_walk, .. }) => Some((steps_done, partial_walk)),
                Ok(_) => None,
                Err(e) => panic!("unexpected error {e}"),
            })
            .collect();
        assert!(!failures.is_empty());
        for (steps_done, json) in failures {
            let partial: Walk<Rat> = Walk::from_json(&json).unwrap();
            assert_eq!(partial.vertices.len(), steps_done + 1);
            assert!(steps_done % 2 == 1);
        }
    }

    #[test]
    fn oracle_on_constructed_polylines() {
        let spiral = polyline(&[(0, 0), (4, 0), (4, 4), (1, 4), (1, 1), (3, 1), (3, 3), (2, 3)]);
        assert!(is_self_avoiding(&spiral, 0.0));
        assert!(is_self_avoiding(&spiral.to_f64(), SEGMENT_TOL));
        let cross = polyline(&[(0, 0), (2, 2), (3, 3), (0, 2), (2, 0)]);
        assert!(!is_self_avoiding(&cross, 0.0));
        assert!(!is_self_avoiding(&cross.to_f64(), SEGMENT_TOL));
        let backtrack = polyline(&[(0, 0), (2, 0), (1, 0)]);
        assert!(!is_self_avoiding(&backtrack, 0.0));
        let turn_back_touch = polyline(&[(0, 0), (2, 0), (2, 1), (0, 0)]);
        assert!(!is_self_avoiding(&turn_back_touch, 0.0));
        let stall = polyline(&[(0, 0), (0, 0), (1, 0)]);
        assert!(!is_self_avoiding(&stall, 0.0));
    }

    #[test]
    fn segment_distance_cases() {
        let p = |a: i64, b: i64, c: i64| vec![q(a, 1), q(b, 1), q(c, 1)];
        // skew lines at distance 1
        assert_eq!(segment_dist_sq(&p(0, 0, 0), &p(2, 0, 0), &p(1, -1, 1), &p(1, 1, 1)), q(1, 1));
        // parallel, offset
        assert_eq!(segment_dist_sq(&p(0, 0, 0), &p(1, 0, 0), &p(3, 1, 0), &p(5, 1, 0)), q(5, 1));
        // touching at an endpoint
        assert_eq!(segment_dist_sq(&p(0, 0, 0), &p(1, 1, 1), &p(1, 1, 1), &p(2, 0, 5)), q(0, 1));
        // point segment
        assert_eq!(segment_dist_sq(&p(0, 0, 0), &p(0, 0, 0), &p(0, 3, 4), &p(0, 3, 4)), q(25, 1));
    }

    #[test]
    fn length_bounds_from_recorded_tuples() {
        let x = t(&[2, 3]);
        let img = compress(&x, Scale::ONE);
        let w = Walk {
            m: Scale::ONE,
            vertices: vec![x.clone(), img.clone(), img.clone()],
            step_kinds: vec![StepKind::Compression, StepKind::Translation],
            translations: vec![vec![q(0, 1), q(0, 1)]],
        };
        let r = length_report(&w, 0.0).unwrap();
        assert!((r.length - 337f64.sqrt() / 6.0).abs() < 1e-12);
        assert_eq!(r.translation_total, 0.0);
        // (2/2) sqrt(2) (2 + 0) and (2/2) sqrt(2) (3 + 0)
        assert!((r.bounds.lower.to_f64() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((r.bounds.upper.to_f64() - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        let mut out = Vec::new();
        write_length_csv(&[r], &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("steps,length"));
    }
}
