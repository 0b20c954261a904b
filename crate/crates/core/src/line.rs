//! Compression lines `x + t (x - V_m[x])` and the needle function.

use serde::{Deserialize, Serialize};

use crate::compression::{compress, is_fixed};
use crate::error::{check_dim, Error, Result};
use crate::scalar::{add, dot, norm_sq, sub, Scalar};
use crate::tuple::{Scale, Tuple};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct CompressionLine<S> {
    pub anchor: Tuple<S>,
    pub image: Tuple<S>,
    /// `anchor - image`.
    pub direction: Vec<S>,
    pub m: Scale,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineRelation {
    Identical,
    Parallel,
    Intersecting,
    /// Skew: neither parallel nor meeting (only possible for `n >= 3`).
    Disjoint,
}

pub fn line_of<S: Scalar>(x: &Tuple<S>, m: Scale) -> Result<CompressionLine<S>> {
    if is_fixed(x, m) {
        return Err(Error::DegenerateLine(format!(
            "{x:?} is fixed by the compression of scale {}",
            m.get()
        )));
    }
    let image = compress(x, m);
    Ok(CompressionLine {
        direction: sub(x, &image),
        anchor: x.clone(),
        image,
        m,
    })
}

/// `|u|^2 |v|^2 - (u.v)^2`, zero exactly when `u` and `v` are parallel.
fn parallel_residual<S: Scalar>(u: &[S], v: &[S]) -> (S, S) {
    let uv = dot(u, v);
    let scale = norm_sq(u) * norm_sq(v);
    (scale.clone() - uv.clone() * uv, scale)
}

impl<S: Scalar> CompressionLine<S> {
    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// `anchor + t * direction`.
    pub fn point_at(&self, t: &S) -> Vec<S> {
        self.anchor
            .iter()
            .zip(&self.direction)
            .map(|(a, d)| a.clone() + t.clone() * d.clone())
            .collect()
    }

    /// Squared distance from `p` to the line.
    pub fn dist_sq_to(&self, p: &[S]) -> Result<S> {
        check_dim(self.dim(), p.len())?;
        let w = sub(p, &self.anchor);
        let wd = dot(&w, &self.direction);
        Ok(norm_sq(&w) - wd.clone() * wd / norm_sq(&self.direction))
    }

    /// Collinearity of `p` with the line; exact on rationals, relative `tol`
    /// on floats.
    pub fn on_line(&self, p: &[S], tol: f64) -> Result<bool> {
        check_dim(self.dim(), p.len())?;
        let w = sub(p, &self.anchor);
        let (residual, scale) = parallel_residual(&w, &self.direction);
        Ok(residual.negligible(&scale, tol))
    }

    /// The implication "`a` on the line implies `V_m[a]` on the line".
    pub fn image_on_line_check(&self, a: &Tuple<S>, tol: f64) -> Result<bool> {
        if !self.on_line(a, tol)? {
            return Ok(true);
        }
        self.on_line(&compress(a, self.m), tol)
    }
}

/// Classifies two lines of the same dimension.
pub fn lines_relation<S: Scalar>(
    l1: &CompressionLine<S>,
    l2: &CompressionLine<S>,
    tol: f64,
) -> Result<LineRelation> {
    check_dim(l1.dim(), l2.dim())?;
    let (res, scale) = parallel_residual(&l1.direction, &l2.direction);
    if res.negligible(&scale, tol) {
        return Ok(if l1.on_line(&l2.anchor, tol)? {
            LineRelation::Identical
        } else {
            LineRelation::Parallel
        });
    }
    // The lines meet iff the offset lies in the span of the two directions,
    // i.e. the Gram determinant of (d1, d2, w) vanishes.
    let w = sub(&l2.anchor, &l1.anchor);
    let vs = [&l1.direction[..], &l2.direction[..], &w[..]];
    let g = |i: usize, j: usize| dot(vs[i], vs[j]);
    let gram = det3([
        [g(0, 0), g(0, 1), g(0, 2)],
        [g(1, 0), g(1, 1), g(1, 2)],
        [g(2, 0), g(2, 1), g(2, 2)],
    ]);
    let gram_scale = g(0, 0) * g(1, 1) * g(2, 2);
    Ok(if gram.negligible(&gram_scale, tol) {
        LineRelation::Intersecting
    } else {
        LineRelation::Disjoint
    })
}

fn det3<S: Scalar>(a: [[S; 3]; 3]) -> S {
    let m = |i: usize, j: usize| a[i][j].clone();
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
        - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

/// Compression followed by translation: `V_m[x] + a`.
pub fn needle<S: Scalar>(x: &Tuple<S>, m: Scale, a: &[S]) -> Result<Vec<S>> {
    check_dim(x.dim(), a.len())?;
    Ok(add(&compress(x, m), a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;
    use crate::scalar::REL_TOL;

    fn t(v: &[i64]) -> Tuple<Rat> {
        Tuple::from_ints(v).unwrap()
    }

    fn q(p: i64, d: i64) -> Rat {
        Rat::new(p, d).unwrap()
    }

    #[test]
    fn line_of_examples() {
        let l = line_of(&t(&[2, 3]), Scale::ONE).unwrap();
        assert_eq!(l.image.coords(), &[q(1, 2), q(1, 3)]);
        assert_eq!(l.direction, vec![q(3, 2), q(8, 3)]);
        let l = line_of(&t(&[4, 9]), Scale::ONE).unwrap();
        assert_eq!(l.direction, vec![q(15, 4), q(80, 9)]);
        assert!(matches!(
            line_of(&t(&[1, 1]), Scale::ONE),
            Err(Error::DegenerateLine(_))
        ));
    }

    #[test]
    fn midpoint_and_anchor_checks() {
        let l = line_of(&t(&[2, 3]), Scale::ONE).unwrap();
        let mid: Vec<Rat> = l
            .anchor
            .iter()
            .zip(l.image.iter())
            .map(|(a, b)| (a.clone() + b.clone()) / q(2, 1))
            .collect();
        assert!(l.on_line(&mid, REL_TOL).unwrap());
        assert!(l.on_line(&l.point_at(&q(-7, 3)), REL_TOL).unwrap());
        assert!(!l.on_line(&[q(2, 1), q(2, 1)], REL_TOL).unwrap());
        assert!(l.image_on_line_check(&l.anchor, REL_TOL).unwrap());
        assert_eq!(l.dist_sq_to(&mid).unwrap(), q(0, 1));
    }

    #[test]
    fn image_of_other_line_points_can_leave_the_line() {
        let l = line_of(&t(&[2, 3]), Scale::ONE).unwrap();
        let a = Tuple::new(l.point_at(&q(2, 1))).unwrap();
        assert!(l.on_line(&a, REL_TOL).unwrap());
        assert!(!l.image_on_line_check(&a, REL_TOL).unwrap());
    }

    #[test]
    fn relations() {
        let l1 = line_of(&t(&[2, 3]), Scale::ONE).unwrap();
        assert_eq!(lines_relation(&l1, &l1, REL_TOL).unwrap(), LineRelation::Identical);
        let l2 = line_of(&t(&[3, 2]), Scale::ONE).unwrap();
        assert_eq!(lines_relation(&l1, &l2, REL_TOL).unwrap(), LineRelation::Intersecting);
        let shifted = CompressionLine {
            anchor: Tuple::new(add(&l1.anchor, &[q(0, 1), q(1, 1)])).unwrap(),
            ..l1.clone()
        };
        assert_eq!(lines_relation(&l1, &shifted, REL_TOL).unwrap(), LineRelation::Parallel);
        let a = line_of(&t(&[2, 3, 4]), Scale::ONE).unwrap();
        let skew = CompressionLine {
            anchor: Tuple::new(add(&a.anchor, &[q(0, 1), q(0, 1), q(1, 1)])).unwrap(),
            direction: vec![q(1, 1), q(0, 1), q(0, 1)],
            ..a.clone()
        };
        assert_eq!(lines_relation(&a, &skew, REL_TOL).unwrap(), LineRelation::Disjoint);
    }

    #[test]
    fn needle_examples() {
        let x = t(&[2, 3]);
        assert_eq!(needle(&x, Scale::ONE, &[q(1, 1), q(1, 1)]).unwrap(), vec![q(3, 2), q(4, 3)]);
        assert_eq!(needle(&x, Scale::ONE, &[q(0, 1), q(0, 1)]).unwrap(), vec![q(1, 2), q(1, 3)]);
        let a = [q(5, 7), q(-2, 1)];
        let y = needle(&x, Scale::ONE, &a).unwrap();
        let back = Tuple::new(sub(&y, &a)).unwrap();
        assert_eq!(compress(&back, Scale::ONE), x);
    }
}
