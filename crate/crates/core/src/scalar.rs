//! The two coordinate fields the engine runs on: exact [`Rat`] and `f64`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::rat::Rat;

/// Relative tolerance for float comparisons against exact quantities.
pub const REL_TOL: f64 = 1e-12;

/// Coordinate scalar. Exact implementations answer every comparison exactly
/// and ignore tolerance arguments.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_u64(v: u64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// Nearest representable value of a float; `None` for non-finite input.
    fn from_f64(v: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Sum of a sequence. Exact types may override this to postpone
    /// normalization until the end.
    fn sum_all<I: IntoIterator<Item = Self>>(items: I) -> Self {
        items.into_iter().fold(Self::zero(), |acc, v| acc + v)
    }

    fn product_all<I: IntoIterator<Item = Self>>(items: I) -> Self {
        items.into_iter().fold(Self::one(), |acc, v| acc * v)
    }

    /// Equality: exact for rationals, relative `tol` for floats.
    fn near(&self, other: &Self, tol: f64) -> bool;

    /// `self <= other`, with `other` widened by a relative `tol` for floats.
    fn le_tol(&self, other: &Self, tol: f64) -> bool;

    /// Whether `self` is zero when measured against the magnitude `scale`.
    fn negligible(&self, scale: &Self, tol: f64) -> bool;
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rat::from(v)
    }

    fn from_u64(v: u64) -> Self {
        Rat::from(v)
    }

    fn from_bigint(v: &BigInt) -> Self {
        Rat::from_integer(v.clone())
    }

    fn from_f64(v: f64) -> Option<Self> {
        Rat::from_f64(v)
    }

    fn to_f64(&self) -> f64 {
        Rat::to_f64(self)
    }

    fn abs(&self) -> Self {
        Rat::abs(self)
    }

    fn sum_all<I: IntoIterator<Item = Self>>(items: I) -> Self {
        Rat::sum_unreduced(items)
    }

    fn product_all<I: IntoIterator<Item = Self>>(items: I) -> Self {
        Rat::product_unreduced(items)
    }

    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn le_tol(&self, other: &Self, _tol: f64) -> bool {
        self <= other
    }

    fn negligible(&self, _scale: &Self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_u64(v: u64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::INFINITY)
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn near(&self, other: &Self, tol: f64) -> bool {
        let scale = self.abs().max(other.abs()).max(1.0);
        (self - other).abs() <= tol * scale
    }

    fn le_tol(&self, other: &Self, tol: f64) -> bool {
        let scale = self.abs().max(other.abs()).max(1.0);
        *self <= *other + tol * scale
    }

    fn negligible(&self, scale: &Self, tol: f64) -> bool {
        self.abs() <= tol * scale.abs().max(1.0)
    }
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    S::sum_all(a.iter().zip(b).map(|(x, y)| x.clone() * y.clone()))
}

pub(crate) fn norm_sq<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

pub(crate) fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub(crate) fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub(crate) fn dist_sq<S: Scalar>(a: &[S], b: &[S]) -> S {
    S::sum_all(a.iter().zip(b).map(|(x, y)| {
        let d = x.clone() - y.clone();
        d.clone() * d
    }))
}
