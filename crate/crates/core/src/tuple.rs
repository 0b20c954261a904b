use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::scalar::Scalar;
use num_traits::Zero;

/// A point of dimension `n >= 2` whose coordinates are all nonzero, i.e. a
/// point in the domain of every compression.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<S>", into = "Vec<S>", bound = "S: Scalar")]
pub struct Tuple<S> {
    coords: Vec<S>,
}

impl<S: Scalar> Tuple<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain(format!(
                "tuples need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(i) = coords.iter().position(Zero::is_zero) {
            return Err(Error::Domain(format!("coordinate {i} is zero")));
        }
        Ok(Tuple { coords })
    }

    /// Skips validation; callers guarantee length >= 2 and nonzero entries.
    pub(crate) fn from_nonzero(coords: Vec<S>) -> Self {
        debug_assert!(coords.len() >= 2);
        Tuple { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Tuple::new(coords.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    /// `t * self`; fails when `t` is zero.
    pub fn scaled(&self, t: &S) -> Result<Self> {
        Tuple::new(self.coords.iter().map(|c| c.clone() * t.clone()).collect())
    }

    pub fn to_f64(&self) -> Tuple<f64> {
        Tuple {
            coords: self.coords.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn inf(&self) -> S {
        self.coords
            .iter()
            .cloned()
            .reduce(|a, b| if b < a { b } else { a })
            .expect("tuple is non-empty")
    }

    pub fn sup(&self) -> S {
        self.coords
            .iter()
            .cloned()
            .reduce(|a, b| if b > a { b } else { a })
            .expect("tuple is non-empty")
    }
}

impl<S> Deref for Tuple<S> {
    type Target = [S];

    fn deref(&self) -> &[S] {
        &self.coords
    }
}

impl<S> AsRef<[S]> for Tuple<S> {
    fn as_ref(&self) -> &[S] {
        &self.coords
    }
}

impl<S: Scalar> TryFrom<Vec<S>> for Tuple<S> {
    type Error = Error;

    fn try_from(v: Vec<S>) -> Result<Self> {
        Tuple::new(v)
    }
}

impl<S> From<Tuple<S>> for Vec<S> {
    fn from(t: Tuple<S>) -> Vec<S> {
        t.coords
    }
}

impl<S: fmt::Display> fmt::Display for Tuple<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl<S: fmt::Debug> fmt::Debug for Tuple<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c:?}")?;
        }
        f.write_str(")")
    }
}

/// A tuple of pairwise distinct positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct NatTuple {
    coords: Vec<u64>,
}

impl NatTuple {
    pub fn new(coords: Vec<u64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain(format!(
                "tuples need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.contains(&0) {
            return Err(Error::Domain("natural tuples have entries >= 1".into()));
        }
        let distinct: BTreeSet<u64> = coords.iter().copied().collect();
        if distinct.len() != coords.len() {
            return Err(Error::Domain(format!(
                "entries must be pairwise distinct: {coords:?}"
            )));
        }
        Ok(NatTuple { coords })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn inf(&self) -> u64 {
        *self.coords.iter().min().expect("non-empty")
    }

    pub fn sup(&self) -> u64 {
        *self.coords.iter().max().expect("non-empty")
    }

    pub fn norm_sq(&self) -> u128 {
        self.coords.iter().map(|&c| c as u128 * c as u128).sum()
    }

    pub fn to_tuple<S: Scalar>(&self) -> Tuple<S> {
        Tuple {
            coords: self.coords.iter().map(|&c| S::from_u64(c)).collect(),
        }
    }

    pub fn to_rat(&self) -> Tuple<Rat> {
        self.to_tuple()
    }
}

impl TryFrom<Vec<u64>> for NatTuple {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        NatTuple::new(v)
    }
}

impl From<NatTuple> for Vec<u64> {
    fn from(t: NatTuple) -> Vec<u64> {
        t.coords
    }
}

impl fmt::Display for NatTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for NatTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Compression scale `m >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Scale(u64);

impl Scale {
    pub const ONE: Scale = Scale(1);

    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            Err(Error::Domain("scale must be >= 1".into()))
        } else {
            Ok(Scale(m))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_scalar<S: Scalar>(self) -> S {
        S::from_u64(self.0)
    }
}

impl TryFrom<u64> for Scale {
    type Error = Error;

    fn try_from(m: u64) -> Result<Self> {
        Scale::new(m)
    }
}

impl From<Scale> for u64 {
    fn from(s: Scale) -> u64 {
        s.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_rejects_zero_and_short() {
        assert!(matches!(
            Tuple::<Rat>::from_ints(&[1, 0, 3]),
            Err(Error::Domain(_))
        ));
        assert!(Tuple::<f64>::new(vec![2.0]).is_err());
        assert!(Tuple::<f64>::new(vec![-2.0, 0.5]).is_ok());
    }

    #[test]
    fn nat_tuple_enforces_distinct_positive() {
        assert!(NatTuple::new(vec![2, 2, 3]).is_err());
        assert!(NatTuple::new(vec![0, 2]).is_err());
        let t = NatTuple::new(vec![9, 4, 6]).unwrap();
        assert_eq!((t.inf(), t.sup()), (4, 9));
        assert!(t.inf() < t.sup());
    }

    #[test]
    fn scale_zero_rejected() {
        assert!(Scale::new(0).is_err());
        assert!(serde_json::from_str::<Scale>("0").is_err());
        assert_eq!(serde_json::from_str::<Scale>("3").unwrap().get(), 3);
    }

    #[test]
    fn tuple_json_validates() {
        let t: Tuple<Rat> = serde_json::from_str(r#"["1/2", "3"]"#).unwrap();
        assert_eq!(t.to_string(), "(1/2, 3)");
        assert!(serde_json::from_str::<Tuple<Rat>>(r#"["0", "3"]"#).is_err());
    }
}
