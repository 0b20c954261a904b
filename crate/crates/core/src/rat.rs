//! Exact arbitrary-precision rationals.
//!
//! [`Rat`] is built on `num-bigint` and carries its own text form (`"p/q"`,
//! or `"p"` when the denominator is one) through serde and the command line.
//! Everything observable (text, `numer`, `denom`, hashing) uses the reduced
//! fraction with a positive denominator.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Values whose reduced numerator fits `i64` and denominator fits `u64` are
/// kept inline and reduced. Larger values are stored as a numerator and a
/// positive denominator that are only reduced while small: above
/// [`LAZY_BITS`] the gcd costs far more than the arithmetic it would save,
/// so comparisons cross-multiply instead.
#[derive(Clone)]
enum Repr {
    Small(i64, u64),
    Big(BigInt, BigInt),
}

/// Combined numerator and denominator size above which results of
/// arithmetic are left unreduced.
const LAZY_BITS: u64 = 1024;

#[derive(Clone)]
pub struct Rat(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    if let (Ok(a64), Ok(b64)) = (u64::try_from(a), u64::try_from(b)) {
        return a64.gcd(&b64) as u128;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, Error> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(Rat::from_big(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Rat::from_big(BigRational::from_integer(v.into()))
    }

    /// Exact value of a finite float (every finite `f64` is a dyadic rational).
    pub fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Rat::from_big)
    }

    fn from_big(v: BigRational) -> Self {
        if let (Some(n), Some(d)) = (v.numer().to_i64(), v.denom().to_u64()) {
            Rat(Repr::Small(n, d))
        } else {
            let (n, d) = v.into_raw();
            Rat(Repr::Big(n, d))
        }
    }

    /// `n / d` for `d != 0`, reduced only when small.
    fn from_raw(mut n: BigInt, mut d: BigInt) -> Self {
        if n.is_zero() {
            return Rat::zero();
        }
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        if n.bits() + d.bits() > LAZY_BITS {
            Rat(Repr::Big(n, d))
        } else {
            Rat::from_big(BigRational::new(n, d))
        }
    }

    /// The same value with numerator and denominator fully reduced.
    pub fn reduced(&self) -> Self {
        match &self.0 {
            Repr::Small(..) => self.clone(),
            Repr::Big(n, d) => Rat::from_big(BigRational::new(n.clone(), d.clone())),
        }
    }

    /// Bit lengths of the stored numerator and denominator, which need not
    /// be reduced. Enough for magnitude estimates without a gcd.
    pub fn stored_bits(&self) -> (u64, u64) {
        match &self.0 {
            Repr::Small(n, d) => (
                u64::from(64 - n.unsigned_abs().leading_zeros()),
                u64::from(64 - d.leading_zeros()),
            ),
            Repr::Big(n, d) => (n.bits(), d.bits()),
        }
    }

    fn raw_parts(&self) -> (BigInt, BigInt) {
        match &self.0 {
            Repr::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(n, d) => (n.clone(), d.clone()),
        }
    }

    /// `n / d` with `d > 0`, not necessarily reduced.
    fn from_i128(n: i128, d: u128) -> Self {
        debug_assert!(d > 0);
        let g = gcd_u128(n.unsigned_abs(), d);
        let (n, d) = if g > 1 { (n / g as i128, d / g) } else { (n, d) };
        match (i64::try_from(n), u64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat(Repr::Small(n, d)),
            _ => Rat(Repr::Big(BigInt::from(n), BigInt::from(d))),
        }
    }

    /// Reduced value as a `BigRational`.
    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(n, d) => BigRational::new(n.clone(), d.clone()),
        }
    }

    fn into_raw(self) -> (BigInt, BigInt) {
        match self.0 {
            Repr::Big(n, d) => (n, d),
            Repr::Small(n, d) => (BigInt::from(n), BigInt::from(d)),
        }
    }

    /// Reduced numerator.
    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(..) => self.to_big().numer().clone(),
        }
    }

    /// Reduced (positive) denominator.
    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(..) => self.to_big().denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(n, d) => (n % d).is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(n, _) => n.is_negative(),
        }
    }

    /// Panics on zero, like division by zero.
    pub fn recip(&self) -> Self {
        Rat::one() / self
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, e: i32) -> Self {
        let (n, d) = self.raw_parts();
        let k = e.unsigned_abs() as usize;
        let (n, d) = (num_traits::pow(n, k), num_traits::pow(d, k));
        if e < 0 {
            assert!(!n.is_zero(), "zero to a negative power");
            Rat::from_raw(d, n)
        } else {
            Rat::from_raw(n, d)
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => {
                if n.unsigned_abs() < (1 << 53) && *d < (1 << 53) {
                    *n as f64 / *d as f64
                } else {
                    big_to_f64(&self.to_big())
                }
            }
            Repr::Big(n, d) => big_to_f64(&BigRational::new_raw(n.clone(), d.clone())),
        }
    }

    /// Sum with a single reduction at the end instead of one per term.
    pub fn sum_unreduced<I: IntoIterator<Item = Rat>>(items: I) -> Rat {
        let mut items = items.into_iter();
        let (mut n, mut d) = (0i128, 1u128);
        for v in items.by_ref() {
            match v.0 {
                Repr::Small(p, q) => {
                    let (p, q) = (p as i128, q as u128);
                    let next = if q == d {
                        n.checked_add(p).map(|n| (n, d))
                    } else {
                        let cross = || -> Option<(i128, u128)> {
                            let nq = n.checked_mul(i128::try_from(q).ok()?)?;
                            let pd = p.checked_mul(i128::try_from(d).ok()?)?;
                            Some((nq.checked_add(pd)?, d.checked_mul(q)?))
                        };
                        cross()
                    };
                    match next {
                        Some((n2, d2)) => {
                            n = n2;
                            d = d2;
                        }
                        None => {
                            return big_sum(BigInt::from(n), BigInt::from(d), Some(Rat(Repr::Small(p as i64, q as u64))), items);
                        }
                    }
                }
                big => return big_sum(BigInt::from(n), BigInt::from(d), Some(Rat(big)), items),
            }
        }
        Rat::from_i128(n, d)
    }

    pub fn product_unreduced<I: IntoIterator<Item = Rat>>(items: I) -> Rat {
        let mut numer = BigInt::one();
        let mut denom = BigInt::one();
        for v in items {
            match v.0 {
                Repr::Small(p, q) => {
                    numer *= p;
                    if q != 1 {
                        denom *= q;
                    }
                }
                Repr::Big(p, q) => {
                    numer *= p;
                    denom *= q;
                }
            }
        }
        Rat::from_raw(numer, denom)
    }
}

fn big_sum(
    mut numer: BigInt,
    mut denom: BigInt,
    first: Option<Rat>,
    rest: impl Iterator<Item = Rat>,
) -> Rat {
    for v in first.into_iter().chain(rest) {
        let (p, q) = v.into_raw();
        if q == denom {
            numer += p;
        } else if q.is_one() {
            numer += p * &denom;
        } else {
            numer = numer * &q + p * &denom;
            denom *= q;
        }
    }
    Rat::from_raw(numer, denom)
}

fn big_to_f64(b: &BigRational) -> f64 {
    match b.to_f64() {
        Some(v) => v,
        // Only reachable for magnitudes outside the f64 range.
        None if b.is_negative() => f64::NEG_INFINITY,
        None => f64::INFINITY,
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            _ => self.cmp(other) == Ordering::Equal,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(..) => match self.reduced().0 {
                Repr::Small(n, d) => {
                    0u8.hash(state);
                    n.hash(state);
                    d.hash(state);
                }
                Repr::Big(n, d) => {
                    1u8.hash(state);
                    n.hash(state);
                    d.hash(state);
                }
            },
        }
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => {
                let ((a, b), (c, d)) = (self.raw_parts(), other.raw_parts());
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<BigRational> for Rat {
    fn from(v: BigRational) -> Self {
        Rat::from_big(v)
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat(Repr::Small(v, 1))
    }
}

impl From<u64> for Rat {
    fn from(v: u64) -> Self {
        match i64::try_from(v) {
            Ok(v) => Rat(Repr::Small(v, 1)),
            Err(_) => Rat(Repr::Big(BigInt::from(v), BigInt::one())),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(..) => {
                let b = self.to_big();
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `"p/q"`, plain integers, and terminating decimals such as `"1.25"`.
impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            return Rat::new(p, q);
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int_part.starts_with('-');
            let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
            let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
            if negative {
                numer = -numer;
            }
            let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
            return Rat::new(numer, denom);
        }
        let v: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rat::from_integer(v))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RatVisitor;

        impl de::Visitor<'_> for RatVisitor {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a fraction string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat::from(v))
            }
        }

        deserializer.deserialize_any(RatVisitor)
    }
}

fn add_ref(a: &Rat, b: &Rat) -> Rat {
    if let (Repr::Small(p, q), Repr::Small(r, s)) = (&a.0, &b.0) {
        let (p, q, r, s) = (*p as i128, *q as u128, *r as i128, *s as u128);
        if q == s {
            return Rat::from_i128(p + r, q);
        }
        // |p*s| and |r*q| are below 2^127, so only the sum can overflow.
        if let Some(n) = (p * s as i128).checked_add(r * q as i128) {
            return Rat::from_i128(n, q * s);
        }
    }
    let ((p, q), (r, s)) = (a.raw_parts(), b.raw_parts());
    if q == s {
        Rat::from_raw(p + r, q)
    } else {
        Rat::from_raw(p * &s + r * &q, q * s)
    }
}

fn sub_ref(a: &Rat, b: &Rat) -> Rat {
    if let (Repr::Small(p, q), Repr::Small(r, s)) = (&a.0, &b.0) {
        let (p, q, r, s) = (*p as i128, *q as u128, *r as i128, *s as u128);
        if q == s {
            return Rat::from_i128(p - r, q);
        }
        if let Some(n) = (p * s as i128).checked_sub(r * q as i128) {
            return Rat::from_i128(n, q * s);
        }
    }
    let ((p, q), (r, s)) = (a.raw_parts(), b.raw_parts());
    if q == s {
        Rat::from_raw(p - r, q)
    } else {
        Rat::from_raw(p * &s - r * &q, q * s)
    }
}

fn mul_ref(a: &Rat, b: &Rat) -> Rat {
    if let (Repr::Small(p, q), Repr::Small(r, s)) = (&a.0, &b.0) {
        return Rat::from_i128(*p as i128 * *r as i128, *q as u128 * *s as u128);
    }
    let ((p, q), (r, s)) = (a.raw_parts(), b.raw_parts());
    Rat::from_raw(p * r, q * s)
}

fn div_ref(a: &Rat, b: &Rat) -> Rat {
    if let (Repr::Small(p, q), Repr::Small(r, s)) = (&a.0, &b.0) {
        assert!(*r != 0, "division by zero");
        let sign = if *r < 0 { -1 } else { 1 };
        return Rat::from_i128(
            sign * (*p as i128 * *s as i128),
            *q as u128 * r.unsigned_abs() as u128,
        );
    }
    assert!(!b.is_zero(), "division by zero");
    let ((p, q), (r, s)) = (a.raw_parts(), b.raw_parts());
    Rat::from_raw(p * s, q * r)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl $tr for Rat {
            type Output = Rat;
            #[inline]
            fn $method(self, rhs: Rat) -> Rat {
                $f(&self, &rhs)
            }
        }

        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            #[inline]
            fn $method(self, rhs: &'a Rat) -> Rat {
                $f(&self, rhs)
            }
        }

        impl<'a> $tr<&'a Rat> for &'a Rat {
            type Output = Rat;
            #[inline]
            fn $method(self, rhs: &'a Rat) -> Rat {
                $f(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(n) => Rat(Repr::Small(n, d)),
                None => Rat::from_big(-Rat(Repr::Small(n, d)).to_big()),
            },
            Repr::Big(n, d) => Rat(Repr::Big(-n, d)),
        }
    }
}

impl Zero for Rat {
    fn zero() -> Self {
        Rat(Repr::Small(0, 1))
    }
    fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n == 0,
            Repr::Big(n, _) => n.is_zero(),
        }
    }
}

impl One for Rat {
    fn one() -> Self {
        Rat(Repr::Small(1, 1))
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        Rat::sum_unreduced(iter)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        Rat::product_unreduced(iter)
    }
}
