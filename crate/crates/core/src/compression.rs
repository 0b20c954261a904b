//! The compression map `V_m[x]_i = m / x_i` and the statistics built on it.
//!
//! Every function is generic over [`Scalar`]: on [`Rat`](crate::Rat) input the
//! results are exact, on `f64` input they are ordinary float evaluations.
//! Quantities that need a square root (`rank`, `gap`, `energy`, `cost`) are
//! returned as `f64`; their squares (or square-free factors) stay exact.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{norm_sq, Scalar};
use crate::tuple::{Scale, Tuple};

pub fn compress<S: Scalar>(x: &Tuple<S>, m: Scale) -> Tuple<S> {
    let m: S = m.as_scalar();
    Tuple::from_nonzero(x.iter().map(|c| m.clone() / c.clone()).collect())
}

/// Coordinatewise reciprocal `1/x`.
pub fn reciprocal<S: Scalar>(x: &Tuple<S>) -> Tuple<S> {
    compress(x, Scale::ONE)
}

pub fn mass<S: Scalar>(x: &Tuple<S>, m: Scale) -> S {
    S::sum_all(compress(x, m).into_coords())
}

/// `m * (sum_i prod_{j != i} x_j) / prod_i x_i`, which must agree with
/// [`mass`].
pub fn mass_via_entropy<S: Scalar>(x: &Tuple<S>, m: Scale) -> S {
    let n = x.dim();
    // prefix[i] = x_0..x_{i-1}, suffix[i] = x_i..x_{n-1}
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(S::one());
    for c in x.iter() {
        let last = prefix.last().cloned().unwrap();
        prefix.push(last * c.clone());
    }
    let mut suffix = vec![S::one(); n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1].clone() * x[i].clone();
    }
    let cofactor_sum = S::sum_all((0..n).map(|i| prefix[i].clone() * suffix[i + 1].clone()));
    m.as_scalar::<S>() * cofactor_sum / prefix[n].clone()
}

pub fn rank_sq<S: Scalar>(x: &Tuple<S>, m: Scale) -> S {
    norm_sq(&compress(x, m))
}

/// `m^2 * mass((x_1^2, ..., x_n^2), 1)`.
pub fn rank_sq_via_mass<S: Scalar>(x: &Tuple<S>, m: Scale) -> S {
    let squares = Tuple::from_nonzero(x.iter().map(|c| c.clone() * c.clone()).collect());
    let m: S = m.as_scalar();
    m.clone() * m * mass(&squares, Scale::ONE)
}

pub fn rank<S: Scalar>(x: &Tuple<S>, m: Scale) -> f64 {
    rank_sq(x, m).to_f64().sqrt()
}

pub fn entropy<S: Scalar>(x: &Tuple<S>, m: Scale) -> S {
    S::product_all(compress(x, m).into_coords())
}

/// `sum_i (x_i - m/x_i)^2`, evaluated from the definition.
pub fn gap_sq<S: Scalar>(x: &Tuple<S>, m: Scale) -> S {
    crate::scalar::dist_sq(x, &compress(x, m))
}

/// `sum x_i^2 - 2mn + m^2 sum 1/x_i^2`.
pub fn gap_sq_identity<S: Scalar>(x: &Tuple<S>, m: Scale) -> S {
    let ms: S = m.as_scalar();
    let n = S::from_u64(x.dim() as u64);
    let inv_sq = S::sum_all(x.iter().map(|c| S::one() / (c.clone() * c.clone())));
    norm_sq(x) - S::from_u64(2) * ms.clone() * n + ms.clone() * ms * inv_sq
}

pub fn gap<S: Scalar>(x: &Tuple<S>, m: Scale) -> f64 {
    gap_sq(x, m).to_f64().sqrt()
}

pub fn energy<S: Scalar>(x: &Tuple<S>, m: Scale) -> f64 {
    gap(x, m) * entropy(x, m).to_f64()
}

pub fn factorial(s: u32) -> BigInt {
    (1..=s).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn check_cover_order(s: u32) -> Result<()> {
    if s == 0 {
        Err(Error::Precondition("cover order s must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Entrywise product of the compressions of scales `1..=s`; coordinate `j`
/// is `s! / x_j^s`.
pub fn cover<S: Scalar>(x: &Tuple<S>, s: u32) -> Result<Tuple<S>> {
    check_cover_order(s)?;
    let mut acc = vec![S::one(); x.dim()];
    for k in 1..=s {
        let image = compress(x, Scale::new(k as u64)?);
        for (a, c) in acc.iter_mut().zip(image.iter()) {
            *a = a.clone() * c.clone();
        }
    }
    Ok(Tuple::from_nonzero(acc))
}

/// Sum of the cover coordinates, from the definition.
pub fn cover_mass<S: Scalar>(x: &Tuple<S>, s: u32) -> Result<S> {
    Ok(S::sum_all(cover(x, s)?.into_coords()))
}

/// `s! * sum_j 1/x_j^s`.
pub fn cover_mass_closed<S: Scalar>(x: &Tuple<S>, s: u32) -> Result<S> {
    check_cover_order(s)?;
    let power_sum = S::sum_all(x.iter().map(|c| {
        S::one() / S::product_all(std::iter::repeat_n(c.clone(), s as usize))
    }));
    Ok(S::from_bigint(&factorial(s)) * power_sum)
}

/// `|entropy(x, m) - entropy(1/x, m)|`.
pub fn measure<S: Scalar>(x: &Tuple<S>, m: Scale) -> S {
    let d = entropy(x, m) - entropy(&reciprocal(x), m);
    if d < S::zero() {
        -d
    } else {
        d
    }
}

pub fn cost<S: Scalar>(x: &Tuple<S>, m: Scale) -> f64 {
    measure(x, m).to_f64() * gap(x, m)
}

/// Whether `x` is fixed by `V_m`, i.e. has zero gap.
pub fn is_fixed<S: Scalar>(x: &Tuple<S>, m: Scale) -> bool {
    gap_sq(x, m).is_zero()
}
