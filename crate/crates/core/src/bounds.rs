//! Closed-form upper and lower bounds for the compression statistics of a
//! tuple of distinct positive integers, expressed through `n`, the smallest
//! entry `inf` and the largest entry `sup`.
//!
//! Harmonic and termwise forms are exact rationals; every form involving a
//! logarithm or a square root is a float.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::compression::factorial;
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::tuple::Scale;

/// A bound value: exact when the expression is rational, float otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Exact(Rat),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64(),
            Value::Float(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Float(_) => None,
        }
    }

    /// `self / bound` as a float, signed; `None` when the bound is zero or
    /// the quotient is not finite.
    pub fn ratio_to(&self, bound: &Value) -> Option<f64> {
        match (self, bound) {
            (Value::Exact(a), Value::Exact(b)) => (!b.is_zero()).then(|| (a / b).to_f64()),
            _ => {
                let b = bound.to_f64();
                let r = self.to_f64() / b;
                (b != 0.0 && r.is_finite()).then_some(r)
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Value::Exact(r) => !r.is_negative() && !r.is_zero(),
            Value::Float(v) => *v > 0.0,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Float(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundForm {
    /// Sums of reciprocals over the extremal runs of consecutive integers.
    HarmonicExact,
    /// Logarithmic and other closed forms that hold up to unspecified
    /// multiplicative constants.
    LogAsymptotic,
    /// Termwise `n/sup .. n/inf` bounds.
    SupInfExact,
}

impl BoundForm {
    /// Whether the bound holds exactly as stated.
    pub fn is_exact(self) -> bool {
        !matches!(self, BoundForm::LogAsymptotic)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundPair {
    pub lower: Value,
    pub upper: Value,
    pub form: BoundForm,
}

impl BoundPair {
    fn floats(lower: f64, upper: f64) -> Self {
        BoundPair {
            lower: Value::Float(lower),
            upper: Value::Float(upper),
            form: BoundForm::LogAsymptotic,
        }
    }
}

fn check_shape(n: usize, inf: u64, sup: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("need n >= 2, got {n}")));
    }
    if inf < 1 || inf >= sup {
        return Err(Error::Domain(format!(
            "need 1 <= inf < sup, got inf={inf}, sup={sup}"
        )));
    }
    Ok(())
}

/// `log(1 + (n-1)/d)`.
fn log_up(n: usize, d: f64) -> f64 {
    ((n - 1) as f64 / d).ln_1p()
}

/// `log(1 - (n-1)/d)^{-1}`, defined only for `d > n-1`.
fn log_down(n: usize, d: f64) -> Result<f64> {
    let ratio = (n - 1) as f64 / d;
    if ratio >= 1.0 {
        return Err(Error::Domain(format!(
            "log(1 - {}/{d}) needs {d} > {}",
            n - 1,
            n - 1
        )));
    }
    Ok(-(-ratio).ln_1p())
}

fn harmonic_run(start: u64, len: usize, descending: bool) -> Rat {
    Rat::sum_unreduced((0..len as u64).map(|k| {
        let d = if descending { start - k } else { start + k };
        Rat::from(d).recip()
    }))
}

pub fn mass_bounds(n: usize, inf: u64, sup: u64, m: Scale, form: BoundForm) -> Result<BoundPair> {
    check_shape(n, inf, sup)?;
    let ms = m.get() as f64;
    let mr = Rat::from(m.get());
    match form {
        BoundForm::HarmonicExact => {
            let span = (n - 1) as u64;
            if sup < inf + span || sup <= span {
                return Err(Error::Domain(format!(
                    "harmonic bounds need sup >= inf + n - 1 and sup > n - 1 (n={n}, inf={inf}, sup={sup})"
                )));
            }
            Ok(BoundPair {
                lower: Value::Exact(&mr * &harmonic_run(sup, n, true)),
                upper: Value::Exact(&mr * &harmonic_run(inf, n, false)),
                form,
            })
        }
        BoundForm::LogAsymptotic => Ok(BoundPair::floats(
            ms * log_down(n, sup as f64)?,
            ms * log_up(n, inf as f64),
        )),
        BoundForm::SupInfExact => {
            let mn = &mr * &Rat::from(n as u64);
            Ok(BoundPair {
                lower: Value::Exact(&mn / &Rat::from(sup)),
                upper: Value::Exact(&mn / &Rat::from(inf)),
                form,
            })
        }
    }
}

pub fn rank_bounds(n: usize, inf: u64, sup: u64, m: Scale) -> Result<BoundPair> {
    check_shape(n, inf, sup)?;
    let ms = m.get() as f64;
    let (i2, s2) = ((inf as f64).powi(2), (sup as f64).powi(2));
    Ok(BoundPair::floats(
        ms * log_down(n, s2)?.sqrt(),
        ms * log_up(n, i2).sqrt(),
    ))
}

pub fn entropy_bounds(n: usize, inf: u64, sup: u64) -> Result<BoundPair> {
    check_shape(n, inf, sup)?;
    let nf = n as f64;
    let e = (n - 1) as i32;
    Ok(BoundPair::floats(
        log_down(n, sup as f64)? / (nf * (sup as f64).powi(e)),
        log_up(n, inf as f64) / (nf * (inf as f64).powi(e)),
    ))
}

/// Bounds on the squared gap.
pub fn gap_bounds(n: usize, inf: u64, sup: u64, m: Scale) -> Result<BoundPair> {
    check_shape(n, inf, sup)?;
    let (nf, ms) = (n as f64, m.get() as f64);
    let (i2, s2) = ((inf as f64).powi(2), (sup as f64).powi(2));
    let upper = nf * s2 + ms * ms * log_up(n, i2) - 2.0 * ms * nf;
    let lower = nf * i2 + ms * ms * log_down(n, s2)? - 2.0 * ms * nf;
    Ok(BoundPair::floats(lower, upper))
}

pub fn energy_bounds(n: usize, inf: u64, sup: u64) -> Result<BoundPair> {
    check_shape(n, inf, sup)?;
    let rn = (n as f64).sqrt();
    let e = (n - 1) as i32;
    Ok(BoundPair::floats(
        log_down(n, sup as f64)? / (rn * (sup as f64).powi(e)),
        log_up(n, inf as f64) / ((inf as f64).powi(e) * rn),
    ))
}

/// Values may be negative; they are returned as-is.
pub fn cover_mass_bounds(n: usize, inf: u64, sup: u64, s: u32) -> Result<BoundPair> {
    check_shape(n, inf, sup)?;
    if s < 2 {
        return Err(Error::Precondition(format!("cover bounds need s >= 2, got {s}")));
    }
    let fact = bigint_to_f64(&factorial(s));
    let (nf, sf) = (n as f64, s as f64);
    let si = s as i32;
    let lower = fact * (log_down(n, sup as f64)?.powi(si) - sf * nf / (inf as f64).powi(si - 1));
    let upper = fact * (log_up(n, inf as f64).powi(si) - sf * nf / (sup as f64).powi(si - 1));
    Ok(BoundPair::floats(lower, upper))
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    Rat::from_integer(v.clone()).to_f64()
}

/// Returns `(measure pair, cost pair)`. Measure bounds are the integers
/// `inf^n` and `sup^n`; cost bounds carry an extra `inf`/`sup` and `sqrt(n)`.
pub fn measure_cost_bounds(n: usize, inf: u64, sup: u64) -> Result<(BoundPair, BoundPair)> {
    check_shape(n, inf, sup)?;
    let pow = |b: u64, e: usize| Rat::from(b).pow(e as i32);
    let measure = BoundPair {
        lower: Value::Exact(pow(inf, n)),
        upper: Value::Exact(pow(sup, n)),
        form: BoundForm::LogAsymptotic,
    };
    let rn = (n as f64).sqrt();
    let cost = BoundPair::floats(
        pow(inf, n + 1).to_f64() * rn,
        pow(sup, n + 1).to_f64() * rn,
    );
    Ok((measure, cost))
}
