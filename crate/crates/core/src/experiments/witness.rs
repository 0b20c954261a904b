use serde::{Deserialize, Serialize};

use crate::bounds::Value;
use crate::compression::{entropy, mass};
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::tuple::{NatTuple, Scale};

/// Which mass sandwich a witness is built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SandwichTheorem {
    /// `m n / sup << mass << m n / inf` with `inf = L > n - 1`.
    WeakErdos,
    /// `c1 n / L <= sum 1/x <= c2 n / L` with `c1, c2 > 1`, realized with
    /// `sup = L >= n`.
    ConstantsAboveOne,
    /// `n / K << sum 1/x << log(n / L)` with `L < n - 1 < K`.
    MassLog,
}

impl SandwichTheorem {
    pub fn id(self) -> &'static str {
        match self {
            SandwichTheorem::WeakErdos => "weak_erdos",
            SandwichTheorem::ConstantsAboveOne => "constants_above_one",
            SandwichTheorem::MassLog => "mass_log",
        }
    }
}

impl std::str::FromStr for SandwichTheorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [SandwichTheorem::WeakErdos, SandwichTheorem::ConstantsAboveOne, SandwichTheorem::MassLog]
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::Config(format!("unknown sandwich theorem {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExistenceWitness {
    pub theorem_id: String,
    pub tuple: NatTuple,
    pub l: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    pub m: Scale,
    /// The statistic evaluated on the tuple.
    pub value: Rat,
    /// The lower and upper bound expressions of the statement.
    pub bounds: (Value, Value),
    /// `value / bound` for each side: exact when the bound is rational.
    pub achieved_constants: (Value, Value),
}

fn ratio(value: &Rat, bound: &Value) -> Value {
    match bound {
        Value::Exact(b) => Value::Exact(value / b),
        Value::Float(b) => Value::Float(value.to_f64() / b),
    }
}

fn witness(
    theorem_id: &str,
    tuple: NatTuple,
    (l, k, s, m): (u64, Option<u64>, Option<u32>, Scale),
    value: Rat,
    bounds: (Value, Value),
) -> ExistenceWitness {
    let achieved_constants = (ratio(&value, &bounds.0), ratio(&value, &bounds.1));
    ExistenceWitness {
        theorem_id: theorem_id.to_string(),
        tuple,
        l,
        k,
        s,
        m,
        value,
        bounds,
        achieved_constants,
    }
}

fn unmet(msg: String) -> Error {
    Error::Construction(format!("quantifier constraint unmet: {msg}"))
}

/// `L, L+1, ..., L+n-1`.
fn run_from(l: u64, n: usize) -> NatTuple {
    NatTuple::new((0..n as u64).map(|i| l + i).collect()).expect("distinct and positive")
}

/// `L, L+1, ..., L+n-2, K`; needs `K > L + n - 2`.
fn run_with_sup(l: u64, k: u64, n: usize) -> Result<NatTuple> {
    let last = l + n as u64 - 2;
    if k <= last {
        return Err(unmet(format!("K = {k} leaves no room for {n} distinct entries from L = {l}")));
    }
    let mut v: Vec<u64> = (l..=last).collect();
    v.push(k);
    NatTuple::new(v)
}

/// `L` followed by `n, n+1, ..., 2n-2`, so every other entry exceeds `n - 1`.
fn low_inf(l: u64, n: usize) -> NatTuple {
    let n = n as u64;
    NatTuple::new(std::iter::once(l).chain(n..=2 * n - 2).collect()).expect("distinct and positive")
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("n must be >= 2, got {n}")));
    }
    Ok(())
}

/// Builds the canonical tuple for a mass sandwich and reports the exact
/// mass together with its ratios to the two bound expressions.
pub fn sandwich_search(
    n: usize,
    l: u64,
    k: Option<u64>,
    m: Scale,
    theorem: SandwichTheorem,
) -> Result<ExistenceWitness> {
    check_n(n)?;
    let nm = n as u64 * m.get();
    let below = n as u64 - 1;
    let (tuple, bounds) = match theorem {
        SandwichTheorem::WeakErdos => {
            if l <= below {
                return Err(unmet(format!("L = {l} must exceed n - 1 = {below}")));
            }
            let t = run_from(l, n);
            let b = (Value::Exact(Rat::new(nm, t.sup())?), Value::Exact(Rat::new(nm, t.inf())?));
            (t, b)
        }
        SandwichTheorem::ConstantsAboveOne => {
            if l <= below {
                return Err(unmet(format!("L = {l} must exceed n - 1 = {below}")));
            }
            let t = run_from(l + 1 - n as u64, n);
            let b = Value::Exact(Rat::new(nm, l)?);
            (t, (b.clone(), b))
        }
        SandwichTheorem::MassLog => {
            let k = k.ok_or_else(|| Error::Precondition("mass_log needs K".into()))?;
            if l == 0 || l >= below || k <= below {
                return Err(unmet(format!("need 1 <= L < n - 1 < K, got L = {l}, K = {k}, n = {n}")));
            }
            let t = run_with_sup(l, k, n)?;
            let b = (
                Value::Exact(Rat::new(nm, k)?),
                Value::Float(m.get() as f64 * (n as f64 / l as f64).ln()),
            );
            (t, b)
        }
    };
    let value = mass(&tuple.to_rat(), m);
    Ok(witness(theorem.id(), tuple, (l, k, None, m), value, bounds))
}

/// `sum 1/x_j^s` on the canonical tuple. For `L > n - 1` the bound is
/// `s n / L^(s-1)`; for `L < n - 1` it is `log^s(n / L)`.
pub fn power_sum_search(n: usize, l: u64, s: u32) -> Result<ExistenceWitness> {
    check_n(n)?;
    if s < 2 {
        return Err(Error::Precondition(format!("s must be >= 2, got {s}")));
    }
    let below = n as u64 - 1;
    let (tuple, bound, id) = if l > below {
        let b = Rat::new(u64::from(s) * n as u64, 1)? / Rat::from(l).pow(s as i32 - 1);
        (run_from(l, n), Value::Exact(b), "power_sum_lower")
    } else if l >= 1 && l < below {
        let b = (n as f64 / l as f64).ln().powi(s as i32);
        (low_inf(l, n), Value::Float(b), "power_sum_log")
    } else {
        return Err(unmet(format!("L = {l} must differ from n - 1 = {below} and be >= 1")));
    };
    let value: Rat = tuple.coords().iter().map(|&x| Rat::from(x).pow(-(s as i32))).sum();
    Ok(witness(id, tuple, (l, None, Some(s), Scale::ONE), value, (bound.clone(), bound)))
}

/// `prod 1/x_j` on the canonical tuple. Without `K` (needs `L > n - 1`) both
/// bounds are `1/L^n`; with `K` (needs `L < n - 1 < K`) they are `1/K^n` and
/// `log(n/L) / (n L^(n-1))`.
pub fn product_search(n: usize, l: u64, k: Option<u64>) -> Result<ExistenceWitness> {
    check_n(n)?;
    let below = n as u64 - 1;
    let ni = n as i32;
    let (tuple, bounds, id) = match k {
        None => {
            if l <= below {
                return Err(unmet(format!("L = {l} must exceed n - 1 = {below}")));
            }
            let b = Value::Exact(Rat::from(l).pow(-ni));
            (run_from(l, n), (b.clone(), b), "product_power")
        }
        Some(k) => {
            if k < l {
                return Err(unmet(format!("K = {k} is below L = {l}")));
            }
            if l == 0 || l >= below || k <= below {
                return Err(unmet(format!("need 1 <= L < n - 1 < K, got L = {l}, K = {k}, n = {n}")));
            }
            let upper = (n as f64 / l as f64).ln() / (n as f64 * (l as f64).powi(ni - 1));
            (
                run_with_sup(l, k, n)?,
                (Value::Exact(Rat::from(k).pow(-ni)), Value::Float(upper)),
                "product_log",
            )
        }
    };
    let value = entropy(&tuple.to_rat(), Scale::ONE);
    Ok(witness(id, tuple, (l, k, None, Scale::ONE), value, bounds))
}

/// One compact JSON document per line.
pub fn write_json_lines<W: std::io::Write>(witnesses: &[ExistenceWitness], mut out: W) -> Result<()> {
    for w in witnesses {
        serde_json::to_writer(&mut out, w)?;
        writeln!(out).map_err(|e| Error::Config(format!("write failed: {e}")))?;
    }
    Ok(())
}
