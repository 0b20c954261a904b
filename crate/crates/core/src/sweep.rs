//! Seeded sweeps that evaluate statistics of random natural tuples against
//! their bound expressions.
//!
//! Exact bound forms are hard checks (any breach is a violation). Asymptotic
//! forms only record the ratios `actual / bound`; the extreme ratios are the
//! empirical constants needed to make the asymptotic form hold on the sample.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    cover_mass_bounds, energy_bounds, entropy_bounds, gap_bounds, mass_bounds,
    measure_cost_bounds, rank_bounds, BoundForm, BoundPair, Value,
};
use crate::compression::{cost, cover_mass, energy, entropy, gap_sq, mass, measure, rank};
use crate::error::{Error, Result};
use crate::tuple::{NatTuple, Scale};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Inequality {
    MassHarmonic,
    MassSupInf,
    MassLog,
    RankLog,
    EntropyLog,
    GapLog,
    EnergyLog,
    CoverLogS2,
    CoverLogS3,
    Measure,
    Cost,
    /// `mn/sup << mass << mn/inf` for tuples with `inf > n - 1`.
    WeakErdos,
}

impl Inequality {
    pub const ALL: [Inequality; 12] = [
        Inequality::MassHarmonic,
        Inequality::MassSupInf,
        Inequality::MassLog,
        Inequality::RankLog,
        Inequality::EntropyLog,
        Inequality::GapLog,
        Inequality::EnergyLog,
        Inequality::CoverLogS2,
        Inequality::CoverLogS3,
        Inequality::Measure,
        Inequality::Cost,
        Inequality::WeakErdos,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Inequality::MassHarmonic => "mass_harmonic",
            Inequality::MassSupInf => "mass_supinf",
            Inequality::MassLog => "mass_log",
            Inequality::RankLog => "rank_log",
            Inequality::EntropyLog => "entropy_log",
            Inequality::GapLog => "gap_log",
            Inequality::EnergyLog => "energy_log",
            Inequality::CoverLogS2 => "cover_log_s2",
            Inequality::CoverLogS3 => "cover_log_s3",
            Inequality::Measure => "measure",
            Inequality::Cost => "cost",
            Inequality::WeakErdos => "weak_erdos",
        }
    }

    pub fn form(self) -> BoundForm {
        match self {
            Inequality::MassHarmonic => BoundForm::HarmonicExact,
            Inequality::MassSupInf => BoundForm::SupInfExact,
            _ => BoundForm::LogAsymptotic,
        }
    }

    /// Expands a list of ids. Besides single ids, `all`, `exact` and
    /// `asymptotic` select groups.
    pub fn parse_set<S: AsRef<str>>(names: &[S]) -> Result<Vec<Inequality>> {
        let mut out = Vec::new();
        for name in names {
            match name.as_ref() {
                "all" => out.extend(Inequality::ALL),
                "exact" => out.extend(Inequality::ALL.iter().filter(|i| i.form().is_exact())),
                "asymptotic" => {
                    out.extend(Inequality::ALL.iter().filter(|i| !i.form().is_exact()))
                }
                other => out.push(other.parse()?),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Inequality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Inequality::ALL
            .into_iter()
            .find(|i| i.id() == s)
            .ok_or_else(|| Error::Config(format!("unknown inequality id {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichEntry {
    pub actual: Value,
    pub bounds: BoundPair,
    /// `actual / lower`; negative when the lower bound is, absent when it is
    /// zero.
    pub lower_ratio: Option<f64>,
    /// `actual / upper`, absent when the upper bound is zero.
    pub upper_ratio: Option<f64>,
    /// Set only for exact forms whose bound is breached.
    pub violation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(clippy::large_enum_variant)]
pub enum SandwichCheck {
    Skipped { reason: String },
    Checked(SandwichEntry),
}

/// Evaluates one statistic of `x` against its bound pair. Statistics whose
/// bounds carry no scale (entropy, energy, measure, cost) are evaluated at
/// scale 1.
pub fn check_sandwich(x: &NatTuple, m: Scale, ineq: Inequality) -> SandwichCheck {
    let n = x.n();
    let (inf, sup) = (x.inf(), x.sup());
    if ineq == Inequality::WeakErdos && inf <= (n - 1) as u64 {
        return SandwichCheck::Skipped {
            reason: format!("needs inf > n - 1 (inf={inf}, n={n})"),
        };
    }
    let xr = x.to_rat();
    let evaluated: Result<(Value, BoundPair)> = (|| {
        Ok(match ineq {
            Inequality::MassHarmonic | Inequality::MassSupInf | Inequality::MassLog => (
                Value::Exact(mass(&xr, m)),
                mass_bounds(n, inf, sup, m, ineq.form())?,
            ),
            Inequality::WeakErdos => {
                let mut b = mass_bounds(n, inf, sup, m, BoundForm::SupInfExact)?;
                b.form = BoundForm::LogAsymptotic;
                (Value::Exact(mass(&xr, m)), b)
            }
            Inequality::RankLog => (Value::Float(rank(&xr, m)), rank_bounds(n, inf, sup, m)?),
            Inequality::EntropyLog => (
                Value::Exact(entropy(&xr, Scale::ONE)),
                entropy_bounds(n, inf, sup)?,
            ),
            Inequality::GapLog => (Value::Exact(gap_sq(&xr, m)), gap_bounds(n, inf, sup, m)?),
            Inequality::EnergyLog => (
                Value::Float(energy(&xr, Scale::ONE)),
                energy_bounds(n, inf, sup)?,
            ),
            Inequality::CoverLogS2 | Inequality::CoverLogS3 => {
                let s = if ineq == Inequality::CoverLogS2 { 2 } else { 3 };
                (
                    Value::Exact(cover_mass(&xr, s)?),
                    cover_mass_bounds(n, inf, sup, s)?,
                )
            }
            Inequality::Measure => (
                Value::Exact(measure(&xr, Scale::ONE)),
                measure_cost_bounds(n, inf, sup)?.0,
            ),
            Inequality::Cost => (
                Value::Float(cost(&xr, Scale::ONE)),
                measure_cost_bounds(n, inf, sup)?.1,
            ),
        })
    })();
    let (actual, bounds) = match evaluated {
        Ok(v) => v,
        Err(e) => {
            return SandwichCheck::Skipped {
                reason: e.to_string(),
            }
        }
    };
    let violation = bounds.form.is_exact() && {
        match (&actual, &bounds.lower, &bounds.upper) {
            (Value::Exact(a), Value::Exact(lo), Value::Exact(hi)) => a < lo || a > hi,
            _ => unreachable!("exact forms carry exact values"),
        }
    };
    SandwichCheck::Checked(SandwichEntry {
        lower_ratio: actual.ratio_to(&bounds.lower),
        upper_ratio: actual.ratio_to(&bounds.upper),
        actual,
        bounds,
        violation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub coord_max: u64,
    pub samples: u64,
    pub inequalities: Vec<String>,
    /// Scales are drawn uniformly from `1..=m_max`.
    #[serde(default = "default_m_max")]
    pub m_max: u64,
}

fn default_m_max() -> u64 {
    1
}

impl SweepConfig {
    pub fn validate(&self) -> Result<Vec<Inequality>> {
        if self.n_min < 2 || self.n_min > self.n_max {
            return Err(Error::Config(format!(
                "dimension range [{}, {}] is empty or below 2",
                self.n_min, self.n_max
            )));
        }
        if self.coord_max < self.n_max as u64 {
            return Err(Error::Config(format!(
                "coord_max {} cannot hold {} distinct entries",
                self.coord_max, self.n_max
            )));
        }
        if self.m_max < 1 {
            return Err(Error::Config("m_max must be >= 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be >= 1".into()));
        }
        let set = Inequality::parse_set(&self.inequalities)?;
        if set.is_empty() {
            return Err(Error::Config("no inequalities selected".into()));
        }
        Ok(set)
    }

    /// Reads TOML, or JSON when the text starts with `{`.
    pub fn from_text(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Ok(serde_json::from_str(text)?)
        } else {
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extreme {
    pub ratio: f64,
    pub tuple: NatTuple,
    pub m: u64,
    pub sample: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub tuple: NatTuple,
    pub m: u64,
    pub sample: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RatioRange {
    pub min: Option<Extreme>,
    pub max: Option<Extreme>,
}

impl RatioRange {
    fn offer(&mut self, e: Extreme) {
        let beats = |new: &Extreme, old: &Option<Extreme>, smaller: bool| match old {
            None => true,
            Some(o) => {
                let better = if smaller { new.ratio < o.ratio } else { new.ratio > o.ratio };
                better || (new.ratio == o.ratio && new.sample < o.sample)
            }
        };
        if beats(&e, &self.max, false) {
            self.max = Some(e.clone());
        }
        if beats(&e, &self.min, true) {
            self.min = Some(e);
        }
    }

    fn merge(&mut self, other: RatioRange) {
        for e in other.min.into_iter().chain(other.max) {
            self.offer(e);
        }
    }
}

const MAX_VIOLATION_WITNESSES: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub inequality_id: String,
    pub form: BoundForm,
    /// Samples on which the inequality was evaluated.
    pub samples: u64,
    pub skipped: u64,
    pub violations: u64,
    /// Ratios `actual / lower`; the minimum is the empirical lower constant.
    pub lower_ratio: RatioRange,
    /// Ratios `actual / upper`; the maximum is the empirical upper constant.
    pub upper_ratio: RatioRange,
    /// Checked samples whose lower or upper bound was not positive. Their
    /// ratios are kept with sign, so a negative lower constant marks a
    /// vacuous lower bound.
    pub nonpositive_bounds: u64,
    pub violation_witnesses: Vec<Witness>,
}

impl InequalityReport {
    fn new(ineq: Inequality) -> Self {
        InequalityReport {
            inequality_id: ineq.id().to_string(),
            form: ineq.form(),
            samples: 0,
            skipped: 0,
            violations: 0,
            lower_ratio: RatioRange::default(),
            upper_ratio: RatioRange::default(),
            nonpositive_bounds: 0,
            violation_witnesses: Vec::new(),
        }
    }

    fn record(&mut self, x: &NatTuple, m: Scale, sample: u64, check: SandwichCheck) {
        let entry = match check {
            SandwichCheck::Skipped { .. } => {
                self.skipped += 1;
                return;
            }
            SandwichCheck::Checked(e) => e,
        };
        self.samples += 1;
        let extreme = |ratio| Extreme {
            ratio,
            tuple: x.clone(),
            m: m.get(),
            sample,
        };
        if !entry.bounds.lower.is_positive() || !entry.bounds.upper.is_positive() {
            self.nonpositive_bounds += 1;
        }
        if let Some(r) = entry.lower_ratio {
            self.lower_ratio.offer(extreme(r));
        }
        if let Some(r) = entry.upper_ratio {
            self.upper_ratio.offer(extreme(r));
        }
        if entry.violation {
            self.violations += 1;
            self.violation_witnesses.push(Witness {
                tuple: x.clone(),
                m: m.get(),
                sample,
            });
            self.violation_witnesses.truncate(MAX_VIOLATION_WITNESSES);
        }
    }

    fn merge(&mut self, other: InequalityReport) {
        self.samples += other.samples;
        self.skipped += other.skipped;
        self.violations += other.violations;
        self.nonpositive_bounds += other.nonpositive_bounds;
        self.lower_ratio.merge(other.lower_ratio);
        self.upper_ratio.merge(other.upper_ratio);
        self.violation_witnesses.extend(other.violation_witnesses);
        self.violation_witnesses.sort_by_key(|e| e.sample);
        self.violation_witnesses.truncate(MAX_VIOLATION_WITNESSES);
    }

    /// Smallest `actual / lower` over checked samples.
    pub fn empirical_lower_constant(&self) -> Option<f64> {
        self.lower_ratio.min.as_ref().map(|e| e.ratio)
    }

    /// Largest `actual / upper` over checked samples.
    pub fn empirical_upper_constant(&self) -> Option<f64> {
        self.upper_ratio.max.as_ref().map(|e| e.ratio)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub reports: Vec<InequalityReport>,
}

impl SweepReport {
    pub fn total_violations(&self) -> u64 {
        self.reports.iter().map(|r| r.violations).sum()
    }

    pub fn get(&self, ineq: Inequality) -> Option<&InequalityReport> {
        self.reports.iter().find(|r| r.inequality_id == ineq.id())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per inequality.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            inequality_id: &'a str,
            form: BoundForm,
            samples: u64,
            skipped: u64,
            violations: u64,
            lower_ratio_min: Option<f64>,
            lower_ratio_max: Option<f64>,
            upper_ratio_min: Option<f64>,
            upper_ratio_max: Option<f64>,
            nonpositive_bounds: u64,
        }
        let mut w = csv::Writer::from_writer(out);
        let ratio = |e: &Option<Extreme>| e.as_ref().map(|e| e.ratio);
        for r in &self.reports {
            w.serialize(Row {
                inequality_id: &r.inequality_id,
                form: r.form,
                samples: r.samples,
                skipped: r.skipped,
                violations: r.violations,
                lower_ratio_min: ratio(&r.lower_ratio.min),
                lower_ratio_max: ratio(&r.lower_ratio.max),
                upper_ratio_min: ratio(&r.upper_ratio.min),
                upper_ratio_max: ratio(&r.upper_ratio.max),
                nonpositive_bounds: r.nonpositive_bounds,
            })
            .map_err(|e| Error::Config(format!("csv: {e}")))?;
        }
        w.flush().map_err(|e| Error::Config(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

const CHUNK: u64 = 1024;

/// Draws `n` distinct entries from `1..=coord_max`.
pub fn random_nat_tuple<R: Rng>(rng: &mut R, n: usize, coord_max: u64) -> NatTuple {
    assert!(coord_max >= n as u64, "cannot draw {n} distinct entries from 1..={coord_max}");
    let mut coords = Vec::with_capacity(n);
    while coords.len() < n {
        let c = rng.random_range(1..=coord_max);
        if !coords.contains(&c) {
            coords.push(c);
        }
    }
    NatTuple::new(coords).expect("entries are distinct and positive")
}

/// Generator for chunk `chunk` of a run seeded with `seed`. Each chunk owns
/// an independent ChaCha stream, so results do not depend on how chunks are
/// distributed over workers.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn run_chunk(cfg: &SweepConfig, set: &[Inequality], chunk: u64) -> Vec<InequalityReport> {
    let mut reports: Vec<InequalityReport> = set.iter().map(|&i| InequalityReport::new(i)).collect();
    let mut rng = chunk_rng(cfg.seed, chunk);
    let start = chunk * CHUNK;
    let end = (start + CHUNK).min(cfg.samples);
    for sample in start..end {
        let n = rng.random_range(cfg.n_min..=cfg.n_max);
        let x = random_nat_tuple(&mut rng, n, cfg.coord_max);
        let m = Scale::new(rng.random_range(1..=cfg.m_max)).expect("m >= 1");
        for (report, &ineq) in reports.iter_mut().zip(set) {
            report.record(&x, m, sample, check_sandwich(&x, m, ineq));
        }
    }
    reports
}

/// Runs a sweep on `jobs` worker threads. The report is identical for every
/// `jobs` value.
pub fn run_sweep(cfg: &SweepConfig, jobs: usize) -> Result<SweepReport> {
    let set = cfg.validate()?;
    let chunks = cfg.samples.div_ceil(CHUNK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let empty = || set.iter().map(|&i| InequalityReport::new(i)).collect::<Vec<_>>();
    let merged = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| run_chunk(cfg, &set, c))
            .reduce(empty, |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.merge(y);
                }
                a
            })
    });
    Ok(SweepReport {
        config: cfg.clone(),
        reports: merged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;

    fn nat(v: &[u64]) -> NatTuple {
        NatTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn harmonic_example_has_no_violation() {
        match check_sandwich(&nat(&[4, 6, 9]), Scale::ONE, Inequality::MassHarmonic) {
            SandwichCheck::Checked(e) => {
                assert_eq!(e.actual, Value::Exact(Rat::new(19, 36).unwrap()));
                assert_eq!(e.bounds.lower, Value::Exact(Rat::new(191, 504).unwrap()));
                assert!(!e.violation);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn supinf_example_has_no_violation() {
        match check_sandwich(&nat(&[4, 6, 9]), Scale::ONE, Inequality::MassSupInf) {
            SandwichCheck::Checked(e) => {
                assert_eq!(e.bounds.lower, Value::Exact(Rat::new(1, 3).unwrap()));
                assert_eq!(e.bounds.upper, Value::Exact(Rat::new(3, 4).unwrap()));
                assert!(!e.violation);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unmet_quantifier_is_skipped() {
        assert!(matches!(
            check_sandwich(&nat(&[1, 2]), Scale::ONE, Inequality::WeakErdos),
            SandwichCheck::Skipped { .. }
        ));
    }

    #[test]
    fn parse_set_groups() {
        let exact = Inequality::parse_set(&["exact"]).unwrap();
        assert_eq!(exact, vec![Inequality::MassHarmonic, Inequality::MassSupInf]);
        assert_eq!(Inequality::parse_set(&["all"]).unwrap().len(), 12);
        assert!(Inequality::parse_set(&["bogus"]).is_err());
    }

    #[test]
    fn config_errors() {
        let mut cfg = SweepConfig {
            seed: 1,
            n_min: 3,
            n_max: 2,
            coord_max: 10,
            samples: 10,
            inequalities: vec!["all".into()],
            m_max: 1,
        };
        assert!(matches!(run_sweep(&cfg, 1), Err(Error::Config(_))));
        cfg.n_max = 20;
        assert!(matches!(run_sweep(&cfg, 1), Err(Error::Config(_))));
    }

    #[test]
    fn config_reads_toml_and_json() {
        let toml = "seed = 7\nn_min = 2\nn_max = 4\ncoord_max = 50\nsamples = 10\ninequalities = [\"exact\"]\n";
        let a = SweepConfig::from_text(toml).unwrap();
        let json = r#"{"seed":7,"n_min":2,"n_max":4,"coord_max":50,"samples":10,"inequalities":["exact"]}"#;
        assert_eq!(a, SweepConfig::from_text(json).unwrap());
        assert!(SweepConfig::from_text("seed = 1\nbogus = 2").is_err());
    }
}
