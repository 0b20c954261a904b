use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use compression_core::{Rat, Tuple};

#[derive(Parser, Debug)]
#[command(name = "compress", version, about = "Compression statistics, bound sweeps, walks and experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Print one statistic of a tuple as an exact fraction and a decimal.
    Eval(EvalArgs),
    /// Run a seeded inequality sweep and write CSV and JSON reports.
    Sweep(SweepArgs),
    /// Build existence witnesses for the mass, power-sum and product bounds.
    Search(SearchArgs),
    /// Generate a self-avoiding compression walk.
    Walk(WalkArgs),
    /// Convert a walk JSON file into its compression graph.
    Graph(GraphArgs),
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Args, Debug)]
pub struct OutArg {
    /// Output file. Defaults to a fixed name under $COMPRESSION_OUT_DIR, or
    /// stdout when that is unset.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub stat: String,
    /// Comma-separated integers or fractions `p/q`.
    #[arg(long)]
    pub tuple: String,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    /// Order of the cover statistic.
    #[arg(long)]
    pub s: Option<u32>,
    /// Accept decimal coordinates and evaluate in floating point.
    #[arg(long)]
    pub float: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// TOML or JSON sweep config; its keys override the flags below.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_min: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub coord_max: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Largest scale drawn.
    #[arg(long)]
    pub m: Option<u64>,
    /// Comma-separated inequality ids or the groups all, exact, asymptotic.
    #[arg(long)]
    pub inequalities: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output directory for sweep_report.csv and sweep_report.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// weak_erdos, constants_above_one, mass_log, power_sum or product.
    #[arg(long)]
    pub theorem: String,
    /// A single value or an inclusive range `lo..hi`.
    #[arg(long)]
    pub n: String,
    /// A single value or an inclusive range `lo..hi`.
    #[arg(long = "L")]
    pub l: String,
    #[arg(long = "K")]
    pub k: Option<u64>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Args, Debug)]
pub struct WalkArgs {
    #[arg(long)]
    pub start: String,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub seed: u64,
    /// TOML or JSON walk policy.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also write a one-row length report CSV here.
    #[arg(long)]
    pub length_csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// Walk JSON produced by `walk`.
    #[arg(long)]
    pub walk: PathBuf,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Subcommand, Debug)]
pub enum Experiment {
    /// Solve 4/n = 1/x1 + 1/x2 + 1/x3 for each n and write CSV rows.
    ErdosStraus {
        /// A single value or an inclusive range `lo..hi`.
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Draw points at unit gap and count unit-distance pairs.
    UnitDistance {
        /// Dimension.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Radial point family with rational mutual distances.
    RationalDistance {
        #[arg(long)]
        tuple: String,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Points at integer parameters along a compression line.
    IntegerDistance {
        #[arg(long)]
        tuple: String,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 4)]
        bound: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Evaluate sqrt(n) * cluster * sum_{k=2}^{max_gap} 1/k.
    Anning {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cluster: u64,
        #[arg(long)]
        max_gap: u64,
    },
}

/// Parses `2,3,6` or `1/2,3`; decimals only when `float` is set.
pub fn parse_rat_tuple(s: &str) -> anyhow::Result<Tuple<Rat>> {
    let coords = s
        .split(',')
        .map(|c| {
            let c = c.trim();
            if c.contains('.') {
                anyhow::bail!("decimal coordinate {c:?} needs --float");
            }
            Ok(c.parse::<Rat>()?)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Tuple::new(coords)?)
}

pub fn parse_f64_tuple(s: &str) -> anyhow::Result<Tuple<f64>> {
    let coords = s
        .split(',')
        .map(|c| {
            let c = c.trim();
            match c.split_once('/') {
                Some((p, q)) => Ok(p.trim().parse::<f64>()? / q.trim().parse::<f64>()?),
                None => Ok(c.parse::<f64>()?),
            }
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Tuple::new(coords)?)
}

/// `7` or the inclusive range `3..10`.
pub fn parse_range(s: &str) -> anyhow::Result<std::ops::RangeInclusive<u64>> {
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi): (u64, u64) = (lo.trim().parse()?, hi.trim().trim_start_matches('=').parse()?);
            anyhow::ensure!(lo <= hi, "empty range {s:?}");
            Ok(lo..=hi)
        }
        None => {
            let v = s.trim().parse()?;
            Ok(v..=v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_and_ranges() {
        let t = parse_rat_tuple("1/2, 3").unwrap();
        assert_eq!(t.coords(), &[Rat::new(1, 2).unwrap(), Rat::from(3i64)]);
        assert!(parse_rat_tuple("1.5,2").is_err());
        assert!(parse_rat_tuple("0,2").is_err());
        assert_eq!(parse_f64_tuple("1.5,1/4").unwrap().coords(), &[1.5, 0.25]);
        assert_eq!(parse_range("4").unwrap(), 4..=4);
        assert_eq!(parse_range("3..1000").unwrap(), 3..=1000);
        assert!(parse_range("5..2").is_err());
    }
}
