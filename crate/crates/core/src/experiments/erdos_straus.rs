use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitFractionSolution {
    pub n: u64,
    pub denominators: [u64; 3],
    /// `1/x1 + 1/x2 + 1/x3`, recomputed exactly; equals `4/n`.
    pub exact_sum: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErdosStrausSearch {
    pub n: u64,
    pub search_bound: u64,
    pub solution: Option<UnitFractionSolution>,
    /// The bound is below the smallest admissible `x1`, so nothing could be
    /// found.
    pub bound_too_small: bool,
}

/// Lexicographically smallest `x1 <= x2 <= x3` with `x2 <= search_bound` and
/// `1/x1 + 1/x2 + 1/x3 = 4/n`. `x1` runs upward from the least value leaving
/// a positive remainder, `x2` over the range where `x3 >= x2` is possible, and
/// `x3` is solved for directly, so the bound caps only the enumerated pair.
pub fn erdos_straus_solve(n: u64, search_bound: u64) -> Result<ErdosStrausSearch> {
    if n < 3 {
        return Err(Error::Precondition(format!("n must be >= 3, got {n}")));
    }
    let n128 = u128::from(n);
    // 4 x1 > n, and 3/x1 >= 4/n
    let x1_min = n / 4 + 1;
    let x1_max = (3 * n / 4).min(search_bound);
    let mut found = None;
    'outer: for x1 in x1_min..=x1_max {
        let x1 = u128::from(x1);
        // remainder p/q = 4/n - 1/x1
        let (p, q) = (4 * x1 - n128, n128 * x1);
        // x2 >= x1, 1/x2 < p/q, and 2/x2 >= p/q
        let lo = x1.max(q / p + 1);
        let hi = (2 * q / p).min(u128::from(search_bound));
        for x2 in lo..=hi {
            let num = p * x2 - q;
            let den = q * x2;
            if den % num == 0 {
                let x3 = den / num;
                if x3 >= x2 && x3 <= u128::from(u64::MAX) {
                    found = Some([x1 as u64, x2 as u64, x3 as u64]);
                    break 'outer;
                }
            }
        }
    }
    let solution = found.map(|d| {
        let exact_sum: Rat = d.iter().map(|&x| Rat::new(1, x).unwrap()).sum();
        assert_eq!(exact_sum, Rat::new(4, n).unwrap(), "inexact solution {d:?} for {n}");
        UnitFractionSolution { n, denominators: d, exact_sum }
    });
    Ok(ErdosStrausSearch { n, search_bound, solution, bound_too_small: search_bound < x1_min })
}

/// `n,x1,x2,x3` rows; searches without a solution leave the triple empty.
pub fn write_erdos_straus_csv<W: std::io::Write>(results: &[ErdosStrausSearch], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Config(format!("csv write failed: {e}"));
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["n", "x1", "x2", "x3"]).map_err(io)?;
    for r in results {
        let cells: Vec<String> = match &r.solution {
            Some(s) => s.denominators.iter().map(u64::to_string).collect(),
            None => vec![String::new(); 3],
        };
        wr.write_record(std::iter::once(r.n.to_string()).chain(cells)).map_err(io)?;
    }
    wr.flush().map_err(|e| Error::Config(format!("csv flush failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(n: u64) -> [u64; 3] {
        erdos_straus_solve(n, 10_000).unwrap().solution.unwrap().denominators
    }

    #[test]
    fn small_cases() {
        assert_eq!(triple(4), [2, 3, 6]);
        assert_eq!(triple(3), [1, 4, 12]);
        assert_eq!(triple(5), [2, 4, 20]);
        assert!(erdos_straus_solve(2, 10).is_err());
    }

    #[test]
    fn tiny_bound_is_flagged() {
        let r = erdos_straus_solve(100, 5).unwrap();
        assert!(r.solution.is_none());
        assert!(r.bound_too_small);
        let r = erdos_straus_solve(5, 3).unwrap();
        assert!(!r.bound_too_small);
        assert!(r.solution.is_none());
        // the bound caps x2 only; x3 is solved for
        let r = erdos_straus_solve(5, 4).unwrap();
        assert_eq!(r.solution.map(|s| s.denominators), Some([2, 4, 20]));
    }

    #[test]
    fn csv_layout() {
        let rs = vec![erdos_straus_solve(4, 100).unwrap(), erdos_straus_solve(100, 5).unwrap()];
        let mut out = Vec::new();
        write_erdos_straus_csv(&rs, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "n,x1,x2,x3\n4,2,3,6\n100,,,\n");
    }
}
