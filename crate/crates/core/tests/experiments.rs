//! Experiment drivers against brute-force and closed-form oracles.

use compression_core::compression::compress;
use compression_core::experiments::*;
use compression_core::{NatTuple, Rat, Scale};
use num_rational::BigRational;
use proptest::prelude::*;

/// Exhaustive search over `x1 <= x2 <= x3 <= bound` for `4/n`.
fn brute_unit_fractions(n: u64, bound: u64) -> Option<[u64; 3]> {
    let target = BigRational::new(4.into(), n.into());
    for a in 1..=bound {
        for b in a..=bound {
            for c in b..=bound {
                let s = BigRational::new(1.into(), a.into())
                    + BigRational::new(1.into(), b.into())
                    + BigRational::new(1.into(), c.into());
                if s == target {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

#[test]
fn unit_fraction_search_matches_brute_force() {
    for n in 3..=14u64 {
        let found = erdos_straus_solve(n, 200).unwrap();
        let brute = brute_unit_fractions(n, 200);
        assert_eq!(found.solution.is_some(), brute.is_some(), "n = {n}");
        let sol = found.solution.unwrap();
        let sum: Rat = sol.denominators.iter().map(|&d| Rat::new(1, d as i64).unwrap()).sum();
        assert_eq!(sum, Rat::new(4, n as i64).unwrap());
        assert_eq!(sol.exact_sum, sum);
    }
}

#[test]
fn unit_fraction_csv_layout() {
    let rows = vec![erdos_straus_solve(5, 100).unwrap(), erdos_straus_solve(13, 2).unwrap()];
    let mut buf = Vec::new();
    write_erdos_straus_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,x1,x2,x3");
    assert!(lines[1].starts_with("5,"));
    assert_eq!(lines[2], "13,,,");
}

proptest! {
    #[test]
    fn anning_bound_is_monotone(n in 1usize..50, c in 1u64..20, g in 2u64..200) {
        let base = anning_lower_bound(n, c, g).unwrap();
        prop_assert!(anning_lower_bound(n + 1, c, g).unwrap() > base);
        prop_assert!(anning_lower_bound(n, c + 1, g).unwrap() > base);
        prop_assert!(anning_lower_bound(n, c, g + 1).unwrap() > base);
    }

    #[test]
    fn weak_erdos_witness_sits_between_its_bounds(n in 2usize..30, extra in 0u64..100, m in 1u64..5) {
        let l = n as u64 + extra;
        let w = sandwich_search(n, l, None, Scale::new(m).unwrap(), SandwichTheorem::WeakErdos).unwrap();
        let (lo, hi) = (w.bounds.0.to_f64(), w.bounds.1.to_f64());
        let v = w.value.to_f64();
        prop_assert!(lo <= v && v <= hi);
        prop_assert_eq!(w.tuple.inf(), l);
    }

    #[test]
    fn constants_above_one_witness_exceeds_its_bound(n in 2usize..30, extra in 0u64..100) {
        let l = n as u64 + extra;
        let w = sandwich_search(n, l, None, Scale::ONE, SandwichTheorem::ConstantsAboveOne).unwrap();
        prop_assert!(w.achieved_constants.0.to_f64() >= 1.0);
        prop_assert_eq!(w.tuple.sup(), l);
    }

    #[test]
    fn unit_gap_points_give_one_unit_pair(n in 2usize..8, seed in 0u64..1000) {
        let x = unit_gap_point(n, seed).unwrap();
        let y = compress(&x, Scale::ONE);
        let pts = vec![x.coords().to_vec(), y.coords().to_vec()];
        prop_assert_eq!(unit_distance_pairs(&pts, 1e-9).unwrap(), 1);
    }
}

#[test]
fn rational_family_distances_are_rational_and_match_floats() {
    let x = NatTuple::new(vec![2, 3]).unwrap();
    let fam = rational_distance_family(&x, Scale::ONE, 4).unwrap();
    for i in 0..fam.points.len() {
        for j in i + 1..fam.points.len() {
            let d: f64 = fam.points[i]
                .iter()
                .zip(&fam.points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!((d - fam.distance(i, j).to_f64()).abs() < 1e-9 * d.max(1.0));
        }
    }
}
