//! Compression statistics against direct `BigRational` evaluation, plus the
//! exact sandwich bounds on random distinct tuples.

use compression_core::bounds::{mass_bounds, BoundForm};
use compression_core::compression::*;
use compression_core::{NatTuple, Rat, Scale, Tuple};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn br(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn nonzero_tuple() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![-60i64..-1, 1i64..60], 2..7)
}

fn distinct_naturals() -> impl Strategy<Value = NatTuple> {
    prop::collection::btree_set(1u64..200, 2..8)
        .prop_map(|s| NatTuple::new(s.into_iter().collect()).unwrap())
}

proptest! {
    #[test]
    fn statistics_match_direct_rationals(xs in nonzero_tuple(), m in 1u64..20) {
        let x = Tuple::<Rat>::from_ints(&xs).unwrap();
        let scale = Scale::new(m).unwrap();
        let img: Vec<BigRational> = xs.iter().map(|&c| br(m as i64, c)).collect();
        let mass_o: BigRational = img.iter().sum();
        let entropy_o: BigRational = img.iter().product();
        let gap_o: BigRational = xs.iter().zip(&img).map(|(&c, v)| {
            let d = br(c, 1) - v;
            &d * &d
        }).sum();
        prop_assert_eq!(mass(&x, scale).to_big(), mass_o.clone());
        prop_assert_eq!(mass_via_entropy(&x, scale).to_big(), mass_o);
        prop_assert_eq!(entropy(&x, scale).to_big(), entropy_o);
        prop_assert_eq!(gap_sq(&x, scale).to_big(), gap_o.clone());
        prop_assert_eq!(gap_sq_identity(&x, scale).to_big(), gap_o);
        prop_assert_eq!(rank_sq(&x, scale), rank_sq_via_mass(&x, scale));
        prop_assert_eq!(compress(&compress(&x, scale), scale), x.clone());
    }

    #[test]
    fn cover_and_measure_identities(xs in nonzero_tuple(), s in 1u32..6) {
        let x = Tuple::<Rat>::from_ints(&xs).unwrap();
        prop_assert_eq!(cover_mass(&x, s).unwrap(), cover_mass_closed(&x, s).unwrap());
        // measure is symmetric under x -> 1/x
        prop_assert_eq!(measure(&x, Scale::ONE), measure(&reciprocal(&x), Scale::ONE));
    }

    #[test]
    fn exact_mass_bounds_hold(x in distinct_naturals(), m in 1u64..5) {
        let scale = Scale::new(m).unwrap();
        let actual = mass(&x.to_rat(), scale);
        for form in [BoundForm::SupInfExact, BoundForm::HarmonicExact] {
            let b = mass_bounds(x.n(), x.inf(), x.sup(), scale, form).unwrap();
            prop_assert!(b.lower.as_exact().unwrap() <= &actual);
            prop_assert!(&actual <= b.upper.as_exact().unwrap());
        }
    }
}

#[test]
fn float_and_exact_paths_agree() {
    let x = Tuple::<Rat>::from_ints(&[3, 7, 11, 20]).unwrap();
    let xf = x.to_f64();
    for m in [1, 3, 10] {
        let s = Scale::new(m).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
        assert!(close(mass(&xf, s), mass(&x, s).to_f64()));
        assert!(close(gap_sq(&xf, s), gap_sq(&x, s).to_f64()));
        assert!(close(entropy(&xf, s), entropy(&x, s).to_f64()));
        assert!(close(cost(&xf, s), cost(&x, s)));
    }
}
