//! Balls and lines: membership criteria, nesting, line relations and the
//! needle map.

use compression_core::ball::{ball_of, descend_to_limit, disjoint, gap_criterion, nested, toward_unit_picker};
use compression_core::compression::{compress, gap_sq};
use compression_core::line::{line_of, lines_relation, needle, LineRelation};
use compression_core::{Rat, Scale, Tuple, REL_TOL};
use proptest::prelude::*;

fn q(p: i64, d: i64) -> Rat {
    Rat::new(p, d).unwrap()
}

fn positive_rat() -> impl Strategy<Value = Rat> {
    (1i64..40, 1i64..12).prop_map(|(p, d)| q(p, d))
}

fn positive_tuple(n: usize) -> impl Strategy<Value = Tuple<Rat>> {
    prop::collection::vec(positive_rat(), n).prop_map(|v| Tuple::new(v).unwrap())
}

/// Independent membership test: `(z - x) . (z - V x) <= 0` (Thales).
fn thales(z: &Tuple<Rat>, x: &Tuple<Rat>) -> bool {
    let img = compress(x, Scale::ONE);
    let dot: Rat = z
        .iter()
        .zip(x.iter().zip(img.iter()))
        .map(|(c, (a, b))| (c - a) * (c - b))
        .sum();
    dot <= Rat::from(0i64)
}

proptest! {
    #[test]
    fn membership_matches_thales(x in positive_tuple(2), z in positive_tuple(2)) {
        let ball = ball_of(&x, Scale::ONE);
        prop_assert_eq!(ball.contains(&z).unwrap(), thales(&z, &x));
        // the generator and its image are on the sphere
        prop_assert!(ball.is_admissible(&x).unwrap());
        prop_assert!(ball.is_admissible(&compress(&x, Scale::ONE)).unwrap());
    }

    #[test]
    fn balls_are_not_both_nested_and_disjoint(x in positive_tuple(3), y in positive_tuple(3)) {
        let (a, b) = (ball_of(&x, Scale::ONE), ball_of(&y, Scale::ONE));
        prop_assert!(!(nested(&a, &b).unwrap() && disjoint(&a, &b).unwrap()));
        prop_assert!(nested(&a, &a).unwrap());
    }

    #[test]
    fn translated_lines_never_intersect(x in positive_tuple(3), t in (1i64..9, 1i64..9, 1i64..9)) {
        let l1 = line_of(&x, Scale::ONE);
        prop_assume!(l1.is_ok());
        let l1 = l1.unwrap();
        let offset = [q(t.0, 1), q(t.1, 2), q(t.2, 3)];
        let mut l2 = l1.clone();
        l2.anchor = Tuple::new(l1.anchor.iter().zip(&offset).map(|(a, o)| a + o).collect()).unwrap();
        let rel = lines_relation(&l1, &l2, REL_TOL).unwrap();
        prop_assert!(matches!(rel, LineRelation::Parallel | LineRelation::Identical));
    }

    #[test]
    fn needle_inverts(x in positive_tuple(2), a in positive_tuple(2)) {
        let y = needle(&x, Scale::ONE, &a).unwrap();
        let back: Vec<Rat> = y.iter().zip(a.iter()).map(|(p, q)| p - q).collect();
        prop_assert_eq!(compress(&Tuple::new(back).unwrap(), Scale::ONE), x);
    }
}

#[test]
fn gap_criterion_can_disagree_with_membership() {
    // (5, 5) has the smaller gap but lies outside the ball of (1, 7)
    let z = Tuple::<Rat>::from_ints(&[5, 5]).unwrap();
    let y = Tuple::<Rat>::from_ints(&[1, 7]).unwrap();
    assert!(gap_sq(&z, Scale::ONE) < gap_sq(&y, Scale::ONE));
    let v = gap_criterion(&z, &y, Scale::ONE).unwrap();
    assert!(v.criterion && !v.direct && !v.agree);
}

#[test]
fn descent_gaps_strictly_decrease() {
    let start = ball_of(&Tuple::<Rat>::from_ints(&[4, 9]).unwrap(), Scale::ONE);
    let chain = descend_to_limit(&start, toward_unit_picker, 64).unwrap();
    assert!(chain.gap_sq.windows(2).all(|w| w[1] < w[0]));
    assert!(chain.reached_limit);
}
