//! Walk generation against the self-avoidance oracle, exact length
//! decomposition, and graph export.

use compression_core::graph::{build_graph, CompressionGraph};
use compression_core::walk::*;
use compression_core::{Rat, Scale, Tuple};
use proptest::prelude::*;

fn t(v: &[i64]) -> Tuple<Rat> {
    Tuple::from_ints(v).unwrap()
}

/// Brute-force planar oracle: segments meet iff some point of one lies on
/// the other, decided by solving the 2x2 system exactly.
fn naive_meet(p: [i64; 2], q: [i64; 2], r: [i64; 2], s: [i64; 2]) -> bool {
    let (d1, d2) = ([q[0] - p[0], q[1] - p[1]], [s[0] - r[0], s[1] - r[1]]);
    let den = d1[0] * d2[1] - d1[1] * d2[0];
    let w = [r[0] - p[0], r[1] - p[1]];
    if den != 0 {
        let a = w[0] * d2[1] - w[1] * d2[0];
        let b = w[0] * d1[1] - w[1] * d1[0];
        let inside = |v: i64| if den > 0 { (0..=den).contains(&v) } else { (den..=0).contains(&v) };
        return inside(a) && inside(b);
    }
    if w[0] * d1[1] - w[1] * d1[0] != 0 {
        return false;
    }
    // collinear: overlap of projections onto the dominant axis
    let k = if d1[0] != 0 || d2[0] != 0 { 0 } else { 1 };
    let (a0, a1) = (p[k].min(q[k]), p[k].max(q[k]));
    let (b0, b1) = (r[k].min(s[k]), r[k].max(s[k]));
    a0 <= b1 && b0 <= a1
}

fn to_rat(v: [i64; 2]) -> Vec<Rat> {
    v.iter().map(|&c| Rat::from(c)).collect()
}

proptest! {
    #[test]
    fn exact_segment_distance_zero_iff_planar_meet(
        p in prop::array::uniform2(-4i64..5), q in prop::array::uniform2(-4i64..5),
        r in prop::array::uniform2(-4i64..5), s in prop::array::uniform2(-4i64..5),
    ) {
        prop_assume!(p != q && r != s);
        let d = segment_dist_sq(&to_rat(p), &to_rat(q), &to_rat(r), &to_rat(s));
        prop_assert_eq!(d == Rat::from(0i64), naive_meet(p, q, r, s));
    }

    #[test]
    fn generated_walks_pass_the_oracle(seed in 0u64..1000, steps in 1usize..9) {
        let w = generate_walk(&t(&[5, 7]), Scale::ONE, steps, &WalkPolicy::default(), seed).unwrap();
        prop_assert_eq!(w.steps(), steps);
        prop_assert!(is_self_avoiding(&w, 0.0));
        prop_assert!(length_report(&w, 0.0).unwrap().decomposition_exact);
        let g = build_graph(&w, 0.0).unwrap();
        prop_assert!(g.is_path());
        prop_assert_eq!(g.order(), steps + 1);
    }
}

#[test]
fn three_dimensional_walks_use_exact_distances() {
    let w = generate_walk(&t(&[2, 3, 5]), Scale::ONE, 8, &WalkPolicy::default(), 5).unwrap();
    assert!(is_self_avoiding(&w, 0.0));
    assert!(is_self_avoiding(&w.to_f64(), SEGMENT_TOL) || w.steps() > 4);
}

#[test]
fn graph_json_round_trip_and_shape() {
    let w = generate_walk(&t(&[5, 7]), Scale::ONE, 3, &WalkPolicy::default(), 11).unwrap();
    let g = build_graph(&w, 0.0).unwrap();
    assert_eq!(g.order(), 4);
    assert_eq!(g.edges.len(), 3);
    assert_eq!(g.degrees(), vec![1, 2, 2, 1]);
    let back: CompressionGraph<Rat> = CompressionGraph::from_json(&g.to_json()).unwrap();
    assert_eq!(back, g);
    let one = build_graph(&generate_walk(&t(&[2, 3]), Scale::ONE, 1, &WalkPolicy::default(), 0).unwrap(), 0.0).unwrap();
    assert_eq!((one.order(), one.edges.len()), (2, 1));
}

#[test]
fn malformed_walks_are_rejected() {
    let mut w = generate_walk(&t(&[5, 7]), Scale::ONE, 4, &WalkPolicy::default(), 2).unwrap();
    w.step_kinds.swap(0, 1);
    assert!(build_graph(&w, 0.0).is_err());
    let mut w = generate_walk(&t(&[5, 7]), Scale::ONE, 4, &WalkPolicy::default(), 2).unwrap();
    w.translations.pop();
    assert!(w.validate(0.0).is_err());
    assert!(Walk::<Rat>::from_json(r#"{"m": 1, "vertices": [], "step_kinds": [], "translations": [], "x": 1}"#).is_err());
}

#[test]
fn json_schema_keys() {
    let w = generate_walk(&t(&[2, 3]), Scale::ONE, 1, &WalkPolicy::default(), 0).unwrap();
    let v: serde_json::Value = serde_json::from_str(&w.to_json()).unwrap();
    assert_eq!(v["m"], 1);
    assert_eq!(v["vertices"][1][0], "1/2");
    assert_eq!(v["step_kinds"][0], "compression");
    assert!(v["translations"].as_array().unwrap().is_empty());
}
