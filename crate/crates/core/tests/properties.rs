//! Randomized invariant checks with shrinking. Every assertion here is an
//! exact rational comparison; the generators only choose shapes and
//! magnitudes.

use proptest::prelude::*;

use fiberopt::fibers::image_vertices;
use fiberopt::harness::{gen_instance, GenOptions, InstanceKind};
use fiberopt::lp::{lex_max, lp_solve, HPolytope, LpSense, LpStatus};
use fiberopt::objective::{ObjectiveOracle, PExp};
use fiberopt::rational::{dot, format_rational, parse_rational, rat, ratio};
use fiberopt::weights::DEFAULT_GRID_CAP;
use fiberopt::Rational;

/// Strategy: a box `[lo, hi]` with integer corners plus an integer
/// objective, in 1 to 4 dimensions.
fn box_and_objective() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    (1usize..=4).prop_flat_map(|d| {
        (
            prop::collection::vec((-20i64..=20, -20i64..=20), d),
            prop::collection::vec(-9i64..=9, d),
        )
            .prop_map(|(corners, c)| {
                let (lo, hi): (Vec<i64>, Vec<i64>) =
                    corners.into_iter().map(|(a, b)| (a.min(b), a.max(b))).unzip();
                (lo, hi, c)
            })
    })
}

fn rat_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// On a box the maximum of a linear objective separates per
    /// coordinate: each term contributes `max(c_j lo_j, c_j hi_j)`.
    #[test]
    fn box_lp_maximum_is_the_separable_corner_sum(
        (lo, hi, c) in box_and_objective()
    ) {
        let p = HPolytope::from_box(&rat_vec(&lo), &rat_vec(&hi));
        let res = lp_solve(&p, &rat_vec(&c), LpSense::Max).unwrap();
        prop_assert_eq!(res.status, LpStatus::Optimal);
        let expected: Rational = lo
            .iter()
            .zip(&hi)
            .zip(&c)
            .map(|((&l, &h), &cj)| std::cmp::max(rat(cj * l), rat(cj * h)))
            .sum();
        let value = res.value.unwrap();
        prop_assert_eq!(&value, &expected);
        // The returned point is feasible and attains the value exactly.
        let point = res.point.unwrap();
        for ((x, &l), &h) in point.iter().zip(&lo).zip(&hi) {
            prop_assert!(rat(l) <= *x && *x <= rat(h));
        }
        prop_assert_eq!(dot(&rat_vec(&c), &point), value);
    }

    /// Minimization agrees with maximization of the negated objective.
    #[test]
    fn min_equals_negated_max(
        (lo, hi, c) in box_and_objective()
    ) {
        let p = HPolytope::from_box(&rat_vec(&lo), &rat_vec(&hi));
        let min = lp_solve(&p, &rat_vec(&c), LpSense::Min).unwrap();
        let neg: Vec<i64> = c.iter().map(|&x| -x).collect();
        let max = lp_solve(&p, &rat_vec(&neg), LpSense::Max).unwrap();
        prop_assert_eq!(min.status, LpStatus::Optimal);
        prop_assert_eq!(max.status, LpStatus::Optimal);
        prop_assert_eq!(min.value.unwrap(), -max.value.unwrap());
    }

    /// Lexicographic maximization over a box lands on the upper corner,
    /// whatever coordinate order is used.
    #[test]
    fn lex_max_on_a_box_picks_the_upper_corner(
        (lo, hi, _) in box_and_objective(),
        rotation in 0usize..4,
    ) {
        let d = lo.len();
        let p = HPolytope::from_box(&rat_vec(&lo), &rat_vec(&hi));
        let order: Vec<usize> = (0..d).map(|j| (j + rotation) % d).collect();
        let res = lex_max(&p, &order).unwrap();
        prop_assert_eq!(res.status, LpStatus::Optimal);
        prop_assert_eq!(res.point.unwrap(), rat_vec(&hi));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Textual round trip: formatting then parsing is the identity.
    #[test]
    fn rational_text_roundtrip(n in any::<i64>(), d in 1i64..=1_000_000) {
        let q = ratio(n, d);
        let text = format_rational(&q);
        prop_assert_eq!(parse_rational(&text), Some(q));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The norm-style oracles are coordinatewise monotone on nonnegative
    /// vectors: growing any coordinate never lowers the value.
    #[test]
    fn norm_oracles_are_coordinatewise_monotone(
        pairs in (1usize..=4).prop_flat_map(|d| {
            prop::collection::vec(((0i64..=50, 1i64..=20), (0i64..=50, 1i64..=20)), d)
        })
    ) {
        let u: Vec<Rational> =
            pairs.iter().map(|((n, d), _)| ratio(*n, *d)).collect();
        let v: Vec<Rational> = pairs
            .iter()
            .map(|((n, d), (dn, dd))| ratio(*n, *d) + ratio(*dn, *dd))
            .collect();
        let oracles = [
            ObjectiveOracle::pnorm(PExp::Finite(1)),
            ObjectiveOracle::pnorm(PExp::Finite(2)),
            ObjectiveOracle::pnorm(PExp::Infinity),
            ObjectiveOracle::max_coordinate(),
            ObjectiveOracle::min_coordinate(),
        ];
        for f in &oracles {
            prop_assert!(f.evaluate(&u) <= f.evaluate(&v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Every enumerated image vertex carries a valid separation
    /// certificate: a functional strictly larger at the vertex than at any
    /// other feasible image.
    #[test]
    fn separators_certify_image_vertices(
        seed in any::<u64>(),
        ground in 2usize..=5,
        beta in 3u64..=6,
        d in 1usize..=2,
    ) {
        let instance = gen_instance(
            InstanceKind::RandomPoints,
            seed,
            &GenOptions {
                ground: Some(ground),
                beta: Some(beta),
                image_dim: Some(d),
                with_primary: Some(false),
                ..GenOptions::default()
            },
        )
        .unwrap();
        let region = instance.explicit().unwrap().to_vrep().unwrap();
        let verts = image_vertices(
            &region,
            &instance.weights,
            instance.beta(),
            DEFAULT_GRID_CAP,
        )
        .unwrap();
        for (i, v) in verts.vertices.iter().enumerate() {
            let (g, h) = verts.separating_witness(i).expect("vertices separate");
            let v_rat: Vec<Rational> = v.iter().map(|x| Rational::from(x.clone())).collect();
            prop_assert!(dot(&g, &v_rat) > h);
            for other in &verts.feasible {
                if other == v {
                    continue;
                }
                let o_rat: Vec<Rational> =
                    other.iter().map(|x| Rational::from(x.clone())).collect();
                prop_assert!(dot(&g, &o_rat) <= h);
            }
        }
    }
}
