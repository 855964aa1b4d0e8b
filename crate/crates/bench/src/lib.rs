//! Deterministic fixtures shared by the criterion benchmarks.
//!
//! Everything here is seeded or hand-written so repeated benchmark runs
//! measure the same work.

use fiberopt::harness::{gen_instance, GenOptions, Instance, InstanceKind, ObjectiveSpec};
use fiberopt::lp::HPolytope;
use fiberopt::matroid::VectorialMatroidPair;
use fiberopt::objective::PExp;
use fiberopt::rational::rat;
use fiberopt::{Int, Rational};

/// A bounded 6-dimensional H-polytope with 24 pseudo-random facets plus
/// box rows, generated by a fixed linear congruential sequence.
pub fn lp_fixture() -> (HPolytope, Vec<Rational>) {
    let dim = 6usize;
    let lo = vec![rat(-8); dim];
    let hi = vec![rat(8); dim];
    let mut p = HPolytope::from_box(&lo, &hi);
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % 13) as i64 - 6
    };
    for _ in 0..24 {
        let coeffs: Vec<Rational> = (0..dim).map(|_| rat(next())).collect();
        let rhs = rat(next().abs() * 4 + 12);
        p.push_le(coeffs, rhs);
    }
    let objective: Vec<Rational> = (0..dim).map(|j| rat(j as i64 + 1)).collect();
    (p, objective)
}

/// A mid-size explicit instance: 2-dimensional images, 2-norm objective.
pub fn explicit_fixture() -> Instance {
    gen_instance(
        InstanceKind::RandomPoints,
        11,
        &GenOptions {
            ground: Some(5),
            beta: Some(6),
            image_dim: Some(2),
            objective: Some(ObjectiveSpec::PNorm(PExp::Finite(2))),
            with_primary: Some(false),
            ..GenOptions::default()
        },
    )
    .expect("fixture generation stays in range")
}

/// A rank-2 Vandermonde matroid pair on 5 columns with one weight row,
/// small enough that a single interpolation stays under a millisecond
/// budget but large enough to exercise the moment solve.
pub fn matroid_fixture() -> (VectorialMatroidPair, Vec<Vec<i64>>) {
    let row = |f: fn(i64) -> i64| -> Vec<Int> { (1..=5).map(|j| Int::from(f(j))).collect() };
    let pair = VectorialMatroidPair::new(
        vec![row(|_| 1), row(|j| j)],
        vec![row(|j| j + 1), row(|j| j * j)],
    )
    .expect("common base exists");
    let w = vec![vec![3, 1, 0, 2, 1]];
    (pair, w)
}

/// Substitution vector for [`matroid_fixture`]'s ground set.
pub fn matroid_substitution() -> Vec<Int> {
    vec![Int::from(2), Int::from(5), Int::from(1), Int::from(3), Int::from(4)]
}
