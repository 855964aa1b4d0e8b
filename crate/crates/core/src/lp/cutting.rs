//! Linear optimization over convex bodies given by separation oracles.
//!
//! The driver keeps an outer H-polytope relaxation of the target body,
//! starting from the oracle's finite bounding box. Each round solves the
//! relaxation exactly; if the optimum lies inside the body it is optimal for
//! the body as well (the relaxation contains it), otherwise the oracle's
//! violated inequality is added as a cut and the loop continues, up to a
//! configurable cut budget. This replaces ellipsoid-style machinery with an
//! exact, desk-scale cutting-plane loop: every cut strictly separates the
//! current relaxation optimum, so progress is forced while all arithmetic
//! stays rational.

use super::{lp_solve, HPolytope, LPResult, LpSense, LpStatus};
use crate::error::Error;
use crate::rational::{dot, Rational};
use crate::Result;
use num_traits::Zero;

/// Answer of a separation oracle for a query point.
#[derive(Debug, Clone)]
pub enum Separation {
    /// The query point belongs to the body.
    Inside,
    /// A valid inequality `normal · x ≤ rhs` for the body, violated at the
    /// query point.
    Violated {
        /// Outward normal of the separating halfspace.
        normal: Vec<Rational>,
        /// Right-hand side of the separating halfspace.
        rhs: Rational,
    },
}

/// Exact separation oracle for a convex body with a known finite bounding
/// box.
pub trait SeparationOracle: Send + Sync {
    /// Ambient dimension of the body.
    fn dim(&self) -> usize;
    /// Finite box `lo ≤ x ≤ hi` containing the body.
    fn bounding_box(&self) -> (Vec<Rational>, Vec<Rational>);
    /// Decides membership of `x` or returns a violated valid inequality.
    fn separate(&self, x: &[Rational]) -> Separation;
    /// Human-readable label used in error messages.
    fn describe(&self) -> String {
        "separation oracle".to_string()
    }
}

/// Budget configuration for the cutting-plane loop.
#[derive(Debug, Clone)]
pub struct CutConfig {
    /// Maximum number of cuts added in one optimization call.
    pub max_cuts: usize,
}

impl Default for CutConfig {
    fn default() -> Self {
        CutConfig { max_cuts: 10_000 }
    }
}

/// Builds the initial relaxation from the oracle's bounding box plus
/// caller-seeded rows.
fn initial_relaxation(oracle: &dyn SeparationOracle, seed: Option<&HPolytope>) -> Result<HPolytope> {
    let (lo, hi) = oracle.bounding_box();
    if lo.len() != oracle.dim() || hi.len() != oracle.dim() {
        return Err(Error::OracleContractBreach(format!(
            "{} returned a bounding box of wrong dimension",
            oracle.describe()
        )));
    }
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Err(Error::OracleContractBreach(format!(
            "{} returned an empty bounding box",
            oracle.describe()
        )));
    }
    let mut relax = HPolytope::from_box(&lo, &hi);
    if let Some(seed) = seed {
        assert_eq!(seed.dim, oracle.dim(), "seed rows must match oracle dimension");
        for (i, (row, rhs)) in seed.a.iter().zip(&seed.b).enumerate() {
            if seed.eq_rows.contains(&i) {
                relax.push_eq(row.clone(), rhs.clone());
            } else {
                relax.push_le(row.clone(), rhs.clone());
            }
        }
    }
    Ok(relax)
}

/// One cutting-plane optimization over the current relaxation. On success
/// returns the result plus the refined relaxation (so callers can keep the
/// accumulated cuts). The relaxation's rows are all valid for the target
/// body, so a full-rank set of tight rows at the returned point certifies a
/// vertex of the target region.
fn drive(
    oracle: &dyn SeparationOracle,
    relax: &mut HPolytope,
    c: &[Rational],
    sense: LpSense,
    config: &CutConfig,
) -> Result<LPResult> {
    let mut cuts = 0usize;
    loop {
        let res = lp_solve(relax, c, sense)?;
        match res.status {
            LpStatus::Infeasible => return Ok(res),
            LpStatus::Unbounded => {
                // The bounding box makes every relaxation bounded.
                return Err(Error::OracleContractBreach(format!(
                    "{} produced an unbounded relaxation",
                    oracle.describe()
                )));
            }
            LpStatus::Optimal => {}
        }
        let x = res.point.as_ref().expect("optimal result carries a point");
        match oracle.separate(x) {
            Separation::Inside => {
                let is_vertex = relax.is_vertex_point(x);
                return Ok(LPResult { is_vertex, ..res });
            }
            Separation::Violated { normal, rhs } => {
                if normal.len() != oracle.dim() {
                    return Err(Error::OracleContractBreach(format!(
                        "{} returned a cut of wrong dimension",
                        oracle.describe()
                    )));
                }
                if normal.iter().all(Rational::is_zero) || dot(&normal, x) <= rhs {
                    return Err(Error::OracleContractBreach(format!(
                        "{} returned an inequality not violated at the query point",
                        oracle.describe()
                    )));
                }
                if cuts >= config.max_cuts {
                    return Err(Error::CutBudgetExhausted { budget: config.max_cuts });
                }
                relax.push_le(normal, rhs);
                cuts += 1;
            }
        }
    }
}

/// Optimizes `c · x` over the body described by a separation oracle.
///
/// Exact: when the final relaxation optimum lies inside the body it is also
/// optimal for the body, because every relaxation contains it. Infeasibility
/// of a relaxation certifies emptiness of the body for the same reason.
pub fn lp_solve_oracle(
    oracle: &dyn SeparationOracle,
    c: &[Rational],
    sense: LpSense,
    config: &CutConfig,
) -> Result<LPResult> {
    if c.len() != oracle.dim() {
        return Err(Error::DimensionMismatch(format!(
            "objective has {} entries, oracle dimension is {}",
            c.len(),
            oracle.dim()
        )));
    }
    let mut relax = initial_relaxation(oracle, None)?;
    drive(oracle, &mut relax, c, sense, config)
}

/// Oracle optimization with caller-seeded constraint rows intersected into
/// the region (used by fiber programs, which fix `W x = u`).
pub(crate) fn lp_solve_oracle_seeded(
    oracle: &dyn SeparationOracle,
    seed: &HPolytope,
    c: &[Rational],
    sense: LpSense,
    config: &CutConfig,
) -> Result<LPResult> {
    let mut relax = initial_relaxation(oracle, Some(seed))?;
    drive(oracle, &mut relax, c, sense, config)
}

/// Lexicographic maximization over an oracle-described body, optionally
/// intersected with seed rows: coordinates are maximized and fixed one at a
/// time in the given order, reusing all accumulated cuts. The final point is
/// the unique lexicographic maximum of the region, hence a vertex of it.
pub fn lex_max_oracle(
    oracle: &dyn SeparationOracle,
    order: &[usize],
    config: &CutConfig,
) -> Result<LPResult> {
    lex_max_oracle_seeded(oracle, None, order, config)
}

/// Seeded variant of [`lex_max_oracle`].
pub(crate) fn lex_max_oracle_seeded(
    oracle: &dyn SeparationOracle,
    seed: Option<&HPolytope>,
    order: &[usize],
    config: &CutConfig,
) -> Result<LPResult> {
    let dim = oracle.dim();
    if order.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "order has {} entries, oracle dimension is {}",
            order.len(),
            dim
        )));
    }
    let mut seen = vec![false; dim];
    for &k in order {
        if k >= dim || seen[k] {
            return Err(Error::InvalidInput(format!(
                "order must be a permutation of 0..{dim}, got {order:?}"
            )));
        }
        seen[k] = true;
    }

    let mut relax = initial_relaxation(oracle, seed)?;
    let mut point = vec![Rational::zero(); dim];
    let mut first_value: Option<Rational> = None;
    for &k in order {
        let mut c = vec![Rational::zero(); dim];
        c[k] = Rational::from_integer(1.into());
        let res = drive(oracle, &mut relax, &c, LpSense::Max, config)?;
        match res.status {
            LpStatus::Infeasible => {
                return Ok(LPResult {
                    status: LpStatus::Infeasible,
                    point: None,
                    value: None,
                    is_vertex: false,
                })
            }
            LpStatus::Unbounded => unreachable!("bounding box keeps relaxations bounded"),
            LpStatus::Optimal => {}
        }
        let v = res.value.expect("optimal result carries a value");
        if first_value.is_none() {
            first_value = Some(v.clone());
        }
        point[k] = v.clone();
        relax.push_eq(c, v);
    }
    Ok(LPResult {
        status: LpStatus::Optimal,
        point: Some(point),
        value: first_value,
        is_vertex: true,
    })
}

/// Separation oracle for an axis-aligned box; mainly a test double and a
/// building block for composites.
#[derive(Debug, Clone)]
pub struct BoxOracle {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl BoxOracle {
    /// Builds the oracle for `lo ≤ x ≤ hi`.
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Self {
        assert_eq!(lo.len(), hi.len(), "box corners must have equal length");
        assert!(lo.iter().zip(&hi).all(|(l, h)| l <= h), "box must be nonempty");
        BoxOracle { lo, hi }
    }
}

impl SeparationOracle for BoxOracle {
    fn dim(&self) -> usize {
        self.lo.len()
    }

    fn bounding_box(&self) -> (Vec<Rational>, Vec<Rational>) {
        (self.lo.clone(), self.hi.clone())
    }

    fn separate(&self, x: &[Rational]) -> Separation {
        assert_eq!(x.len(), self.dim(), "query dimension mismatch");
        for (j, v) in x.iter().enumerate() {
            if v > &self.hi[j] {
                let mut normal = vec![Rational::zero(); self.dim()];
                normal[j] = Rational::from_integer(1.into());
                return Separation::Violated { normal, rhs: self.hi[j].clone() };
            }
            if v < &self.lo[j] {
                let mut normal = vec![Rational::zero(); self.dim()];
                normal[j] = -Rational::from_integer(1.into());
                return Separation::Violated { normal, rhs: -self.lo[j].clone() };
            }
        }
        Separation::Inside
    }

    fn describe(&self) -> String {
        "box oracle".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{i64_vec_to_rat, rat, ratio};
    use std::sync::Mutex;

    /// Oracle for the square conv{(0,0),(2,0),(0,2),(2,2)} whose bounding
    /// box is deliberately loose, forcing actual cuts.
    struct LooseSquare;

    impl SeparationOracle for LooseSquare {
        fn dim(&self) -> usize {
            2
        }
        fn bounding_box(&self) -> (Vec<Rational>, Vec<Rational>) {
            (i64_vec_to_rat(&[-10, -10]), i64_vec_to_rat(&[10, 10]))
        }
        fn separate(&self, x: &[Rational]) -> Separation {
            BoxOracle::new(i64_vec_to_rat(&[0, 0]), i64_vec_to_rat(&[2, 2])).separate(x)
        }
    }

    #[test]
    fn optimizes_over_an_oracle_described_square() {
        let res = lp_solve_oracle(
            &LooseSquare,
            &i64_vec_to_rat(&[1, -1]),
            LpSense::Max,
            &CutConfig::default(),
        )
        .unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.value, Some(rat(2)));
        assert_eq!(res.point, Some(i64_vec_to_rat(&[2, 0])));
        assert!(res.is_vertex);
    }

    #[test]
    fn oracle_solution_matches_hrep_solution() {
        let square = HPolytope::from_box(&i64_vec_to_rat(&[0, 0]), &i64_vec_to_rat(&[2, 2]));
        for c in [[1i64, -1], [3, 2], [-1, 0], [0, 0]] {
            let c = i64_vec_to_rat(&c);
            for sense in [LpSense::Max, LpSense::Min] {
                let via_oracle =
                    lp_solve_oracle(&LooseSquare, &c, sense, &CutConfig::default()).unwrap();
                let via_rows = lp_solve(&square, &c, sense).unwrap();
                assert_eq!(via_oracle.status, LpStatus::Optimal);
                assert_eq!(via_oracle.value, via_rows.value);
            }
        }
    }

    /// Oracle whose cuts approach x ≤ 0 but never reach it: each query at
    /// x1 = h is answered with the valid inequality x1 ≤ h/2 (valid for the
    /// target segment {0} × [0,1], violated at the query), so the loop can
    /// only terminate by budget.
    struct Stingy {
        state: Mutex<Rational>,
    }

    impl SeparationOracle for Stingy {
        fn dim(&self) -> usize {
            1
        }
        fn bounding_box(&self) -> (Vec<Rational>, Vec<Rational>) {
            (i64_vec_to_rat(&[0]), i64_vec_to_rat(&[1]))
        }
        fn separate(&self, x: &[Rational]) -> Separation {
            if x[0] <= rat(0) {
                return Separation::Inside;
            }
            let mut state = self.state.lock().unwrap();
            *state = &x[0] / &rat(2);
            Separation::Violated { normal: i64_vec_to_rat(&[1]), rhs: state.clone() }
        }
    }

    #[test]
    fn cut_budget_is_enforced() {
        let oracle = Stingy { state: Mutex::new(rat(1)) };
        let err = lp_solve_oracle(
            &oracle,
            &i64_vec_to_rat(&[1]),
            LpSense::Max,
            &CutConfig { max_cuts: 7 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::CutBudgetExhausted { budget: 7 }));
    }

    /// Oracle that claims a cut which the query point does not violate.
    struct Liar;

    impl SeparationOracle for Liar {
        fn dim(&self) -> usize {
            1
        }
        fn bounding_box(&self) -> (Vec<Rational>, Vec<Rational>) {
            (i64_vec_to_rat(&[0]), i64_vec_to_rat(&[1]))
        }
        fn separate(&self, _x: &[Rational]) -> Separation {
            Separation::Violated { normal: i64_vec_to_rat(&[1]), rhs: rat(5) }
        }
    }

    #[test]
    fn non_violated_cuts_are_contract_breaches() {
        let err = lp_solve_oracle(
            &Liar,
            &i64_vec_to_rat(&[1]),
            LpSense::Max,
            &CutConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::OracleContractBreach(_)));
    }

    /// Oracle for the empty set: every query is cut off by x ≤ -1, which is
    /// vacuously valid.
    struct Empty;

    impl SeparationOracle for Empty {
        fn dim(&self) -> usize {
            1
        }
        fn bounding_box(&self) -> (Vec<Rational>, Vec<Rational>) {
            (i64_vec_to_rat(&[0]), i64_vec_to_rat(&[1]))
        }
        fn separate(&self, _x: &[Rational]) -> Separation {
            Separation::Violated { normal: i64_vec_to_rat(&[1]), rhs: rat(-1) }
        }
    }

    #[test]
    fn empty_bodies_are_reported_infeasible() {
        let res = lp_solve_oracle(
            &Empty,
            &i64_vec_to_rat(&[1]),
            LpSense::Max,
            &CutConfig::default(),
        )
        .unwrap();
        assert_eq!(res.status, LpStatus::Infeasible);
    }

    #[test]
    fn lex_max_over_an_oracle() {
        let res = lex_max_oracle(&LooseSquare, &[1, 0], &CutConfig::default()).unwrap();
        assert_eq!(res.point, Some(i64_vec_to_rat(&[2, 2])));
        assert!(res.is_vertex);
    }

    #[test]
    fn box_oracle_separates_with_facet_cuts() {
        let b = BoxOracle::new(i64_vec_to_rat(&[0, 0]), i64_vec_to_rat(&[1, 1]));
        match b.separate(&[ratio(3, 2), ratio(1, 2)]) {
            Separation::Violated { normal, rhs } => {
                assert_eq!(normal, i64_vec_to_rat(&[1, 0]));
                assert_eq!(rhs, rat(1));
            }
            Separation::Inside => panic!("expected a cut"),
        }
        assert!(matches!(b.separate(&[ratio(1, 2), ratio(1, 2)]), Separation::Inside));
    }
}
