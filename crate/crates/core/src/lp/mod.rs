//! Exact rational linear programming.
//!
//! [`lp_solve`] optimizes a linear objective over an H-polytope with an exact
//! two-phase simplex (Bland's rule, hence terminating and deterministic).
//! [`lex_max`] selects the lexicographically maximal point of a bounded
//! polytope under a coordinate order by solving a sequence of nested linear
//! programs, and therefore always lands on a vertex. The cutting-plane driver
//! over separation oracles lives in [`cutting`].

mod cutting;
mod simplex;

pub use cutting::{lp_solve_oracle, lex_max_oracle, BoxOracle, CutConfig, Separation, SeparationOracle};
pub(crate) use cutting::{lex_max_oracle_seeded, lp_solve_oracle_seeded};

use crate::error::Error;
use crate::linalg::gaussian_rank;
use crate::rational::{dot, Rational};
use crate::Result;
use num_traits::Zero;
use simplex::{simplex_max, Rel, StdLp, StdOutcome};
use std::collections::BTreeSet;

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpSense {
    /// Maximize the objective.
    Max,
    /// Minimize the objective.
    Min,
}

/// Solver status for a linear program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    /// An optimal point was found.
    Optimal,
    /// The constraint system has no solution.
    Infeasible,
    /// The objective is unbounded over the feasible region.
    Unbounded,
}

/// Result of an exact linear-programming call.
///
/// `point` and `value` are present exactly when `status == Optimal`. When
/// `is_vertex` is true the point is a vertex of the feasible region, i.e. it
/// has `dim` linearly independent tight constraints.
#[derive(Debug, Clone)]
pub struct LPResult {
    /// Solver status.
    pub status: LpStatus,
    /// Optimal point, present iff optimal.
    pub point: Option<Vec<Rational>>,
    /// Optimal objective value, present iff optimal.
    pub value: Option<Rational>,
    /// Whether `point` is certified to be a vertex of the feasible region.
    pub is_vertex: bool,
}

impl LPResult {
    fn infeasible() -> Self {
        LPResult { status: LpStatus::Infeasible, point: None, value: None, is_vertex: false }
    }

    fn unbounded() -> Self {
        LPResult { status: LpStatus::Unbounded, point: None, value: None, is_vertex: false }
    }
}

/// A polyhedron `{x : A x ≤ b}` in which a subset of rows is marked as
/// equalities (`A_i x = b_i`). Variables are free; nonnegativity, when
/// intended, must appear as explicit rows. `bounded` is a caller-provided
/// hint that the feasible region is bounded; it is metadata only and never
/// trusted for correctness.
#[derive(Debug, Clone)]
pub struct HPolytope {
    /// Ambient dimension.
    pub dim: usize,
    /// Row coefficient vectors of `A`.
    pub a: Vec<Vec<Rational>>,
    /// Right-hand sides.
    pub b: Vec<Rational>,
    /// Indices of rows that hold with equality.
    pub eq_rows: BTreeSet<usize>,
    /// Hint that the feasible region is bounded.
    pub bounded: bool,
}

impl HPolytope {
    /// Builds an inequality system `A x ≤ b`. Panics on ragged input.
    pub fn new(dim: usize, a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Self {
        assert_eq!(a.len(), b.len(), "row count must match rhs count");
        for row in &a {
            assert_eq!(row.len(), dim, "row width must match dimension");
        }
        HPolytope { dim, a, b, eq_rows: BTreeSet::new(), bounded: false }
    }

    /// Marks a row as an equality.
    pub fn set_eq(mut self, row: usize) -> Self {
        assert!(row < self.a.len(), "equality row out of range");
        self.eq_rows.insert(row);
        self
    }

    /// Sets the boundedness hint.
    pub fn with_bounded_hint(mut self, bounded: bool) -> Self {
        self.bounded = bounded;
        self
    }

    /// Axis-aligned box `lo ≤ x ≤ hi` as an H-polytope.
    pub fn from_box(lo: &[Rational], hi: &[Rational]) -> Self {
        assert_eq!(lo.len(), hi.len(), "box corners must have equal length");
        let dim = lo.len();
        let mut a = Vec::with_capacity(2 * dim);
        let mut b = Vec::with_capacity(2 * dim);
        for j in 0..dim {
            let mut row = vec![Rational::zero(); dim];
            row[j] = Rational::from_integer(1.into());
            a.push(row);
            b.push(hi[j].clone());
            let mut row = vec![Rational::zero(); dim];
            row[j] = -Rational::from_integer(1.into());
            a.push(row);
            b.push(-lo[j].clone());
        }
        HPolytope::new(dim, a, b).with_bounded_hint(true)
    }

    /// Appends an inequality row `coeffs · x ≤ rhs`.
    pub fn push_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.dim, "row width must match dimension");
        self.a.push(coeffs);
        self.b.push(rhs);
    }

    /// Appends an equality row `coeffs · x = rhs`.
    pub fn push_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push_le(coeffs, rhs);
        self.eq_rows.insert(self.a.len() - 1);
    }

    /// Exact feasibility test for a candidate point.
    pub fn contains(&self, x: &[Rational]) -> bool {
        assert_eq!(x.len(), self.dim, "point dimension mismatch");
        self.a.iter().zip(&self.b).enumerate().all(|(i, (row, rhs))| {
            let lhs = dot(row, x);
            if self.eq_rows.contains(&i) {
                lhs == *rhs
            } else {
                lhs <= *rhs
            }
        })
    }

    /// Indices of rows tight at `x` (equality rows are tight whenever
    /// satisfied).
    pub fn tight_rows(&self, x: &[Rational]) -> Vec<usize> {
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .filter(|(_, (row, rhs))| dot(row, x) == **rhs)
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether `x` is a vertex: feasible with `dim` linearly independent
    /// tight constraints.
    pub fn is_vertex_point(&self, x: &[Rational]) -> bool {
        if !self.contains(x) {
            return false;
        }
        let tight: Vec<Vec<Rational>> =
            self.tight_rows(x).into_iter().map(|i| self.a[i].clone()).collect();
        if tight.len() < self.dim {
            return false;
        }
        gaussian_rank(&tight) == self.dim
    }

    fn std_rows(&self) -> Vec<(Vec<Rational>, Rel, Rational)> {
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(i, (row, rhs))| {
                let rel = if self.eq_rows.contains(&i) { Rel::Eq } else { Rel::Le };
                (row.clone(), rel, rhs.clone())
            })
            .collect()
    }
}

/// Optimizes `c · x` over an H-polytope exactly.
///
/// Degenerate programs with several optima are resolved deterministically by
/// Bland's rule; callers that need a specific optimal vertex should use
/// [`lex_max`] or refine with [`lp_solve_vertex`].
pub fn lp_solve(p: &HPolytope, c: &[Rational], sense: LpSense) -> Result<LPResult> {
    if c.len() != p.dim {
        return Err(Error::DimensionMismatch(format!(
            "objective has {} entries, polytope dimension is {}",
            c.len(),
            p.dim
        )));
    }
    let objective = match sense {
        LpSense::Max => c.to_vec(),
        LpSense::Min => c.iter().map(|x| -x.clone()).collect(),
    };
    let lp = StdLp {
        ncols: p.dim,
        nonneg: vec![false; p.dim],
        rows: p.std_rows(),
        objective,
    };
    match simplex_max(&lp) {
        StdOutcome::Infeasible => Ok(LPResult::infeasible()),
        StdOutcome::Unbounded => Ok(LPResult::unbounded()),
        StdOutcome::Optimal { x, value } => {
            let value = match sense {
                LpSense::Max => value,
                LpSense::Min => -value,
            };
            debug_assert_eq!(value, dot(c, &x), "simplex value must match its point");
            debug_assert!(p.contains(&x), "simplex returned an infeasible point");
            let is_vertex = p.is_vertex_point(&x);
            Ok(LPResult {
                status: LpStatus::Optimal,
                point: Some(x),
                value: Some(value),
                is_vertex,
            })
        }
    }
}

/// Lexicographic maximization over a bounded polytope: maximizes the
/// coordinate `order[0]`, fixes it, then `order[1]`, and so on. The result is
/// the unique lexicographically maximal point under that coordinate order,
/// which is always a vertex. `order` must be a permutation of `0..dim`.
///
/// Returns an infeasible result when `p` is empty and an error when the
/// polytope is unbounded in an optimized direction.
pub fn lex_max(p: &HPolytope, order: &[usize]) -> Result<LPResult> {
    if order.len() != p.dim {
        return Err(Error::DimensionMismatch(format!(
            "order has {} entries, polytope dimension is {}",
            order.len(),
            p.dim
        )));
    }
    let mut seen = vec![false; p.dim];
    for &k in order {
        if k >= p.dim || seen[k] {
            return Err(Error::InvalidInput(format!(
                "order must be a permutation of 0..{}, got {:?}",
                p.dim, order
            )));
        }
        seen[k] = true;
    }

    let mut work = p.clone();
    let mut point = vec![Rational::zero(); p.dim];
    let mut first_value: Option<Rational> = None;
    for &k in order {
        let mut c = vec![Rational::zero(); p.dim];
        c[k] = Rational::from_integer(1.into());
        let res = lp_solve(&work, &c, LpSense::Max)?;
        match res.status {
            LpStatus::Infeasible => return Ok(LPResult::infeasible()),
            LpStatus::Unbounded => {
                return Err(Error::Unbounded(format!(
                    "lexicographic maximization requires a bounded polytope; coordinate {k} is unbounded"
                )))
            }
            LpStatus::Optimal => {}
        }
        let v = res.value.expect("optimal result carries a value");
        if first_value.is_none() {
            first_value = Some(v.clone());
        }
        point[k] = v.clone();
        work.push_eq(c, v);
    }
    debug_assert!(p.is_vertex_point(&point), "lex max must land on a vertex");
    Ok(LPResult {
        status: LpStatus::Optimal,
        point: Some(point),
        value: first_value,
        is_vertex: true,
    })
}

/// Like [`lp_solve`], but when the program is optimal the returned point is
/// refined to the lexicographically maximal point of the optimal face (under
/// the identity coordinate order), which is a vertex of the feasible region.
pub fn lp_solve_vertex(p: &HPolytope, c: &[Rational], sense: LpSense) -> Result<LPResult> {
    let res = lp_solve(p, c, sense)?;
    if res.status != LpStatus::Optimal {
        return Ok(res);
    }
    let value = res.value.clone().expect("optimal result carries a value");
    let mut face = p.clone();
    face.push_eq(c.to_vec(), value.clone());
    let order: Vec<usize> = (0..p.dim).collect();
    let lex = lex_max(&face, &order)?;
    debug_assert_eq!(lex.status, LpStatus::Optimal, "optimal face cannot be empty");
    Ok(LPResult { status: LpStatus::Optimal, point: lex.point, value: Some(value), is_vertex: true })
}

/// Internal entry point used by the fiber machinery: solve an LP given in
/// the standard form with per-variable sign information.
pub(crate) fn solve_std(
    ncols: usize,
    nonneg: Vec<bool>,
    rows: Vec<(Vec<Rational>, bool, Rational)>,
    objective: Vec<Rational>,
    sense: LpSense,
) -> (LpStatus, Option<Vec<Rational>>, Option<Rational>) {
    let rows = rows
        .into_iter()
        .map(|(coeffs, is_eq, rhs)| (coeffs, if is_eq { Rel::Eq } else { Rel::Le }, rhs))
        .collect();
    let obj = match sense {
        LpSense::Max => objective.clone(),
        LpSense::Min => objective.iter().map(|x| -x.clone()).collect(),
    };
    let lp = StdLp { ncols, nonneg, rows, objective: obj };
    match simplex_max(&lp) {
        StdOutcome::Infeasible => (LpStatus::Infeasible, None, None),
        StdOutcome::Unbounded => (LpStatus::Unbounded, None, None),
        StdOutcome::Optimal { x, .. } => {
            let value = dot(&objective, &x);
            (LpStatus::Optimal, Some(x), Some(value))
        }
    }
}
