//! Internal exact two-phase simplex over arbitrary-precision rationals.
//!
//! Works on a standard form with per-variable sign information: every
//! variable is either free or nonnegative, rows are `≤` or `=` constraints.
//! Free variables are split into differences of nonnegative parts, slack
//! variables turn inequalities into equations, and phase one introduces one
//! artificial variable per row. Pivot selection uses Bland's smallest-index
//! rule throughout, which makes the method terminating (no cycling) and
//! deterministic. All arithmetic is exact; there are no tolerances.

use crate::rational::Rational;
use num_traits::Zero;
use std::cmp::Ordering;

/// Row relation in the internal standard form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rel {
    Le,
    Eq,
}

/// A standard-form linear program: maximize `objective · v` subject to the
/// rows, with `v[j] ≥ 0` where `nonneg[j]` and `v[j]` free otherwise.
#[derive(Debug, Clone)]
pub(crate) struct StdLp {
    pub ncols: usize,
    pub nonneg: Vec<bool>,
    pub rows: Vec<(Vec<Rational>, Rel, Rational)>,
    pub objective: Vec<Rational>,
}

/// Outcome of an exact simplex run.
#[derive(Debug, Clone)]
pub(crate) enum StdOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows × (ncols + 1)` matrix; the last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    /// Objective row (reduced costs); entry `ncols` holds minus the value.
    obj: Vec<Rational>,
    /// Basic column of each row.
    basis: Vec<usize>,
    /// Columns the entering rule may consider.
    allowed: Vec<bool>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, pr: usize, pc: usize) {
        let pivot = self.t[pr][pc].clone();
        debug_assert!(!pivot.is_zero(), "pivot entry must be nonzero");
        for j in 0..=self.ncols {
            self.t[pr][j] = &self.t[pr][j] / &pivot;
        }
        for i in 0..self.t.len() {
            if i == pr || self.t[i][pc].is_zero() {
                continue;
            }
            let factor = self.t[i][pc].clone();
            for j in 0..=self.ncols {
                let delta = &factor * &self.t[pr][j];
                self.t[i][j] -= delta;
            }
        }
        if !self.obj[pc].is_zero() {
            let factor = self.obj[pc].clone();
            for j in 0..=self.ncols {
                let delta = &factor * &self.t[pr][j];
                self.obj[j] -= delta;
            }
        }
        self.basis[pr] = pc;
    }

    /// Runs simplex iterations until optimality or unboundedness, using
    /// Bland's rule: the entering column is the lowest-index allowed column
    /// with positive reduced cost; the leaving row is a minimum-ratio row,
    /// ties broken by the smallest basic column index.
    fn run(&mut self) -> bool {
        loop {
            let Some(pc) =
                (0..self.ncols).find(|&j| self.allowed[j] && self.obj[j] > Rational::zero())
            else {
                return true; // optimal
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if self.t[i][pc] <= Rational::zero() {
                    continue;
                }
                let ratio = &self.t[i][self.ncols] / &self.t[i][pc];
                let better = match &leave {
                    None => true,
                    Some((best_i, best_ratio)) => match ratio.cmp(best_ratio) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => self.basis[i] < self.basis[*best_i],
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((pr, _)) = leave else {
                return false; // unbounded in the entering direction
            };
            self.pivot(pr, pc);
        }
    }

    /// Prices an objective vector into the current basis.
    fn load_objective(&mut self, c: &[Rational]) {
        self.obj = c.to_vec();
        self.obj.push(Rational::zero());
        for i in 0..self.t.len() {
            let b = self.basis[i];
            if self.obj[b].is_zero() {
                continue;
            }
            let factor = self.obj[b].clone();
            for j in 0..=self.ncols {
                let delta = &factor * &self.t[i][j];
                self.obj[j] -= delta;
            }
        }
    }
}

/// Maximizes `lp.objective` over the rows of `lp` exactly.
pub(crate) fn simplex_max(lp: &StdLp) -> StdOutcome {
    for (coeffs, _, _) in &lp.rows {
        assert_eq!(coeffs.len(), lp.ncols, "row width must match column count");
    }
    assert_eq!(lp.objective.len(), lp.ncols, "objective width must match");
    assert_eq!(lp.nonneg.len(), lp.ncols, "sign vector width must match");

    // Column layout: for each original variable one column (nonnegative) or
    // two columns (free, split into plus/minus parts); then one slack per
    // `≤` row; then one artificial per row.
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(lp.ncols);
    let mut width = 0usize;
    for j in 0..lp.ncols {
        if lp.nonneg[j] {
            col_of.push((width, None));
            width += 1;
        } else {
            col_of.push((width, Some(width + 1)));
            width += 2;
        }
    }
    let n_slack = lp.rows.iter().filter(|(_, rel, _)| *rel == Rel::Le).count();
    let slack_base = width;
    let art_base = width + n_slack;
    let total = art_base + lp.rows.len();

    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(lp.rows.len());
    let mut slack_seen = 0usize;
    for (i, (coeffs, rel, rhs)) in lp.rows.iter().enumerate() {
        let mut row = vec![Rational::zero(); total + 1];
        for (j, coeff) in coeffs.iter().enumerate() {
            let (plus, minus) = col_of[j];
            row[plus] = coeff.clone();
            if let Some(minus) = minus {
                row[minus] = -coeff.clone();
            }
        }
        if *rel == Rel::Le {
            row[slack_base + slack_seen] = Rational::from_integer(1.into());
            slack_seen += 1;
        }
        row[total] = rhs.clone();
        // Normalize to a nonnegative right-hand side so the artificial basis
        // is feasible.
        if row[total] < Rational::zero() {
            for entry in row.iter_mut() {
                *entry = -std::mem::take(entry);
            }
        }
        row[art_base + i] = Rational::from_integer(1.into());
        rows.push(row);
    }

    let mut tab = Tableau {
        basis: (0..lp.rows.len()).map(|i| art_base + i).collect(),
        t: rows,
        obj: Vec::new(),
        allowed: vec![true; total],
        ncols: total,
    };

    // Phase one: maximize minus the sum of artificials; feasibility means the
    // optimum is exactly zero.
    let mut phase1 = vec![Rational::zero(); total];
    for a in art_base..total {
        phase1[a] = -Rational::from_integer(1.into());
    }
    tab.load_objective(&phase1);
    let finished = tab.run();
    debug_assert!(finished, "phase one is bounded by construction");
    // Current value is minus the objective-row constant.
    if !tab.obj[total].is_zero() {
        return StdOutcome::Infeasible;
    }

    // Drive any artificial variables out of the basis; rows where that is
    // impossible are redundant and get dropped.
    let mut drop_rows: Vec<usize> = Vec::new();
    for i in 0..tab.t.len() {
        if tab.basis[i] < art_base {
            continue;
        }
        debug_assert!(tab.t[i][total].is_zero(), "basic artificial must sit at zero");
        match (0..art_base).find(|&j| !tab.t[i][j].is_zero()) {
            Some(j) => tab.pivot(i, j),
            None => drop_rows.push(i),
        }
    }
    for &i in drop_rows.iter().rev() {
        tab.t.remove(i);
        tab.basis.remove(i);
    }
    for a in art_base..total {
        tab.allowed[a] = false;
    }

    // Phase two: the real objective.
    let mut phase2 = vec![Rational::zero(); total];
    for j in 0..lp.ncols {
        let (plus, minus) = col_of[j];
        phase2[plus] = lp.objective[j].clone();
        if let Some(minus) = minus {
            phase2[minus] = -lp.objective[j].clone();
        }
    }
    tab.load_objective(&phase2);
    if !tab.run() {
        return StdOutcome::Unbounded;
    }

    let mut cols = vec![Rational::zero(); total];
    for (i, &b) in tab.basis.iter().enumerate() {
        cols[b] = tab.t[i][total].clone();
    }
    let x: Vec<Rational> = col_of
        .iter()
        .map(|&(plus, minus)| match minus {
            None => cols[plus].clone(),
            Some(minus) => &cols[plus] - &cols[minus],
        })
        .collect();
    let value = lp
        .objective
        .iter()
        .zip(&x)
        .fold(Rational::zero(), |acc, (c, v)| acc + c * v);
    StdOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{i64_vec_to_rat, rat, ratio};

    fn le(coeffs: &[i64], rhs: i64) -> (Vec<Rational>, Rel, Rational) {
        (i64_vec_to_rat(coeffs), Rel::Le, rat(rhs))
    }

    fn eq(coeffs: &[i64], rhs: i64) -> (Vec<Rational>, Rel, Rational) {
        (i64_vec_to_rat(coeffs), Rel::Eq, rat(rhs))
    }

    #[test]
    fn maximizes_over_a_simplex_with_nonneg_vars() {
        // max x + 2y st x + y ≤ 1, x,y ≥ 0 → 2 at (0,1).
        let lp = StdLp {
            ncols: 2,
            nonneg: vec![true, true],
            rows: vec![le(&[1, 1], 1)],
            objective: i64_vec_to_rat(&[1, 2]),
        };
        match simplex_max(&lp) {
            StdOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(2));
                assert_eq!(x, vec![rat(0), rat(1)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn handles_free_variables_and_negative_rhs() {
        // max -x st -x ≤ 5 (i.e. x ≥ -5), x free → value 5 at x = -5.
        let lp = StdLp {
            ncols: 1,
            nonneg: vec![false],
            rows: vec![le(&[-1], 5)],
            objective: i64_vec_to_rat(&[-1]),
        };
        match simplex_max(&lp) {
            StdOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(5));
                assert_eq!(x, vec![rat(-5)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility_exactly() {
        // x ≤ -1 and x ≥ 0 cannot hold together.
        let lp = StdLp {
            ncols: 1,
            nonneg: vec![true],
            rows: vec![le(&[1], -1)],
            objective: i64_vec_to_rat(&[1]),
        };
        assert!(matches!(simplex_max(&lp), StdOutcome::Infeasible));
    }

    #[test]
    fn detects_unboundedness() {
        let lp = StdLp {
            ncols: 1,
            nonneg: vec![true],
            rows: vec![],
            objective: i64_vec_to_rat(&[1]),
        };
        assert!(matches!(simplex_max(&lp), StdOutcome::Unbounded));
    }

    #[test]
    fn equality_rows_and_fractional_answers() {
        // max x st 2x + 4y = 1, y ≥ 0, x ≥ 0 → x = 1/2 at y = 0.
        let lp = StdLp {
            ncols: 2,
            nonneg: vec![true, true],
            rows: vec![eq(&[2, 4], 1)],
            objective: i64_vec_to_rat(&[1, 0]),
        };
        match simplex_max(&lp) {
            StdOutcome::Optimal { x, value } => {
                assert_eq!(value, ratio(1, 2));
                assert_eq!(x, vec![ratio(1, 2), rat(0)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn redundant_equalities_do_not_confuse_phase_one() {
        // The same hyperplane twice; phase one must drop one redundant row.
        let lp = StdLp {
            ncols: 2,
            nonneg: vec![true, true],
            rows: vec![eq(&[1, 1], 1), eq(&[2, 2], 2), le(&[1, 0], 1)],
            objective: i64_vec_to_rat(&[3, 1]),
        };
        match simplex_max(&lp) {
            StdOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(3));
                assert_eq!(x, vec![rat(1), rat(0)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_ties_terminate_via_bland() {
        // Classic degeneracy: several constraints tight at the optimum.
        let lp = StdLp {
            ncols: 2,
            nonneg: vec![true, true],
            rows: vec![le(&[1, 0], 1), le(&[0, 1], 1), le(&[1, 1], 1)],
            objective: i64_vec_to_rat(&[1, 1]),
        };
        match simplex_max(&lp) {
            StdOutcome::Optimal { value, .. } => assert_eq!(value, rat(1)),
            other => panic!("expected optimal, got {other:?}"),
        }
    }
}
