//! Feasible-region descriptions: inequality systems, explicit point hulls,
//! and separation oracles, under one interface.
//!
//! Solvers downstream accept any of the three; the fiber machinery picks a
//! specialized linear program per representation. Hull membership and
//! separation against finite point sets are provided here as exact LP
//! primitives shared by the image-vertex filter and the test harness.

use crate::error::Error;
use crate::lp::{
    lp_solve, HPolytope, LpSense, LpStatus, Separation, SeparationOracle,
};
use crate::rational::{dot, Rational};
use crate::Result;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

/// A convex body in one of three representations.
#[derive(Clone)]
pub enum PolytopeRep {
    /// Inequality description `{x : Ax ≤ b}` (with optional equality rows).
    HRep(HPolytope),
    /// Convex hull of finitely many explicit points.
    VRep(Vec<Vec<Rational>>),
    /// Separation-oracle description with a finite bounding box.
    Oracle(Arc<dyn SeparationOracle>),
}

impl fmt::Debug for PolytopeRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolytopeRep::HRep(p) => write!(f, "HRep(dim={}, rows={})", p.dim, p.a.len()),
            PolytopeRep::VRep(v) => write!(f, "VRep({} points)", v.len()),
            PolytopeRep::Oracle(o) => write!(f, "Oracle({})", o.describe()),
        }
    }
}

impl PolytopeRep {
    /// Hull of explicit points; validates shape.
    pub fn from_points(points: Vec<Vec<Rational>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point hull needs at least one point".into()));
        }
        let d = points[0].len();
        if d == 0 {
            return Err(Error::InvalidInput("points must have dimension ≥ 1".into()));
        }
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::DimensionMismatch("points of mixed dimensions".into()));
        }
        Ok(PolytopeRep::VRep(points))
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match self {
            PolytopeRep::HRep(p) => p.dim,
            PolytopeRep::VRep(v) => v[0].len(),
            PolytopeRep::Oracle(o) => o.dim(),
        }
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, body has dimension {}",
                x.len(),
                self.dim()
            )));
        }
        match self {
            PolytopeRep::HRep(p) => Ok(p.contains(x)),
            PolytopeRep::VRep(v) => Ok(hull_membership(v, x)),
            PolytopeRep::Oracle(o) => match o.separate(x) {
                Separation::Inside => Ok(true),
                Separation::Violated { .. } => Ok(false),
            },
        }
    }

    /// Finite box `[lo, hi]` containing the body. Errors when the body is
    /// empty (H-rep) or unbounded.
    pub fn bounding_box(&self) -> Result<(Vec<Rational>, Vec<Rational>)> {
        match self {
            PolytopeRep::VRep(v) => Ok(bounding_box_of_points(v)),
            PolytopeRep::Oracle(o) => {
                let (lo, hi) = o.bounding_box();
                if lo.len() != o.dim() || hi.len() != o.dim() {
                    return Err(Error::DimensionMismatch(
                        "oracle bounding box has wrong dimension".into(),
                    ));
                }
                Ok((lo, hi))
            }
            PolytopeRep::HRep(p) => {
                let mut lo = Vec::with_capacity(p.dim);
                let mut hi = Vec::with_capacity(p.dim);
                for i in 0..p.dim {
                    let mut c = vec![Rational::zero(); p.dim];
                    c[i] = Rational::one();
                    for (sense, out) in
                        [(LpSense::Min, &mut lo), (LpSense::Max, &mut hi)]
                    {
                        let res = lp_solve(p, &c, sense)?;
                        match res.status {
                            LpStatus::Optimal => {
                                out.push(res.value.expect("optimal result carries a value"))
                            }
                            LpStatus::Infeasible => {
                                return Err(Error::Infeasible(
                                    "cannot bound an empty inequality system".into(),
                                ))
                            }
                            LpStatus::Unbounded => {
                                return Err(Error::Unbounded(format!(
                                    "coordinate {i} is unbounded; a finite box is required"
                                )))
                            }
                        }
                    }
                }
                Ok((lo, hi))
            }
        }
    }

    /// Short label for reports.
    pub fn describe(&self) -> String {
        match self {
            PolytopeRep::HRep(p) => format!("h-rep({} rows)", p.a.len()),
            PolytopeRep::VRep(v) => format!("v-rep({} points)", v.len()),
            PolytopeRep::Oracle(o) => format!("oracle({})", o.describe()),
        }
    }
}

/// Componentwise bounding box of a nonempty point set.
pub fn bounding_box_of_points(points: &[Vec<Rational>]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!points.is_empty(), "bounding box of an empty set");
    let d = points[0].len();
    let mut lo = points[0].clone();
    let mut hi = points[0].clone();
    for p in &points[1..] {
        for i in 0..d {
            if p[i] < lo[i] {
                lo[i] = p[i].clone();
            }
            if p[i] > hi[i] {
                hi[i] = p[i].clone();
            }
        }
    }
    (lo, hi)
}

/// Exact test `x ∈ conv(points)` via the multiplier feasibility program
/// `λ ≥ 0, Σλ = 1, Σ λ_i v_i = x`.
pub fn hull_membership(points: &[Vec<Rational>], x: &[Rational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = x.len();
    debug_assert!(points.iter().all(|p| p.len() == d));
    let m = points.len();
    let mut rows = Vec::with_capacity(d + 1);
    for j in 0..d {
        let coeffs: Vec<Rational> = points.iter().map(|v| v[j].clone()).collect();
        rows.push((coeffs, true, x[j].clone()));
    }
    rows.push((vec![Rational::one(); m], true, Rational::one()));
    let (status, _, _) = crate::lp::solve_std(
        m,
        vec![true; m],
        rows,
        vec![Rational::zero(); m],
        LpSense::Max,
    );
    status == LpStatus::Optimal
}

/// Separating functional for `x ∉ conv(points)`: returns `(g, h)` with
/// `g · v ≤ h` for every point `v` and `g · x > h`, or `None` when `x` lies
/// in the hull. Exact by LP duality: `x` is outside the hull iff some
/// functional with `‖g‖_∞ ≤ 1` attains a positive gap, and the returned
/// threshold is tightened to `h = max_v g · v`.
pub fn separating_functional(
    points: &[Vec<Rational>],
    x: &[Rational],
) -> Option<(Vec<Rational>, Rational)> {
    let d = x.len();
    debug_assert!(!points.is_empty());
    debug_assert!(points.iter().all(|p| p.len() == d));
    // Variables (g, t): maximize g·x − t subject to g·v − t ≤ 0 for each v
    // and −1 ≤ g_j ≤ 1.
    let dim = d + 1;
    let mut a = Vec::with_capacity(points.len() + 2 * d);
    let mut b = Vec::with_capacity(points.len() + 2 * d);
    for v in points {
        let mut row = v.clone();
        row.push(-Rational::one());
        a.push(row);
        b.push(Rational::zero());
    }
    for j in 0..d {
        let mut row = vec![Rational::zero(); dim];
        row[j] = Rational::one();
        a.push(row.clone());
        b.push(Rational::one());
        row[j] = -Rational::one();
        a.push(row);
        b.push(Rational::one());
    }
    let p = HPolytope::new(dim, a, b);
    let mut c: Vec<Rational> = x.to_vec();
    c.push(-Rational::one());
    let res = lp_solve(&p, &c, LpSense::Max).expect("separation program is well-formed");
    debug_assert_eq!(res.status, LpStatus::Optimal, "separation program is feasible and bounded");
    let value = res.value.expect("optimal value");
    if !value.is_positive() {
        return None;
    }
    let sol = res.point.expect("optimal point");
    let g: Vec<Rational> = sol[..d].to_vec();
    let h = points
        .iter()
        .map(|v| dot(&g, v))
        .max()
        .expect("points are nonempty");
    debug_assert!(dot(&g, x) > h);
    Some((g, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::BoxOracle;
    use crate::rational::{i64_vec_to_rat, rat, ratio};
    use num_traits::Signed;

    fn square_points() -> Vec<Vec<Rational>> {
        vec![
            i64_vec_to_rat(&[0, 0]),
            i64_vec_to_rat(&[1, 0]),
            i64_vec_to_rat(&[0, 1]),
            i64_vec_to_rat(&[1, 1]),
        ]
    }

    fn square_h() -> HPolytope {
        HPolytope::new(
            2,
            vec![
                i64_vec_to_rat(&[-1, 0]),
                i64_vec_to_rat(&[0, -1]),
                i64_vec_to_rat(&[1, 0]),
                i64_vec_to_rat(&[0, 1]),
            ],
            i64_vec_to_rat(&[0, 0, 1, 1]),
        )
        .with_bounded_hint(true)
    }

    fn reps() -> Vec<PolytopeRep> {
        vec![
            PolytopeRep::HRep(square_h()),
            PolytopeRep::from_points(square_points()).unwrap(),
            PolytopeRep::Oracle(Arc::new(BoxOracle::new(
                i64_vec_to_rat(&[0, 0]),
                i64_vec_to_rat(&[1, 1]),
            ))),
        ]
    }

    #[test]
    fn all_representations_agree_on_membership() {
        let inside = [i64_vec_to_rat(&[0, 0]), vec![ratio(1, 2), ratio(1, 2)], i64_vec_to_rat(&[1, 1])];
        let outside = [i64_vec_to_rat(&[2, 0]), vec![ratio(1, 2), ratio(3, 2)], i64_vec_to_rat(&[-1, 0])];
        for rep in reps() {
            for x in &inside {
                assert!(rep.contains(x).unwrap(), "{rep:?} should contain {x:?}");
            }
            for x in &outside {
                assert!(!rep.contains(x).unwrap(), "{rep:?} should not contain {x:?}");
            }
        }
    }

    #[test]
    fn bounding_boxes_agree() {
        for rep in reps() {
            let (lo, hi) = rep.bounding_box().unwrap();
            assert_eq!(lo, i64_vec_to_rat(&[0, 0]), "{rep:?}");
            assert_eq!(hi, i64_vec_to_rat(&[1, 1]), "{rep:?}");
        }
    }

    #[test]
    fn empty_and_unbounded_h_reps_are_reported() {
        // x ≤ -1, x ≥ 0 is empty.
        let empty = HPolytope::new(
            1,
            vec![i64_vec_to_rat(&[1]), i64_vec_to_rat(&[-1])],
            i64_vec_to_rat(&[-1, 0]),
        );
        assert!(matches!(
            PolytopeRep::HRep(empty).bounding_box(),
            Err(Error::Infeasible(_))
        ));
        // x ≥ 0 alone is unbounded above.
        let unbounded = HPolytope::new(1, vec![i64_vec_to_rat(&[-1])], i64_vec_to_rat(&[0]));
        assert!(matches!(
            PolytopeRep::HRep(unbounded).bounding_box(),
            Err(Error::Unbounded(_))
        ));
    }

    #[test]
    fn hull_membership_matches_geometry() {
        let tri = vec![
            i64_vec_to_rat(&[0, 0]),
            i64_vec_to_rat(&[2, 0]),
            i64_vec_to_rat(&[0, 2]),
        ];
        assert!(hull_membership(&tri, &i64_vec_to_rat(&[1, 1]))); // boundary edge
        assert!(hull_membership(&tri, &vec![ratio(1, 3), ratio(1, 3)]));
        assert!(!hull_membership(&tri, &i64_vec_to_rat(&[2, 2])));
        assert!(!hull_membership(&tri, &i64_vec_to_rat(&[-1, 0])));
    }

    #[test]
    fn separation_certificates_are_valid() {
        let tri = vec![
            i64_vec_to_rat(&[0, 0]),
            i64_vec_to_rat(&[2, 0]),
            i64_vec_to_rat(&[0, 2]),
        ];
        for x in [i64_vec_to_rat(&[2, 2]), i64_vec_to_rat(&[-1, -1]), i64_vec_to_rat(&[3, 0])] {
            let (g, h) = separating_functional(&tri, &x).expect("outside point separates");
            assert!(dot(&g, &x) > h);
            for v in &tri {
                assert!(dot(&g, v) <= h);
            }
            assert!(g.iter().any(|c| !c.is_zero()));
            assert!(g.iter().all(|c| c.abs() <= rat(1)));
        }
        // Inside and boundary points produce no certificate.
        assert!(separating_functional(&tri, &i64_vec_to_rat(&[1, 1])).is_none());
        assert!(separating_functional(&tri, &vec![ratio(1, 2), ratio(1, 2)]).is_none());
    }

    #[test]
    fn mixed_dimension_points_are_rejected() {
        assert!(PolytopeRep::from_points(vec![
            i64_vec_to_rat(&[1, 2]),
            i64_vec_to_rat(&[1]),
        ])
        .is_err());
        assert!(PolytopeRep::from_points(vec![]).is_err());
        let rep = PolytopeRep::from_points(vec![i64_vec_to_rat(&[1, 2])]).unwrap();
        assert!(rep.contains(&i64_vec_to_rat(&[1])).is_err());
    }
}
