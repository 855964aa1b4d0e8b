//! Fiber programs and image-vertex enumeration.
//!
//! For a feasible region `P ⊆ R^n` and a weight matrix `W`, the fiber of an
//! image point `u` is `P ∩ {x : Wx = u}`. This module optimizes linear
//! functionals over fibers (for all three region representations), extracts
//! integer fiber points by lexicographic maximization, describes the minimal
//! face of an inequality-described region containing a fiber, and enumerates
//! the vertex set of the image body `W(P)` through the finite candidate grid
//! of the generalized unary encoding.
//!
//! Preconditions stated per function assume the standing model: `P` is a
//! bounded convex region whose extreme points are integer vectors `x` with
//! `‖x‖₁ ≤ β`. Violations are detected and reported (never silently
//! repaired): a fractional lexicographic maximum surfaces as
//! [`Error::NonIntegerVertex`].

use crate::error::Error;
use crate::lp::{
    lex_max, lp_solve, lp_solve_oracle_seeded, lex_max_oracle_seeded, CutConfig, HPolytope,
    LPResult, LpSense, LpStatus,
};
use crate::polytope::{hull_membership, separating_functional, PolytopeRep};
use crate::rational::{dot, int_to_rat, int_vec_to_rat, Int, Rational};
use crate::weights::GeneralizedUnaryWeights;
use crate::Result;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Equality rows `Wx = u` as a standalone inequality system (used to seed
/// oracle-described fiber programs).
fn fiber_seed(weights: &GeneralizedUnaryWeights, u: &[Rational]) -> HPolytope {
    let w = weights.materialize();
    let n = weights.ground_dim();
    let mut seed = HPolytope::new(n, Vec::new(), Vec::new());
    for (row, target) in w.iter().zip(u) {
        seed.push_eq(int_vec_to_rat(row), target.clone());
    }
    seed
}

/// `P` extended with the fiber equalities `Wx = u` (inequality route).
fn fiber_h_system(
    p: &HPolytope,
    weights: &GeneralizedUnaryWeights,
    u: &[Rational],
) -> HPolytope {
    let w = weights.materialize();
    let mut sys = p.clone();
    for (row, target) in w.iter().zip(u) {
        sys.push_eq(int_vec_to_rat(row), target.clone());
    }
    sys
}

fn check_fiber_dims(
    rep: &PolytopeRep,
    weights: &GeneralizedUnaryWeights,
    u: &[Rational],
) -> Result<()> {
    if rep.dim() != weights.ground_dim() {
        return Err(Error::DimensionMismatch(format!(
            "region dimension {} vs weight ground dimension {}",
            rep.dim(),
            weights.ground_dim()
        )));
    }
    if u.len() != weights.image_dim() {
        return Err(Error::DimensionMismatch(format!(
            "image point has {} coordinates, weights map into dimension {}",
            u.len(),
            weights.image_dim()
        )));
    }
    Ok(())
}

/// Optimizes `c · x` over the fiber `{x ∈ P : Wx = u}`.
///
/// The explicit-hull route solves in multiplier space (`λ ≥ 0`, `Σλ = 1`,
/// `W(Σ λ_i v_i) = u`), where all variables are sign-constrained; the
/// reported point is the recovered `x = Σ λ_i v_i` and `is_vertex` is left
/// false (the recovered point need not be extreme). The other routes report
/// vertex status honestly from tight rows.
pub fn fiber_max(
    rep: &PolytopeRep,
    weights: &GeneralizedUnaryWeights,
    u: &[Rational],
    c: &[Rational],
    sense: LpSense,
) -> Result<LPResult> {
    check_fiber_dims(rep, weights, u)?;
    if c.len() != weights.ground_dim() {
        return Err(Error::DimensionMismatch(format!(
            "objective has {} entries, ground dimension is {}",
            c.len(),
            weights.ground_dim()
        )));
    }
    match rep {
        PolytopeRep::HRep(p) => lp_solve(&fiber_h_system(p, weights, u), c, sense),
        PolytopeRep::Oracle(o) => {
            lp_solve_oracle_seeded(o.as_ref(), &fiber_seed(weights, u), c, sense, &CutConfig::default())
        }
        PolytopeRep::VRep(points) => {
            let m = points.len();
            let mut rows = Vec::with_capacity(weights.image_dim() + 1);
            rows.push((vec![Rational::one(); m], true, Rational::one()));
            let w = weights.materialize();
            for (wrow, target) in w.iter().zip(u) {
                let wrow = int_vec_to_rat(wrow);
                let coeffs: Vec<Rational> = points.iter().map(|v| dot(&wrow, v)).collect();
                rows.push((coeffs, true, target.clone()));
            }
            let objective: Vec<Rational> = points.iter().map(|v| dot(c, v)).collect();
            let (status, lambda, value) =
                crate::lp::solve_std(m, vec![true; m], rows, objective, sense);
            let point = lambda.map(|l| combine(points, &l));
            Ok(LPResult { status, point, value, is_vertex: false })
        }
    }
}

fn combine(points: &[Vec<Rational>], lambda: &[Rational]) -> Vec<Rational> {
    let d = points[0].len();
    let mut x = vec![Rational::zero(); d];
    for (l, v) in lambda.iter().zip(points) {
        if !l.is_zero() {
            for j in 0..d {
                x[j] += l * &v[j];
            }
        }
    }
    x
}

/// Lexicographic maximum of the fiber under the given coordinate order. The
/// result, when the fiber is nonempty, is its unique lexicographic maximum
/// and therefore an extreme point of the fiber.
pub fn fiber_lex_max(
    rep: &PolytopeRep,
    weights: &GeneralizedUnaryWeights,
    u: &[Rational],
    order: &[usize],
) -> Result<LPResult> {
    check_fiber_dims(rep, weights, u)?;
    let n = weights.ground_dim();
    validate_order(order, n)?;
    match rep {
        PolytopeRep::HRep(p) => lex_max(&fiber_h_system(p, weights, u), order),
        PolytopeRep::Oracle(o) => lex_max_oracle_seeded(
            o.as_ref(),
            Some(&fiber_seed(weights, u)),
            order,
            &CutConfig::default(),
        ),
        PolytopeRep::VRep(points) => {
            let m = points.len();
            let mut rows = Vec::with_capacity(weights.image_dim() + 1 + n);
            rows.push((vec![Rational::one(); m], true, Rational::one()));
            let w = weights.materialize();
            for (wrow, target) in w.iter().zip(u) {
                let wrow = int_vec_to_rat(wrow);
                let coeffs: Vec<Rational> = points.iter().map(|v| dot(&wrow, v)).collect();
                rows.push((coeffs, true, target.clone()));
            }
            let mut point = vec![Rational::zero(); n];
            let mut first_value: Option<Rational> = None;
            for &k in order {
                let objective: Vec<Rational> = points.iter().map(|v| v[k].clone()).collect();
                let (status, _, value) = crate::lp::solve_std(
                    m,
                    vec![true; m],
                    rows.clone(),
                    objective.clone(),
                    LpSense::Max,
                );
                match status {
                    LpStatus::Infeasible => {
                        return Ok(LPResult {
                            status: LpStatus::Infeasible,
                            point: None,
                            value: None,
                            is_vertex: false,
                        })
                    }
                    LpStatus::Unbounded => {
                        return Err(Error::Unbounded(
                            "hull of finitely many points cannot be unbounded".into(),
                        ))
                    }
                    LpStatus::Optimal => {
                        let value = value.expect("optimal value present");
                        if first_value.is_none() {
                            first_value = Some(value.clone());
                        }
                        point[k] = value.clone();
                        rows.push((objective, true, value));
                    }
                }
            }
            Ok(LPResult {
                status: LpStatus::Optimal,
                point: Some(point),
                value: first_value,
                is_vertex: true,
            })
        }
    }
}

fn validate_order(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "order has {} entries, ground dimension is {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &k in order {
        if k >= n || seen[k] {
            return Err(Error::InvalidInput(format!(
                "order must be a permutation of 0..{n}, got {order:?}"
            )));
        }
        seen[k] = true;
    }
    Ok(())
}

/// Finds an integer point of the fiber `{x ∈ P : Wx = u}` or certifies the
/// fiber empty (`Ok(None)`).
///
/// The point returned is the lexicographic maximum of the fiber, an extreme
/// point; when the standing integrality precondition on `P` holds, every
/// extreme point of a fiber over an integer image is integral. A fractional
/// coordinate therefore indicates a violated precondition and is reported as
/// [`Error::NonIntegerVertex`], never rounded.
pub fn fiber_integer_point(
    rep: &PolytopeRep,
    weights: &GeneralizedUnaryWeights,
    u: &[Int],
) -> Result<Option<Vec<Int>>> {
    let u_rat = int_vec_to_rat(u);
    let order: Vec<usize> = (0..weights.ground_dim()).collect();
    let res = fiber_lex_max(rep, weights, &u_rat, &order)?;
    match res.status {
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(Error::Unbounded(
            "fiber of a bounded region cannot be unbounded".into(),
        )),
        LpStatus::Optimal => {
            let point = res.point.expect("optimal point present");
            let mut out = Vec::with_capacity(point.len());
            for (i, coord) in point.iter().enumerate() {
                if !crate::rational::is_integer(coord) {
                    return Err(Error::NonIntegerVertex {
                        coordinate: i,
                        value: coord.to_string(),
                    });
                }
                out.push(coord.numer().clone());
            }
            Ok(Some(out))
        }
    }
}

/// The minimal face of an inequality-described region containing a fiber.
#[derive(Debug, Clone)]
pub struct FiberFace {
    /// Indices of rows of the region that are tight at every fiber point.
    pub tight_rows: Vec<usize>,
    /// The face itself: the region with those rows turned into equalities.
    pub face: HPolytope,
}

/// Describes the minimal face of `P` (inequality description) containing the
/// nonempty fiber of `u`: row `i` belongs to the face's equality set iff the
/// minimum of its left-hand side over the fiber equals its right-hand side.
/// Returns `Ok(None)` for an empty fiber.
pub fn fiber_face(
    p: &HPolytope,
    weights: &GeneralizedUnaryWeights,
    u: &[Rational],
) -> Result<Option<FiberFace>> {
    let rep = PolytopeRep::HRep(p.clone());
    check_fiber_dims(&rep, weights, u)?;
    let sys = fiber_h_system(p, weights, u);
    let mut tight = Vec::new();
    for i in 0..p.a.len() {
        if p.eq_rows.contains(&i) {
            tight.push(i);
            continue;
        }
        let res = lp_solve(&sys, &p.a[i], LpSense::Min)?;
        match res.status {
            LpStatus::Infeasible => return Ok(None),
            LpStatus::Unbounded => {
                return Err(Error::Unbounded(
                    "fiber of a bounded region cannot be unbounded".into(),
                ))
            }
            LpStatus::Optimal => {
                if res.value.expect("optimal value") == p.b[i] {
                    tight.push(i);
                }
            }
        }
    }
    if p.a.is_empty() {
        // No rows: the face is the whole region; still verify nonemptiness.
        let res = lp_solve(&sys, &vec![Rational::zero(); p.dim], LpSense::Max)?;
        if res.status == LpStatus::Infeasible {
            return Ok(None);
        }
    }
    let mut face = p.clone();
    for &i in &tight {
        face = face.set_eq(i);
    }
    Ok(Some(FiberFace { tight_rows: tight, face }))
}

/// Vertex set of the image body `W(P)`, with the supporting data used to
/// compute it.
#[derive(Debug, Clone)]
pub struct ImageVertexSet {
    /// Vertices of `W(P)`, lexicographically sorted integer vectors.
    pub vertices: Vec<Vec<Int>>,
    /// All candidate grid points with nonempty fiber (`= grid ∩ W(P)`),
    /// lexicographically sorted.
    pub feasible: Vec<Vec<Int>>,
    /// Size of the deduplicated candidate grid before any filtering.
    pub grid_size: usize,
    /// Candidates that survived the image bounding-box prefilter.
    pub prefiltered: usize,
}

impl ImageVertexSet {
    /// Supporting hyperplane certifying that `vertices[i]` is extreme among
    /// the feasible image points: `(g, h)` with `g·v ≤ h` for every other
    /// feasible point and `g·vertex > h`. For a singleton image the
    /// certificate is vacuous (`g = 0, h = -1`). Computed on demand.
    pub fn separating_witness(&self, i: usize) -> Option<(Vec<Rational>, Rational)> {
        let v = self.vertices.get(i)?;
        let others: Vec<Vec<Rational>> = self
            .feasible
            .iter()
            .filter(|f| *f != v)
            .map(|f| int_vec_to_rat(f))
            .collect();
        if others.is_empty() {
            return Some((vec![Rational::zero(); v.len()], -Rational::one()));
        }
        separating_functional(&others, &int_vec_to_rat(v))
    }
}

/// Per-coordinate range of the image body: `[min W_i x, max W_i x]` over
/// `x ∈ P`. Errors with `Infeasible` when `P` is empty and `Unbounded` when
/// the image is unbounded.
fn image_range(
    rep: &PolytopeRep,
    weights: &GeneralizedUnaryWeights,
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let w = weights.materialize();
    match rep {
        PolytopeRep::VRep(points) => {
            let images: Vec<Vec<Rational>> = points.iter().map(|v| weights.apply(v)).collect();
            Ok(crate::polytope::bounding_box_of_points(&images))
        }
        _ => {
            let mut lo = Vec::with_capacity(weights.image_dim());
            let mut hi = Vec::with_capacity(weights.image_dim());
            for row in &w {
                let c = int_vec_to_rat(row);
                for (sense, out) in [(LpSense::Min, &mut lo), (LpSense::Max, &mut hi)] {
                    let res = match rep {
                        PolytopeRep::HRep(p) => lp_solve(p, &c, sense)?,
                        PolytopeRep::Oracle(o) => crate::lp::lp_solve_oracle(
                            o.as_ref(),
                            &c,
                            sense,
                            &CutConfig::default(),
                        )?,
                        PolytopeRep::VRep(_) => unreachable!("handled above"),
                    };
                    match res.status {
                        LpStatus::Optimal => {
                            out.push(res.value.expect("optimal value present"))
                        }
                        LpStatus::Infeasible => {
                            return Err(Error::Infeasible("the region is empty".into()))
                        }
                        LpStatus::Unbounded => {
                            return Err(Error::Unbounded(
                                "image of the region is unbounded; a polytope is required".into(),
                            ))
                        }
                    }
                }
            }
            Ok((lo, hi))
        }
    }
}

/// Enumerates the vertices of the image body `W(P)` exactly.
///
/// Requires the standing model: `P` bounded with integer extreme points of
/// `ℓ₁`-norm at most `beta`. Pipeline: candidate grid of the unary encoding
/// (nominal size `(2ωβ+1)^{pd}`, capped at `cap`), per-coordinate image
/// bounding-box prefilter, nonempty-fiber filter (one feasibility program
/// per candidate), then hull peeling — a candidate lying in the hull of the
/// remaining candidates is discarded, which never changes the hull, so the
/// survivors are exactly the vertices of `conv(feasible) = W(P)`.
///
/// An empty region yields an empty vertex set.
pub fn image_vertices(
    rep: &PolytopeRep,
    weights: &GeneralizedUnaryWeights,
    beta: u64,
    cap: usize,
) -> Result<ImageVertexSet> {
    if rep.dim() != weights.ground_dim() {
        return Err(Error::DimensionMismatch(format!(
            "region dimension {} vs weight ground dimension {}",
            rep.dim(),
            weights.ground_dim()
        )));
    }
    let grid = weights.candidate_image_grid(beta, cap)?;
    let grid_size = grid.len();
    let (lo, hi) = match image_range(rep, weights) {
        Ok(range) => range,
        Err(Error::Infeasible(_)) => {
            return Ok(ImageVertexSet {
                vertices: Vec::new(),
                feasible: Vec::new(),
                grid_size,
                prefiltered: 0,
            })
        }
        Err(e) => return Err(e),
    };
    let candidates: Vec<Vec<Int>> = grid
        .into_iter()
        .filter(|u| {
            u.iter().enumerate().all(|(i, ui)| {
                let ui = int_to_rat(ui);
                lo[i] <= ui && ui <= hi[i]
            })
        })
        .collect();
    let prefiltered = candidates.len();

    // One feasibility program per candidate; independent, so they run on
    // the global worker pool. Order-preserving collection plus the final
    // sort keeps the result identical for every thread count.
    let zero_obj = vec![Rational::zero(); weights.ground_dim()];
    let mut feasible: Vec<Vec<Int>> = candidates
        .into_par_iter()
        .map(|u| {
            let u_rat = int_vec_to_rat(&u);
            let res = fiber_max(rep, weights, &u_rat, &zero_obj, LpSense::Max)?;
            Ok(if res.status == LpStatus::Optimal { Some(u) } else { None })
        })
        .collect::<Result<Vec<Option<Vec<Int>>>>>()?
        .into_iter()
        .flatten()
        .collect();
    feasible.sort();

    // Hull peeling: removing a candidate that lies in the hull of the others
    // leaves the hull unchanged, so one pass retains exactly the vertices.
    let mut survivors: Vec<Vec<Int>> = feasible.clone();
    let mut i = 0;
    while i < survivors.len() {
        let u = int_vec_to_rat(&survivors[i]);
        let others: Vec<Vec<Rational>> = survivors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, f)| int_vec_to_rat(f))
            .collect();
        if !others.is_empty() && hull_membership(&others, &u) {
            survivors.remove(i);
        } else {
            i += 1;
        }
    }

    Ok(ImageVertexSet { vertices: survivors, feasible, grid_size, prefiltered })
}
