//! Optimizers for nonlinear objectives over linear images of combinatorial
//! sets.
//!
//! The standing model: a bounded convex region `P ⊆ R^n` whose extreme
//! points are exactly the integer feasible solutions `X = P ∩ Z^n`, with
//! `‖x‖₁ ≤ β` for all of them; a weight matrix `W` in generalized unary
//! form; and an objective `f` on the image space evaluated through an exact
//! comparison oracle. Everything here is deterministic and exact; outputs
//! carry integer witnesses and explicit approximation factors.
//!
//! * [`quasiconvex_max`] — exact maximization for quasiconvex `f` by
//!   enumerating the vertices of the image body `W(P)`.
//! * [`norm_max_approx`] — constant-factor maximization for objectives
//!   sandwiched between multiples of the maximum norm, via `d` linear
//!   programs (no grid), factor `upper/lower` (e.g. `d^(1/p)` for p-norms).
//! * [`raycave_min_approx`] — constant-factor minimization for ray-concave
//!   nondecreasing `f`, again via image vertices; factor `d^(1/q)` for
//!   p-norms (exact at `p = 1`), `d` in general.
//! * [`objective_face`] — restriction of the region to the optimal face of a
//!   linear functional, for lexicographic composition of objectives.

use crate::error::Error;
use crate::fibers::{fiber_integer_point, image_vertices};
use crate::lp::{
    lp_solve, lp_solve_oracle, lp_solve_vertex, lex_max_oracle_seeded, CutConfig, HPolytope,
    LpSense, LpStatus, Separation, SeparationOracle,
};
use crate::objective::{
    NormConstants, ObjectiveOracle, ObjectiveValue, PExp, Radical,
};
use crate::polytope::PolytopeRep;
use crate::rational::{dot, int_vec_to_rat, rat_pow, Int, Rational};
use crate::weights::GeneralizedUnaryWeights;
use crate::Result;
use num_traits::Signed;
use std::cmp::Ordering;
use std::sync::Arc;

/// Result of an optimization run: the selected image point, an integer
/// witness mapping to it, the exact objective value, and the proven
/// approximation factor (1 for exact methods).
#[derive(Debug, Clone)]
pub struct OptOutcome {
    /// Selected image point `u = Wx`.
    pub image: Vec<Int>,
    /// Integer witness `x` with `Wx = u`.
    pub witness: Vec<Int>,
    /// Exact objective value `f(u)`.
    pub value: ObjectiveValue,
    /// Proven multiplicative guarantee relative to the true optimum.
    pub guarantee: Radical,
}

fn integer_witness(
    rep: &PolytopeRep,
    weights: &GeneralizedUnaryWeights,
    u: &[Int],
) -> Result<Vec<Int>> {
    fiber_integer_point(rep, weights, u)?.ok_or_else(|| {
        Error::OracleContractBreach(
            "fiber of a verified-feasible image point came back empty".into(),
        )
    })
}

/// Exact maximization of a quasiconvex objective over `{f(Wx) : x ∈ X}`.
///
/// A quasiconvex function attains its maximum over the image body `W(P)` at
/// one of its vertices, every image of a feasible point lies in `W(P)`, and
/// every image vertex is the image of an integer feasible point — so the
/// best image vertex is the exact optimum. Ties between image vertices are
/// broken toward the lexicographically smallest image; the witness is the
/// lexicographic maximum of its fiber.
pub fn quasiconvex_max(
    rep: &PolytopeRep,
    weights: &GeneralizedUnaryWeights,
    beta: u64,
    f: &ObjectiveOracle,
    cap: usize,
) -> Result<OptOutcome> {
    let set = image_vertices(rep, weights, beta, cap)?;
    let best = select_extreme(&set.vertices, f, LpSense::Max)
        .ok_or_else(|| Error::Infeasible("the feasible set is empty".into()))?;
    let witness = integer_witness(rep, weights, &best)?;
    let value = f.evaluate(&int_vec_to_rat(&best));
    Ok(OptOutcome { image: best, witness, value, guarantee: Radical::one() })
}

/// Picks the f-extreme element of a lexicographically sorted list of image
/// points; ties resolve to the lexicographically smallest (the first seen).
fn select_extreme(
    sorted: &[Vec<Int>],
    f: &ObjectiveOracle,
    sense: LpSense,
) -> Option<Vec<Int>> {
    let mut best: Option<(Vec<Int>, ObjectiveValue)> = None;
    for u in sorted {
        let val = f.evaluate(&int_vec_to_rat(u));
        let replace = match &best {
            None => true,
            Some((_, bv)) => match sense {
                LpSense::Max => val.cmp(bv) == Ordering::Greater,
                LpSense::Min => val.cmp(bv) == Ordering::Less,
            },
        };
        if replace {
            best = Some((u.clone(), val));
        }
    }
    best.map(|(u, _)| u)
}

/// Maximizes `c · x` over the region and returns a vertex of the optimal
/// face (lexicographically refined), with the optimal value.
fn argmax_vertex(rep: &PolytopeRep, c: &[Rational]) -> Result<(Rational, Vec<Rational>)> {
    match rep {
        PolytopeRep::HRep(p) => {
            let res = lp_solve_vertex(p, c, LpSense::Max)?;
            match res.status {
                LpStatus::Optimal => Ok((
                    res.value.expect("optimal value present"),
                    res.point.expect("optimal point present"),
                )),
                LpStatus::Infeasible => {
                    Err(Error::Infeasible("the feasible set is empty".into()))
                }
                LpStatus::Unbounded => Err(Error::Unbounded(
                    "linear objective unbounded; a polytope is required".into(),
                )),
            }
        }
        PolytopeRep::VRep(points) => {
            let mut best: Option<(Rational, &Vec<Rational>)> = None;
            for v in points {
                let val = dot(c, v);
                let replace = match &best {
                    None => true,
                    Some((bv, bx)) => val > *bv || (val == *bv && v > *bx),
                };
                if replace {
                    best = Some((val, v));
                }
            }
            let (val, x) = best.expect("point hulls are nonempty by construction");
            Ok((val, x.clone()))
        }
        PolytopeRep::Oracle(o) => {
            let res = lp_solve_oracle(o.as_ref(), c, LpSense::Max, &CutConfig::default())?;
            match res.status {
                LpStatus::Infeasible => {
                    return Err(Error::Infeasible("the feasible set is empty".into()))
                }
                LpStatus::Unbounded => unreachable!("oracle bodies carry finite boxes"),
                LpStatus::Optimal => {}
            }
            let value = res.value.expect("optimal value present");
            let mut seed = HPolytope::new(o.dim(), Vec::new(), Vec::new());
            seed.push_eq(c.to_vec(), value.clone());
            let order: Vec<usize> = (0..o.dim()).collect();
            let lex =
                lex_max_oracle_seeded(o.as_ref(), Some(&seed), &order, &CutConfig::default())?;
            debug_assert_eq!(lex.status, LpStatus::Optimal, "optimal face is nonempty");
            Ok((value, lex.point.expect("optimal point present")))
        }
    }
}

fn rational_to_int_vec(x: &[Rational]) -> Result<Vec<Int>> {
    let mut out = Vec::with_capacity(x.len());
    for (i, coord) in x.iter().enumerate() {
        if !crate::rational::is_integer(coord) {
            return Err(Error::NonIntegerVertex { coordinate: i, value: coord.to_string() });
        }
        out.push(coord.numer().clone());
    }
    Ok(out)
}

/// Constant-factor maximization for objectives equivalent to the maximum
/// norm: requires `lower·‖u‖_∞ ≤ f(u) ≤ upper·‖u‖_∞` on the nonnegative
/// orthant (the `constants`), a nonnegative weight matrix, and a region
/// contained in the nonnegative orthant.
///
/// Solves one linear program per image coordinate (`max W_i · x`), refines
/// each optimum to a vertex, and returns the f-best of the `d` candidate
/// images. Guarantee `upper/lower` (for the p-norm, `d^(1/p)`): the true
/// optimum `f(u*) ≤ upper·max_i u*_i ≤ upper·max_i z_i`, while the returned
/// candidate attaining `z_i` has `f ≥ lower·z_i`. No candidate grid is
/// involved, so arbitrary `β` costs nothing. Ties resolve to the
/// lexicographically smallest image, then the lexicographically largest
/// witness.
pub fn norm_max_approx(
    rep: &PolytopeRep,
    weights: &GeneralizedUnaryWeights,
    f: &ObjectiveOracle,
    constants: &NormConstants,
) -> Result<OptOutcome> {
    if rep.dim() != weights.ground_dim() {
        return Err(Error::DimensionMismatch(format!(
            "region dimension {} vs weight ground dimension {}",
            rep.dim(),
            weights.ground_dim()
        )));
    }
    let w = weights.materialize();
    if w.iter().flatten().any(|e| e.is_negative()) {
        return Err(Error::InvalidInput(
            "norm maximization requires a nonnegative weight matrix".into(),
        ));
    }
    let (lo, _) = rep.bounding_box()?;
    if lo.iter().any(|l| l.is_negative()) {
        return Err(Error::InvalidInput(
            "norm maximization requires a region in the nonnegative orthant".into(),
        ));
    }

    let mut best: Option<(Vec<Int>, Vec<Int>, ObjectiveValue)> = None;
    for row in &w {
        let c = int_vec_to_rat(row);
        let (_, x) = argmax_vertex(rep, &c)?;
        let x_int = rational_to_int_vec(&x)?;
        let u = weights.apply_int(&x_int);
        let val = f.evaluate(&int_vec_to_rat(&u));
        let replace = match &best {
            None => true,
            Some((bu, bx, bv)) => match val.cmp(bv) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => u < *bu || (u == *bu && x_int > *bx),
            },
        };
        if replace {
            best = Some((u, x_int, val));
        }
    }
    let (image, witness, value) = best.expect("weights have at least one row");
    Ok(OptOutcome { image, witness, value, guarantee: constants.ratio() })
}

/// Constant-factor minimization for ray-concave, nondecreasing objectives
/// with `f(0) = 0`, over a nonnegative weight matrix and a region in the
/// nonnegative orthant.
///
/// Returns the f-least vertex of the image body. Any feasible image is a
/// convex combination of at most `d` affinely independent image vertices
/// (after restricting to its carrier face); ray-concavity and monotonicity
/// bound the best vertex by `d` times the true minimum — and by `d^(1/q)`
/// (`1/p + 1/q = 1`) when `f` is a p-norm, which is exact at `p = 1`. Ties
/// resolve to the lexicographically smallest image.
pub fn raycave_min_approx(
    rep: &PolytopeRep,
    weights: &GeneralizedUnaryWeights,
    beta: u64,
    f: &ObjectiveOracle,
    cap: usize,
) -> Result<OptOutcome> {
    let w = weights.materialize();
    if w.iter().flatten().any(|e| e.is_negative()) {
        return Err(Error::InvalidInput(
            "ray-concave minimization requires a nonnegative weight matrix".into(),
        ));
    }
    let (lo, _) = rep.bounding_box()?;
    if lo.iter().any(|l| l.is_negative()) {
        return Err(Error::InvalidInput(
            "ray-concave minimization requires a region in the nonnegative orthant".into(),
        ));
    }
    let set = image_vertices(rep, weights, beta, cap)?;
    let best = select_extreme(&set.vertices, f, LpSense::Min)
        .ok_or_else(|| Error::Infeasible("the feasible set is empty".into()))?;
    let witness = integer_witness(rep, weights, &best)?;
    let value = f.evaluate(&int_vec_to_rat(&best));
    let guarantee = raycave_guarantee(f, weights.image_dim());
    Ok(OptOutcome { image: best, witness, value, guarantee })
}

/// Proven factor of the ray-concave minimizer for the given objective family
/// in image dimension `d`.
pub fn raycave_guarantee(f: &ObjectiveOracle, d: usize) -> Radical {
    let d_rat = Rational::from_integer(Int::from(d as u64));
    match f.kind() {
        crate::objective::ObjectiveKind::PNorm(PExp::Finite(1)) => Radical::one(),
        crate::objective::ObjectiveKind::PNorm(PExp::Finite(p)) => {
            // d^(1/q) with 1/q = 1 − 1/p, i.e. (d^(p−1))^(1/p).
            Radical::new(rat_pow(&d_rat, *p - 1), *p)
        }
        _ => Radical::rational(d_rat),
    }
}

/// Separation oracle for the intersection of a body with the optimal face
/// `{x : c·x = z}` of a linear functional over it.
struct FaceOracle {
    inner: Arc<dyn SeparationOracle>,
    c: Vec<Rational>,
    z: Rational,
}

impl SeparationOracle for FaceOracle {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn bounding_box(&self) -> (Vec<Rational>, Vec<Rational>) {
        self.inner.bounding_box()
    }

    fn separate(&self, x: &[Rational]) -> Separation {
        let v = dot(&self.c, x);
        if v > self.z {
            return Separation::Violated { normal: self.c.clone(), rhs: self.z.clone() };
        }
        if v < self.z {
            return Separation::Violated {
                normal: self.c.iter().map(|e| -e.clone()).collect(),
                rhs: -self.z.clone(),
            };
        }
        self.inner.separate(x)
    }

    fn describe(&self) -> String {
        format!("face({})", self.inner.describe())
    }
}

/// Restricts the region to the optimal face of the linear functional `c`,
/// returning the optimal value and the restricted region in the same
/// representation family. Composing this over several functionals and then
/// running a nonlinear optimizer implements lexicographic objectives
/// (primary linear goals first, the nonlinear objective among their optima).
///
/// The optimal face of an integral polytope is integral, and the `‖x‖₁ ≤ β`
/// bound is inherited, so the standing model is preserved.
pub fn objective_face(rep: &PolytopeRep, c: &[Rational]) -> Result<(Rational, PolytopeRep)> {
    if c.len() != rep.dim() {
        return Err(Error::DimensionMismatch(format!(
            "functional has {} entries, region dimension is {}",
            c.len(),
            rep.dim()
        )));
    }
    match rep {
        PolytopeRep::HRep(p) => {
            let res = lp_solve(p, c, LpSense::Max)?;
            match res.status {
                LpStatus::Infeasible =>empty_region_err(),
                LpStatus::Unbounded => Err(Error::Unbounded(
                    "linear objective unbounded; a polytope is required".into(),
                )),
                LpStatus::Optimal => {
                    let z = res.value.expect("optimal value present");
                    let mut face = p.clone();
                    face.push_eq(c.to_vec(), z.clone());
                    Ok((z, PolytopeRep::HRep(face)))
                }
            }
        }
        PolytopeRep::VRep(points) => {
            let z = points
                .iter()
                .map(|v| dot(c, v))
                .max()
                .expect("point hulls are nonempty by construction");
            let face: Vec<Vec<Rational>> =
                points.iter().filter(|v| dot(c, v) == z).cloned().collect();
            Ok((z, PolytopeRep::VRep(face)))
        }
        PolytopeRep::Oracle(o) => {
            let res = lp_solve_oracle(o.as_ref(), c, LpSense::Max, &CutConfig::default())?;
            match res.status {
                LpStatus::Infeasible => empty_region_err(),
                LpStatus::Unbounded => unreachable!("oracle bodies carry finite boxes"),
                LpStatus::Optimal => {
                    let z = res.value.expect("optimal value present");
                    let face = FaceOracle { inner: Arc::clone(o), c: c.to_vec(), z: z.clone() };
                    Ok((z, PolytopeRep::Oracle(Arc::new(face))))
                }
            }
        }
    }
}

fn empty_region_err() -> Result<(Rational, PolytopeRep)> {
    Err(Error::Infeasible("the feasible set is empty".into()))
}

/// Exact check that `candidate` is within the multiplicative `guarantee` of
/// `best`: for maximization, `best ≤ guarantee · candidate`; for
/// minimization, `candidate ≤ guarantee · best`. Ties pass. Requires the
/// product to be representable in single-radical form (always the case for
/// the built-in objective/guarantee pairings).
pub fn within_guarantee(
    best: &ObjectiveValue,
    candidate: &ObjectiveValue,
    guarantee: &Radical,
    sense: LpSense,
) -> Result<bool> {
    let (small, large) = match sense {
        LpSense::Max => (best, candidate),   // need best ≤ g·candidate
        LpSense::Min => (candidate, best),   // need candidate ≤ g·best
    };
    let scaled = match large {
        ObjectiveValue::Infinity => return Ok(true),
        ObjectiveValue::NegInfinity => {
            return Ok(matches!(small, ObjectiveValue::NegInfinity))
        }
        ObjectiveValue::Finite(v) => guarantee.scale_value(v).ok_or_else(|| {
            Error::InvalidInput(
                "guarantee product is not representable in single-radical form".into(),
            )
        })?,
    };
    match small {
        ObjectiveValue::NegInfinity => Ok(true),
        ObjectiveValue::Infinity => Ok(false),
        ObjectiveValue::Finite(v) => Ok(v.cmp_exact(&scaled) != Ordering::Greater),
    }
}
