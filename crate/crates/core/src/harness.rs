//! Instance model, brute-force reference oracles, and seeded generators.
//!
//! Everything the optimizers claim is checkable at desk scale by explicit
//! enumeration: the types here package feasible sets and instances, and the
//! `brute_force_*` functions recompute optima, image vertex sets, and
//! support coefficients independently of the production pipelines (the only
//! shared ingredient is exact arithmetic). Generators produce small,
//! seed-deterministic instances of five flavors for regression and
//! acceptance testing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::linalg::bigint_det;
use crate::lp::{Separation, SeparationOracle};
use crate::matroid::{enumerate_common_bases, VectorialMatroidPair};
use crate::objective::{ObjectiveOracle, ObjectiveValue, PExp};
use crate::polytope::{
    bounding_box_of_points, hull_membership, separating_functional, PolytopeRep,
};
use crate::rational::{int_vec_to_rat, rat};
use crate::weights::GeneralizedUnaryWeights;
use crate::{Int, Rational, Result};

/// A finite feasible set given by explicit nonnegative integer points, all
/// obeying the coordinate-sum budget `beta`. Points are stored
/// lexicographically sorted; duplicates are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitFeasibleSet {
    n: usize,
    beta: u64,
    points: Vec<Vec<Int>>,
}

impl ExplicitFeasibleSet {
    /// Validates nonnegativity, the budget, dimensions, and distinctness;
    /// canonicalizes the point order to lexicographic ascending.
    pub fn new(n: usize, beta: u64, mut points: Vec<Vec<Int>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("ground dimension must be at least 1".into()));
        }
        let budget = Int::from(beta);
        for p in &points {
            if p.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "feasible point has {} coordinates, expected {n}",
                    p.len()
                )));
            }
            if p.iter().any(|c| c.is_negative()) {
                return Err(Error::InvalidInput(
                    "feasible points must be nonnegative".into(),
                ));
            }
            if p.iter().sum::<Int>() > budget {
                return Err(Error::InvalidInput(format!(
                    "feasible point exceeds the coordinate-sum budget {beta}"
                )));
            }
        }
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("feasible points must be distinct".into()));
        }
        Ok(ExplicitFeasibleSet { n, beta, points })
    }

    /// Ground dimension `n`.
    pub fn ground_dim(&self) -> usize {
        self.n
    }

    /// Coordinate-sum budget `beta`.
    pub fn beta(&self) -> u64 {
        self.beta
    }

    /// The points, lexicographically sorted.
    pub fn points(&self) -> &[Vec<Int>] {
        &self.points
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Membership test.
    pub fn contains(&self, x: &[Int]) -> bool {
        self.points.iter().any(|p| p.as_slice() == x)
    }

    /// The convex hull as an explicit vertex-listed region (errors when
    /// the set is empty).
    pub fn to_vrep(&self) -> Result<PolytopeRep> {
        if self.points.is_empty() {
            return Err(Error::Infeasible("the feasible set is empty".into()));
        }
        PolytopeRep::from_points(self.points.iter().map(|p| int_vec_to_rat(p)).collect())
    }
}

/// The common bases of a matroid pair as an explicit set of indicator
/// vectors (budget `beta = r`). Errors if `C(n, r)` exceeds `cap`.
pub fn bases_feasible_set(pair: &VectorialMatroidPair, cap: usize) -> Result<ExplicitFeasibleSet> {
    let n = pair.ground_size();
    let points = pair
        .common_bases(cap)?
        .into_iter()
        .map(|base| {
            let mut x = vec![Int::zero(); n];
            for j in base {
                x[j] = Int::from(1);
            }
            x
        })
        .collect();
    ExplicitFeasibleSet::new(n, pair.rank() as u64, points)
}

/// Reference optimum over an explicit feasible set, computed by direct
/// enumeration with the same comparison oracle and tie-breaking rules as
/// the exact optimizer: maximal objective value first, then the
/// lexicographically smallest image, then the lexicographically largest
/// witness within that image's fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceOpt {
    /// Winning feasible point.
    pub x: Vec<Int>,
    /// Its image under the weight matrix.
    pub image: Vec<Int>,
    /// Exact objective value of the image.
    pub value: ObjectiveValue,
}

/// Enumerates all points, groups them by image, and applies the
/// optimizer's exact selection rule. Errors on an empty set.
pub fn brute_force_opt(
    feasible: &ExplicitFeasibleSet,
    weights: &GeneralizedUnaryWeights,
    f: &ObjectiveOracle,
) -> Result<BruteForceOpt> {
    if weights.ground_dim() != feasible.ground_dim() {
        return Err(Error::DimensionMismatch(format!(
            "weights expect {} ground coordinates, set has {}",
            weights.ground_dim(),
            feasible.ground_dim()
        )));
    }
    if feasible.is_empty() {
        return Err(Error::Infeasible("the feasible set is empty".into()));
    }
    // Group points by image; BTreeMap keys ascend lexicographically, so the
    // first strictly-better image wins ties toward the lex-smallest.
    let mut fibers: BTreeMap<Vec<Int>, Vec<Int>> = BTreeMap::new();
    for p in feasible.points() {
        let u = weights.apply_int(p);
        let entry = fibers.entry(u).or_insert_with(|| p.clone());
        // Witness rule: lexicographically largest point of the fiber.
        if p > entry {
            *entry = p.clone();
        }
    }
    let mut best: Option<(Vec<Int>, Vec<Int>, ObjectiveValue)> = None;
    for (u, x) in &fibers {
        let value = f.evaluate(&int_vec_to_rat(u));
        match &best {
            Some((_, _, incumbent)) if value <= *incumbent => {}
            _ => best = Some((u.clone(), x.clone(), value)),
        }
    }
    let (image, x, value) = best.expect("nonempty set has an optimum");
    Ok(BruteForceOpt { x, image, value })
}

/// Reference image vertex set: maps every feasible point through the
/// weights, deduplicates, and keeps exactly the images that are *not* in
/// the convex hull of the others — one independent membership decision per
/// image, with no peeling shortcuts. Returns them lexicographically
/// sorted.
pub fn brute_force_image_vertices(
    feasible: &ExplicitFeasibleSet,
    weights: &GeneralizedUnaryWeights,
) -> Result<Vec<Vec<Int>>> {
    if weights.ground_dim() != feasible.ground_dim() {
        return Err(Error::DimensionMismatch(
            "weight and feasible-set ground dimensions differ".into(),
        ));
    }
    let images: BTreeSet<Vec<Int>> =
        feasible.points().iter().map(|p| weights.apply_int(p)).collect();
    let images: Vec<Vec<Int>> = images.into_iter().collect();
    let rational: Vec<Vec<Rational>> = images.iter().map(|u| int_vec_to_rat(u)).collect();
    let mut vertices = Vec::new();
    for (i, u) in images.iter().enumerate() {
        let others: Vec<Vec<Rational>> = rational
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        if others.is_empty() || !hull_membership(&others, &rational[i]) {
            vertices.push(u.clone());
        }
    }
    Ok(vertices)
}

/// Reference support coefficients of a weighted matroid pair: enumerates
/// common bases and accumulates `det(M1[B]) * det(M2[B]) * prod a_j` per
/// image, dropping exact zeros. Mirrors what interpolation must recover.
pub fn brute_force_support(
    pair: &VectorialMatroidPair,
    w: &[Vec<i64>],
    a: &[Int],
    cap: usize,
) -> Result<BTreeMap<Vec<i64>, Int>> {
    if w.iter().any(|row| row.len() != pair.ground_size()) || a.len() != pair.ground_size() {
        return Err(Error::DimensionMismatch(
            "weight or substitution dimensions do not match the pair".into(),
        ));
    }
    let mut support: BTreeMap<Vec<i64>, Int> = BTreeMap::new();
    for base in pair.common_bases(cap)? {
        let sub1: Vec<Vec<Int>> = pair
            .m1()
            .iter()
            .map(|row| base.iter().map(|&j| row[j].clone()).collect())
            .collect();
        let sub2: Vec<Vec<Int>> = pair
            .m2()
            .iter()
            .map(|row| base.iter().map(|&j| row[j].clone()).collect())
            .collect();
        let coeff: Int =
            bigint_det(&sub1) * bigint_det(&sub2) * base.iter().map(|&j| a[j].clone()).product::<Int>();
        let image: Vec<i64> = w
            .iter()
            .map(|row| base.iter().map(|&j| row[j]).sum::<i64>())
            .collect();
        *support.entry(image).or_insert_with(Int::zero) += coeff;
    }
    support.retain(|_, g| !g.is_zero());
    Ok(support)
}

/// Exact image-optimum provider for the deterministic common-base search:
/// restricts the pair, enumerates common bases, and reports the
/// `f`-optimal raw image (ties toward the lexicographically smallest).
pub fn exact_image_optimum_provider<'a>(
    pair: &'a VectorialMatroidPair,
    w: &'a [Vec<i64>],
    f: &'a ObjectiveOracle,
    cap: usize,
) -> impl FnMut(&[usize]) -> Result<Option<Vec<i64>>> + 'a {
    move |cols: &[usize]| {
        let restricted = pair.restrict(cols)?;
        let bases = enumerate_common_bases(restricted.pair.m1(), restricted.pair.m2(), cap)?;
        let mut best: Option<(Vec<i64>, ObjectiveValue)> = None;
        for local in bases {
            let image: Vec<i64> = w
                .iter()
                .map(|row| local.iter().map(|&k| row[restricted.columns[k]]).sum::<i64>())
                .collect();
            let value = f.evaluate(&crate::rational::i64_vec_to_rat(&image));
            let better = match &best {
                None => true,
                Some((bu, bv)) => value > *bv || (value == *bv && image < *bu),
            };
            if better {
                best = Some((image, value));
            }
        }
        Ok(best.map(|(u, _)| u))
    }
}

/// Separation oracle for the convex hull of an explicit point set:
/// membership is decided by an exact multiplier feasibility program, and
/// non-members get a separating functional from the same program's
/// certificate. The bounding box is the coordinate-wise min/max of the
/// points.
struct HullOracle {
    points: Vec<Vec<Rational>>,
    lo: Vec<Rational>,
    hi: Vec<Rational>,
}

impl SeparationOracle for HullOracle {
    fn dim(&self) -> usize {
        self.points[0].len()
    }

    fn bounding_box(&self) -> (Vec<Rational>, Vec<Rational>) {
        (self.lo.clone(), self.hi.clone())
    }

    fn separate(&self, x: &[Rational]) -> Separation {
        if hull_membership(&self.points, x) {
            return Separation::Inside;
        }
        let (normal, rhs) = separating_functional(&self.points, x)
            .expect("a point outside the hull admits a separating functional");
        Separation::Violated { normal, rhs }
    }

    fn describe(&self) -> String {
        format!("hull of {} explicit points", self.points.len())
    }
}

/// Wraps an explicit feasible set as an oracle-backed region over its
/// convex hull, for exercising the cutting-plane pipelines against the
/// same geometry the vertex-listed form describes.
pub fn hull_separation(feasible: &ExplicitFeasibleSet) -> Result<PolytopeRep> {
    if feasible.is_empty() {
        return Err(Error::Infeasible("the feasible set is empty".into()));
    }
    let points: Vec<Vec<Rational>> =
        feasible.points().iter().map(|p| int_vec_to_rat(p)).collect();
    let (lo, hi) = bounding_box_of_points(&points);
    Ok(PolytopeRep::Oracle(Arc::new(HullOracle { points, lo, hi })))
}

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// Maximize the objective.
    Maximize,
    /// Minimize the objective.
    Minimize,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::Maximize => write!(f, "maximize"),
            Sense::Minimize => write!(f, "minimize"),
        }
    }
}

/// Serializable objective descriptor; [`ObjectiveSpec::oracle`] turns it
/// into an evaluation oracle for a given image dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectiveSpec {
    /// `p`-norm of the image.
    PNorm(PExp),
    /// Inner product with fixed coefficients.
    Linear(Vec<Rational>),
    /// Largest coordinate.
    MaxCoordinate,
    /// Smallest coordinate.
    MinCoordinate,
    /// `|u|_1 - |u|_p`, a ray-concave test objective.
    L1MinusLp(PExp),
}

impl ObjectiveSpec {
    /// Builds the evaluation oracle, checking coefficient dimensions.
    pub fn oracle(&self, d: usize) -> Result<ObjectiveOracle> {
        match self {
            ObjectiveSpec::PNorm(p) => Ok(ObjectiveOracle::pnorm(*p)),
            ObjectiveSpec::Linear(w) => {
                if w.len() != d {
                    return Err(Error::DimensionMismatch(format!(
                        "linear objective has {} coefficients, image dimension is {d}",
                        w.len()
                    )));
                }
                Ok(ObjectiveOracle::linear(w.clone()))
            }
            ObjectiveSpec::MaxCoordinate => Ok(ObjectiveOracle::max_coordinate()),
            ObjectiveSpec::MinCoordinate => Ok(ObjectiveOracle::min_coordinate()),
            ObjectiveSpec::L1MinusLp(p) => Ok(ObjectiveOracle::l1_minus_lp(*p)),
        }
    }

    /// Short label for reports and file headers.
    pub fn describe(&self) -> String {
        match self {
            ObjectiveSpec::PNorm(PExp::Infinity) => "inf-norm".into(),
            ObjectiveSpec::PNorm(PExp::Finite(p)) => format!("{p}-norm"),
            ObjectiveSpec::Linear(_) => "linear".into(),
            ObjectiveSpec::MaxCoordinate => "max-coordinate".into(),
            ObjectiveSpec::MinCoordinate => "min-coordinate".into(),
            ObjectiveSpec::L1MinusLp(PExp::Infinity) => "l1-minus-linf".into(),
            ObjectiveSpec::L1MinusLp(PExp::Finite(p)) => format!("l1-minus-l{p}"),
        }
    }
}

/// The combinatorial model an instance optimizes over.
#[derive(Debug, Clone)]
pub enum FeasibleModel {
    /// Explicitly listed integer points.
    Explicit(ExplicitFeasibleSet),
    /// Indicators of common bases of a vectorial matroid pair.
    MatroidPair(VectorialMatroidPair),
}

/// A complete optimization instance: feasible model, weight matrix,
/// objective, direction, and an optional primary linear functional whose
/// optimal face restricts the search (lexicographic composition).
#[derive(Debug, Clone)]
pub struct Instance {
    /// Identifier used in reports.
    pub name: String,
    /// Feasible model.
    pub feasible: FeasibleModel,
    /// Weight matrix mapping ground points to images.
    pub weights: GeneralizedUnaryWeights,
    /// Objective descriptor over the image space.
    pub objective: ObjectiveSpec,
    /// Optimization direction.
    pub sense: Sense,
    /// Optional primary functional over the ground space.
    pub primary: Option<Vec<Rational>>,
}

impl Instance {
    /// Ground dimension `n`.
    pub fn ground_dim(&self) -> usize {
        match &self.feasible {
            FeasibleModel::Explicit(set) => set.ground_dim(),
            FeasibleModel::MatroidPair(pair) => pair.ground_size(),
        }
    }

    /// Image dimension `d`.
    pub fn image_dim(&self) -> usize {
        self.weights.image_dim()
    }

    /// Coordinate-sum budget: the explicit budget, or the rank for
    /// matroid models (bases have exactly `r` ones).
    pub fn beta(&self) -> u64 {
        match &self.feasible {
            FeasibleModel::Explicit(set) => set.beta(),
            FeasibleModel::MatroidPair(pair) => pair.rank() as u64,
        }
    }

    /// Consistency checks across the parts.
    pub fn validate(&self) -> Result<()> {
        if self.weights.ground_dim() != self.ground_dim() {
            return Err(Error::DimensionMismatch(format!(
                "weights expect {} ground coordinates, model has {}",
                self.weights.ground_dim(),
                self.ground_dim()
            )));
        }
        if let Some(c) = &self.primary {
            if c.len() != self.ground_dim() {
                return Err(Error::DimensionMismatch(format!(
                    "primary functional has {} coefficients, ground dimension is {}",
                    c.len(),
                    self.ground_dim()
                )));
            }
        }
        self.objective.oracle(self.image_dim()).map(|_| ())
    }

    /// Evaluation oracle in the objective's own orientation.
    pub fn oracle(&self) -> Result<ObjectiveOracle> {
        self.objective.oracle(self.image_dim())
    }

    /// Oracle oriented so maximizing it realizes the instance's sense.
    pub fn solver_oracle(&self) -> Result<ObjectiveOracle> {
        let f = self.oracle()?;
        Ok(match self.sense {
            Sense::Maximize => f,
            Sense::Minimize => f.negated(),
        })
    }

    /// The explicit set, if this is an explicit instance.
    pub fn explicit(&self) -> Option<&ExplicitFeasibleSet> {
        match &self.feasible {
            FeasibleModel::Explicit(set) => Some(set),
            FeasibleModel::MatroidPair(_) => None,
        }
    }

    /// The matroid pair, if this is a matroid instance.
    pub fn matroid(&self) -> Option<&VectorialMatroidPair> {
        match &self.feasible {
            FeasibleModel::MatroidPair(pair) => Some(pair),
            FeasibleModel::Explicit(_) => None,
        }
    }

    /// Materializes the feasible set as explicit points (enumerating
    /// common bases for matroid models, capped).
    pub fn feasible_points(&self, cap: usize) -> Result<ExplicitFeasibleSet> {
        match &self.feasible {
            FeasibleModel::Explicit(set) => Ok(set.clone()),
            FeasibleModel::MatroidPair(pair) => bases_feasible_set(pair, cap),
        }
    }

    /// Weight matrix as machine integers, for the matroid pipelines.
    pub fn weights_i64(&self) -> Result<Vec<Vec<i64>>> {
        weights_to_i64(&self.weights)
    }
}

/// Converts a materialized weight matrix to `i64` entries, erroring if any
/// entry overflows.
pub fn weights_to_i64(weights: &GeneralizedUnaryWeights) -> Result<Vec<Vec<i64>>> {
    weights
        .materialize()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    e.to_i64().ok_or_else(|| {
                        Error::InvalidInput("weight entry does not fit in 64 bits".into())
                    })
                })
                .collect()
        })
        .collect()
}

/// The five generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    /// Two Vandermonde-type matrices: every `r`-subset is a common base.
    UniformMatroidPair,
    /// Reduced incidence matrices of two graphs sharing a spanning tree.
    GraphicLike,
    /// 0/1 matrices with a shared leading identity block.
    TransversalLike,
    /// Explicit set of all vectorized permutation matrices.
    PermutationMatrices,
    /// Explicit random nonnegative points under a budget.
    RandomPoints,
}

impl InstanceKind {
    /// All kinds, for sweeping tests.
    pub const ALL: [InstanceKind; 5] = [
        InstanceKind::UniformMatroidPair,
        InstanceKind::GraphicLike,
        InstanceKind::TransversalLike,
        InstanceKind::PermutationMatrices,
        InstanceKind::RandomPoints,
    ];

    /// Stable label used in instance names and CLI arguments.
    pub fn label(&self) -> &'static str {
        match self {
            InstanceKind::UniformMatroidPair => "uniform-matroid-pair",
            InstanceKind::GraphicLike => "graphic-like",
            InstanceKind::TransversalLike => "transversal-like",
            InstanceKind::PermutationMatrices => "permutation-matrices",
            InstanceKind::RandomPoints => "random-points",
        }
    }

    /// Parses a label back into a kind.
    pub fn parse(s: &str) -> Option<InstanceKind> {
        InstanceKind::ALL.iter().copied().find(|k| k.label() == s)
    }
}

/// Size and flavor overrides for [`gen_instance`]; `None` fields are drawn
/// from the seed.
#[derive(Debug, Clone, Default)]
pub struct GenOptions {
    /// Ground-set size (columns / point dimension).
    pub ground: Option<usize>,
    /// Rank for matroid kinds.
    pub rank: Option<usize>,
    /// Image dimension.
    pub image_dim: Option<usize>,
    /// Budget for explicit kinds.
    pub beta: Option<u64>,
    /// Allow negative weight digits (defaults to nonnegative).
    pub signed_weights: bool,
    /// Fixed objective (otherwise drawn).
    pub objective: Option<ObjectiveSpec>,
    /// Fixed direction (otherwise maximize).
    pub sense: Option<Sense>,
    /// Force presence or absence of a primary functional.
    pub with_primary: Option<bool>,
}

fn draw_digit_block(
    rng: &mut ChaCha8Rng,
    d: usize,
    n: usize,
    lo: i64,
    hi: i64,
) -> Vec<Vec<i64>> {
    (0..d).map(|_| (0..n).map(|_| rng.gen_range(lo..=hi)).collect()).collect()
}

/// Draws a weight matrix sized so the downstream solvers stay at desk
/// scale. Matroid models pay per interpolation node (`(r·maxW+1)^d`
/// exact solves), explicit models per candidate grid cell
/// (`∏(2·β·maxdigit+1)` fiber programs), so magnitudes shrink as the
/// image dimension grows, and a second scale level is only drawn for
/// one-dimensional images.
fn draw_weights(
    rng: &mut ChaCha8Rng,
    d: usize,
    n: usize,
    signed: bool,
    matroid: bool,
) -> Result<GeneralizedUnaryWeights> {
    let two_level = d == 1 && rng.gen_ratio(1, 4);
    if two_level {
        let lo = if signed { -2 } else { 0 };
        let fine = draw_digit_block(rng, d, n, lo, 2);
        let coarse = draw_digit_block(rng, d, n, 0, 1);
        return GeneralizedUnaryWeights::new(
            vec![Int::from(1), Int::from(5)],
            vec![fine, coarse],
        );
    }
    let hi = if matroid && d >= 2 {
        1
    } else if d >= 3 {
        1
    } else {
        3
    };
    let lo = if signed { (-2).max(-hi) } else { 0 };
    let digits = draw_digit_block(rng, d, n, lo, hi);
    GeneralizedUnaryWeights::new(vec![Int::from(1)], vec![digits])
}

fn draw_objective(rng: &mut ChaCha8Rng, d: usize) -> ObjectiveSpec {
    match rng.gen_range(0..5u8) {
        0 => ObjectiveSpec::PNorm(PExp::Finite(1)),
        1 => ObjectiveSpec::PNorm(PExp::Finite(2)),
        2 => ObjectiveSpec::PNorm(PExp::Infinity),
        3 => ObjectiveSpec::Linear((0..d).map(|_| rat(rng.gen_range(1..=3))).collect()),
        _ => ObjectiveSpec::MaxCoordinate,
    }
}

fn draw_primary(rng: &mut ChaCha8Rng, n: usize, force: Option<bool>) -> Option<Vec<Rational>> {
    let include = force.unwrap_or_else(|| rng.gen_ratio(1, 3));
    if include {
        Some((0..n).map(|_| rat(rng.gen_range(0..=2))).collect())
    } else {
        None
    }
}

/// Distinct positive interpolation-style nodes `start, start+1, ..`.
fn vandermonde(r: usize, nodes: &[i64]) -> Vec<Vec<Int>> {
    (0..r)
        .map(|i| nodes.iter().map(|&x| Int::from(x).pow(i as u32)).collect())
        .collect()
}

/// Reduced incidence matrix (last vertex row dropped) of an edge list on
/// `v` vertices.
fn reduced_incidence(v: usize, edges: &[(usize, usize)]) -> Vec<Vec<Int>> {
    let mut m = vec![vec![Int::zero(); edges.len()]; v - 1];
    for (j, &(a, b)) in edges.iter().enumerate() {
        if a < v - 1 {
            m[a][j] = Int::from(1);
        }
        if b < v - 1 {
            m[b][j] = Int::from(-1);
        }
    }
    m
}

fn gen_matroid_pair(
    kind: InstanceKind,
    rng: &mut ChaCha8Rng,
    n: usize,
    r: usize,
) -> Result<VectorialMatroidPair> {
    match kind {
        InstanceKind::UniformMatroidPair => {
            let nodes1: Vec<i64> = (1..=n as i64).collect();
            let nodes2: Vec<i64> = (2..=n as i64 + 1).collect();
            VectorialMatroidPair::new(vandermonde(r, &nodes1), vandermonde(r, &nodes2))
        }
        InstanceKind::GraphicLike => {
            let v = r + 1;
            // Shared random spanning tree: vertex k >= 1 attaches below.
            let tree: Vec<(usize, usize)> =
                (1..v).map(|k| (rng.gen_range(0..k), k)).collect();
            let draw_extras = |rng: &mut ChaCha8Rng| -> Vec<(usize, usize)> {
                (tree.len()..n)
                    .map(|_| {
                        let a = rng.gen_range(0..v);
                        let mut b = rng.gen_range(0..v);
                        while b == a {
                            b = rng.gen_range(0..v);
                        }
                        (a.min(b), a.max(b))
                    })
                    .collect()
            };
            let mut e1 = tree.clone();
            e1.extend(draw_extras(rng));
            let mut e2 = tree.clone();
            e2.extend(draw_extras(rng));
            VectorialMatroidPair::new(reduced_incidence(v, &e1), reduced_incidence(v, &e2))
        }
        InstanceKind::TransversalLike => {
            let draw = |rng: &mut ChaCha8Rng| -> Vec<Vec<Int>> {
                (0..r)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                if j < r {
                                    Int::from((i == j) as i64)
                                } else {
                                    Int::from(rng.gen_range(0..=1i64))
                                }
                            })
                            .collect()
                    })
                    .collect()
            };
            let m1 = draw(rng);
            let m2 = draw(rng);
            VectorialMatroidPair::new(m1, m2)
        }
        _ => unreachable!("not a matroid kind"),
    }
}

fn permutation_points(k: usize) -> Vec<Vec<Int>> {
    // All k x k permutation matrices, flattened row-major.
    let mut perms = Vec::new();
    let mut order: Vec<usize> = (0..k).collect();
    permute(&mut order, 0, &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let mut x = vec![Int::zero(); k * k];
            for (row, col) in p.into_iter().enumerate() {
                x[row * k + col] = Int::from(1);
            }
            x
        })
        .collect()
}

fn permute(order: &mut Vec<usize>, at: usize, out: &mut Vec<Vec<usize>>) {
    if at == order.len() {
        out.push(order.clone());
        return;
    }
    for i in at..order.len() {
        order.swap(at, i);
        permute(order, at + 1, out);
        order.swap(at, i);
    }
}

/// Generates a small instance of the given kind, deterministically in
/// `(kind, seed, opts)`. Matroid kinds construct a validated pair, so a
/// successfully generated instance always has a common base.
pub fn gen_instance(kind: InstanceKind, seed: u64, opts: &GenOptions) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let d = opts.image_dim.unwrap_or_else(|| rng.gen_range(1..=2));
    let feasible = match kind {
        InstanceKind::UniformMatroidPair | InstanceKind::GraphicLike | InstanceKind::TransversalLike => {
            let r = opts.rank.unwrap_or_else(|| rng.gen_range(2..=3));
            let n = opts.ground.unwrap_or_else(|| rng.gen_range(r + 2..=r + 4));
            if n < r {
                return Err(Error::InvalidInput("ground size must be at least the rank".into()));
            }
            FeasibleModel::MatroidPair(gen_matroid_pair(kind, &mut rng, n, r)?)
        }
        InstanceKind::PermutationMatrices => {
            let k = opts.rank.unwrap_or_else(|| rng.gen_range(2..=3));
            let points = permutation_points(k);
            FeasibleModel::Explicit(ExplicitFeasibleSet::new(k * k, k as u64, points)?)
        }
        InstanceKind::RandomPoints => {
            let n = opts.ground.unwrap_or_else(|| rng.gen_range(2..=4));
            let beta = opts.beta.unwrap_or_else(|| rng.gen_range(3..=5));
            let target = rng.gen_range(4..=10usize);
            let mut set: BTreeSet<Vec<Int>> = BTreeSet::new();
            for _ in 0..target * 20 {
                if set.len() >= target {
                    break;
                }
                let mut left = beta as i64;
                let mut p = Vec::with_capacity(n);
                for _ in 0..n {
                    let c = rng.gen_range(0..=left.min(3));
                    p.push(Int::from(c));
                    left -= c;
                }
                set.insert(p);
            }
            FeasibleModel::Explicit(ExplicitFeasibleSet::new(
                n,
                beta,
                set.into_iter().collect(),
            )?)
        }
    };
    let n = match &feasible {
        FeasibleModel::Explicit(set) => set.ground_dim(),
        FeasibleModel::MatroidPair(pair) => pair.ground_size(),
    };
    let weights = draw_weights(
        &mut rng,
        d,
        n,
        opts.signed_weights,
        matches!(feasible, FeasibleModel::MatroidPair(_)),
    )?;
    let objective = opts.objective.clone().unwrap_or_else(|| draw_objective(&mut rng, d));
    let sense = opts.sense.unwrap_or(Sense::Maximize);
    let primary = draw_primary(&mut rng, n, opts.with_primary);
    let instance = Instance {
        name: format!("{}-{seed}", kind.label()),
        feasible,
        weights,
        objective,
        sense,
        primary,
    };
    instance.validate()?;
    Ok(instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::optimal_common_base_with;
    use crate::optimize::quasiconvex_max;
    use crate::weights::DEFAULT_GRID_CAP;

    fn int_mat(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| r.iter().map(|&v| Int::from(v)).collect()).collect()
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn identity_weights(n: usize) -> GeneralizedUnaryWeights {
        let digits: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        GeneralizedUnaryWeights::new(vec![Int::from(1)], vec![digits]).unwrap()
    }

    #[test]
    fn explicit_set_validation() {
        assert!(ExplicitFeasibleSet::new(2, 3, vec![ints(&[0, 1]), ints(&[1, 2])]).is_ok());
        // Negative coordinate.
        assert!(ExplicitFeasibleSet::new(2, 3, vec![ints(&[-1, 0])]).is_err());
        // Budget violation.
        assert!(ExplicitFeasibleSet::new(2, 2, vec![ints(&[2, 1])]).is_err());
        // Duplicate.
        assert!(ExplicitFeasibleSet::new(2, 3, vec![ints(&[1, 1]), ints(&[1, 1])]).is_err());
        // Dimension mismatch.
        assert!(ExplicitFeasibleSet::new(2, 3, vec![ints(&[1])]).is_err());
    }

    #[test]
    fn base_indicators_form_an_explicit_set() {
        let pair = VectorialMatroidPair::new(
            int_mat(&[&[1, 0, 1], &[0, 1, 1]]),
            int_mat(&[&[1, 0, 1], &[0, 1, 1]]),
        )
        .unwrap();
        let set = bases_feasible_set(&pair, 100).unwrap();
        assert_eq!(set.beta(), 2);
        assert_eq!(
            set.points(),
            &[ints(&[0, 1, 1]), ints(&[1, 0, 1]), ints(&[1, 1, 0])]
        );
    }

    #[test]
    fn brute_force_matches_the_exact_optimizer() {
        let set = ExplicitFeasibleSet::new(
            2,
            4,
            vec![ints(&[0, 0]), ints(&[2, 0]), ints(&[0, 2]), ints(&[1, 1])],
        )
        .unwrap();
        let weights = identity_weights(2);
        let f = ObjectiveOracle::pnorm(PExp::Finite(2));
        let brute = brute_force_opt(&set, &weights, &f).unwrap();
        // (2,0) and (0,2) tie; the lexicographically smaller image wins.
        assert_eq!(brute.image, ints(&[0, 2]));
        assert_eq!(brute.x, ints(&[0, 2]));

        let exact =
            quasiconvex_max(&set.to_vrep().unwrap(), &weights, set.beta(), &f, DEFAULT_GRID_CAP)
                .unwrap();
        assert_eq!(exact.image, brute.image);
        assert_eq!(exact.witness, brute.x);
        assert_eq!(exact.value, brute.value);
    }

    #[test]
    fn independent_vertex_filter_finds_hull_vertices() {
        let set = ExplicitFeasibleSet::new(
            2,
            4,
            vec![
                ints(&[0, 0]),
                ints(&[2, 0]),
                ints(&[0, 2]),
                ints(&[2, 2]),
                ints(&[1, 1]),
            ],
        )
        .unwrap();
        let verts = brute_force_image_vertices(&set, &identity_weights(2)).unwrap();
        assert_eq!(
            verts,
            vec![ints(&[0, 0]), ints(&[0, 2]), ints(&[2, 0]), ints(&[2, 2])]
        );
    }

    #[test]
    fn hull_oracle_agrees_with_the_vertex_listing() {
        let set = ExplicitFeasibleSet::new(
            2,
            4,
            vec![ints(&[0, 0]), ints(&[2, 0]), ints(&[0, 2]), ints(&[1, 1])],
        )
        .unwrap();
        let weights = identity_weights(2);
        let f = ObjectiveOracle::pnorm(PExp::Finite(1));
        let via_vrep =
            quasiconvex_max(&set.to_vrep().unwrap(), &weights, 4, &f, DEFAULT_GRID_CAP).unwrap();
        let via_oracle =
            quasiconvex_max(&hull_separation(&set).unwrap(), &weights, 4, &f, DEFAULT_GRID_CAP)
                .unwrap();
        assert_eq!(via_vrep.image, via_oracle.image);
        assert_eq!(via_vrep.witness, via_oracle.witness);
    }

    #[test]
    fn brute_support_matches_interpolation() {
        let pair = VectorialMatroidPair::new(
            int_mat(&[&[1, 0, 1], &[0, 1, 1]]),
            int_mat(&[&[1, 0, 1], &[0, 1, 1]]),
        )
        .unwrap();
        let w = vec![vec![1i64, 0, 2], vec![0i64, 1, 1]];
        let a = ints(&[2, 3, 5]);
        let brute = brute_force_support(&pair, &w, &a, 100).unwrap();
        let interp =
            crate::matroid::interpolate_support(&pair, &w, &a, &Default::default()).unwrap();
        assert_eq!(interp.entries, brute);
    }

    #[test]
    fn exact_provider_drives_the_deterministic_search() {
        let pair = VectorialMatroidPair::new(
            int_mat(&[&[1, 0, 1, 1], &[0, 1, 1, 2]]),
            int_mat(&[&[1, 1, 0, 3], &[0, 2, 1, 1]]),
        )
        .unwrap();
        let w = vec![vec![1i64, 2, 3, 1], vec![2i64, 0, 1, 1]];
        let f = ObjectiveOracle::pnorm(PExp::Finite(1));
        let mut provider = exact_image_optimum_provider(&pair, &w, &f, 1 << 20);
        let out = optimal_common_base_with(&pair, &w, &f, &mut provider).unwrap();

        // Cross-check against full enumeration.
        let set = bases_feasible_set(&pair, 100).unwrap();
        let weights = GeneralizedUnaryWeights::new(
            vec![Int::from(1)],
            vec![w.clone()],
        )
        .unwrap();
        let brute = brute_force_opt(&set, &weights, &f).unwrap();
        assert_eq!(ints(&out.image), brute.image);
    }

    #[test]
    fn generators_are_deterministic_and_valid() {
        for kind in InstanceKind::ALL {
            for seed in 0..6u64 {
                let a = gen_instance(kind, seed, &GenOptions::default()).unwrap();
                let b = gen_instance(kind, seed, &GenOptions::default()).unwrap();
                assert_eq!(format!("{a:?}"), format!("{b:?}"), "{kind:?} seed {seed}");
                a.validate().unwrap();
                match kind {
                    InstanceKind::PermutationMatrices | InstanceKind::RandomPoints => {
                        assert!(a.explicit().is_some())
                    }
                    _ => assert!(a.matroid().is_some()),
                }
            }
        }
    }

    #[test]
    fn generated_matroid_instances_expose_bases() {
        let inst =
            gen_instance(InstanceKind::GraphicLike, 11, &GenOptions::default()).unwrap();
        let set = inst.feasible_points(1 << 20).unwrap();
        assert!(!set.is_empty());
        let ones: Int = set.points()[0].iter().sum();
        assert_eq!(ones, Int::from(inst.matroid().unwrap().rank() as i64));
    }

    #[test]
    fn kind_labels_round_trip() {
        for kind in InstanceKind::ALL {
            assert_eq!(InstanceKind::parse(kind.label()), Some(kind));
        }
        assert_eq!(InstanceKind::parse("nonsense"), None);
    }
}
