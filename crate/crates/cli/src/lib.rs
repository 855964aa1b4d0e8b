//! Report model and command flows behind the `fiberopt` binary.
//!
//! Every command produces a JSON report with exact values (decimal strings
//! and algebraic expressions) plus clearly marked decimal approximations.
//! Reports are deterministic given the instance, algorithm, and seed: the
//! `timing_ms` field is the only part allowed to vary between identical
//! runs, and `report_digest` is computed with timing zeroed so it is stable
//! too.

use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use fiberopt::error::Error;
use fiberopt::harness::{
    brute_force_opt, ExplicitFeasibleSet, Instance, ObjectiveSpec, Sense,
};
use fiberopt::instance::instance_digest;
use fiberopt::lp::LpSense;
use fiberopt::matroid::{self, MatroidConfig};
use fiberopt::objective::{
    norm_constants_pnorm, ObjectiveValue, PExp, Radical,
};
use fiberopt::optimize::{
    norm_max_approx, objective_face, quasiconvex_max, raycave_min_approx, within_guarantee,
};
use fiberopt::polytope::PolytopeRep;
use fiberopt::rational::{dot, format_rational, int_vec_to_rat, parse_rational};
use fiberopt::weights::DEFAULT_GRID_CAP;
use fiberopt::{fibers, Int, Rational, Result};

/// Report schema version.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Enumeration budget when a matroid model must be materialized as
/// explicit base indicators.
pub const ENUM_CAP: usize = 1 << 20;

/// Decimal digits used for marked approximations in reports.
const APPROX_DIGITS: u32 = 12;

/// Process exit code for instance loading problems (I/O, JSON, or
/// validation).
pub const EXIT_PARSE: i32 = 10;
/// Process exit code for infeasible instances.
pub const EXIT_INFEASIBLE: i32 = 11;
/// Process exit code for exceeded enumeration/size caps.
pub const EXIT_CAP: i32 = 12;
/// Process exit code for a failed verification comparison.
pub const EXIT_MISMATCH: i32 = 13;
/// Process exit code for any other error.
pub const EXIT_INTERNAL: i32 = 1;

/// Maps an error to the binary's exit code contract.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) => EXIT_PARSE,
        Error::Infeasible(_) | Error::NoCommonBase => EXIT_INFEASIBLE,
        Error::CapExceeded { .. } | Error::CutBudgetExhausted { .. } => EXIT_CAP,
        _ => EXIT_INTERNAL,
    }
}

/// Sizes the global worker pool; later calls in the same process are
/// no-ops (the first configuration wins).
pub fn configure_threads(threads: usize) {
    if threads == 0 {
        return;
    }
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
}

/// The solver selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Exact quasiconvex maximization by image-vertex enumeration.
    ExactMax,
    /// Constant-factor norm maximization from per-row optima.
    NormMax,
    /// Constant-factor ray-concave minimization over image vertices.
    RaycaveMin,
    /// Randomized common-base search by support interpolation.
    MatroidRandom,
}

impl Algorithm {
    /// Stable command-line label.
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::ExactMax => "exact-max",
            Algorithm::NormMax => "norm-max",
            Algorithm::RaycaveMin => "raycave-min",
            Algorithm::MatroidRandom => "matroid-random",
        }
    }

    /// Parses a command-line label.
    pub fn parse(s: &str) -> Option<Algorithm> {
        [
            Algorithm::ExactMax,
            Algorithm::NormMax,
            Algorithm::RaycaveMin,
            Algorithm::MatroidRandom,
        ]
        .into_iter()
        .find(|a| a.label() == s)
    }
}

/// Options shared by `solve` and `verify`.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Which solver to run.
    pub algorithm: Algorithm,
    /// Master seed for randomized algorithms.
    pub seed: u64,
    /// Randomized repeats (best outcome wins).
    pub repeats: usize,
    /// Worker threads (1 = sequential).
    pub threads: usize,
    /// Replaces the instance's objective when present.
    pub objective: Option<ObjectiveSpec>,
    /// Replaces the instance's primary functional when present.
    pub primary: Option<Vec<Rational>>,
    /// Also run the brute-force reference oracle and compare.
    pub verify: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            algorithm: Algorithm::ExactMax,
            seed: 0,
            repeats: 8,
            threads: 1,
            objective: None,
            primary: None,
            verify: false,
        }
    }
}

/// An exact value next to its clearly-marked decimal approximation.
#[derive(Debug, Clone, Serialize)]
pub struct ReportValue {
    /// Exact representation (rational or radical expression).
    pub exact: String,
    /// Truncated decimal rendering; approximate by construction.
    pub decimal_approx: String,
}

impl ReportValue {
    fn from_objective(v: &ObjectiveValue) -> Self {
        match v {
            ObjectiveValue::Finite(a) => ReportValue {
                exact: a.to_string(),
                decimal_approx: a.approx_decimal(APPROX_DIGITS),
            },
            other => {
                ReportValue { exact: other.to_string(), decimal_approx: other.to_string() }
            }
        }
    }

    fn from_radical(r: &Radical) -> Self {
        ReportValue { exact: r.to_string(), decimal_approx: r.approx_decimal(APPROX_DIGITS) }
    }

    fn from_rational(r: &Rational) -> Self {
        ReportValue {
            exact: format_rational(r),
            decimal_approx: fiberopt::rational::decimal_approx(r, APPROX_DIGITS),
        }
    }
}

/// Parameters echoed into the report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportParams {
    /// Objective description (after any override).
    pub objective: String,
    /// Optimization direction.
    pub sense: String,
    /// Master seed.
    pub seed: u64,
    /// Randomized repeats.
    pub repeats: usize,
    /// Worker threads requested.
    pub threads: usize,
    /// Primary functional, if composing over its optimal face.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primary: Option<Vec<String>>,
    /// Exact optimal value of the primary functional over the region.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primary_value: Option<ReportValue>,
}

/// What the selected algorithm returned.
#[derive(Debug, Clone, Serialize)]
pub struct ReportOutcome {
    /// Witness point in the ground space (exact integers).
    pub x: Vec<String>,
    /// Its image under the weight matrix.
    pub image: Vec<String>,
    /// Exact objective value of the image.
    pub value: ReportValue,
    /// Proven multiplicative guarantee, when the algorithm has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guarantee: Option<ReportValue>,
    /// Recovered base (matroid search only), as sorted column indices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<usize>>,
    /// Randomized runs attempted (matroid search only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    /// Runs that ended on a common base (matroid search only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub successes: Option<usize>,
}

/// Brute-force comparison block (present under `--verify`).
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    /// Reference optimal image from exhaustive enumeration.
    pub reference_image: Vec<String>,
    /// Reference witness under the optimizer's tie-breaking rules.
    pub reference_witness: Vec<String>,
    /// Reference objective value.
    pub reference_value: ReportValue,
    /// Whether the returned value is within the proven guarantee of the
    /// reference (equality when the guarantee is 1).
    pub within_guarantee: bool,
    /// Whether image, witness, and value all match the reference exactly.
    pub exact_match: bool,
    /// Whether the reported primary optimum equals the enumerated one
    /// (`null` when no primary functional is in play).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primary_value_match: Option<bool>,
}

impl Verification {
    /// Whether the comparison is a pass (guarantee honored and, when
    /// composing, the primary optimum agrees).
    pub fn is_acceptable(&self) -> bool {
        self.within_guarantee && self.primary_value_match.unwrap_or(true)
    }
}

/// Complete result of `solve`/`verify`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    /// Report schema version.
    pub schema_version: u32,
    /// Instance name.
    pub instance_name: String,
    /// SHA-256 digest of the solved instance (after overrides).
    pub instance_digest: String,
    /// Algorithm label.
    pub algorithm: String,
    /// Echoed parameters.
    pub parameters: ReportParams,
    /// Algorithm output.
    pub outcome: ReportOutcome,
    /// Brute-force comparison, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    /// SHA-256 digest of this report with `timing_ms` zeroed.
    pub report_digest: String,
    /// Wall-clock milliseconds; the only nondeterministic field.
    pub timing_ms: u128,
}

impl RunReport {
    /// Pretty JSON with trailing newline.
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }
}

fn sha256_hex(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn seal_report(mut report: RunReport, started: Instant) -> RunReport {
    report.report_digest = String::new();
    report.timing_ms = 0;
    let canonical =
        serde_json::to_string(&report).expect("report serialization cannot fail");
    report.report_digest = sha256_hex(&canonical);
    report.timing_ms = started.elapsed().as_millis();
    report
}

fn int_strings(v: &[Int]) -> Vec<String> {
    v.iter().map(Int::to_string).collect()
}

struct SolveOutcome {
    x: Vec<Int>,
    image: Vec<Int>,
    value: ObjectiveValue,
    guarantee: Option<Radical>,
    base: Option<Vec<usize>>,
    runs: Option<usize>,
    successes: Option<usize>,
}

fn build_region(instance: &Instance) -> Result<PolytopeRep> {
    instance.feasible_points(ENUM_CAP)?.to_vrep()
}

/// Restricts an explicit set to the points maximizing `c · x`; returns the
/// survivors and the exact maximum.
fn restrict_to_primary(
    set: &ExplicitFeasibleSet,
    c: &[Rational],
) -> Result<(ExplicitFeasibleSet, Rational)> {
    if set.is_empty() {
        return Err(Error::Infeasible("the feasible set is empty".into()));
    }
    let scores: Vec<Rational> =
        set.points().iter().map(|p| dot(c, &int_vec_to_rat(p))).collect();
    let best = scores.iter().max().expect("nonempty").clone();
    let points: Vec<Vec<Int>> = set
        .points()
        .iter()
        .zip(&scores)
        .filter(|(_, s)| **s == best)
        .map(|(p, _)| p.clone())
        .collect();
    Ok((ExplicitFeasibleSet::new(set.ground_dim(), set.beta(), points)?, best))
}

fn sense_to_lp(sense: Sense) -> LpSense {
    match sense {
        Sense::Maximize => LpSense::Max,
        Sense::Minimize => LpSense::Min,
    }
}

fn verify_outcome(
    instance: &Instance,
    outcome: &SolveOutcome,
    reported_primary: Option<&Rational>,
) -> Result<Verification> {
    let points = instance.feasible_points(ENUM_CAP)?;
    let (points, primary_value_match) = match &instance.primary {
        Some(c) => {
            let (restricted, brute_z) = restrict_to_primary(&points, c)?;
            let matches = reported_primary.map(|z| *z == brute_z).unwrap_or(false);
            (restricted, Some(matches))
        }
        None => (points, None),
    };
    let solver_f = instance.solver_oracle()?;
    let brute = brute_force_opt(&points, &instance.weights, &solver_f)?;
    let truth = instance.oracle()?;
    let reference_value = truth.evaluate(&int_vec_to_rat(&brute.image));
    let guarantee = outcome.guarantee.clone().unwrap_or_else(Radical::one);
    let within = within_guarantee(
        &reference_value,
        &outcome.value,
        &guarantee,
        sense_to_lp(instance.sense),
    )?;
    let exact_match = brute.image == outcome.image
        && brute.x == outcome.x
        && reference_value == outcome.value;
    Ok(Verification {
        reference_image: int_strings(&brute.image),
        reference_witness: int_strings(&brute.x),
        reference_value: ReportValue::from_objective(&reference_value),
        within_guarantee: within,
        exact_match,
        primary_value_match,
    })
}

fn require_sense(instance: &Instance, wanted: Sense, what: &str) -> Result<()> {
    if instance.sense != wanted {
        return Err(Error::InvalidInput(format!(
            "{what} requires a {wanted} instance, got {}",
            instance.sense
        )));
    }
    Ok(())
}

/// Runs the selected algorithm on an instance (applying objective/primary
/// overrides first) and assembles the full report.
pub fn run_solve(base: &Instance, opts: &SolveOptions) -> Result<RunReport> {
    configure_threads(opts.threads);
    let mut instance = base.clone();
    if let Some(obj) = &opts.objective {
        instance.objective = obj.clone();
    }
    if let Some(c) = &opts.primary {
        instance.primary = Some(c.clone());
    }
    instance.validate()?;
    let digest = instance_digest(&instance);
    let started = Instant::now();
    let truth = instance.oracle()?;
    let d = instance.image_dim();

    let (outcome, primary_value) = if opts.algorithm == Algorithm::MatroidRandom {
        let pair = instance.matroid().ok_or_else(|| {
            Error::InvalidInput(
                "the randomized base search needs a matroid-pair instance".into(),
            )
        })?;
        if instance.primary.is_some() {
            return Err(Error::InvalidInput(
                "primary-objective composition is not supported by the randomized base search"
                    .into(),
            ));
        }
        let w = instance.weights_i64()?;
        let f = instance.solver_oracle()?;
        let out = matroid::optimal_common_base(
            pair,
            &w,
            &f,
            opts.seed,
            opts.repeats,
            &MatroidConfig::default(),
        )?;
        let image: Vec<Int> = out.image.iter().map(|&v| Int::from(v)).collect();
        let x: Vec<Int> = out.x.iter().map(|&v| Int::from(v)).collect();
        let value = truth.evaluate(&int_vec_to_rat(&image));
        (
            SolveOutcome {
                x,
                image,
                value,
                guarantee: None,
                base: Some(out.base),
                runs: Some(out.runs),
                successes: Some(out.successes),
            },
            None,
        )
    } else {
        match opts.algorithm {
            Algorithm::ExactMax => {
                require_sense(&instance, Sense::Maximize, "exact image-vertex maximization")?
            }
            Algorithm::NormMax => {
                require_sense(&instance, Sense::Maximize, "norm maximization")?
            }
            Algorithm::RaycaveMin => {
                require_sense(&instance, Sense::Minimize, "ray-concave minimization")?
            }
            Algorithm::MatroidRandom => unreachable!(),
        }
        let region = build_region(&instance)?;
        let (primary_value, region) = match &instance.primary {
            Some(c) => {
                let (z, face) = objective_face(&region, c)?;
                (Some(z), face)
            }
            None => (None, region),
        };
        let out = match opts.algorithm {
            Algorithm::ExactMax => quasiconvex_max(
                &region,
                &instance.weights,
                instance.beta(),
                &truth,
                DEFAULT_GRID_CAP,
            )?,
            Algorithm::NormMax => {
                let p = match &instance.objective {
                    ObjectiveSpec::PNorm(p) => *p,
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "norm maximization requires a p-norm objective, got {}",
                            other.describe()
                        )))
                    }
                };
                let constants = norm_constants_pnorm(p, d)?;
                norm_max_approx(&region, &instance.weights, &truth, &constants)?
            }
            Algorithm::RaycaveMin => raycave_min_approx(
                &region,
                &instance.weights,
                instance.beta(),
                &truth,
                DEFAULT_GRID_CAP,
            )?,
            Algorithm::MatroidRandom => unreachable!(),
        };
        (
            SolveOutcome {
                x: out.witness,
                image: out.image,
                value: out.value,
                guarantee: Some(out.guarantee),
                base: None,
                runs: None,
                successes: None,
            },
            primary_value,
        )
    };

    let verification = if opts.verify {
        Some(verify_outcome(&instance, &outcome, primary_value.as_ref())?)
    } else {
        None
    };

    let report = RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        instance_name: instance.name.clone(),
        instance_digest: digest,
        algorithm: opts.algorithm.label().to_string(),
        parameters: ReportParams {
            objective: instance.objective.describe(),
            sense: instance.sense.to_string(),
            seed: opts.seed,
            repeats: opts.repeats,
            threads: opts.threads,
            primary: instance
                .primary
                .as_ref()
                .map(|c| c.iter().map(format_rational).collect()),
            primary_value: primary_value.as_ref().map(ReportValue::from_rational),
        },
        outcome: ReportOutcome {
            x: int_strings(&outcome.x),
            image: int_strings(&outcome.image),
            value: ReportValue::from_objective(&outcome.value),
            guarantee: outcome.guarantee.as_ref().map(ReportValue::from_radical),
            base: outcome.base,
            runs: outcome.runs,
            successes: outcome.successes,
        },
        verification,
        report_digest: String::new(),
        timing_ms: 0,
    };
    Ok(seal_report(report, started))
}

/// One enumerated image vertex with its certificates.
#[derive(Debug, Clone, Serialize)]
pub struct FiberVertexReport {
    /// The image vertex.
    pub image: Vec<String>,
    /// Integer point of its fiber (lexicographic maximum).
    pub witness: Vec<String>,
    /// Supporting functional separating it from the other feasible images.
    pub separator_normal: Vec<String>,
    /// Threshold of the separating functional.
    pub separator_rhs: String,
}

/// Output of the `fibers` command.
#[derive(Debug, Clone, Serialize)]
pub struct FibersReport {
    /// Report schema version.
    pub schema_version: u32,
    /// Instance name.
    pub instance_name: String,
    /// Instance digest.
    pub instance_digest: String,
    /// Candidate grid size before any filtering.
    pub grid_size: usize,
    /// Candidates surviving the image-range prefilter.
    pub prefiltered: usize,
    /// Feasible images (nonempty fibers).
    pub feasible_images: usize,
    /// The image vertices with certificates.
    pub vertices: Vec<FiberVertexReport>,
    /// Wall-clock milliseconds.
    pub timing_ms: u128,
}

impl FibersReport {
    /// Pretty JSON with trailing newline.
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }
}

/// Enumerates the image vertices of an instance and reports witnesses and
/// separating certificates for each.
pub fn run_fibers(instance: &Instance, threads: usize) -> Result<FibersReport> {
    configure_threads(threads);
    instance.validate()?;
    let started = Instant::now();
    let region = build_region(instance)?;
    let set = fibers::image_vertices(
        &region,
        &instance.weights,
        instance.beta(),
        DEFAULT_GRID_CAP,
    )?;
    let mut vertices = Vec::with_capacity(set.vertices.len());
    for (i, u) in set.vertices.iter().enumerate() {
        let witness = fibers::fiber_integer_point(&region, &instance.weights, u)?
            .ok_or_else(|| {
                Error::OracleContractBreach(
                    "an enumerated image vertex must have a nonempty fiber".into(),
                )
            })?;
        let (normal, rhs) = set.separating_witness(i).ok_or_else(|| {
            Error::OracleContractBreach(
                "an enumerated image vertex must be separable from the rest".into(),
            )
        })?;
        vertices.push(FiberVertexReport {
            image: int_strings(u),
            witness: int_strings(&witness),
            separator_normal: normal.iter().map(format_rational).collect(),
            separator_rhs: format_rational(&rhs),
        });
    }
    Ok(FibersReport {
        schema_version: REPORT_SCHEMA_VERSION,
        instance_name: instance.name.clone(),
        instance_digest: instance_digest(instance),
        grid_size: set.grid_size,
        prefiltered: set.prefiltered,
        feasible_images: set.feasible.len(),
        vertices,
        timing_ms: started.elapsed().as_millis(),
    })
}

/// One recovered support coefficient.
#[derive(Debug, Clone, Serialize)]
pub struct SupportEntry {
    /// Image vector.
    pub image: Vec<i64>,
    /// Its exact (nonzero) coefficient.
    pub coefficient: String,
}

/// How the `support` command picks its substitution vector.
#[derive(Debug, Clone)]
pub enum SupportChoice {
    /// Draw uniformly from `{1, .., s}` per column, seeded.
    Seeded(u64),
    /// Use the given positive values directly.
    Explicit(Vec<u64>),
}

/// Output of the `support` command: one support-recovery run shown in
/// full.
#[derive(Debug, Clone, Serialize)]
pub struct SupportReport {
    /// Report schema version.
    pub schema_version: u32,
    /// Instance name.
    pub instance_name: String,
    /// Instance digest.
    pub instance_digest: String,
    /// Seed of the substitution draw (absent when the vector was given
    /// explicitly).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Substitution range a seeded draw uses (uniform on `1..=s`).
    pub s: u64,
    /// The substitution vector in effect.
    pub substitution: Vec<u64>,
    /// Componentwise image bound `z = r * max(W)`.
    pub z: i64,
    /// Recovered support coefficients, lexicographically by image.
    pub entries: Vec<SupportEntry>,
    /// Objective-optimal image over the recovered support, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Vec<i64>>,
    /// Wall-clock milliseconds.
    pub timing_ms: u128,
}

impl SupportReport {
    /// Pretty JSON with trailing newline.
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }
}

/// Runs one support recovery on a matroid instance with nonnegative
/// weights and reports the substitution, every recovered coefficient, and
/// the objective-optimal image.
pub fn run_support(instance: &Instance, choice: &SupportChoice) -> Result<SupportReport> {
    instance.validate()?;
    let pair = instance.matroid().ok_or_else(|| {
        Error::InvalidInput("support recovery needs a matroid-pair instance".into())
    })?;
    let w = instance.weights_i64()?;
    if w.iter().flatten().any(|&e| e < 0) {
        return Err(Error::InvalidInput(
            "support recovery reports raw images and therefore needs nonnegative weights"
                .into(),
        ));
    }
    let started = Instant::now();
    let f = instance.solver_oracle()?;
    let config = MatroidConfig::default();
    let s = matroid::substitution_range(pair, &config)?;
    let (seed, substitution) = match choice {
        SupportChoice::Seeded(seed) => {
            (Some(*seed), matroid::substitution_draw(*seed, pair.ground_size(), s))
        }
        SupportChoice::Explicit(values) => {
            if values.len() != pair.ground_size() {
                return Err(Error::DimensionMismatch(format!(
                    "substitution length {} vs ground size {}",
                    values.len(),
                    pair.ground_size()
                )));
            }
            (None, values.clone())
        }
    };
    let a: Vec<Int> = substitution.iter().map(|&v| Int::from(v)).collect();
    let support = matroid::interpolate_support(pair, &w, &a, &config)?;
    let outcome = support.argbest(&f).map(|(u, _)| u);
    let entries = support
        .entries
        .iter()
        .map(|(u, g)| SupportEntry { image: u.clone(), coefficient: g.to_string() })
        .collect();
    Ok(SupportReport {
        schema_version: REPORT_SCHEMA_VERSION,
        instance_name: instance.name.clone(),
        instance_digest: instance_digest(instance),
        seed,
        s,
        substitution,
        z: support.z,
        entries,
        outcome,
        timing_ms: started.elapsed().as_millis(),
    })
}

/// Parses an `--objective` override: `pnorm:<p|inf>`, `linear:<csv>`,
/// `l1-minus-lp:<p|inf>`, `max-coordinate`, or `min-coordinate`.
pub fn parse_objective_flag(s: &str) -> Result<ObjectiveSpec> {
    let bad = |msg: &str| Error::Parse(format!("--objective {s:?}: {msg}"));
    if let Some(rest) = s.strip_prefix("pnorm:") {
        return Ok(ObjectiveSpec::PNorm(parse_pexp_flag(rest)?));
    }
    if let Some(rest) = s.strip_prefix("l1-minus-lp:") {
        return Ok(ObjectiveSpec::L1MinusLp(parse_pexp_flag(rest)?));
    }
    if let Some(rest) = s.strip_prefix("linear:") {
        let coefficients = parse_rational_csv(rest)?;
        if coefficients.is_empty() {
            return Err(bad("needs at least one coefficient"));
        }
        return Ok(ObjectiveSpec::Linear(coefficients));
    }
    match s {
        "max-coordinate" => Ok(ObjectiveSpec::MaxCoordinate),
        "min-coordinate" => Ok(ObjectiveSpec::MinCoordinate),
        _ => Err(bad(
            "expected pnorm:<p|inf>, linear:<csv>, l1-minus-lp:<p|inf>, max-coordinate, or min-coordinate",
        )),
    }
}

fn parse_pexp_flag(s: &str) -> Result<PExp> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(PExp::Infinity);
    }
    let p: u32 = s.parse().map_err(|_| {
        Error::Parse(format!("norm exponent must be a positive integer or \"inf\", got {s:?}"))
    })?;
    PExp::finite(p)
}

/// Parses a comma-separated list of exact rationals (e.g. `1,1/2,-3`).
pub fn parse_rational_csv(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            parse_rational(t)
                .ok_or_else(|| Error::Parse(format!("invalid rational number {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use fiberopt::harness::{gen_instance, FeasibleModel, GenOptions, InstanceKind};
    use fiberopt::matroid::VectorialMatroidPair;
    use fiberopt::rational::rat;
    use fiberopt::weights::GeneralizedUnaryWeights;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn explicit_instance() -> Instance {
        let set = ExplicitFeasibleSet::new(
            2,
            4,
            vec![ints(&[0, 0]), ints(&[2, 0]), ints(&[0, 2]), ints(&[1, 1])],
        )
        .unwrap();
        Instance {
            name: "square-corner".into(),
            feasible: FeasibleModel::Explicit(set),
            weights: GeneralizedUnaryWeights::new(
                vec![Int::from(1)],
                vec![vec![vec![1, 0], vec![0, 1]]],
            )
            .unwrap(),
            objective: ObjectiveSpec::PNorm(PExp::Finite(2)),
            sense: Sense::Maximize,
            primary: None,
        }
    }

    fn matroid_instance() -> Instance {
        let pair = VectorialMatroidPair::new(
            vec![ints(&[1, 0, 1]), ints(&[0, 1, 1])],
            vec![ints(&[1, 0, 1]), ints(&[0, 1, 1])],
        )
        .unwrap();
        Instance {
            name: "three-columns".into(),
            feasible: FeasibleModel::MatroidPair(pair),
            weights: GeneralizedUnaryWeights::new(vec![Int::from(1)], vec![vec![vec![1, 2, 3]]])
                .unwrap(),
            objective: ObjectiveSpec::Linear(vec![rat(1)]),
            sense: Sense::Maximize,
            primary: None,
        }
    }

    #[test]
    fn solve_reports_are_verified_and_digest_stable() {
        let instance = explicit_instance();
        let opts = SolveOptions { verify: true, ..SolveOptions::default() };
        let a = run_solve(&instance, &opts).unwrap();
        let b = run_solve(&instance, &opts).unwrap();
        assert_eq!(a.outcome.image, vec!["0", "2"]);
        assert_eq!(a.outcome.x, vec!["0", "2"]);
        let v = a.verification.as_ref().unwrap();
        assert!(v.exact_match && v.within_guarantee && v.is_acceptable());
        assert_eq!(a.report_digest, b.report_digest);
        // Only timing may differ between the serialized reports.
        assert_eq!(
            a.to_json().replace(&format!("\"timing_ms\": {}", a.timing_ms), ""),
            b.to_json().replace(&format!("\"timing_ms\": {}", b.timing_ms), "")
        );
    }

    #[test]
    fn matroid_solve_recovers_the_best_base() {
        let instance = matroid_instance();
        let opts = SolveOptions {
            algorithm: Algorithm::MatroidRandom,
            seed: 77,
            repeats: 6,
            verify: true,
            ..SolveOptions::default()
        };
        let report = run_solve(&instance, &opts).unwrap();
        assert_eq!(report.outcome.image, vec!["5"]);
        assert_eq!(report.outcome.base, Some(vec![1, 2]));
        assert!(report.verification.unwrap().is_acceptable());
    }

    #[test]
    fn sense_mismatches_are_rejected() {
        let mut instance = explicit_instance();
        instance.sense = Sense::Minimize;
        let err = run_solve(&instance, &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)), "got {err:?}");

        let instance = explicit_instance();
        let opts =
            SolveOptions { algorithm: Algorithm::RaycaveMin, ..SolveOptions::default() };
        assert!(run_solve(&instance, &opts).is_err());
    }

    #[test]
    fn primary_composition_restricts_the_region() {
        let mut instance = explicit_instance();
        // Maximize x1 + x2 first: the face is the segment between (2,0) and
        // (0,2) plus (1,1); its image vertices are (2,0) and (0,2).
        instance.primary = Some(vec![rat(1), rat(1)]);
        let opts = SolveOptions { verify: true, ..SolveOptions::default() };
        let report = run_solve(&instance, &opts).unwrap();
        assert_eq!(report.parameters.primary_value.as_ref().unwrap().exact, "2");
        assert_eq!(report.outcome.image, vec!["0", "2"]);
        let v = report.verification.unwrap();
        assert_eq!(v.primary_value_match, Some(true));
        assert!(v.is_acceptable());
    }

    #[test]
    fn objective_overrides_change_the_solved_problem() {
        let instance = explicit_instance();
        let opts = SolveOptions {
            objective: Some(ObjectiveSpec::Linear(vec![rat(1), rat(0)])),
            verify: true,
            ..SolveOptions::default()
        };
        let report = run_solve(&instance, &opts).unwrap();
        assert_eq!(report.parameters.objective, "linear");
        assert_eq!(report.outcome.image, vec!["2", "0"]);
    }

    #[test]
    fn fibers_reports_all_vertices_with_certificates() {
        let report = run_fibers(&explicit_instance(), 1).unwrap();
        let images: Vec<&Vec<String>> =
            report.vertices.iter().map(|v| &v.image).collect();
        assert_eq!(
            images,
            vec![
                &vec!["0".to_string(), "0".to_string()],
                &vec!["0".to_string(), "2".to_string()],
                &vec!["2".to_string(), "0".to_string()]
            ]
        );
        for v in &report.vertices {
            assert_eq!(v.witness.len(), 2);
        }
    }

    #[test]
    fn support_reports_the_full_coefficient_family() {
        let report =
            run_support(&matroid_instance(), &SupportChoice::Seeded(5)).unwrap();
        assert_eq!(report.s, 2 * 2 * 4);
        assert_eq!(report.seed, Some(5));
        assert_eq!(report.entries.len(), 3);
        let images: Vec<&Vec<i64>> = report.entries.iter().map(|e| &e.image).collect();
        assert_eq!(images, vec![&vec![3i64], &vec![4], &vec![5]]);
        assert_eq!(report.outcome, Some(vec![5]));
    }

    #[test]
    fn support_accepts_an_explicit_substitution() {
        let choice = SupportChoice::Explicit(vec![1, 1, 1]);
        let report = run_support(&matroid_instance(), &choice).unwrap();
        assert_eq!(report.seed, None);
        assert_eq!(report.substitution, vec![1, 1, 1]);
        // With all substitutions equal to 1 each coefficient counts signed
        // base pairs: every 2-subset of the three columns is a common base
        // here, with images 3, 4, 5.
        assert_eq!(report.entries.len(), 3);
        let wrong_len = SupportChoice::Explicit(vec![1, 1]);
        assert!(run_support(&matroid_instance(), &wrong_len).is_err());
        let zero = SupportChoice::Explicit(vec![0, 1, 1]);
        assert!(run_support(&matroid_instance(), &zero).is_err());
    }

    #[test]
    fn flag_parsers_accept_the_documented_grammar() {
        assert_eq!(
            parse_objective_flag("pnorm:2").unwrap(),
            ObjectiveSpec::PNorm(PExp::Finite(2))
        );
        assert_eq!(
            parse_objective_flag("pnorm:inf").unwrap(),
            ObjectiveSpec::PNorm(PExp::Infinity)
        );
        assert_eq!(
            parse_objective_flag("linear:1,1/2").unwrap(),
            ObjectiveSpec::Linear(vec![rat(1), fiberopt::rational::ratio(1, 2)])
        );
        assert_eq!(parse_objective_flag("max-coordinate").unwrap(), ObjectiveSpec::MaxCoordinate);
        assert!(parse_objective_flag("pnorm:0").is_err());
        assert!(parse_objective_flag("nonsense").is_err());
        assert_eq!(parse_rational_csv("1, -2/3").unwrap().len(), 2);
        assert!(parse_rational_csv("1,x").is_err());
    }

    #[test]
    fn exit_codes_partition_the_error_space() {
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_PARSE);
        assert_eq!(exit_code(&Error::Infeasible("x".into())), EXIT_INFEASIBLE);
        assert_eq!(exit_code(&Error::NoCommonBase), EXIT_INFEASIBLE);
        assert_eq!(exit_code(&Error::cap("x", 2, 1)), EXIT_CAP);
        assert_eq!(exit_code(&Error::InvalidInput("x".into())), EXIT_INTERNAL);
    }

    #[test]
    fn generated_instances_solve_end_to_end() {
        for kind in InstanceKind::ALL {
            let instance = gen_instance(kind, 3, &GenOptions::default()).unwrap();
            let opts = SolveOptions { verify: true, ..SolveOptions::default() };
            let report = run_solve(&instance, &opts).unwrap();
            assert!(
                report.verification.unwrap().is_acceptable(),
                "{kind:?} verification failed"
            );
        }
    }
}
