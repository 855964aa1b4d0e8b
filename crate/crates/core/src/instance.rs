//! On-disk instance format: versioned, human-readable JSON.
//!
//! Arbitrary-precision integers and rationals travel as decimal strings
//! (`"42"`, `"-7/3"`), so files stay exact and diff-friendly regardless of
//! magnitude; bounded digit entries are plain JSON numbers. Parsing
//! reconstructs the validated runtime types — every structural invariant
//! (budgets, distinctness, ranks, common-base existence) is re-checked on
//! load, never trusted from the file.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::harness::{
    ExplicitFeasibleSet, FeasibleModel, Instance, ObjectiveSpec, Sense,
};
use crate::matroid::VectorialMatroidPair;
use crate::objective::PExp;
use crate::rational::{format_rational, parse_rational};
use crate::weights::GeneralizedUnaryWeights;
use crate::{Int, Rational, Result};

/// The only schema this build reads or writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    schema_version: u32,
    name: String,
    feasible: FeasibleFile,
    weights: WeightsFile,
    objective: ObjectiveFile,
    sense: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    primary: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum FeasibleFile {
    #[serde(rename_all = "kebab-case")]
    Explicit { ground_dim: usize, beta: u64, points: Vec<Vec<String>> },
    #[serde(rename_all = "kebab-case")]
    MatroidPair { m1: Vec<Vec<String>>, m2: Vec<Vec<String>> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsFile {
    scales: Vec<String>,
    digits: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum ObjectiveFile {
    #[serde(rename_all = "kebab-case")]
    Pnorm { p: String },
    #[serde(rename_all = "kebab-case")]
    Linear { coefficients: Vec<String> },
    MaxCoordinate,
    MinCoordinate,
    #[serde(rename_all = "kebab-case")]
    L1MinusLp { p: String },
}

fn parse_int(s: &str, what: &str) -> Result<Int> {
    s.parse::<Int>()
        .map_err(|_| Error::Parse(format!("{what}: invalid integer {s:?}")))
}

fn parse_rat(s: &str, what: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::Parse(format!("{what}: invalid rational {s:?}")))
}

fn parse_int_matrix(rows: &[Vec<String>], what: &str) -> Result<Vec<Vec<Int>>> {
    rows.iter()
        .map(|row| row.iter().map(|s| parse_int(s, what)).collect())
        .collect()
}

fn parse_pexp(s: &str) -> Result<PExp> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(PExp::Infinity);
    }
    let p: u32 = s
        .parse()
        .map_err(|_| Error::Parse(format!("norm exponent must be a positive integer or \"inf\", got {s:?}")))?;
    PExp::finite(p)
}

fn format_pexp(p: PExp) -> String {
    match p {
        PExp::Infinity => "inf".into(),
        PExp::Finite(k) => k.to_string(),
    }
}

/// Parses a JSON instance document, re-validating every invariant.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    let feasible = match &file.feasible {
        FeasibleFile::Explicit { ground_dim, beta, points } => {
            let parsed: Vec<Vec<Int>> = points
                .iter()
                .map(|p| p.iter().map(|s| parse_int(s, "feasible point")).collect())
                .collect::<Result<_>>()?;
            FeasibleModel::Explicit(ExplicitFeasibleSet::new(*ground_dim, *beta, parsed)?)
        }
        FeasibleFile::MatroidPair { m1, m2 } => {
            let m1 = parse_int_matrix(m1, "matroid matrix")?;
            let m2 = parse_int_matrix(m2, "matroid matrix")?;
            FeasibleModel::MatroidPair(VectorialMatroidPair::new(m1, m2)?)
        }
    };
    let scales = file
        .weights
        .scales
        .iter()
        .map(|s| parse_int(s, "weight scale"))
        .collect::<Result<Vec<Int>>>()?;
    let weights = GeneralizedUnaryWeights::new(scales, file.weights.digits.clone())?;
    let objective = match &file.objective {
        ObjectiveFile::Pnorm { p } => ObjectiveSpec::PNorm(parse_pexp(p)?),
        ObjectiveFile::Linear { coefficients } => ObjectiveSpec::Linear(
            coefficients
                .iter()
                .map(|s| parse_rat(s, "linear coefficient"))
                .collect::<Result<_>>()?,
        ),
        ObjectiveFile::MaxCoordinate => ObjectiveSpec::MaxCoordinate,
        ObjectiveFile::MinCoordinate => ObjectiveSpec::MinCoordinate,
        ObjectiveFile::L1MinusLp { p } => ObjectiveSpec::L1MinusLp(parse_pexp(p)?),
    };
    let sense = match file.sense.as_str() {
        "maximize" => Sense::Maximize,
        "minimize" => Sense::Minimize,
        other => {
            return Err(Error::Parse(format!(
                "sense must be \"maximize\" or \"minimize\", got {other:?}"
            )))
        }
    };
    let primary = file
        .primary
        .as_ref()
        .map(|c| c.iter().map(|s| parse_rat(s, "primary coefficient")).collect::<Result<Vec<_>>>())
        .transpose()?;
    let instance = Instance {
        name: file.name,
        feasible,
        weights,
        objective,
        sense,
        primary,
    };
    instance.validate()?;
    Ok(instance)
}

fn to_file(instance: &Instance) -> InstanceFile {
    let feasible = match &instance.feasible {
        FeasibleModel::Explicit(set) => FeasibleFile::Explicit {
            ground_dim: set.ground_dim(),
            beta: set.beta(),
            points: set
                .points()
                .iter()
                .map(|p| p.iter().map(Int::to_string).collect())
                .collect(),
        },
        FeasibleModel::MatroidPair(pair) => FeasibleFile::MatroidPair {
            m1: pair.m1().iter().map(|r| r.iter().map(Int::to_string).collect()).collect(),
            m2: pair.m2().iter().map(|r| r.iter().map(Int::to_string).collect()).collect(),
        },
    };
    let weights = WeightsFile {
        scales: instance.weights.scales().iter().map(Int::to_string).collect(),
        digits: instance.weights.digits().to_vec(),
    };
    let objective = match &instance.objective {
        ObjectiveSpec::PNorm(p) => ObjectiveFile::Pnorm { p: format_pexp(*p) },
        ObjectiveSpec::Linear(w) => ObjectiveFile::Linear {
            coefficients: w.iter().map(format_rational).collect(),
        },
        ObjectiveSpec::MaxCoordinate => ObjectiveFile::MaxCoordinate,
        ObjectiveSpec::MinCoordinate => ObjectiveFile::MinCoordinate,
        ObjectiveSpec::L1MinusLp(p) => ObjectiveFile::L1MinusLp { p: format_pexp(*p) },
    };
    InstanceFile {
        schema_version: SCHEMA_VERSION,
        name: instance.name.clone(),
        feasible,
        weights,
        objective,
        sense: instance.sense.to_string(),
        primary: instance
            .primary
            .as_ref()
            .map(|c| c.iter().map(format_rational).collect()),
    }
}

/// Serializes an instance as pretty-printed JSON (with trailing newline).
pub fn serialize_instance(instance: &Instance) -> String {
    let mut text = serde_json::to_string_pretty(&to_file(instance))
        .expect("instance serialization cannot fail");
    text.push('\n');
    text
}

/// Content digest of an instance: SHA-256 of its canonical (compact)
/// serialization, as lowercase hex. Stable across parse/serialize round
/// trips and across point orderings (points are canonicalized on load).
pub fn instance_digest(instance: &Instance) -> String {
    let canonical = serde_json::to_string(&to_file(instance))
        .expect("instance serialization cannot fail");
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
