//! Exact comparison oracles for image-space objectives.
//!
//! Objective values arising here have the form `r + c · R^(1/p)` with `r, c,
//! R` rational: linear functionals and coordinate extrema are rational,
//! p-norms are single radicals, and the `ℓ1 − ℓp` family mixes both. The
//! [`AlgebraicValue`] type stores that form exactly and compares without any
//! floating point:
//!
//! * radicals are normalized by extracting perfect prime-power roots, so a
//!   surviving radical is irrational with an irreducible minimal polynomial;
//! * coefficients fold into the radicand (`c·R^(1/p) = sign(c)·(|c|^p R)^(1/p)`),
//!   and identical radicals combine — after which a difference of two values
//!   is zero only in the structurally detected cases;
//! * any remaining comparison is settled either by exact integer powering
//!   (one radical) or by shrinking rational root intervals computed with
//!   integer p-th roots (two radicals, provably nonzero difference).
//!
//! No tolerance enters any decision; interval refinement is used only on
//! quantities certified nonzero, so it terminates.

use crate::error::Error;
use crate::rational::{dot, rat_pow, Rational};
use crate::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Returns `x^(1/p)` when `x ≥ 0` is a perfect rational p-th power.
fn perfect_root(x: &Rational, p: u32) -> Option<Rational> {
    debug_assert!(!x.is_negative());
    let num_root = x.numer().nth_root(p);
    if num_root.pow(p) != *x.numer() {
        return None;
    }
    let den_root = x.denom().nth_root(p);
    if den_root.pow(p) != *x.denom() {
        return None;
    }
    Some(Rational::new(num_root, den_root))
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rational interval `[lo, hi]` containing `R^(1/p)` with width `10^-digits`,
/// computed with exact integer p-th roots.
fn root_interval(radicand: &Rational, degree: u32, digits: u32) -> (Rational, Rational) {
    debug_assert!(radicand > &Rational::zero() && degree >= 1);
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (radicand.numer() * scale.pow(degree)) / radicand.denom();
    let r = scaled.nth_root(degree);
    (
        Rational::new(r.clone(), scale.clone()),
        Rational::new(r + BigInt::one(), scale),
    )
}

/// Exact value of the form `rat + coef · radicand^(1/degree)`.
///
/// Invariants maintained by construction: `radicand ≥ 0`; `degree ≥ 1`; when
/// `coef ≠ 0` the radical part is irrational (the radicand is not a perfect
/// q-th power for any prime `q` dividing the degree, and the degree is
/// minimal); rational values are stored with `coef = 0`, `radicand = 0`,
/// `degree = 1`.
#[derive(Debug, Clone)]
pub struct AlgebraicValue {
    rat: Rational,
    coef: Rational,
    radicand: Rational,
    degree: u32,
}

impl AlgebraicValue {
    /// Purely rational value.
    pub fn rational(r: Rational) -> Self {
        AlgebraicValue { rat: r, coef: Rational::zero(), radicand: Rational::zero(), degree: 1 }
    }

    /// Value `rat + coef · radicand^(1/degree)`, normalized.
    pub fn with_radical(rat: Rational, coef: Rational, radicand: Rational, degree: u32) -> Self {
        assert!(degree >= 1, "radical degree must be at least 1");
        assert!(!radicand.is_negative(), "radicand must be nonnegative");
        let mut radicand = radicand;
        let mut degree = degree;
        if coef.is_zero() || radicand.is_zero() {
            return Self::rational(rat);
        }
        // Extract perfect prime-power roots until the radical is either
        // rational or irreducible.
        'reduce: loop {
            if degree == 1 {
                return Self::rational(rat + coef * radicand);
            }
            for p in prime_divisors(degree) {
                if let Some(root) = perfect_root(&radicand, p) {
                    radicand = root;
                    degree /= p;
                    continue 'reduce;
                }
            }
            break;
        }
        AlgebraicValue { rat, coef, radicand, degree }
    }

    /// The zero value.
    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    /// True when the value is rational.
    pub fn is_rational(&self) -> bool {
        self.coef.is_zero()
    }

    /// The exact rational value, when rational.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.rat)
    }

    /// Component accessors `(rat, coef, radicand, degree)`.
    pub fn parts(&self) -> (&Rational, &Rational, &Rational, u32) {
        (&self.rat, &self.coef, &self.radicand, self.degree)
    }

    /// Negates the value.
    pub fn neg(&self) -> Self {
        AlgebraicValue {
            rat: -self.rat.clone(),
            coef: -self.coef.clone(),
            radicand: self.radicand.clone(),
            degree: self.degree,
        }
    }

    /// Adds a rational offset.
    pub fn add_rational(&self, r: &Rational) -> Self {
        AlgebraicValue { rat: &self.rat + r, ..self.clone() }
    }

    /// Scales by a rational factor.
    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        AlgebraicValue {
            rat: &self.rat * r,
            coef: &self.coef * r,
            radicand: self.radicand.clone(),
            degree: self.degree,
        }
    }

    /// Rational enclosure `[lo, hi]` of the value with width `10^-digits`.
    pub fn enclosure(&self, digits: u32) -> (Rational, Rational) {
        if self.coef.is_zero() {
            return (self.rat.clone(), self.rat.clone());
        }
        let (rlo, rhi) = root_interval(&self.radicand, self.degree, digits);
        let (tlo, thi) = if self.coef.is_positive() {
            (&self.coef * rlo, &self.coef * rhi)
        } else {
            (&self.coef * rhi, &self.coef * rlo)
        };
        (&self.rat + tlo, &self.rat + thi)
    }

    /// Decimal approximation (round toward minus infinity at the final
    /// digit); exact for rational values up to the digit budget. Callers mark
    /// the result as approximate.
    pub fn approx_decimal(&self, digits: u32) -> String {
        let (lo, _) = self.enclosure(digits + 2);
        crate::rational::decimal_approx(&lo, digits)
    }

    /// Exact sign of the value: -1, 0, or +1.
    pub fn signum(&self) -> i8 {
        signum_of_sum(
            &self.rat,
            &[(self.coef.clone(), self.radicand.clone(), self.degree)],
        )
    }

    /// Exact total-order comparison.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        let delta = &self.rat - &other.rat;
        let terms = [
            (self.coef.clone(), self.radicand.clone(), self.degree),
            (-other.coef.clone(), other.radicand.clone(), other.degree),
        ];
        match signum_of_sum(&delta, &terms) {
            x if x < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl PartialEq for AlgebraicValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicValue {}

impl fmt::Display for AlgebraicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coef.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            return write!(f, "{}·{}^(1/{})", self.coef, self.radicand, self.degree);
        }
        write!(f, "{} + {}·{}^(1/{})", self.rat, self.coef, self.radicand, self.degree)
    }
}

/// Exact sign of `delta + Σ coef_i · radicand_i^(1/degree_i)`.
///
/// Terms must individually satisfy the [`AlgebraicValue`] normalization
/// invariant (irrational radical or zero coefficient). At most two distinct
/// irrational radicals are supported, which covers every difference of two
/// objective values.
fn signum_of_sum(delta: &Rational, terms: &[(Rational, Rational, u32)]) -> i8 {
    // Fold coefficients into radicands: c·R^(1/p) = s·(|c|^p·R)^(1/p). This
    // preserves irreducibility, so equal folded radicals mean equal values.
    let mut folded: Vec<(i8, Rational, u32)> = Vec::new();
    for (coef, radicand, degree) in terms {
        if coef.is_zero() {
            continue;
        }
        let sign = if coef.is_negative() { -1i8 } else { 1i8 };
        let base = rat_pow(&coef.abs(), *degree) * radicand;
        folded.push((sign, base, *degree));
    }
    // Combine identical radicals (opposite signs cancel; equal signs double,
    // i.e. fold the factor 2 back in).
    folded.sort_by(|a, b| (a.2, &a.1).cmp(&(b.2, &b.1)));
    let mut combined: Vec<(i8, Rational, u32)> = Vec::new();
    for (sign, base, degree) in folded {
        match combined.last_mut() {
            Some((s, b, d)) if *d == degree && *b == base => {
                if *s == sign {
                    // 2·R^(1/p) = (2^p·R)^(1/p)
                    *b = rat_pow(&Rational::from_integer(2.into()), degree) * &*b;
                } else {
                    combined.pop();
                }
            }
            _ => combined.push((sign, base, degree)),
        }
    }

    match combined.len() {
        0 => rational_signum(delta),
        1 => {
            // delta + s·B^(1/p): zero would force the radical to be rational,
            // which normalization rules out; compare via p-th powers.
            let (sign, base, degree) = &combined[0];
            let radical_negates_delta = delta.is_negative() != (*sign < 0);
            if !radical_negates_delta {
                return *sign; // both parts share the radical's sign (delta may be 0)
            }
            // Opposite signs: |s·B^(1/p)| vs |delta|.
            let lhs = base;
            let rhs = rat_pow(&delta.abs(), *degree);
            match lhs.cmp(&rhs) {
                Ordering::Greater => *sign,
                Ordering::Less => -*sign,
                Ordering::Equal => {
                    unreachable!("normalized radical cannot equal a rational")
                }
            }
        }
        2 => {
            // Two distinct irreducible radicals: the sum with any rational is
            // provably nonzero, so interval refinement terminates.
            let mut digits = 8u32;
            loop {
                let mut lo = delta.clone();
                let mut hi = delta.clone();
                for (sign, base, degree) in &combined {
                    let (rlo, rhi) = root_interval(base, *degree, digits);
                    if *sign > 0 {
                        lo += rlo;
                        hi += rhi;
                    } else {
                        lo -= rhi;
                        hi -= rlo;
                    }
                }
                if lo.is_positive() {
                    return 1;
                }
                if hi.is_negative() {
                    return -1;
                }
                assert!(
                    digits <= 1 << 14,
                    "interval refinement failed to separate a certified nonzero quantity"
                );
                digits *= 2;
            }
        }
        n => panic!("comparisons involve at most two distinct radicals, got {n}"),
    }
}

fn rational_signum(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// A totally ordered objective value: finite algebraic values plus the two
/// infinities used as virtual optima of empty sets.
#[derive(Debug, Clone)]
pub enum ObjectiveValue {
    /// Smaller than every finite value.
    NegInfinity,
    /// A finite exact value.
    Finite(AlgebraicValue),
    /// Larger than every finite value.
    Infinity,
}

impl ObjectiveValue {
    /// Wraps a rational.
    pub fn rational(r: Rational) -> Self {
        ObjectiveValue::Finite(AlgebraicValue::rational(r))
    }

    /// The finite payload, if any.
    pub fn finite(&self) -> Option<&AlgebraicValue> {
        match self {
            ObjectiveValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Negation (swaps the infinities).
    pub fn neg(&self) -> Self {
        match self {
            ObjectiveValue::NegInfinity => ObjectiveValue::Infinity,
            ObjectiveValue::Infinity => ObjectiveValue::NegInfinity,
            ObjectiveValue::Finite(v) => ObjectiveValue::Finite(v.neg()),
        }
    }
}

impl PartialEq for ObjectiveValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ObjectiveValue {}

impl PartialOrd for ObjectiveValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ObjectiveValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use ObjectiveValue::*;
        match (self, other) {
            (NegInfinity, NegInfinity) | (Infinity, Infinity) => Ordering::Equal,
            (NegInfinity, _) | (_, Infinity) => Ordering::Less,
            (_, NegInfinity) | (Infinity, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp_exact(b),
        }
    }
}

impl fmt::Display for ObjectiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveValue::NegInfinity => write!(f, "-inf"),
            ObjectiveValue::Infinity => write!(f, "+inf"),
            ObjectiveValue::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Exponent of a p-norm: a finite integer `p ≥ 1` or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PExp {
    /// Finite exponent `p ≥ 1`.
    Finite(u32),
    /// The maximum norm.
    Infinity,
}

impl PExp {
    /// Validated constructor for finite exponents.
    pub fn finite(p: u32) -> Result<Self> {
        if p < 1 {
            return Err(Error::InvalidInput("p-norm exponent must satisfy p ≥ 1".into()));
        }
        Ok(PExp::Finite(p))
    }
}

impl fmt::Display for PExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExp::Finite(p) => write!(f, "{p}"),
            PExp::Infinity => write!(f, "inf"),
        }
    }
}

/// Built-in objective families plus user extensions.
#[derive(Clone)]
pub enum ObjectiveKind {
    /// `‖u‖_p`.
    PNorm(PExp),
    /// `w · u`.
    Linear(Vec<Rational>),
    /// `max_i u_i` (quasiconvex).
    MaxCoordinate,
    /// `min_i u_i` (concave, nondecreasing on the nonnegative orthant).
    MinCoordinate,
    /// `‖u‖_1 − ‖u‖_p` (ray-concave and nondecreasing on the nonnegative
    /// orthant).
    L1MinusLp(PExp),
    /// Arbitrary user objective.
    Custom {
        /// Name used in reports and error messages.
        name: String,
        /// Exact evaluator.
        eval: Arc<dyn Fn(&[Rational]) -> ObjectiveValue + Send + Sync>,
    },
}

impl fmt::Debug for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveKind::PNorm(p) => write!(f, "PNorm({p})"),
            ObjectiveKind::Linear(w) => write!(f, "Linear({w:?})"),
            ObjectiveKind::MaxCoordinate => write!(f, "MaxCoordinate"),
            ObjectiveKind::MinCoordinate => write!(f, "MinCoordinate"),
            ObjectiveKind::L1MinusLp(p) => write!(f, "L1MinusLp({p})"),
            ObjectiveKind::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// Comparison oracle for image-space objectives: evaluates points exactly and
/// compares them under a total preorder consistent with evaluation. Optional
/// adapters shift the argument (used by weight shifting) and negate the order
/// (minimization as maximization).
#[derive(Debug, Clone)]
pub struct ObjectiveOracle {
    kind: ObjectiveKind,
    shift: Option<Vec<Rational>>,
    negate: bool,
}

impl ObjectiveOracle {
    /// p-norm objective.
    pub fn pnorm(p: PExp) -> Self {
        ObjectiveOracle { kind: ObjectiveKind::PNorm(p), shift: None, negate: false }
    }

    /// Linear objective `u ↦ w · u`.
    pub fn linear(w: Vec<Rational>) -> Self {
        ObjectiveOracle { kind: ObjectiveKind::Linear(w), shift: None, negate: false }
    }

    /// `max_i u_i`.
    pub fn max_coordinate() -> Self {
        ObjectiveOracle { kind: ObjectiveKind::MaxCoordinate, shift: None, negate: false }
    }

    /// `min_i u_i`.
    pub fn min_coordinate() -> Self {
        ObjectiveOracle { kind: ObjectiveKind::MinCoordinate, shift: None, negate: false }
    }

    /// `‖u‖_1 − ‖u‖_p`.
    pub fn l1_minus_lp(p: PExp) -> Self {
        ObjectiveOracle { kind: ObjectiveKind::L1MinusLp(p), shift: None, negate: false }
    }

    /// Custom exact objective.
    pub fn custom(
        name: impl Into<String>,
        eval: Arc<dyn Fn(&[Rational]) -> ObjectiveValue + Send + Sync>,
    ) -> Self {
        ObjectiveOracle {
            kind: ObjectiveKind::Custom { name: name.into(), eval },
            shift: None,
            negate: false,
        }
    }

    /// The objective family.
    pub fn kind(&self) -> &ObjectiveKind {
        &self.kind
    }

    /// Evaluates the objective at `u + shift` before any negation; used to
    /// re-express objectives over shifted weight matrices.
    pub fn with_shift(mut self, shift: Vec<Rational>) -> Self {
        self.shift = match self.shift {
            None => Some(shift),
            Some(old) => {
                assert_eq!(old.len(), shift.len(), "shift dimensions must agree");
                Some(old.iter().zip(&shift).map(|(a, b)| a + b).collect())
            }
        };
        self
    }

    /// Reverses the comparison order (and negates values), turning
    /// minimization into maximization.
    pub fn negated(mut self) -> Self {
        self.negate = !self.negate;
        self
    }

    /// Whether this oracle negates its underlying objective.
    pub fn is_negated(&self) -> bool {
        self.negate
    }

    /// Short label for reports.
    pub fn describe(&self) -> String {
        let base = match &self.kind {
            ObjectiveKind::PNorm(p) => format!("pnorm:{p}"),
            ObjectiveKind::Linear(_) => "linear".to_string(),
            ObjectiveKind::MaxCoordinate => "max-coordinate".to_string(),
            ObjectiveKind::MinCoordinate => "min-coordinate".to_string(),
            ObjectiveKind::L1MinusLp(p) => format!("l1-minus-lp:{p}"),
            ObjectiveKind::Custom { name, .. } => format!("custom:{name}"),
        };
        let mut label = base;
        if self.shift.is_some() {
            label.push_str("+shift");
        }
        if self.negate {
            label = format!("neg({label})");
        }
        label
    }

    /// Exact evaluation.
    pub fn evaluate(&self, u: &[Rational]) -> ObjectiveValue {
        let shifted;
        let point: &[Rational] = match &self.shift {
            None => u,
            Some(s) => {
                assert_eq!(s.len(), u.len(), "shift dimension mismatch");
                shifted = u.iter().zip(s).map(|(a, b)| a + b).collect::<Vec<_>>();
                &shifted
            }
        };
        let value = match &self.kind {
            ObjectiveKind::PNorm(PExp::Infinity) => {
                let m = point.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero);
                ObjectiveValue::rational(m)
            }
            ObjectiveKind::PNorm(PExp::Finite(p)) => {
                let sum = point
                    .iter()
                    .fold(Rational::zero(), |acc, x| acc + rat_pow(&x.abs(), *p));
                ObjectiveValue::Finite(AlgebraicValue::with_radical(
                    Rational::zero(),
                    Rational::one(),
                    sum,
                    *p,
                ))
            }
            ObjectiveKind::Linear(w) => {
                assert_eq!(w.len(), point.len(), "linear objective dimension mismatch");
                ObjectiveValue::rational(dot(w, point))
            }
            ObjectiveKind::MaxCoordinate => {
                let m = point.iter().max().expect("max-coordinate needs d ≥ 1").clone();
                ObjectiveValue::rational(m)
            }
            ObjectiveKind::MinCoordinate => {
                let m = point.iter().min().expect("min-coordinate needs d ≥ 1").clone();
                ObjectiveValue::rational(m)
            }
            ObjectiveKind::L1MinusLp(p) => {
                let l1 = point.iter().fold(Rational::zero(), |acc, x| acc + x.abs());
                match p {
                    PExp::Infinity => {
                        let linf =
                            point.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero);
                        ObjectiveValue::rational(l1 - linf)
                    }
                    PExp::Finite(p) => {
                        let sum = point
                            .iter()
                            .fold(Rational::zero(), |acc, x| acc + rat_pow(&x.abs(), *p));
                        ObjectiveValue::Finite(AlgebraicValue::with_radical(
                            l1,
                            -Rational::one(),
                            sum,
                            *p,
                        ))
                    }
                }
            }
            ObjectiveKind::Custom { eval, .. } => eval(point),
        };
        if self.negate {
            value.neg()
        } else {
            value
        }
    }

    /// Total preorder on image points, consistent with [`evaluate`].
    ///
    /// [`evaluate`]: ObjectiveOracle::evaluate
    pub fn compare(&self, u1: &[Rational], u2: &[Rational]) -> Ordering {
        self.evaluate(u1).cmp(&self.evaluate(u2))
    }
}

/// Value of the exact form `base^(1/index)`, used for norm-equivalence
/// constants and approximation guarantees so that ratio comparisons stay
/// exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radical {
    /// Nonnegative rational base.
    pub base: Rational,
    /// Root index (`1` means the value is `base` itself).
    pub index: u32,
}

impl Radical {
    /// The constant 1.
    pub fn one() -> Self {
        Radical { base: Rational::one(), index: 1 }
    }

    /// A rational constant.
    pub fn rational(base: Rational) -> Self {
        assert!(!base.is_negative(), "radical base must be nonnegative");
        Radical { base, index: 1 }
    }

    /// `base^(1/index)`, reduced when the base is a perfect power.
    pub fn new(base: Rational, index: u32) -> Self {
        assert!(!base.is_negative(), "radical base must be nonnegative");
        assert!(index >= 1, "radical index must be at least 1");
        let v = AlgebraicValue::with_radical(Rational::zero(), Rational::one(), base.clone(), index);
        if let Some(r) = v.as_rational() {
            return Radical { base: r.clone(), index: 1 };
        }
        let (_, _, radicand, degree) = v.parts();
        Radical { base: radicand.clone(), index: degree }
    }

    /// Exact product.
    pub fn mul(&self, other: &Radical) -> Radical {
        let l = (self.index as u64).lcm(&(other.index as u64)) as u32;
        let base = rat_pow(&self.base, l / self.index) * rat_pow(&other.base, l / other.index);
        Radical::new(base, l)
    }

    /// Exact quotient; panics when `other` is zero.
    pub fn div(&self, other: &Radical) -> Radical {
        assert!(!other.base.is_zero(), "division by a zero radical");
        let l = (self.index as u64).lcm(&(other.index as u64)) as u32;
        let base = rat_pow(&self.base, l / self.index) / rat_pow(&other.base, l / other.index);
        Radical::new(base, l)
    }

    /// Exact comparison by cross-powering.
    pub fn cmp_exact(&self, other: &Radical) -> Ordering {
        rat_pow(&self.base, other.index).cmp(&rat_pow(&other.base, self.index))
    }

    /// The value as an [`AlgebraicValue`].
    pub fn to_value(&self) -> AlgebraicValue {
        AlgebraicValue::with_radical(
            Rational::zero(),
            Rational::one(),
            self.base.clone(),
            self.index,
        )
    }

    /// Exact product with a general objective value, when representable in
    /// the single-radical form (always the case when either factor is
    /// rational or both radicals exist; a mixed `rat + radical` value times
    /// an irrational radical is not representable and yields `None`).
    pub fn scale_value(&self, v: &AlgebraicValue) -> Option<AlgebraicValue> {
        let me = Radical::new(self.base.clone(), self.index);
        if me.index == 1 {
            return Some(v.scale(&me.base));
        }
        let (rat, coef, radicand, degree) = v.parts();
        if coef.is_zero() {
            // rational × radical
            return Some(AlgebraicValue::with_radical(
                Rational::zero(),
                rat.clone(),
                me.base.clone(),
                me.index,
            ));
        }
        if !rat.is_zero() {
            return None;
        }
        // pure radical × radical: combine under the lcm index.
        let l = (me.index as u64).lcm(&(degree as u64)) as u32;
        let base = rat_pow(&me.base, l / me.index) * rat_pow(radicand, l / degree);
        Some(AlgebraicValue::with_radical(
            Rational::zero(),
            coef.clone(),
            base,
            l,
        ))
    }

    /// Decimal approximation; callers mark it approximate.
    pub fn approx_decimal(&self, digits: u32) -> String {
        self.to_value().approx_decimal(digits)
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 1 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}^(1/{})", self.base, self.index)
        }
    }
}

/// Norm-equivalence constants against the maximum norm: `lower · ‖u‖_∞ ≤
/// f(u) ≤ upper · ‖u‖_∞` for all `u`.
#[derive(Debug, Clone)]
pub struct NormConstants {
    /// Lower equivalence constant (positive).
    pub lower: Radical,
    /// Upper equivalence constant (at least `lower`).
    pub upper: Radical,
}

impl NormConstants {
    /// Validated constructor.
    pub fn new(lower: Radical, upper: Radical) -> Result<Self> {
        if lower.base.is_zero() || lower.base.is_negative() {
            return Err(Error::InvalidInput("lower norm constant must be positive".into()));
        }
        if lower.cmp_exact(&upper) == Ordering::Greater {
            return Err(Error::InvalidInput(
                "lower norm constant must not exceed the upper one".into(),
            ));
        }
        Ok(NormConstants { lower, upper })
    }

    /// The guarantee ratio `upper / lower`.
    pub fn ratio(&self) -> Radical {
        self.upper.div(&self.lower)
    }
}

/// Exact equivalence constants of the p-norm against the maximum norm in
/// dimension `d`: lower is 1, upper is `d^(1/p)` (1 for the maximum norm).
pub fn norm_constants_pnorm(p: PExp, d: usize) -> Result<NormConstants> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let upper = match p {
        PExp::Infinity => Radical::one(),
        PExp::Finite(p) if p >= 1 => Radical::new(Rational::from_integer(BigInt::from(d)), p),
        PExp::Finite(_) => {
            return Err(Error::InvalidInput("p-norm exponent must satisfy p ≥ 1".into()))
        }
    };
    NormConstants::new(Radical::one(), upper)
}

/// Certified grid estimate of norm-equivalence constants for a custom norm
/// `f`, evaluated on the boundary of the maximum-norm unit ball with mesh
/// `1/k`.
///
/// The upper constant is the triangle-inequality bound `Σ_i f(e_i)` (rounded
/// up rationally); since `f` is Lipschitz with that constant against the
/// maximum norm, the minimum of `f` over the mesh minus `upper/k` is a
/// certified lower constant. Fails when the mesh is too coarse to certify a
/// positive lower bound.
pub fn estimate_norm_constants(f: &ObjectiveOracle, d: usize, k: u32) -> Result<NormConstants> {
    if d == 0 || k == 0 {
        return Err(Error::InvalidInput("need d ≥ 1 and k ≥ 1".into()));
    }
    let digits = 12u32;
    let mut upper_sum = Rational::zero();
    for i in 0..d {
        let mut e = vec![Rational::zero(); d];
        e[i] = Rational::one();
        let v = f.evaluate(&e);
        let fin = v
            .finite()
            .ok_or_else(|| Error::InvalidInput("norm evaluation must be finite".into()))?;
        let (_, hi) = fin.enclosure(digits);
        upper_sum += hi;
    }
    if !upper_sum.is_positive() {
        return Err(Error::InvalidInput(
            "estimator requires f(e_i) sums to a positive bound; f is not a norm".into(),
        ));
    }

    // Mesh the 2d facets of the unit box with spacing 2/k; every boundary
    // point is within 1/k (max-norm) of some mesh node on its facet.
    let steps: Vec<Rational> = (0..=k)
        .map(|t| {
            Rational::new(BigInt::from(2 * t as i64), BigInt::from(k)) - Rational::one()
        })
        .collect();
    let mut min_val: Option<AlgebraicValue> = None;
    let mut point = vec![Rational::zero(); d];
    for facet_axis in 0..d {
        for facet_sign in [Rational::one(), -Rational::one()] {
            let mut idx = vec![0usize; d - 1];
            loop {
                point[facet_axis] = facet_sign.clone();
                let mut t = 0;
                for j in 0..d {
                    if j != facet_axis {
                        point[j] = steps[idx[t]].clone();
                        t += 1;
                    }
                }
                let v = f.evaluate(&point);
                let fin = v
                    .finite()
                    .ok_or_else(|| Error::InvalidInput("norm evaluation must be finite".into()))?
                    .clone();
                min_val = Some(match min_val {
                    None => fin,
                    Some(m) => {
                        if fin.cmp_exact(&m) == Ordering::Less {
                            fin
                        } else {
                            m
                        }
                    }
                });
                // Advance the mixed-radix counter over the facet mesh.
                let mut carry = 0;
                while carry < idx.len() {
                    idx[carry] += 1;
                    if idx[carry] <= k as usize {
                        break;
                    }
                    idx[carry] = 0;
                    carry += 1;
                }
                if carry == idx.len() {
                    break;
                }
            }
        }
    }
    let min_val = min_val.expect("mesh is nonempty");
    let (mesh_lo, _) = min_val.enclosure(digits);
    let lower = mesh_lo - &upper_sum / Rational::from_integer(BigInt::from(k));
    if !lower.is_positive() {
        return Err(Error::InvalidInput(format!(
            "mesh k = {k} too coarse to certify a positive lower norm constant; refine the mesh"
        )));
    }
    NormConstants::new(Radical::rational(lower), Radical::rational(upper_sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{i64_vec_to_rat, rat, ratio};

    fn pnorm2() -> ObjectiveOracle {
        ObjectiveOracle::pnorm(PExp::Finite(2))
    }

    #[test]
    fn perfect_powers_collapse_to_rationals() {
        // ‖(3,4)‖_2 = 5 exactly.
        let v = pnorm2().evaluate(&i64_vec_to_rat(&[3, 4]));
        assert_eq!(v, ObjectiveValue::rational(rat(5)));
        // ‖(2,2,1)‖_2 = 3.
        let v = pnorm2().evaluate(&i64_vec_to_rat(&[2, 2, 1]));
        assert_eq!(v, ObjectiveValue::rational(rat(3)));
    }

    #[test]
    fn irrational_norms_compare_exactly() {
        let f = pnorm2();
        let sqrt2 = f.evaluate(&i64_vec_to_rat(&[1, 1]));
        assert_eq!(sqrt2.cmp(&ObjectiveValue::rational(ratio(3, 2))), Ordering::Less);
        assert_eq!(sqrt2.cmp(&ObjectiveValue::rational(ratio(7, 5))), Ordering::Greater);
        // √2 = 2·√(1/2): different surface forms, equal values.
        let other = ObjectiveValue::Finite(AlgebraicValue::with_radical(
            rat(0),
            rat(2),
            ratio(1, 2),
            2,
        ));
        assert_eq!(sqrt2, other);
    }

    #[test]
    fn cross_degree_comparisons() {
        // 2^(1/2) > 2^(1/3): compare by intervals on distinct radicals.
        let a = AlgebraicValue::with_radical(rat(0), rat(1), rat(2), 2);
        let b = AlgebraicValue::with_radical(rat(0), rat(1), rat(2), 3);
        assert_eq!(a.cmp_exact(&b), Ordering::Greater);
        // √2 + √3 vs 10/3 ≈ 3.3333: the sum is ≈ 3.1463, so less.
        let diff_terms = [(rat(1), rat(2), 2), (rat(1), rat(3), 2)];
        assert_eq!(signum_of_sum(&ratio(-10, 3), &diff_terms), -1);
    }

    #[test]
    fn max_norm_and_coordinate_objectives_are_rational() {
        let f = ObjectiveOracle::pnorm(PExp::Infinity);
        assert_eq!(f.evaluate(&i64_vec_to_rat(&[-7, 3])), ObjectiveValue::rational(rat(7)));
        let mx = ObjectiveOracle::max_coordinate();
        assert_eq!(mx.evaluate(&i64_vec_to_rat(&[-7, 3])), ObjectiveValue::rational(rat(3)));
        let mn = ObjectiveOracle::min_coordinate();
        assert_eq!(mn.evaluate(&i64_vec_to_rat(&[-7, 3])), ObjectiveValue::rational(rat(-7)));
    }

    #[test]
    fn min_coordinate_equals_l1_minus_linf_on_the_nonneg_plane() {
        let mn = ObjectiveOracle::min_coordinate();
        let diff = ObjectiveOracle::l1_minus_lp(PExp::Infinity);
        for u in [[0i64, 0], [1, 3], [5, 2], [4, 4]] {
            let u = i64_vec_to_rat(&u);
            assert_eq!(mn.evaluate(&u), diff.evaluate(&u), "at {u:?}");
        }
    }

    #[test]
    fn l1_minus_l2_values() {
        let f = ObjectiveOracle::l1_minus_lp(PExp::Finite(2));
        // (3,4): 7 - 5 = 2 exactly.
        assert_eq!(f.evaluate(&i64_vec_to_rat(&[3, 4])), ObjectiveValue::rational(rat(2)));
        // (1,1): 2 - √2 > 0 and < 1.
        let v = f.evaluate(&i64_vec_to_rat(&[1, 1]));
        assert_eq!(v.cmp(&ObjectiveValue::rational(rat(0))), Ordering::Greater);
        assert_eq!(v.cmp(&ObjectiveValue::rational(rat(1))), Ordering::Less);
        // p = 1 collapses to zero everywhere.
        let z = ObjectiveOracle::l1_minus_lp(PExp::Finite(1));
        assert_eq!(z.evaluate(&i64_vec_to_rat(&[2, 5])), ObjectiveValue::rational(rat(0)));
    }

    #[test]
    fn negation_reverses_the_order() {
        let f = pnorm2();
        let g = pnorm2().negated();
        let a = i64_vec_to_rat(&[1, 1]);
        let b = i64_vec_to_rat(&[3, 4]);
        assert_eq!(f.compare(&a, &b), Ordering::Less);
        assert_eq!(g.compare(&a, &b), Ordering::Greater);
    }

    #[test]
    fn shift_addresses_the_underlying_point() {
        let f = pnorm2().with_shift(i64_vec_to_rat(&[-1, -1]));
        // evaluates at (3,4) - (1,1) + ... i.e. f(u + shift) = ‖(3,4)‖ for u=(4,5).
        assert_eq!(f.evaluate(&i64_vec_to_rat(&[4, 5])), ObjectiveValue::rational(rat(5)));
    }

    #[test]
    fn infinities_flank_all_finite_values() {
        let v = ObjectiveValue::rational(rat(1_000_000));
        assert!(ObjectiveValue::NegInfinity < v);
        assert!(v < ObjectiveValue::Infinity);
        assert_eq!(ObjectiveValue::NegInfinity.neg(), ObjectiveValue::Infinity);
    }

    #[test]
    fn radical_arithmetic_and_comparison() {
        let sqrt2 = Radical::new(rat(2), 2);
        let cbrt2 = Radical::new(rat(2), 3);
        assert_eq!(sqrt2.cmp_exact(&cbrt2), Ordering::Greater);
        // √2·√2 = 2.
        assert_eq!(sqrt2.mul(&sqrt2), Radical::rational(rat(2)));
        // (d^(1/2))/(1) stays d^(1/2).
        assert_eq!(sqrt2.div(&Radical::one()), sqrt2);
        // Perfect powers reduce: 8^(1/3) = 2.
        assert_eq!(Radical::new(rat(8), 3), Radical::rational(rat(2)));
        // √2·∛2 = 2^(5/6) = (32)^(1/6).
        assert_eq!(sqrt2.mul(&cbrt2), Radical::new(rat(32), 6));
    }

    #[test]
    fn pnorm_constants_are_exact() {
        let c = norm_constants_pnorm(PExp::Finite(2), 2).unwrap();
        assert_eq!(c.lower, Radical::one());
        assert_eq!(c.upper, Radical::new(rat(2), 2));
        assert_eq!(c.ratio(), Radical::new(rat(2), 2));
        let c = norm_constants_pnorm(PExp::Infinity, 5).unwrap();
        assert_eq!(c.ratio(), Radical::one());
        let c = norm_constants_pnorm(PExp::Finite(1), 3).unwrap();
        assert_eq!(c.upper, Radical::rational(rat(3)));
        assert!(norm_constants_pnorm(PExp::Finite(2), 0).is_err());
    }

    #[test]
    fn scale_value_covers_the_guarantee_cases() {
        let sqrt2 = Radical::new(rat(2), 2);
        // rational × radical
        let v = AlgebraicValue::rational(rat(3));
        let scaled = sqrt2.scale_value(&v).unwrap();
        assert_eq!(scaled, AlgebraicValue::with_radical(rat(0), rat(3), rat(2), 2));
        // radical × same-degree radical: √2·√2 = 2.
        let v = AlgebraicValue::with_radical(rat(0), rat(1), rat(2), 2);
        assert_eq!(sqrt2.scale_value(&v).unwrap(), AlgebraicValue::rational(rat(2)));
        // mixed value × irrational radical is not representable.
        let v = AlgebraicValue::with_radical(rat(1), rat(1), rat(2), 2);
        assert!(sqrt2.scale_value(&v).is_none());
        // mixed value × rational radical is fine.
        assert!(Radical::rational(rat(3)).scale_value(&v).is_some());
    }

    #[test]
    fn enclosures_shrink_around_the_value() {
        let sqrt2 = AlgebraicValue::with_radical(rat(0), rat(1), rat(2), 2);
        let (lo, hi) = sqrt2.enclosure(10);
        assert!(lo < hi);
        assert!(rat_pow(&lo, 2) < rat(2) && rat(2) < rat_pow(&hi, 2));
        assert_eq!(sqrt2.approx_decimal(6), "1.414213");
    }

    #[test]
    fn estimator_certifies_euclidean_constants() {
        let c = estimate_norm_constants(&pnorm2(), 2, 16).unwrap();
        // True constants are 1 and √2; the estimate must bracket them.
        assert_ne!(c.lower.cmp_exact(&Radical::one()), Ordering::Greater);
        assert!(c.lower.base.is_positive());
        assert_ne!(c.upper.cmp_exact(&Radical::new(rat(2), 2)), Ordering::Less);
        // A hopeless mesh fails loudly.
        assert!(estimate_norm_constants(&pnorm2(), 2, 1).is_err());
    }

    #[test]
    fn impl_eq_for_algebraic_value() {
        let a = AlgebraicValue::with_radical(rat(1), rat(2), ratio(9, 4), 2);
        // 1 + 2·(9/4)^(1/2) = 1 + 3 = 4.
        assert_eq!(a, AlgebraicValue::rational(rat(4)));
    }
}
