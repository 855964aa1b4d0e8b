//! Exact number types and small conversion helpers.
//!
//! All arithmetic in this crate is exact: integers are arbitrary-precision
//! [`Int`] values and fractions are [`Rational`] values kept in lowest terms
//! with a positive denominator (the backing implementation normalizes on
//! every operation). Floating point is never used for decisions; the only
//! decimal output in the crate is produced by [`decimal_approx`], which
//! rounds via integer division and is clearly marked approximate by callers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision integer.
pub type Int = BigInt;

/// Arbitrary-precision rational, always in lowest terms, denominator > 0.
pub type Rational = BigRational;

/// Shorthand for an exact rational from an `i64`.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact rational `n / d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Converts an integer to a rational.
pub fn int_to_rat(n: &Int) -> Rational {
    BigRational::from_integer(n.clone())
}

/// Converts a slice of integers to a rational vector.
pub fn int_vec_to_rat(v: &[Int]) -> Vec<Rational> {
    v.iter().map(int_to_rat).collect()
}

/// Converts a slice of `i64` to a rational vector.
pub fn i64_vec_to_rat(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&n| rat(n)).collect()
}

/// Zero vector of length `n`.
pub fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

/// Exact dot product. Panics on length mismatch.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len(), "dot product requires equal lengths");
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Returns `base^exp` for a non-negative integer exponent.
pub fn rat_pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// True when the rational is an integer.
pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Lexicographic comparison of rational vectors.
pub fn lex_cmp(a: &[Rational], b: &[Rational]) -> std::cmp::Ordering {
    a.cmp(b)
}

/// Parses a rational from `"n"` or `"n/d"` decimal notation.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
    }
}

/// Renders a rational as `"n"` for integers and `"n/d"` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal expansion of `x` with `digits` fractional digits, rounded toward
/// zero, computed purely with integer arithmetic.
pub fn decimal_approx(x: &Rational, digits: u32) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let a = x.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (a.numer() * &scale) / a.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac_str = format!("{:0width$}", frac_part, width = digits as usize);
    format!("{sign}{int_part}.{frac_str}")
}
