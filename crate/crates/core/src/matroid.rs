//! Randomized optimization over common bases of two vectorial matroids.
//!
//! A pair of full-row-rank integer matrices `M1, M2` (both `r x n`) defines
//! two vectorial matroids on the column set `{0, .., n-1}`. A *common base*
//! is an `r`-subset of columns that is nonsingular in both matrices. Given a
//! nonnegative integer weight matrix `W` (`d x n`), the multiset of images
//! `{ W.x : x the indicator of a common base }` is encoded by the support of
//! the polynomial
//!
//! ```text
//!   p(a, t) = det( M1 . diag(gamma) . M2^T ),
//!   gamma_j = a_j * t^(key of column j),
//! ```
//!
//! whose coefficient of `t^(key of u)` is `g_u = sum over bases with image u
//! of det(M1[B]) * det(M2[B]) * prod_{j in B} a_j`. Interpolating `p` in `t`
//! at integer nodes recovers every `g_u` exactly; a random choice of `a`
//! keeps each nonzero `g_u` nonzero with high probability, so the recovered
//! support is the true image set except with small, quantifiable failure
//! probability. A greedy deletion loop then pins down an actual base whose
//! image attains the optimum.
//!
//! Everything here is exact integer/rational arithmetic; randomness enters
//! only through the substitution vector `a`, drawn from a seeded ChaCha8
//! stream so that every run is reproducible.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::Result;
use crate::linalg::{bigint_det, int_rank, max_digits};
use crate::objective::{ObjectiveOracle, ObjectiveValue};
use crate::rational::{i64_vec_to_rat, int_to_rat, is_integer, rat_pow};
use crate::{Int, Rational};

/// Cap on the number of `r`-subsets examined when certifying at
/// construction time that a common base exists.
pub const DEFAULT_EXISTENCE_CAP: usize = 1_000_000;

/// Tuning knobs for the interpolation pipeline.
#[derive(Debug, Clone)]
pub struct MatroidConfig {
    /// Maximum number of interpolation nodes, i.e. `(z+1)^d` where
    /// `z = r * max(W)`. The moment system is dense and solved exactly, so
    /// this bounds the size of the exact linear solve; the default keeps a
    /// single solve in the seconds range on one core (the solve cost grows
    /// roughly with the fifth power of the node count). Raise it only with
    /// the solve-time consequences in mind.
    pub interp_cap: usize,
    /// Bound on the estimated decimal digits of a substituted determinant
    /// entry; guards against runaway big-integer growth.
    pub digit_cap: u64,
    /// Overrides the substitution range `s` (draws come from `{1, .., s}`).
    /// Defaults to `2 r (n + 1)`, which keeps the per-run failure
    /// probability of the randomized search at most `1 / (2 (n + 1))`.
    pub s_override: Option<u64>,
}

impl Default for MatroidConfig {
    fn default() -> Self {
        MatroidConfig {
            interp_cap: 128,
            digit_cap: 1_000_000,
            s_override: None,
        }
    }
}

/// Two integer matrices of equal shape `r x n`, both of full row rank `r`,
/// that admit at least one common base. Validated at construction: the
/// existence check enumerates `r`-subsets (with early exit) rather than
/// running a combinatorial intersection algorithm, which keeps this type
/// honest at the instance sizes this crate targets.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorialMatroidPair {
    m1: Vec<Vec<Int>>,
    m2: Vec<Vec<Int>>,
    r: usize,
    n: usize,
}

impl fmt::Debug for VectorialMatroidPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorialMatroidPair")
            .field("r", &self.r)
            .field("n", &self.n)
            .finish()
    }
}

/// A matroid pair restricted to a subset of columns, together with the map
/// from restricted column positions back to original indices. The inner
/// pair's rank and base-existence invariants are *not* revalidated; a
/// restriction may well have no common base, in which case the support
/// operations simply report an empty image set.
#[derive(Debug, Clone)]
pub struct RestrictedPair {
    /// The restricted matrices, packaged for the support operations.
    pub pair: VectorialMatroidPair,
    /// `columns[k]` is the original index of restricted column `k`.
    pub columns: Vec<usize>,
}

impl VectorialMatroidPair {
    /// Validates shapes, full row rank of both matrices, and the existence
    /// of a common base (by capped enumeration with early exit).
    pub fn new(m1: Vec<Vec<Int>>, m2: Vec<Vec<Int>>) -> Result<Self> {
        let r = m1.len();
        if r == 0 {
            return Err(Error::InvalidInput("matrices must have at least one row".into()));
        }
        let n = m1[0].len();
        if m1.iter().any(|row| row.len() != n) || m2.len() != r || m2.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "both matrices must be {r} x {n}"
            )));
        }
        if n < r {
            return Err(Error::InvalidInput(format!(
                "need at least r = {r} columns, got {n}"
            )));
        }
        if int_rank(&m1) != r || int_rank(&m2) != r {
            return Err(Error::InvalidInput(
                "both matrices must have full row rank equal to the common rank".into(),
            ));
        }
        let pair = VectorialMatroidPair { m1, m2, r, n };
        if !pair.some_common_base_exists(DEFAULT_EXISTENCE_CAP)? {
            return Err(Error::NoCommonBase);
        }
        Ok(pair)
    }

    /// Builds a pair without any invariant checks; used for restrictions.
    fn unchecked(m1: Vec<Vec<Int>>, m2: Vec<Vec<Int>>) -> Self {
        let r = m1.len();
        let n = m1[0].len();
        VectorialMatroidPair { m1, m2, r, n }
    }

    /// Common rank `r`.
    pub fn rank(&self) -> usize {
        self.r
    }

    /// Ground-set size `n` (number of columns).
    pub fn ground_size(&self) -> usize {
        self.n
    }

    /// First matrix, `r x n`.
    pub fn m1(&self) -> &[Vec<Int>] {
        &self.m1
    }

    /// Second matrix, `r x n`.
    pub fn m2(&self) -> &[Vec<Int>] {
        &self.m2
    }

    /// Whether the strictly increasing index set `cols` is a base of both
    /// matroids, i.e. both `r x r` column submatrices are nonsingular.
    pub fn is_common_base(&self, cols: &[usize]) -> bool {
        if cols.len() != self.r
            || cols.windows(2).any(|w| w[0] >= w[1])
            || cols.iter().any(|&c| c >= self.n)
        {
            return false;
        }
        !bigint_det(&col_submatrix(&self.m1, cols)).is_zero()
            && !bigint_det(&col_submatrix(&self.m2, cols)).is_zero()
    }

    /// Restricts both matrices to the strictly increasing column set
    /// `cols`. No invariants are revalidated on the restriction.
    pub fn restrict(&self, cols: &[usize]) -> Result<RestrictedPair> {
        if cols.is_empty() {
            return Err(Error::InvalidInput("restriction must keep at least one column".into()));
        }
        if cols.windows(2).any(|w| w[0] >= w[1]) || cols.iter().any(|&c| c >= self.n) {
            return Err(Error::InvalidInput(
                "restriction columns must be strictly increasing and in range".into(),
            ));
        }
        Ok(RestrictedPair {
            pair: VectorialMatroidPair::unchecked(
                col_submatrix(&self.m1, cols),
                col_submatrix(&self.m2, cols),
            ),
            columns: cols.to_vec(),
        })
    }

    /// Enumerates every common base (as sorted index sets, in
    /// lexicographic order). Errors if `C(n, r)` exceeds `cap`.
    pub fn common_bases(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        enumerate_common_bases(&self.m1, &self.m2, cap)
    }

    fn some_common_base_exists(&self, cap: usize) -> Result<bool> {
        check_enum_budget(self.n, self.r, cap)?;
        let mut found = false;
        for_each_combination(self.n, self.r, |cols| {
            if self.is_common_base(cols) {
                found = true;
                return false;
            }
            true
        });
        Ok(found)
    }
}

/// Extracts the `rows x cols.len()` submatrix with the given columns.
fn col_submatrix(m: &[Vec<Int>], cols: &[usize]) -> Vec<Vec<Int>> {
    m.iter()
        .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
        .collect()
}

/// `C(n, r)` computed in `u128`, saturating at `u128::MAX` on overflow.
fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut c: u128 = 1;
    for i in 0..r {
        let num = (n - i) as u128;
        c = match c.checked_mul(num) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    c
}

fn check_enum_budget(n: usize, r: usize, cap: usize) -> Result<()> {
    let count = binomial(n, r);
    if count > cap as u128 {
        return Err(Error::cap("common-base enumeration", count, cap));
    }
    Ok(())
}

/// Visits every `r`-subset of `{0, .., n-1}` in lexicographic order; the
/// callback returns `false` to stop early.
fn for_each_combination(n: usize, r: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if r > n {
        return;
    }
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        if !visit(&cols) {
            return;
        }
        // Advance to the lexicographically next r-subset.
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cols[i] != i + n - r {
                break;
            }
            if i == 0 {
                return;
            }
        }
        cols[i] += 1;
        for k in i + 1..r {
            cols[k] = cols[k - 1] + 1;
        }
    }
}

/// Enumerates the common bases of two raw `r x n` matrices in
/// lexicographic order. Errors with a cap violation if `C(n, r) > cap`.
/// Unlike [`VectorialMatroidPair::new`], this accepts pairs with no common
/// base (returning an empty list), so it can back the existence check
/// itself as well as brute-force oracles.
pub fn enumerate_common_bases(
    m1: &[Vec<Int>],
    m2: &[Vec<Int>],
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let r = m1.len();
    if r == 0 || m2.len() != r {
        return Err(Error::InvalidInput("matrices must be nonempty with equal row counts".into()));
    }
    let n = m1[0].len();
    if m1.iter().any(|row| row.len() != n) || m2.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("matrices must be rectangular with equal shapes".into()));
    }
    if n < r {
        return Ok(Vec::new());
    }
    check_enum_budget(n, r, cap)?;
    let mut bases = Vec::new();
    for_each_combination(n, r, |cols| {
        if !bigint_det(&col_submatrix(m1, cols)).is_zero()
            && !bigint_det(&col_submatrix(m2, cols)).is_zero()
        {
            bases.push(cols.to_vec());
        }
        true
    });
    Ok(bases)
}

/// Validates a `d x n` nonnegative weight matrix against a pair and returns
/// `(d, max entry)`.
fn validate_weights(pair: &VectorialMatroidPair, w: &[Vec<i64>]) -> Result<(usize, i64)> {
    let d = w.len();
    if d == 0 {
        return Err(Error::InvalidInput("weight matrix must have at least one row".into()));
    }
    if w.iter().any(|row| row.len() != pair.n) {
        return Err(Error::DimensionMismatch(format!(
            "weight matrix rows must have {} columns",
            pair.n
        )));
    }
    let mut maxw = 0i64;
    for row in w {
        for &e in row {
            if e < 0 {
                return Err(Error::InvalidInput(
                    "support interpolation requires nonnegative weights; shift first".into(),
                ));
            }
            maxw = maxw.max(e);
        }
    }
    Ok((d, maxw))
}

fn validate_substitution(pair: &VectorialMatroidPair, a: &[Int]) -> Result<()> {
    if a.len() != pair.n {
        return Err(Error::DimensionMismatch(format!(
            "substitution vector must have {} entries, got {}",
            pair.n,
            a.len()
        )));
    }
    if a.iter().any(|v| !v.is_positive()) {
        return Err(Error::InvalidInput("substitution entries must be positive integers".into()));
    }
    Ok(())
}

/// Mixed-radix data shared by the substitution and interpolation steps:
/// images `u` (componentwise in `{0, .., z}`) are keyed by
/// `sum_k u[k] * (z+1)^k`, a bijection onto `{0, .., (z+1)^d - 1}`.
struct ImageKeying {
    z: i64,
    d: usize,
    /// `(z+1)^d`, the number of possible keys.
    count: u128,
}

impl ImageKeying {
    fn new(r: usize, maxw: i64, d: usize) -> Result<Self> {
        let z = (r as i64)
            .checked_mul(maxw)
            .ok_or_else(|| Error::InvalidInput("image bound r * max(W) overflows".into()))?;
        let base = z as u128 + 1;
        let mut count: u128 = 1;
        for _ in 0..d {
            count = count
                .checked_mul(base)
                .ok_or_else(|| Error::cap("image key range", "overflow", "u128"))?;
        }
        Ok(ImageKeying { z, d, count })
    }

    /// Key of column `j` of the weight matrix: its weight vector read as a
    /// base-`(z+1)` number, least significant coordinate first.
    fn column_key(&self, w: &[Vec<i64>], j: usize) -> u128 {
        let base = self.z as u128 + 1;
        let mut key: u128 = 0;
        let mut place: u128 = 1;
        for row in w.iter() {
            key += row[j] as u128 * place;
            place *= base;
        }
        key
    }

    /// Inverse of the keying: digit decomposition of `key`.
    fn image_of_key(&self, mut key: u128) -> Vec<i64> {
        let base = self.z as u128 + 1;
        let mut u = Vec::with_capacity(self.d);
        for _ in 0..self.d {
            u.push((key % base) as i64);
            key /= base;
        }
        u
    }
}

/// Estimated decimal digits of the substituted determinant entries; errors
/// if the estimate exceeds the configured digit cap.
fn check_digit_budget(
    keying: &ImageKeying,
    pair: &VectorialMatroidPair,
    a: &[Int],
    t: u64,
    config: &MatroidConfig,
) -> Result<()> {
    let t_digits = t.to_string().len() as u128;
    let e_max = keying.count - 1;
    let a_digits = a.iter().map(|v| v.to_string().len()).max().unwrap_or(1) as u128;
    let entry_digits = (max_digits(&pair.m1) + max_digits(&pair.m2)) as u128;
    let est = e_max * t_digits + a_digits + entry_digits + 32;
    if est > config.digit_cap as u128 {
        return Err(Error::cap("substituted determinant digit estimate", est, config.digit_cap));
    }
    Ok(())
}

/// Evaluates `det(M1 . diag(gamma) . M2^T)` at `gamma_j = a_j * t^(key_j)`,
/// where `key_j` encodes column `j`'s weight vector in base `z+1` with
/// `z = r * max(W)`. The result, viewed as a polynomial in `t`, has the
/// image-support coefficients `g_u` described in the module docs.
///
/// Requires `W` nonnegative, `a` positive, and `t >= 1`; guards the size
/// of intermediate integers via `config.digit_cap`.
pub fn gamma_subst_det(
    pair: &VectorialMatroidPair,
    w: &[Vec<i64>],
    a: &[Int],
    t: u64,
    config: &MatroidConfig,
) -> Result<Int> {
    let (d, maxw) = validate_weights(pair, w)?;
    validate_substitution(pair, a)?;
    if t == 0 {
        return Err(Error::InvalidInput("evaluation point t must be at least 1".into()));
    }
    let keying = ImageKeying::new(pair.r, maxw, d)?;
    check_digit_budget(&keying, pair, a, t, config)?;
    let t_big = Int::from(t);
    let gamma: Vec<Int> = (0..pair.n)
        .map(|j| {
            let key = keying.column_key(w, j);
            // The digit budget bounds key * digits(t), so this cast is safe.
            &a[j] * t_big.pow(u32::try_from(key).expect("column key fits u32 under digit cap"))
        })
        .collect();
    // M[p][q] = sum_j M1[p][j] * gamma_j * M2[q][j].
    let m: Vec<Vec<Int>> = (0..pair.r)
        .map(|p| {
            (0..pair.r)
                .map(|q| {
                    (0..pair.n)
                        .map(|j| &pair.m1[p][j] * &gamma[j] * &pair.m2[q][j])
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(bigint_det(&m))
}

/// The exact image-support coefficients recovered by interpolation:
/// `entries[u] = g_u` for every image `u` with `g_u != 0`, where
/// `g_u = sum over common bases B with W.x_B = u of
/// det(M1[B]) * det(M2[B]) * prod_{j in B} a_j`.
///
/// For a "lucky" substitution `a` (no cancellation), the key set equals
/// the exact image set of the common bases under `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPolynomial {
    /// Componentwise image bound: every image lies in `{0, .., z}^d`.
    pub z: i64,
    /// Image dimension `d`.
    pub dim: usize,
    /// The substitution vector the coefficients were computed for.
    pub a: Vec<Int>,
    /// Nonzero coefficients, keyed by image vector (lexicographic order).
    pub entries: BTreeMap<Vec<i64>, Int>,
}

impl SupportPolynomial {
    /// Number of distinct images in the recovered support.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether the recovered support is empty.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The images in the support, lexicographically sorted.
    pub fn images(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.entries.keys()
    }

    /// Coefficient of image `u`, if nonzero.
    pub fn coefficient(&self, u: &[i64]) -> Option<&Int> {
        self.entries.get(u)
    }

    /// The image maximizing `f`, ties broken toward the lexicographically
    /// smallest image; `None` on an empty support.
    pub fn argbest(&self, f: &ObjectiveOracle) -> Option<(Vec<i64>, ObjectiveValue)> {
        let mut best: Option<(Vec<i64>, ObjectiveValue)> = None;
        for u in self.entries.keys() {
            let val = f.evaluate(&i64_vec_to_rat(u));
            match &best {
                Some((_, incumbent)) if val <= *incumbent => {}
                _ => best = Some((u.clone(), val)),
            }
        }
        best
    }
}

/// Recovers the full coefficient family `g_u` of the substituted
/// determinant polynomial by exact interpolation: evaluates
/// [`gamma_subst_det`] at `t = 1, .., (z+1)^d` and solves the dense moment
/// system by exact rational Gaussian elimination. Errors with a cap
/// violation if `(z+1)^d` exceeds `config.interp_cap`.
pub fn interpolate_support(
    pair: &VectorialMatroidPair,
    w: &[Vec<i64>],
    a: &[Int],
    config: &MatroidConfig,
) -> Result<SupportPolynomial> {
    let (d, maxw) = validate_weights(pair, w)?;
    validate_substitution(pair, a)?;
    let keying = ImageKeying::new(pair.r, maxw, d)?;
    if keying.count > config.interp_cap as u128 {
        return Err(Error::cap("interpolation sample count", keying.count, config.interp_cap));
    }
    let s_count = keying.count as usize;
    let mut values = Vec::with_capacity(s_count);
    for t in 1..=s_count as u64 {
        values.push(int_to_rat(&gamma_subst_det(pair, w, a, t, config)?));
    }
    // Moment system: row for node t, column k carries t^k.
    let matrix: Vec<Vec<Rational>> = (1..=s_count)
        .map(|t| {
            let t_rat = int_to_rat(&Int::from(t));
            (0..s_count).map(|k| rat_pow(&t_rat, k as u32)).collect()
        })
        .collect();
    let coeffs = crate::linalg::solve_square(&matrix, &values)
        .expect("distinct interpolation nodes give a nonsingular moment system");
    let mut entries = BTreeMap::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        assert!(
            is_integer(c),
            "interpolated coefficients must be integers, got {c} at key {k}"
        );
        entries.insert(keying.image_of_key(k as u128), c.numer().clone());
    }
    Ok(SupportPolynomial { z: keying.z, dim: d, a: a.to_vec(), entries })
}

/// One randomized support-recovery run: the seed, the substitution range
/// `s`, the drawn substitution values, and the `f`-optimal image over the
/// recovered support (`None` when cancellation emptied the support — the
/// outcome is then treated as "minus infinity" by callers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomRun {
    /// Seed of the ChaCha8 stream that produced `draws`.
    pub seed: u64,
    /// Substitution range: draws are uniform on `{1, .., s}`.
    pub s: u64,
    /// The drawn substitution vector, in column order.
    pub draws: Vec<u64>,
    /// `f`-optimal image over the recovered support, ties toward the
    /// lexicographically smallest image; `None` if the support came out
    /// empty.
    pub outcome: Option<Vec<i64>>,
}

/// Draws a substitution vector from a fresh seeded ChaCha8 stream,
/// interpolates the support, and reports the `f`-optimal image. Each
/// nonzero coefficient survives a uniform draw from `{1, .., s}` per
/// column except with probability at most `r/s`; with the default
/// `s = 2 r (n + 1)` a run misses any fixed image with probability at
/// most `1 / (2 (n + 1))`.
pub fn random_image_optimum(
    pair: &VectorialMatroidPair,
    w: &[Vec<i64>],
    f: &ObjectiveOracle,
    seed: u64,
    config: &MatroidConfig,
) -> Result<RandomRun> {
    let s = substitution_range(pair, config)?;
    let draws = substitution_draw(seed, pair.n, s);
    let a: Vec<Int> = draws.iter().map(|&v| Int::from(v)).collect();
    let support = interpolate_support(pair, w, &a, config)?;
    let outcome = support.argbest(f).map(|(u, _)| u);
    Ok(RandomRun { seed, s, draws, outcome })
}

/// The substitution range a seeded run draws from: `config.s_override`
/// when set, otherwise `s = 2 r (n + 1)`.
pub fn substitution_range(pair: &VectorialMatroidPair, config: &MatroidConfig) -> Result<u64> {
    let s = match config.s_override {
        Some(s) => s,
        None => 2u64
            .checked_mul(pair.r as u64)
            .and_then(|v| v.checked_mul(pair.n as u64 + 1))
            .ok_or_else(|| Error::InvalidInput("substitution range overflows".into()))?,
    };
    if s == 0 {
        return Err(Error::InvalidInput("substitution range must be positive".into()));
    }
    Ok(s)
}

/// The substitution vector a seeded run uses: `n` uniform draws from
/// `{1, .., s}` out of a ChaCha8 stream seeded with `seed`.
pub fn substitution_draw(seed: u64, n: usize, s: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(1..=s)).collect()
}

/// Result of the randomized (or deterministic-provider) common-base search.
#[derive(Debug, Clone)]
pub struct MatroidOutcome {
    /// The recovered common base, as sorted column indices.
    pub base: Vec<usize>,
    /// Indicator vector of `base` on the ground set.
    pub x: Vec<i64>,
    /// Image `W . x` under the *original* (unshifted) weights.
    pub image: Vec<i64>,
    /// Objective value of `image` under the oracle passed by the caller.
    pub value: ObjectiveValue,
    /// Total runs attempted.
    pub runs: usize,
    /// Runs that ended on a common base (not necessarily the optimum).
    pub successes: usize,
    /// Master seed the per-run seeds were drawn from.
    pub seed: u64,
}

/// An image-optimum provider: given a retained column set (sorted original
/// indices), reports the `f`-optimal image over common bases inside that
/// set, or `None` if it cannot certify one. The randomized search plugs in
/// [`random_image_optimum`]; tests and the deterministic variant plug in an
/// exact brute-force oracle.
pub type ImageOptimumProvider<'a> = dyn FnMut(&[usize]) -> Result<Option<Vec<i64>>> + 'a;

/// The greedy deletion loop: fix the provider's optimum on the full ground
/// set, then try deleting each column in increasing index order, keeping
/// the deletion whenever both restricted ranks stay `r` and the provider's
/// optimum on the smaller set is still at least as good (ties accepted).
/// Ends on a common base of size `r` — or reports `None` when the run
/// failed (the provider under- or over-reported somewhere along the way).
fn prune_to_base(
    pair: &VectorialMatroidPair,
    f_cmp: &ObjectiveOracle,
    provider: &mut ImageOptimumProvider<'_>,
) -> Result<Option<Vec<usize>>> {
    let mut cols: Vec<usize> = (0..pair.n).collect();
    let u_star = match provider(&cols)? {
        Some(u) => u,
        None => return Ok(None),
    };
    let best = f_cmp.evaluate(&i64_vec_to_rat(&u_star));
    for j in 0..pair.n {
        let t: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
        debug_assert_eq!(t.len() + 1, cols.len(), "column {j} should still be retained");
        if t.len() < pair.r {
            continue;
        }
        if int_rank(&col_submatrix(&pair.m1, &t)) < pair.r
            || int_rank(&col_submatrix(&pair.m2, &t)) < pair.r
        {
            continue;
        }
        let val = match provider(&t)? {
            Some(u) => f_cmp.evaluate(&i64_vec_to_rat(&u)),
            None => ObjectiveValue::NegInfinity,
        };
        if val >= best {
            cols = t;
        }
    }
    if cols.len() == pair.r && pair.is_common_base(&cols) {
        Ok(Some(cols))
    } else {
        Ok(None)
    }
}

/// Componentwise-shifted copy of `w` with all entries nonnegative, plus the
/// shift amount applied.
fn shift_nonneg(w: &[Vec<i64>]) -> Result<(Vec<Vec<i64>>, i64)> {
    let min = w.iter().flatten().copied().min().unwrap_or(0);
    let shift = if min < 0 { -min } else { 0 };
    let shifted = w
        .iter()
        .map(|row| {
            row.iter()
                .map(|&e| {
                    e.checked_add(shift)
                        .ok_or_else(|| Error::InvalidInput("weight shift overflows".into()))
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    Ok((shifted, shift))
}

/// Re-expresses `f` over shifted images: every common-base indicator has
/// exactly `r` ones, so shifting `W` by `v` shifts images by `r * v` in
/// each coordinate, and the compensated oracle evaluates at `u - r * v`.
fn compensate_shift(f: &ObjectiveOracle, d: usize, r: usize, shift: i64) -> ObjectiveOracle {
    if shift == 0 {
        return f.clone();
    }
    let back = Rational::from_integer(Int::from(-(r as i64) * shift));
    f.clone().with_shift(vec![back; d])
}

fn image_of_base(w: &[Vec<i64>], base: &[usize]) -> Result<Vec<i64>> {
    w.iter()
        .map(|row| {
            base.iter().try_fold(0i64, |acc, &j| {
                acc.checked_add(row[j])
                    .ok_or_else(|| Error::InvalidInput("image coordinate overflows".into()))
            })
        })
        .collect()
}

fn indicator(n: usize, base: &[usize]) -> Vec<i64> {
    let mut x = vec![0i64; n];
    for &j in base {
        x[j] = 1;
    }
    x
}

/// Runs the greedy deletion loop `repeats` times with the given provider
/// factory (one provider per run) and keeps the best successful outcome
/// under `f` on raw images: higher value first, then lexicographically
/// smaller image, then lexicographically smaller base.
fn search_common_base(
    pair: &VectorialMatroidPair,
    w: &[Vec<i64>],
    f: &ObjectiveOracle,
    f_cmp: &ObjectiveOracle,
    repeats: usize,
    seed: u64,
    mut make_provider: impl FnMut(usize) -> Result<Box<ImageOptimumProvider<'static>>>,
) -> Result<MatroidOutcome> {
    if repeats == 0 {
        return Err(Error::InvalidInput("repeats must be at least 1".into()));
    }
    let mut successes = 0usize;
    let mut best: Option<(ObjectiveValue, Vec<i64>, Vec<usize>)> = None;
    for run in 0..repeats {
        let mut provider = make_provider(run)?;
        if let Some(base) = prune_to_base(pair, f_cmp, &mut provider)? {
            successes += 1;
            let image = image_of_base(w, &base)?;
            let value = f.evaluate(&i64_vec_to_rat(&image));
            let candidate = (value, image, base);
            let improves = match &best {
                None => true,
                Some(incumbent) => {
                    candidate.0 > incumbent.0
                        || (candidate.0 == incumbent.0 && candidate.1 < incumbent.1)
                        || (candidate.0 == incumbent.0
                            && candidate.1 == incumbent.1
                            && candidate.2 < incumbent.2)
                }
            };
            if improves {
                best = Some(candidate);
            }
        }
    }
    match best {
        Some((value, image, base)) => Ok(MatroidOutcome {
            x: indicator(pair.n, &base),
            base,
            image,
            value,
            runs: repeats,
            successes,
            seed,
        }),
        None => Err(Error::RandomizedSearchFailed { runs: repeats }),
    }
}

/// Randomized search for a common base maximizing `f(W . x)`. Negative
/// weights are handled by shifting `W` to nonnegative and compensating the
/// oracle, which preserves the ordering of bases. Each of the `repeats`
/// runs draws fresh substitutions (per-run seeds come from a master ChaCha8
/// stream seeded with `seed`), recovers image optima by interpolation, and
/// prunes the ground set down to a base; a run succeeds with probability at
/// least `(1 - 1/(2(n+1)))^(n+1) >= 1/2` and successful runs with a correct
/// initial optimum return an `f`-optimal base. The best outcome across
/// successful runs is returned; if every run fails, so does the search.
pub fn optimal_common_base(
    pair: &VectorialMatroidPair,
    w: &[Vec<i64>],
    f: &ObjectiveOracle,
    seed: u64,
    repeats: usize,
    config: &MatroidConfig,
) -> Result<MatroidOutcome> {
    let d = w.len();
    if d == 0 || w.iter().any(|row| row.len() != pair.n) {
        return Err(Error::InvalidInput("weight matrix must be d x n with d >= 1".into()));
    }
    let (w_shifted, shift) = shift_nonneg(w)?;
    let f_run = compensate_shift(f, d, pair.r, shift);
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut run_seeds = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        run_seeds.push(master.next_u64());
    }
    let pair_arc = Arc::new(pair.clone());
    let w_arc = Arc::new(w_shifted);
    let f_arc = Arc::new(f_run.clone());
    let config_arc = Arc::new(config.clone());
    search_common_base(pair, w, f, &f_run, repeats, seed, move |run| {
        let pair = Arc::clone(&pair_arc);
        let w = Arc::clone(&w_arc);
        let f = Arc::clone(&f_arc);
        let config = Arc::clone(&config_arc);
        // One master-derived seed per run; provider calls within the run
        // derive their own per-call streams deterministically.
        let mut call_rng = ChaCha8Rng::seed_from_u64(run_seeds[run]);
        Ok(Box::new(move |cols: &[usize]| {
            let restricted = pair.restrict(cols)?;
            let w_cols: Vec<Vec<i64>> =
                w.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect();
            let call_seed = call_rng.next_u64();
            let run = random_image_optimum(&restricted.pair, &w_cols, &f, call_seed, &config)?;
            Ok(run.outcome)
        }))
    })
}

/// Deterministic-provider variant of [`optimal_common_base`]: the caller
/// supplies an exact image-optimum oracle working on raw (unshifted)
/// images, and the greedy deletion loop runs once. With an exact provider
/// the loop provably ends on an `f`-optimal common base.
pub fn optimal_common_base_with(
    pair: &VectorialMatroidPair,
    w: &[Vec<i64>],
    f: &ObjectiveOracle,
    provider: &mut ImageOptimumProvider<'_>,
) -> Result<MatroidOutcome> {
    let d = w.len();
    if d == 0 || w.iter().any(|row| row.len() != pair.n) {
        return Err(Error::InvalidInput("weight matrix must be d x n with d >= 1".into()));
    }
    match prune_to_base(pair, f, provider)? {
        Some(base) => {
            let image = image_of_base(w, &base)?;
            let value = f.evaluate(&i64_vec_to_rat(&image));
            Ok(MatroidOutcome {
                x: indicator(pair.n, &base),
                base,
                image,
                value,
                runs: 1,
                successes: 1,
                seed: 0,
            })
        }
        None => Err(Error::RandomizedSearchFailed { runs: 1 }),
    }
}
