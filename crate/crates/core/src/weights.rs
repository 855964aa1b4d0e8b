//! Weight matrices in generalized unary encoding.
//!
//! A weight matrix is presented as `W = Σ_k a_k · D_k` where the scale
//! factors `a_k` are pairwise distinct positive integers of arbitrary size
//! and each digit matrix `D_k` is a `d × n` integer matrix with entries
//! bounded by `ω` in absolute value. The encoding length is polynomial in
//! `n`, `d`, `p = #levels`, `ω`, and `log max a_k` — while the materialized
//! entries of `W` may be huge.
//!
//! The key consequence used downstream: for any integer point `x` with
//! `‖x‖₁ ≤ β`, each digit image `D_k x` lies in the box `[-ωβ, ωβ]^d`, so the
//! image `Wx` lies in the finite candidate grid `{Σ_k a_k t_k : t_k ∈
//! [-ωβ, ωβ]}^d` of nominal size `(2ωβ+1)^{pd}`, independent of the scale
//! magnitudes.

use crate::error::Error;
use crate::rational::{int_to_rat, Int, Rational};
use crate::Result;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

/// Default hard cap on the nominal candidate-grid size `(2ωβ+1)^{pd}`.
pub const DEFAULT_GRID_CAP: usize = 1_000_000;

/// A `d × n` weight matrix `W = Σ_k a_k · D_k` in generalized unary form.
#[derive(Debug, Clone)]
pub struct GeneralizedUnaryWeights {
    d: usize,
    n: usize,
    scales: Vec<Int>,
    digits: Vec<Vec<Vec<i64>>>,
}

impl GeneralizedUnaryWeights {
    /// Validates shapes and scale constraints: at least one level, all digit
    /// matrices `d × n` with `d, n ≥ 1`, scales pairwise distinct and
    /// positive.
    pub fn new(scales: Vec<Int>, digits: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        if scales.is_empty() {
            return Err(Error::InvalidInput("weights need at least one level".into()));
        }
        if scales.len() != digits.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} scales but {} digit matrices",
                scales.len(),
                digits.len()
            )));
        }
        for a in &scales {
            if !a.is_positive() {
                return Err(Error::InvalidInput(format!("scale {a} is not positive")));
            }
        }
        let mut seen = BTreeSet::new();
        for a in &scales {
            if !seen.insert(a.clone()) {
                return Err(Error::InvalidInput(format!("duplicate scale {a}")));
            }
        }
        let d = digits[0].len();
        if d == 0 {
            return Err(Error::InvalidInput("image dimension d must be at least 1".into()));
        }
        let n = digits[0][0].len();
        if n == 0 {
            return Err(Error::InvalidInput("ground dimension n must be at least 1".into()));
        }
        for (k, mat) in digits.iter().enumerate() {
            if mat.len() != d || mat.iter().any(|row| row.len() != n) {
                return Err(Error::DimensionMismatch(format!(
                    "digit matrix {k} is not {d} × {n}"
                )));
            }
        }
        Ok(GeneralizedUnaryWeights { d, n, scales, digits })
    }

    /// Convenience constructor for a plain integer matrix (one level with
    /// scale 1). Fails when an entry does not fit the digit range.
    pub fn from_matrix(w: &[Vec<Int>]) -> Result<Self> {
        let d = w.len();
        let n = w.first().map_or(0, |r| r.len());
        let mut digits = vec![vec![0i64; n]; d];
        for (i, row) in w.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let v: i64 = e.try_into().map_err(|_| {
                    Error::InvalidInput(format!(
                        "entry {e} at ({i}, {j}) too large for a single-level digit matrix; \
                         use multiple levels"
                    ))
                })?;
                digits[i][j] = v;
            }
        }
        Self::new(vec![Int::from(1)], vec![digits])
    }

    /// Image dimension `d`.
    pub fn image_dim(&self) -> usize {
        self.d
    }

    /// Ground dimension `n`.
    pub fn ground_dim(&self) -> usize {
        self.n
    }

    /// Number of levels `p`.
    pub fn levels(&self) -> usize {
        self.scales.len()
    }

    /// Scale factors `a_k`.
    pub fn scales(&self) -> &[Int] {
        &self.scales
    }

    /// Digit matrices `D_k`.
    pub fn digits(&self) -> &[Vec<Vec<i64>>] {
        &self.digits
    }

    /// Largest absolute digit `ω` (zero for all-zero digit matrices).
    pub fn omega(&self) -> i64 {
        self.digits
            .iter()
            .flat_map(|m| m.iter().flat_map(|r| r.iter()))
            .map(|e| e.abs())
            .max()
            .unwrap_or(0)
    }

    /// Materializes `W = Σ_k a_k D_k` as exact integers.
    pub fn materialize(&self) -> Vec<Vec<Int>> {
        let mut w = vec![vec![Int::zero(); self.n]; self.d];
        for (a, mat) in self.scales.iter().zip(&self.digits) {
            for i in 0..self.d {
                for j in 0..self.n {
                    w[i][j] += a * Int::from(mat[i][j]);
                }
            }
        }
        w
    }

    /// `Wx` for a rational point.
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.n, "point dimension mismatch");
        let mut out = vec![Rational::zero(); self.d];
        for (a, mat) in self.scales.iter().zip(&self.digits) {
            let a = int_to_rat(a);
            for i in 0..self.d {
                let mut acc = Rational::zero();
                for j in 0..self.n {
                    if mat[i][j] != 0 {
                        acc += Rational::from_integer(BigInt::from(mat[i][j])) * &x[j];
                    }
                }
                out[i] += a.clone() * acc;
            }
        }
        out
    }

    /// `Wx` for an integer point.
    pub fn apply_int(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.n, "point dimension mismatch");
        let mut out = vec![Int::zero(); self.d];
        for (a, mat) in self.scales.iter().zip(&self.digits) {
            for i in 0..self.d {
                let mut acc = Int::zero();
                for j in 0..self.n {
                    if mat[i][j] != 0 {
                        acc += Int::from(mat[i][j]) * &x[j];
                    }
                }
                out[i] += a * acc;
            }
        }
        out
    }

    /// Smallest entry of the materialized matrix.
    pub fn min_entry(&self) -> Int {
        self.materialize()
            .into_iter()
            .flatten()
            .min()
            .expect("weights are nonempty")
    }

    /// Smallest `v ≥ 0` such that every entry of `W + v·J` is nonnegative
    /// (`J` the all-ones matrix).
    pub fn nonneg_shift_amount(&self) -> Int {
        let m = self.min_entry();
        if m.is_negative() {
            -m
        } else {
            Int::zero()
        }
    }

    /// Per-coordinate bound: `‖(D_k x)‖_∞ ≤ ωβ` whenever `‖x‖₁ ≤ β`.
    pub fn digit_image_radius(&self, beta: u64) -> i64 {
        self.omega()
            .checked_mul(beta as i64)
            .expect("digit image radius overflows i64; reduce ω or β")
    }

    /// Nominal candidate-grid size `(2ωβ+1)^{pd}` as an exact integer.
    pub fn nominal_grid_size(&self, beta: u64) -> Int {
        let side = Int::from(2 * self.digit_image_radius(beta) + 1);
        side.pow((self.levels() * self.d) as u32)
    }

    /// Candidate image grid: every image `Wx` of an integer point with
    /// `‖x‖₁ ≤ β` lies in the returned set. Errors with `CapExceeded` when
    /// the nominal size `(2ωβ+1)^{pd}` exceeds `cap`.
    ///
    /// The grid is the `d`-fold product of the one-dimensional scale-sum set
    /// `S = {Σ_k a_k t_k : t_k ∈ [-ωβ, ωβ]}`, deduplicated and sorted.
    pub fn candidate_image_grid(&self, beta: u64, cap: usize) -> Result<Vec<Vec<Int>>> {
        let nominal = self.nominal_grid_size(beta);
        if nominal > Int::from(cap) {
            return Err(Error::cap("candidate image grid", nominal.to_string(), cap));
        }
        let radius = self.digit_image_radius(beta);
        // One-dimensional scale sums, deduplicated.
        let mut sums: BTreeSet<Int> = BTreeSet::new();
        sums.insert(Int::zero());
        for a in &self.scales {
            let mut next = BTreeSet::new();
            for s in &sums {
                for t in -radius..=radius {
                    next.insert(s + a * Int::from(t));
                }
            }
            sums = next;
        }
        let line: Vec<Int> = sums.into_iter().collect();
        // d-fold product, lexicographically ordered.
        let mut grid: Vec<Vec<Int>> = vec![Vec::new()];
        for _ in 0..self.d {
            let mut next = Vec::with_capacity(grid.len() * line.len());
            for prefix in &grid {
                for v in &line {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    next.push(p);
                }
            }
            grid = next;
        }
        Ok(grid)
    }
}
