//! Exact-arithmetic toolkit for optimizing nonlinear objectives `f(Wx)` over
//! combinatorial feasible sets.
//!
//! Everything here computes with arbitrary-precision integers and rationals;
//! no floating point enters any decision. The crate provides:
//!
//! * an exact rational linear-programming substrate (simplex with Bland's
//!   rule, lexicographic vertex selection, a cutting-plane driver over
//!   separation oracles, fraction-free determinants and rank),
//! * layered weight encodings and the candidate image grid they induce,
//! * fiber machinery over the image polytope `W·P` (fiber optimization,
//!   integer witness extraction, face descriptions, image-vertex
//!   enumeration),
//! * exact comparison oracles for norm-like objectives and the three
//!   image-space optimizers (exact quasiconvex maximization and two
//!   constant-factor approximations),
//! * a randomized common-base optimizer for pairs of vectorial matroids
//!   driven by determinant interpolation,
//! * a verification harness (explicit feasible sets, brute-force oracles,
//!   instance generators) and a serializable instance format.

pub mod error;
pub mod fibers;
pub mod harness;
pub mod instance;
pub mod linalg;
pub mod lp;
pub mod matroid;
pub mod objective;
pub mod optimize;
pub mod polytope;
pub mod rational;
pub mod weights;

pub use error::Error;
pub use rational::{Int, Rational};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
