//! Upper-tail asymptotics for star counts in the binomial random graph.
//!
//! An `r`-star is a center vertex joined to `r` leaves, so the number of
//! `r`-stars in a graph with degrees `d_1, ..., d_n` is
//! `X = Σ_i C(d_i, r)`. For `G(n,p)` with `μ = E X → ∞` and `p → 0`, the
//! quantity `-log P(X ≥ (1+ε)μ)` grows like one of four closed-form
//! expressions depending on how `μ` compares to `log^{r/(r-1)} n` and to
//! `C(n,r)`. The transition regime is governed by the one-dimensional
//! variational problem
//!
//! ```text
//! I_r(c, ε) = min_{δ ∈ [0,ε]}  φ(ε-δ) + ψ_r(δ) c^{1/r-1},
//! ```
//!
//! a trade-off between spreading the excess over many vertices (the `φ`
//! term, Poisson-like cost) and concentrating it on a single hub (the
//! `ψ_r` term, localization cost).
//!
//! The crate has four layers:
//!
//! * [`rate`] — closed-form rate functions, finite-`n` order quantities and
//!   binomial tail bounds, generic over the scalar type;
//! * [`variational`] — the minimizer structure of `I_r(c,ε)`: tilt
//!   parameter `α`, stationary points `δ_±`, critical constants `α_0`,
//!   `α_1`, `c_{r,ε}` and the minimizing `δ*`;
//! * [`oracles`] — exact desk-scale ground truth: log-space distributions
//!   of star-count statistics, graph enumeration by degree sequence, and
//!   exhaustive `G(n,p)` tails;
//! * [`sim`] — seeded, reproducible Monte-Carlo estimators (naive,
//!   exponentially tilted, planted-hub) built on counter-based random
//!   streams.
//!
//! The scalar-generic kernels accept any type implementing [`real::Real`]
//! (`f32` or `f64`); the concrete aliases below fix `f64`, which is what
//! the oracles, the simulator and the CLI use.

pub mod binom;
pub mod dist;
pub mod logspace;
pub mod oracles;
pub mod rate;
pub mod real;
pub mod rng;
pub mod sim;
pub mod variational;

/// Scalar type used by the concrete aliases and all non-generic modules.
pub type Scalar = f64;

/// `StarParams` over the default scalar.
pub type StarParams = rate::StarParams<Scalar>;
/// `RegimeTag` over the default scalar.
pub type RegimeTag = rate::RegimeTag<Scalar>;
/// `BoundReport` over the default scalar.
pub type BoundReport = rate::BoundReport<Scalar>;
/// `VariationalSolution` over the default scalar.
pub type VariationalSolution = variational::VariationalSolution<Scalar>;
/// `CriticalConstants` over the default scalar.
pub type CriticalConstants = variational::CriticalConstants<Scalar>;

pub use dist::{DiscreteDistribution, JointDistribution};
pub use oracles::graphs::DegreeSequence;
pub use oracles::OracleConfig;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An exhaustive computation would exceed its configured guard.
    #[error("guard exceeded: {name} = {actual} over limit {limit}")]
    Guard {
        name: &'static str,
        actual: u64,
        limit: u64,
    },
    /// A regime tag is inconsistent with the supplied parameters.
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
