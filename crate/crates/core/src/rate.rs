//! Closed-form rate functions, regime classification and finite-`n`
//! bounds that require no optimization.
//!
//! The four-case asymptotic rate for `-log P(X ≥ (1+ε)μ)` lives in
//! [`star_rate_asymptotic`]; the finite-`n` unified minimization over the
//! excess split `δ` lives in [`unified_rate`]. Everything is generic over
//! the scalar type.

use serde::{Deserialize, Serialize};

use crate::binom::{binomial_real, factorial_real, log_binomial};
use crate::real::Real;
use crate::variational;
use crate::{Error, Result};

/// Multiplicative band treated as "tends to a constant" when classifying
/// a finite instance; see [`classify_regime`].
pub const DEFAULT_REGIME_WINDOW: f64 = 4.0;

/// Grid resolution for the outer scan of [`unified_rate`].
pub const DEFAULT_UNIFIED_GRID: u32 = 10_000;

/// Fractional parts closer than this to an integer are flagged as
/// boundary cases of the fractional-regime rate.
pub const FRACTIONAL_BOUNDARY_TOL: f64 = 1e-9;

/// One problem instance: star arm count `r`, vertex count `n` and edge
/// probability `p`, with the derived expectations cached.
///
/// `trials` is the per-vertex binomial trial count `N` of the i.i.d.
/// model, defaulting to `n - 1` so that `nu == mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarParams<R> {
    /// Arm count of the star, at least 2.
    pub r: u32,
    /// Number of vertices.
    pub n: u64,
    /// Edge probability, strictly inside (0, 1).
    pub p: R,
    /// Binomial trial count of the i.i.d. model.
    pub trials: u64,
    /// `E X = n C(n-1, r) p^r`, the expected star count.
    pub mu: R,
    /// `E Y = n C(trials, r) p^r`, the expected i.i.d. sum.
    pub nu: R,
    /// Density ratio `mu / C(n, r)`.
    pub rho: R,
}

impl<R: Real> StarParams<R> {
    pub fn new(r: u32, n: u64, p: R) -> Result<Self> {
        if r < 2 {
            return Err(Error::Domain(format!("r must be at least 2, got {r}")));
        }
        if n <= r as u64 {
            return Err(Error::Domain(format!("n must exceed r, got n={n}, r={r}")));
        }
        if !(p > R::zero() && p < R::one()) {
            return Err(Error::Domain(format!("p must lie in (0,1), got {p}")));
        }
        let trials = n - 1;
        let pr = p.powi(r as i32);
        let mu = R::from_count(n) * binomial_real::<R>(n - 1, r as u64) * pr;
        let rho = mu / binomial_real::<R>(n, r as u64);
        Ok(StarParams {
            r,
            n,
            p,
            trials,
            mu,
            nu: mu,
            rho,
        })
    }

    /// Same instance with a different i.i.d. trial count; recomputes `nu`.
    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self.nu = R::from_count(self.n)
            * binomial_real::<R>(trials, self.r as u64)
            * self.p.powi(self.r as i32);
        self
    }

    /// `log(1/p)`, the per-edge planting cost.
    pub fn log_inv_p(&self) -> R {
        self.p.recip().ln()
    }

    pub fn log_n(&self) -> R {
        R::from_count(self.n).ln()
    }
}

/// Which of the four asymptotic cases a finite instance is treated as.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "regime", content = "value", rename_all = "snake_case")]
pub enum RegimeTag<R> {
    /// `mu / log^{r/(r-1)} n` treated as converging to the attached `c ≥ 0`.
    PoissonTransition(R),
    /// Between the transition and fractional scales.
    Intermediate,
    /// `mu / C(n,r)` treated as converging to the attached `rho > 0`.
    Fractional(R),
    /// `mu` well above `n^r`.
    Dense,
}

/// Source of a tail bound in a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    Chernoff,
    WeakChernoff,
    BinomLower,
    Warnke,
}

/// A one-sided (or trivially two-sided) bound on a log-probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport<R> {
    /// Upper bound on the log-probability (0 when the method is vacuous).
    pub log_upper: R,
    /// Lower bound on the log-probability, `-inf` when the method gives none.
    pub log_lower: R,
    pub source: BoundSource,
}

impl<R: Real> BoundReport<R> {
    /// Entropy-form Chernoff bound `P(Bin(n,p) ≥ t) ≤ exp(-n H_p(t/n))`,
    /// valid for `t ∈ [np, n]`; clamped to the trivial bound elsewhere.
    pub fn chernoff(n: u64, p: R, t: R) -> Result<Self> {
        let lambda = (t / R::from_count(n)).min(R::one());
        let log_upper = if lambda < p {
            R::zero()
        } else {
            -R::from_count(n) * entropy_hp(p, lambda)?
        };
        Ok(BoundReport {
            log_upper,
            log_lower: R::neg_infinity(),
            source: BoundSource::Chernoff,
        })
    }

    pub fn weak_chernoff(n: u64, p: R, t: R) -> Self {
        BoundReport {
            log_upper: chernoff_upper_log(n, p, t),
            log_lower: R::neg_infinity(),
            source: BoundSource::WeakChernoff,
        }
    }

    pub fn binom_lower(n: u64, p: R, k: u64) -> Result<Self> {
        Ok(BoundReport {
            log_upper: R::zero(),
            log_lower: binom_point_lower_log(n, p, k)?,
            source: BoundSource::BinomLower,
        })
    }

    pub fn warnke(mu: R, t: R, overlap: R) -> Self {
        BoundReport {
            log_upper: warnke_bound_log(mu, t, overlap),
            log_lower: R::neg_infinity(),
            source: BoundSource::Warnke,
        }
    }

    /// An upper bound at or above 0 says nothing about a probability.
    pub fn is_vacuous(&self) -> bool {
        self.log_upper >= R::zero()
    }
}

/// Poisson-type rate function `φ(ε) = (1+ε) log(1+ε) - ε`.
///
/// Strictly increasing and convex on `[0, ∞)` with `φ(0) = 0`.
pub fn phi<R: Real>(eps: R) -> Result<R> {
    if eps < R::zero() {
        return Err(Error::Domain(format!("phi requires eps >= 0, got {eps}")));
    }
    let one_eps = R::one() + eps;
    Ok(one_eps * eps.ln_1p() - eps)
}

/// `φ` clamped at zero from below; used inside optimizers where `ε - δ`
/// can round to a tiny negative number.
pub(crate) fn phi_nn<R: Real>(x: R) -> R {
    let x = x.max(R::zero());
    (R::one() + x) * x.ln_1p() - x
}

/// Localization rate function `ψ_r(δ) = r^{-1} (r! δ)^{1/r}`.
///
/// Concave and increasing in `δ` with `ψ_r(0) = 0`.
pub fn psi<R: Real>(r: u32, delta: R) -> Result<R> {
    if r < 2 {
        return Err(Error::Domain(format!("psi requires r >= 2, got {r}")));
    }
    if delta < R::zero() {
        return Err(Error::Domain(format!(
            "psi requires delta >= 0, got {delta}"
        )));
    }
    let rr = R::from_count(r as u64);
    Ok((factorial_real::<R>(r) * delta).powf(rr.recip()) / rr)
}

/// Relative entropy `H_p(λ) = λ log(λ/p) + (1-λ) log((1-λ)/(1-p))`,
/// extended to the endpoints by limits.
///
/// Strictly convex in `λ`, minimal value 0 exactly at `λ = p`.
pub fn entropy_hp<R: Real>(p: R, lambda: R) -> Result<R> {
    for (name, v) in [("p", p), ("lambda", lambda)] {
        if !(v >= R::zero() && v <= R::one()) {
            return Err(Error::Domain(format!("{name} must lie in [0,1], got {v}")));
        }
    }
    let first = if lambda == R::zero() {
        R::zero()
    } else if p == R::zero() {
        R::infinity()
    } else {
        lambda * (lambda / p).ln()
    };
    let second = if lambda == R::one() {
        R::zero()
    } else if p == R::one() {
        R::infinity()
    } else {
        (R::one() - lambda) * ((R::one() - lambda) / (R::one() - p)).ln()
    };
    Ok(first + second)
}

/// Order of magnitude `Φ_n` of the upper-tail exponent, by the three-case
/// formula with exact finite-`n` thresholds.
pub fn phi_order<R: Real>(params: &StarParams<R>) -> R {
    let n = R::from_count(params.n);
    let r = R::from_count(params.r as u64);
    let log_n = n.ln();
    let p = params.p;
    let pr = p.powi(params.r as i32);
    // p <= n^{-1-1/r} (log n)^{1/(r-1)}
    let threshold_sparse = n.powf(-(R::one() + r.recip())) * log_n.powf((r - R::one()).recip());
    // p <= n^{-1/r}
    let threshold_dense = n.powf(-r.recip());
    if p <= threshold_sparse {
        n.powf(r + R::one()) * pr
    } else if p <= threshold_dense {
        n.powf(R::one() + r.recip()) * p * log_n
    } else {
        n * n * pr * p.recip().ln()
    }
}

/// Finite-`n` proxy for the limits in the four-case rate: `q1 = mu /
/// (log n)^{r/(r-1)}` is treated as a constant when it is at most
/// `window`, and `rho` as a constant when it is within `[1/window,
/// window]`.
pub fn classify_regime<R: Real>(params: &StarParams<R>, window: R) -> RegimeTag<R> {
    let r = R::from_count(params.r as u64);
    let q1 = params.mu / params.log_n().powf(r / (r - R::one()));
    if q1 <= window {
        RegimeTag::PoissonTransition(q1)
    } else if params.rho >= window.recip() && params.rho <= window {
        RegimeTag::Fractional(params.rho)
    } else if params.rho > window {
        RegimeTag::Dense
    } else {
        RegimeTag::Intermediate
    }
}

/// The factor `{x}^{1/r} + ⌊x⌋` of the fractional-regime rate, together
/// with boundary diagnostics when `x` sits numerically on an integer.
///
/// The one-sided limits at an integer coincide (the map is continuous,
/// with an infinite right slope), but both are reported so boundary
/// instances are visible in output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalFactor<R> {
    pub value: R,
    /// Set when `x` is within tolerance of this integer.
    pub near_integer: Option<u64>,
    pub value_below: R,
    pub value_above: R,
}

pub fn fractional_factor<R: Real>(r: u32, x: R, tol: R) -> FractionalFactor<R> {
    let rr = R::from_count(r as u64);
    let floor = x.floor();
    let frac = x - floor;
    let value = frac.powf(rr.recip()) + floor;
    let nearest = x.round();
    if (x - nearest).abs() <= tol && nearest >= R::zero() {
        let m = nearest;
        let below = if m >= R::one() { m } else { R::zero() };
        FractionalFactor {
            value,
            near_integer: Some(m.to_u64().unwrap_or(0)),
            value_below: below,
            value_above: m,
        }
    } else {
        FractionalFactor {
            value,
            near_integer: None,
            value_below: value,
            value_above: value,
        }
    }
}

/// The asymptotic upper-tail rate for the case selected by `tag`.
///
/// Poisson transition delegates `I_r(c, ε)` to the variational solver;
/// the other three cases are direct formulas.
pub fn star_rate_asymptotic<R: Real>(
    params: &StarParams<R>,
    eps: R,
    tag: &RegimeTag<R>,
) -> Result<R> {
    if eps <= R::zero() {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    match *tag {
        RegimeTag::PoissonTransition(c) => {
            if !(c >= R::zero()) || !c.is_finite() {
                return Err(Error::RegimeMismatch(format!(
                    "PoissonTransition requires finite c >= 0, got {c}"
                )));
            }
            let sol =
                variational::solve(c, eps, params.r, R::from_f(variational::DEFAULT_TIE_TOL))?;
            Ok(sol.value * params.mu)
        }
        RegimeTag::Intermediate => {
            let rr = R::from_count(params.r as u64);
            Ok(psi(params.r, eps)? * params.mu.powf(rr.recip()) * params.log_n())
        }
        RegimeTag::Fractional(rho) => {
            if !(rho > R::zero()) {
                return Err(Error::RegimeMismatch(format!(
                    "Fractional requires rho > 0, got {rho}"
                )));
            }
            let factor = fractional_factor(params.r, eps * rho, R::from_f(FRACTIONAL_BOUNDARY_TOL));
            let rr = R::from_count(params.r as u64);
            Ok(factor.value / rr * R::from_count(params.n) * params.log_n())
        }
        RegimeTag::Dense => {
            let n = R::from_count(params.n);
            Ok(eps * n * n * params.p.powi(params.r as i32) * params.log_inv_p())
        }
    }
}

/// `Ψ(δ)`: cost of localizing a `δ` fraction of the excess, combining a
/// partial hub (`n log n` scale) with full hubs (`n log(1/p)` per hub).
pub fn psi_localization<R: Real>(params: &StarParams<R>, delta: R) -> R {
    let rr = R::from_count(params.r as u64);
    let x = delta * params.rho;
    let frac = x - x.floor();
    frac.powf(rr.recip()) / rr * R::from_count(params.n) * params.log_n()
        + R::from_count(params.n) * x.floor() * params.log_inv_p()
}

/// Minimizes `φ(ε-δ) μ + Ψ(δ)` over `δ ∈ [0, ε]`.
///
/// Grid scan with `grid` subdivisions, golden-section refinement inside
/// the winning cell, plus explicit candidates at the endpoints and at the
/// floor jumps of `Ψ` (golden section cannot be trusted across a jump).
/// Returns `(δ_min, value)`.
pub fn unified_rate<R: Real>(params: &StarParams<R>, eps: R, grid: u32) -> Result<(R, R)> {
    if eps <= R::zero() {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let grid = grid.max(2);
    let objective = |delta: R| phi_nn(eps - delta) * params.mu + psi_localization(params, delta);

    let step = eps / R::from_count(grid as u64);
    let mut best_delta = R::zero();
    let mut best_value = objective(R::zero());
    let mut best_index = 0u64;
    for i in 0..=grid as u64 {
        let delta = (R::from_count(i) * step).min(eps);
        let v = objective(delta);
        if v < best_value {
            best_value = v;
            best_delta = delta;
            best_index = i;
        }
    }

    // refine inside the cell around the winning grid point
    let lo = R::from_count(best_index.saturating_sub(1)) * step;
    let hi = (R::from_count(best_index + 1) * step).min(eps);
    let mut candidates = vec![golden_min(objective, lo, hi, eps * R::from_f(1e-14)), eps];

    // floor jumps of Psi: delta with delta * rho integer, and just below
    let max_k = (eps * params.rho).floor();
    if max_k >= R::one() && max_k <= R::from_f(1e6) {
        let mut k = R::one();
        while k <= max_k {
            let crossing = k / params.rho;
            candidates.push(crossing);
            candidates.push(crossing - eps * R::from_f(1e-13));
            k += R::one();
        }
    }
    for delta in candidates {
        if delta >= R::zero() && delta <= eps {
            let v = objective(delta);
            if v < best_value {
                best_value = v;
                best_delta = delta;
            }
        }
    }

    Ok((best_delta, best_value))
}

/// Golden-section minimizer on `[lo, hi]`; assumes unimodality there and
/// returns the abscissa of the minimum to absolute tolerance `tol`.
pub(crate) fn golden_min<R: Real>(f: impl Fn(R) -> R, lo: R, hi: R, tol: R) -> R {
    let inv_phi = R::from_f(0.618_033_988_749_894_9);
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    (a + b) / R::from_f(2.0)
}

/// Weak Chernoff upper bound `log P(Bin(n,p) ≥ t) ≤ -t log(t/(e n p))`.
///
/// Vacuous (non-negative) for `t ≤ e·n·p`; callers can detect that with
/// [`BoundReport::is_vacuous`].
pub fn chernoff_upper_log<R: Real>(n: u64, p: R, t: R) -> R {
    let enp = R::from_f(std::f64::consts::E) * R::from_count(n) * p;
    -t * (t / enp).ln()
}

/// Certified lower bound `log P(Bin(n,p) ≥ k) ≥ log [C(n,k) p^k (1-p)^{n-k}]`
/// from the single point mass at `k`, in log space throughout.
pub fn binom_point_lower_log<R: Real>(n: u64, p: R, k: u64) -> Result<R> {
    if k > n {
        return Err(Error::Domain(format!("k must be at most n, got k={k}, n={n}")));
    }
    Ok(log_binomial::<R>(n, k)
        + R::from_count(k) * p.ln()
        + R::from_count(n - k) * (-p).ln_1p())
}

/// Upper bound `log P(Z_C ≥ μ + t) ≤ -φ(t/μ) μ / C` for sums with
/// overlap parameter `C`.
pub fn warnke_bound_log<R: Real>(mu: R, t: R, overlap: R) -> R {
    debug_assert!(mu > R::zero() && t > R::zero() && overlap > R::zero());
    -phi_nn(t / mu) * mu / overlap
}

/// The three reduction-scale quantities tying the degree-sequence model
/// to the i.i.d. model: edge-count band `δ_n`, maximum-degree cap `Δ_n`
/// and the convex-sum scale `S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionQuantities<R> {
    /// `sqrt(2 C Φ_n / (C(n,2) p))` — relative half-width of the edge band.
    pub delta_n: R,
    /// `C (log n + Φ_n) / log((log n + Φ_n)/(np))` — degree cap.
    pub big_delta_n: R,
    /// `(⌊r!εν/N^r⌋ + {r!εν/N^r}^{1/r}) N` — minimum degree mass forced by
    /// a localized excess of `ε ν`.
    pub s_bound: R,
}

/// Evaluates the three reduction quantities for a constant `C > 1`.
///
/// Fails when `(log n + Φ_n)/(np) ≤ 1`, which signals parameters outside
/// the sparse regime where the reduction applies.
pub fn reduction_quantities<R: Real>(
    params: &StarParams<R>,
    big_c: R,
    eps: R,
) -> Result<ReductionQuantities<R>> {
    if !(big_c > R::one()) {
        return Err(Error::Domain(format!("C must exceed 1, got {big_c}")));
    }
    let phi_n = phi_order(params);
    let n = R::from_count(params.n);
    let two = R::from_f(2.0);
    let pairs = binomial_real::<R>(params.n, 2);
    let delta_n = (two * big_c * phi_n / (pairs * params.p)).sqrt();
    let ratio = (n.ln() + phi_n) / (n * params.p);
    if ratio <= R::one() {
        return Err(Error::Domain(format!(
            "(log n + Phi_n)/(np) = {ratio} is at most 1; instance is outside the sparse regime"
        )));
    }
    let big_delta_n = big_c * (n.ln() + phi_n) / ratio.ln();
    let rr = R::from_count(params.r as u64);
    let x = factorial_real::<R>(params.r) * eps * params.nu
        / R::from_count(params.trials).powf(rr);
    let s_bound = (x.floor() + (x - x.floor()).powf(rr.recip())) * R::from_count(params.trials);
    Ok(ReductionQuantities {
        delta_n,
        big_delta_n,
        s_bound,
    })
}
