//! The one-dimensional variational problem behind the transition regime.
//!
//! For `c > 0` the rate `I_r(c, ε)` is the minimum over `δ ∈ [0, ε]` of
//! `φ(ε-δ) + ψ_r(δ) c^{1/r-1}`. The change of variable
//! `α = r^{-1} (r!)^{1/r} c^{1/r-1}` turns the objective into
//! `f_α(δ) = φ(ε-δ) + α δ^{1/r}`, whose derivative
//! `f'_α(δ) = α / (r δ^{1-1/r}) - log(1+ε-δ)` is strictly convex with an
//! infinite limit at `δ = 0` and a positive value at `δ = ε`. Hence `f_α`
//! has either no interior stationary points (`α` above the tangency value
//! `α_0`) or exactly two, `δ_- ≤ δ_+`, where `δ_+` is the only candidate
//! interior minimizer. Comparing `F(α) = f_α(δ_+)` with the endpoint
//! value `φ(ε)` yields the critical tilt `α_1` (where they tie) and the
//! critical constant `c_{r,ε}` separating the Poisson regime (minimizer
//! `{0}`) from the localized regime (minimizer `{δ*}`).
//!
//! Root-finding is bisection throughout: `f'_α` has a `δ^{1/r-1}`
//! singularity at 0 that makes Newton brittle, and every bracket here is
//! guaranteed by sign analysis.

use serde::{Deserialize, Serialize};

use crate::binom::factorial_real;
use crate::rate::{golden_min, phi, phi_nn};
use crate::real::Real;
use crate::{Error, Result};

/// Relative tolerance for declaring the endpoint and the interior
/// minimizer tied at `c = c_{r,ε}`.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// Search tolerances; defaults keep composed quantities such as
/// `c_{r,ε}` accurate to at least eight significant digits.
#[derive(Debug, Clone, Copy)]
pub struct SolverTolerances<R> {
    /// Absolute tolerance on δ positions (golden section and bisection).
    pub position: R,
    /// Relative tolerance of the α₁ bisection.
    pub alpha_rel: R,
}

impl<R: Real> Default for SolverTolerances<R> {
    fn default() -> Self {
        SolverTolerances {
            position: R::from_f(1e-12),
            alpha_rel: R::from_f(1e-10),
        }
    }
}

/// Full output of [`solve`]: the value `I_r(c,ε)` with its minimizer set
/// and the tilt parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalSolution<R> {
    pub c: R,
    pub eps: R,
    pub r: u32,
    /// `I_r(c, ε)`.
    pub value: R,
    /// The minimizer set: `{0}`, `{δ*}`, or `{0, δ*}` at the tie.
    pub minimizers: Vec<R>,
    /// Tilt `α` from the change of variable; absent when `c = 0`.
    pub alpha: Option<R>,
}

/// The critical constants of the minimizer structure at fixed `(r, ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalConstants<R> {
    /// Tangency tilt: largest `α` with stationary points.
    pub alpha0: R,
    /// Tie tilt: `F(α₁, ε) = φ(ε)`.
    pub alpha1: R,
    /// `c_{r,ε} = c(α₁)`, threshold of the Poisson regime.
    pub c_crit: R,
    pub eps: R,
    pub r: u32,
}

impl<R: Real> CriticalConstants<R> {
    pub fn compute(eps: R, r: u32) -> Result<Self> {
        check_eps_r(eps, r)?;
        let tols = SolverTolerances::default();
        let a0 = alpha0_with(eps, r, &tols);
        let a1 = alpha1_with(eps, r, &tols)?;
        Ok(CriticalConstants {
            alpha0: a0,
            alpha1: a1,
            c_crit: c_of_alpha(a1, r),
            eps,
            r,
        })
    }
}

fn check_eps_r<R: Real>(eps: R, r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::Domain(format!("r must be at least 2, got {r}")));
    }
    if !(eps > R::zero()) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// `f_α(δ) = φ(ε-δ) + α δ^{1/r}` (the tilted objective).
///
/// `δ = 0` is the endpoint candidate with value `φ(ε)`; it is handled
/// explicitly by the callers, never through limits inside optimizers.
pub fn f_alpha<R: Real>(alpha: R, delta: R, eps: R, r: u32) -> R {
    let rr = R::from_count(r as u64);
    phi_nn(eps - delta) + alpha * delta.powf(rr.recip())
}

/// `f'_α(δ) = α / (r δ^{1-1/r}) - log(1+ε-δ)`, strictly convex in `δ`.
pub fn f_alpha_prime<R: Real>(alpha: R, delta: R, eps: R, r: u32) -> Result<R> {
    if !(delta > R::zero()) {
        return Err(Error::Domain(format!(
            "f_alpha_prime requires delta > 0, got {delta}"
        )));
    }
    Ok(f_alpha_prime_raw(alpha, delta, eps, r))
}

fn f_alpha_prime_raw<R: Real>(alpha: R, delta: R, eps: R, r: u32) -> R {
    let rr = R::from_count(r as u64);
    alpha / (rr * delta.powf(R::one() - rr.recip())) - (eps - delta).ln_1p()
}

/// The singular part `g_α(δ) = α / (r δ^{1-1/r})` of the derivative.
pub fn g_alpha<R: Real>(alpha: R, delta: R, r: u32) -> R {
    let rr = R::from_count(r as u64);
    alpha / (rr * delta.powf(R::one() - rr.recip()))
}

/// The concave part `h(δ) = log(1 + ε - δ)` of the derivative.
pub fn h_log<R: Real>(delta: R, eps: R) -> R {
    (eps - delta).ln_1p()
}

/// Tangency tilt `α_0(ε) = max { r δ^{1-1/r} log(1+ε-δ) : δ ∈ [0, ε] }`.
///
/// The maximand is log-concave on `(0, ε)` and vanishes at both ends, so
/// golden section is valid.
pub fn alpha0<R: Real>(eps: R, r: u32) -> R {
    alpha0_with(eps, r, &SolverTolerances::default())
}

pub fn alpha0_with<R: Real>(eps: R, r: u32, tols: &SolverTolerances<R>) -> R {
    let rr = R::from_count(r as u64);
    let neg = |delta: R| -(rr * delta.powf(R::one() - rr.recip()) * (eps - delta).ln_1p());
    let at = golden_min(neg, R::zero(), eps, tols.position.min(eps * tols.position));
    -neg(at)
}

/// The two stationary points `δ_-(α, ε) ≤ δ_+(α, ε)` of `f_α`, or `None`
/// for `α > α_0(ε)` where `f_α` is increasing and has none.
///
/// Locates the minimum of the strictly convex `f'_α` by golden section,
/// then bisects `f'_α = 0` on each side.
pub fn stationary_points<R: Real>(alpha: R, eps: R, r: u32) -> Option<(R, R)> {
    stationary_points_with(alpha, eps, r, &SolverTolerances::default())
}

pub fn stationary_points_with<R: Real>(
    alpha: R,
    eps: R,
    r: u32,
    tols: &SolverTolerances<R>,
) -> Option<(R, R)> {
    debug_assert!(alpha > R::zero() && eps > R::zero() && r >= 2);
    let fp = |delta: R| f_alpha_prime_raw(alpha, delta, eps, r);
    // interior minimum of f': f'(0+) = +inf, f'(eps) finite
    let floor = eps * R::from_f(1e-18);
    let at_min = golden_min(fp, floor, eps, tols.position);
    let min_val = fp(at_min);
    if min_val > R::zero() {
        // no sign change: either alpha > alpha0, or we are at the tangency
        // and the minimum is zero up to solver noise
        let a0 = alpha0_with(eps, r, tols);
        let tangency_slack = R::from_f(1e-9) * a0;
        if alpha <= a0 + tangency_slack {
            return Some((at_min, at_min));
        }
        return None;
    }
    // left root: walk down until f' is positive again, then bisect
    let mut lo = at_min;
    let mut guard = 0;
    while fp(lo) <= R::zero() && guard < 4096 {
        lo = lo / R::from_f(2.0);
        guard += 1;
    }
    let delta_minus = bisect(&fp, lo, at_min, tols.position);
    // right root: f'(eps) > 0 always
    let delta_plus = bisect_neg_pos(&fp, at_min, eps, tols.position);
    Some((delta_minus, delta_plus))
}

/// Bisection for `f` positive at `lo`, non-positive at `hi`.
fn bisect<R: Real>(f: &impl Fn(R) -> R, mut lo: R, mut hi: R, tol: R) -> R {
    let two = R::from_f(2.0);
    while hi - lo > tol {
        let mid = (lo + hi) / two;
        if f(mid) > R::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

/// Bisection for `f` non-positive at `lo`, positive at `hi`.
fn bisect_neg_pos<R: Real>(f: &impl Fn(R) -> R, mut lo: R, mut hi: R, tol: R) -> R {
    let two = R::from_f(2.0);
    while hi - lo > tol {
        let mid = (lo + hi) / two;
        if f(mid) > R::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / two
}

/// `F(α, ε) = f_α(δ_+(α, ε))`, the interior candidate value; strictly
/// increasing in both arguments.
pub fn big_f<R: Real>(alpha: R, eps: R, r: u32) -> Result<R> {
    big_f_with(alpha, eps, r, &SolverTolerances::default())
}

pub fn big_f_with<R: Real>(alpha: R, eps: R, r: u32, tols: &SolverTolerances<R>) -> Result<R> {
    check_eps_r(eps, r)?;
    if !(alpha > R::zero()) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    match stationary_points_with(alpha, eps, r, tols) {
        Some((_, delta_plus)) => Ok(f_alpha(alpha, delta_plus, eps, r)),
        None => Err(Error::Domain(format!(
            "alpha = {alpha} exceeds alpha0(eps = {eps}); f_alpha has no stationary points"
        ))),
    }
}

/// Tie tilt `α_1(ε)`: the unique root of `F(α, ε) = φ(ε)` in `(0, α_0)`.
pub fn alpha1<R: Real>(eps: R, r: u32) -> Result<R> {
    alpha1_with(eps, r, &SolverTolerances::default())
}

pub fn alpha1_with<R: Real>(eps: R, r: u32, tols: &SolverTolerances<R>) -> Result<R> {
    check_eps_r(eps, r)?;
    let phi_eps = phi(eps)?;
    let rr = R::from_count(r as u64);
    let mut hi = alpha0_with(eps, r, tols);
    // F(alpha) <= alpha eps^{1/r}, so this lower bracket is analytic
    let mut lo = phi_eps / (R::from_f(2.0) * eps.powf(rr.recip()));
    let mut guard = 0;
    while lo >= hi && guard < 128 {
        lo = lo / R::from_f(2.0);
        guard += 1;
    }
    let gap = |alpha: R| match big_f_with(alpha, eps, r, tols) {
        Ok(f) => f - phi_eps,
        // above alpha0 the interior candidate is gone; report a positive gap
        Err(_) => R::one(),
    };
    debug_assert!(gap(lo) < R::zero(), "lower bracket failed");
    let two = R::from_f(2.0);
    while hi - lo > tols.alpha_rel * lo {
        let mid = (lo + hi) / two;
        if gap(mid) < R::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// Change of variable `α(c) = r^{-1} (r!)^{1/r} c^{1/r - 1}` — a
/// decreasing bijection of `(0, ∞)`.
pub fn alpha_of_c<R: Real>(c: R, r: u32) -> R {
    let rr = R::from_count(r as u64);
    factorial_real::<R>(r).powf(rr.recip()) / rr * c.powf(rr.recip() - R::one())
}

/// Inverse of [`alpha_of_c`].
pub fn c_of_alpha<R: Real>(alpha: R, r: u32) -> R {
    let rr = R::from_count(r as u64);
    (rr * alpha / factorial_real::<R>(r).powf(rr.recip())).powf(rr / (R::one() - rr))
}

/// Critical constant `c_{r,ε} = c(α_1(ε))`; decreasing bijection in `ε`.
pub fn c_crit<R: Real>(eps: R, r: u32) -> Result<R> {
    Ok(c_of_alpha(alpha1(eps, r)?, r))
}

/// Solves `I_r(c, ε)` returning the value, the minimizer set and the
/// tilt. The endpoint tie at `c = c_{r,ε}` is declared within relative
/// tolerance `tie_tol`.
pub fn solve<R: Real>(c: R, eps: R, r: u32, tie_tol: R) -> Result<VariationalSolution<R>> {
    solve_with(c, eps, r, tie_tol, &SolverTolerances::default())
}

pub fn solve_with<R: Real>(
    c: R,
    eps: R,
    r: u32,
    tie_tol: R,
    tols: &SolverTolerances<R>,
) -> Result<VariationalSolution<R>> {
    check_eps_r(eps, r)?;
    if !(c >= R::zero()) {
        return Err(Error::Domain(format!("c must be non-negative, got {c}")));
    }
    if !(tie_tol > R::zero()) {
        return Err(Error::Domain(format!("tol must be positive, got {tie_tol}")));
    }
    let phi_eps = phi(eps)?;
    if c == R::zero() {
        return Ok(VariationalSolution {
            c,
            eps,
            r,
            value: phi_eps,
            minimizers: vec![R::zero()],
            alpha: None,
        });
    }
    let alpha = alpha_of_c(c, r);
    let interior = stationary_points_with(alpha, eps, r, tols)
        .map(|(_, delta_plus)| (delta_plus, f_alpha(alpha, delta_plus, eps, r)));
    let (value, minimizers) = match interior {
        None => (phi_eps, vec![R::zero()]),
        Some((delta_plus, f_plus)) => {
            if (f_plus - phi_eps).abs() <= tie_tol * phi_eps {
                (phi_eps.min(f_plus), vec![R::zero(), delta_plus])
            } else if f_plus < phi_eps {
                (f_plus, vec![delta_plus])
            } else {
                (phi_eps, vec![R::zero()])
            }
        }
    };
    Ok(VariationalSolution {
        c,
        eps,
        r,
        value,
        minimizers,
        alpha: Some(alpha),
    })
}

/// The localized minimizer `δ*(c) = δ_+(α(c), ε)`, only defined past the
/// critical constant.
pub fn delta_star<R: Real>(c: R, eps: R, r: u32) -> Result<R> {
    let crit = c_crit(eps, r)?;
    if !(c > crit) {
        return Err(Error::Domain(format!(
            "delta_star requires c > c_crit = {crit}, got {c}; the minimizer is 0 there"
        )));
    }
    let alpha = alpha_of_c(c, r);
    let (_, delta_plus) = stationary_points(alpha, eps, r)
        .expect("c > c_crit implies alpha < alpha1 < alpha0");
    Ok(delta_plus)
}

/// One row of the curve dump: the objective `f_α` and the two sides
/// `g_α`, `h` of its derivative at `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint<R> {
    pub delta: R,
    pub f: R,
    pub g: R,
    pub h: R,
}

/// Samples `(δ, f_α(δ), g_α(δ), h(δ))` over a uniform grid on `(0, ε]`.
pub fn curve_samples<R: Real>(alpha: R, eps: R, r: u32, grid: u32) -> Vec<CurvePoint<R>> {
    let grid = grid.max(1);
    (1..=grid as u64)
        .map(|i| {
            let delta = eps * R::from_count(i) / R::from_count(grid as u64);
            CurvePoint {
                delta,
                f: f_alpha(alpha, delta, eps, r),
                g: g_alpha(alpha, delta, r),
                h: h_log(delta, eps),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate::psi;
    use proptest::prelude::*;

    #[test]
    fn f_alpha_fixed_points() {
        let eps = 1.5f64;
        let v = f_alpha(0.7, eps, eps, 2);
        assert!((v - 0.7 * eps.sqrt()).abs() < 1e-15);
        let near_zero = f_alpha(0.7, 1e-14, eps, 2);
        assert!((near_zero - phi(eps).unwrap()).abs() < 1e-6);
        let v = f_alpha(1.0f64, 1.0, 1.0, 2);
        assert!((v - 1.0).abs() < 1e-15, "phi(0) + 1 = {v}");
    }

    #[test]
    fn f_alpha_prime_values_and_singularity() {
        let eps = 1.0f64;
        let at_eps = f_alpha_prime(1.0, eps, eps, 2).unwrap();
        assert!((at_eps - 0.5).abs() < 1e-15);
        assert!(at_eps > 0.0);
        assert!(f_alpha_prime(1.0, 1e-30, eps, 2).unwrap() > 1e10);
        assert!(f_alpha_prime(1.0, 0.0, eps, 2).is_err());
    }

    #[test]
    fn f_alpha_prime_matches_central_differences() {
        let eps = 2.0f64;
        for &(alpha, r) in &[(0.3f64, 2u32), (0.8, 3), (0.1, 4)] {
            for &delta in &[0.2f64, 0.7, 1.3, 1.9] {
                let h = 1e-5;
                let numeric =
                    (f_alpha(alpha, delta + h, eps, r) - f_alpha(alpha, delta - h, eps, r))
                        / (2.0 * h);
                let exact = f_alpha_prime(alpha, delta, eps, r).unwrap();
                assert!(
                    (numeric - exact).abs() < 1e-7,
                    "alpha={alpha} r={r} delta={delta}: {numeric} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn f_prime_second_differences_positive() {
        // strict convexity of f'_alpha on interior grids
        let eps = 1.0f64;
        for r in [2u32, 3] {
            let fp = |d: f64| f_alpha_prime(0.4, d, eps, r).unwrap();
            let grid: Vec<f64> = (1..100).map(|i| i as f64 * 0.01).collect();
            for w in grid.windows(3) {
                let second = fp(w[0]) - 2.0 * fp(w[1]) + fp(w[2]);
                assert!(second > 0.0, "r={r} at {}", w[1]);
            }
        }
    }

    #[test]
    fn alpha0_small_eps_and_monotone() {
        assert!(alpha0(1e-4f64, 2) < 1e-2);
        assert!(alpha0(2.0f64, 2) > alpha0(1.0f64, 2));
    }

    #[test]
    fn alpha0_grid_oracle() {
        // dense grid maximum of 2 sqrt(d) log(2 - d) for r = 2, eps = 1
        let eps = 1.0f64;
        let mut best = 0.0f64;
        let m = 100_000;
        for i in 0..=m {
            let d = eps * i as f64 / m as f64;
            best = best.max(2.0 * d.sqrt() * (2.0 - d).ln());
        }
        let a0 = alpha0(eps, 2);
        assert!((a0 - best).abs() < 1e-8, "{a0} vs grid {best}");
        assert!(a0 >= best - 1e-12, "golden result may not be below the grid max");
    }

    #[test]
    fn stationary_point_structure() {
        let eps = 1.0f64;
        let r = 2;
        let a0 = alpha0(eps, r);
        assert_eq!(stationary_points(a0 * 1.01, eps, r), None);

        let (dm, dp) = stationary_points(a0, eps, r).unwrap();
        assert!((dm - dp).abs() < 1e-6, "tangency roots {dm} vs {dp}");

        let (dm, dp) = stationary_points(0.5 * a0, eps, r).unwrap();
        assert!(0.0 < dm && dm < dp && dp < eps);
        assert!(f_alpha_prime(0.5 * a0, dm, eps, r).unwrap().abs() < 1e-9);
        assert!(f_alpha_prime(0.5 * a0, dp, eps, r).unwrap().abs() < 1e-9);

        // alpha -> 0 pushes delta_plus to eps
        let (_, dp) = stationary_points(1e-6, eps, r).unwrap();
        assert!(eps - dp < 1e-3, "delta_plus = {dp}");
    }

    #[test]
    fn big_f_limits_and_monotonicity() {
        let eps = 1.0f64;
        let r = 2;
        let a0 = alpha0(eps, r);
        let phi_eps = phi(eps).unwrap();
        // F <= alpha eps^{1/r} -> 0
        let small = big_f(1e-8, eps, r).unwrap();
        assert!(small <= 1e-8 * eps.sqrt() + 1e-14);
        // F(alpha0) > phi(eps)
        assert!(big_f(a0, eps, r).unwrap() > phi_eps);
        // strictly increasing on a grid
        let mut prev = 0.0f64;
        for i in 1..=100 {
            let alpha = a0 * i as f64 / 100.0;
            let f = big_f(alpha, eps, r).unwrap();
            assert!(f > prev, "F not increasing at alpha = {alpha}");
            prev = f;
        }
        assert!(big_f(a0 * 1.5, eps, r).is_err());
    }

    #[test]
    fn alpha1_structure() {
        for r in [2u32, 3] {
            for &eps in &[0.5f64, 1.0, 2.0] {
                let a1 = alpha1(eps, r).unwrap();
                let a0 = alpha0(eps, r);
                assert!(0.0 < a1 && a1 < a0, "eps={eps} r={r}: {a1} vs {a0}");
                let phi_eps = phi(eps).unwrap();
                assert!(big_f(a1 * (1.0 - 1e-6), eps, r).unwrap() < phi_eps);
                assert!(big_f(a1 * (1.0 + 1e-6), eps, r).unwrap() > phi_eps);
            }
        }
        assert!(alpha1(2.0f64, 2).unwrap() > alpha1(1.0f64, 2).unwrap());
    }

    #[test]
    fn alpha_c_change_of_variable() {
        let a = alpha_of_c(1.0f64, 2);
        assert!((a - 0.5 * 2.0f64.sqrt()).abs() < 1e-15);
        for i in 0..50 {
            let c = 10f64.powf(-3.0 + i as f64 * 0.2);
            for r in [2u32, 3, 4] {
                let back = c_of_alpha(alpha_of_c(c, r), r);
                assert!((back - c).abs() / c < 1e-12, "c={c} r={r}: {back}");
            }
        }
        assert!(alpha_of_c(0.5f64, 2) > alpha_of_c(2.0f64, 2));
    }

    #[test]
    fn alpha_matches_psi_coefficient() {
        // psi_r(delta) c^{1/r-1} == alpha(c) delta^{1/r}
        for &(c, delta, eps, r) in &[(0.7f64, 0.3f64, 1.0f64, 2u32), (3.0, 1.1, 2.0, 3)] {
            let lhs = psi(r, delta).unwrap() * c.powf(1.0 / r as f64 - 1.0);
            let rhs = alpha_of_c(c, r) * delta.powf(1.0 / r as f64);
            assert!((lhs - rhs).abs() < 1e-14 * lhs.abs().max(1.0));
            let _ = eps;
        }
    }

    #[test]
    fn solve_cases() {
        let eps = 1.0f64;
        let r = 2;
        let sol = solve(0.0, eps, r, DEFAULT_TIE_TOL).unwrap();
        assert_eq!(sol.value, phi(eps).unwrap());
        assert_eq!(sol.minimizers, vec![0.0]);
        assert!(sol.alpha.is_none());

        let crit = c_crit(eps, r).unwrap();
        let below = solve(0.99 * crit, eps, r, DEFAULT_TIE_TOL).unwrap();
        assert_eq!(below.minimizers, vec![0.0]);
        assert_eq!(below.value, phi(eps).unwrap());

        let above = solve(1.01 * crit, eps, r, DEFAULT_TIE_TOL).unwrap();
        assert_eq!(above.minimizers.len(), 1);
        assert!(above.minimizers[0] > 0.0);
        assert!(above.value < phi(eps).unwrap());

        let at = solve(crit, eps, r, DEFAULT_TIE_TOL).unwrap();
        assert_eq!(at.minimizers.len(), 2, "tie case should report both minimizers");
        assert_eq!(at.minimizers[0], 0.0);
        assert!(at.minimizers[1] > 0.0);
    }

    #[test]
    fn solve_minimizers_attain_value() {
        let eps = 0.8f64;
        let r = 3;
        let crit = c_crit(eps, r).unwrap();
        for mult in [0.3f64, 0.9, 1.0, 1.3, 50.0] {
            let c = crit * mult;
            let sol = solve(c, eps, r, DEFAULT_TIE_TOL).unwrap();
            for &m in &sol.minimizers {
                let v = phi_nn(eps - m) + psi(r, m).unwrap() * c.powf(1.0 / r as f64 - 1.0);
                assert!(
                    (v - sol.value).abs() <= 1e-8 * sol.value.max(1e-8),
                    "mult={mult} m={m}: {v} vs {}",
                    sol.value
                );
            }
        }
    }

    #[test]
    fn delta_star_structure() {
        let eps = 1.0f64;
        let r = 2;
        let crit = c_crit(eps, r).unwrap();
        assert!(delta_star(0.9 * crit, eps, r).is_err());
        let mut prev = 0.0f64;
        for i in 0..40 {
            let c = crit * 1.01 * 10f64.powf(i as f64 * 0.15);
            let d = delta_star(c, eps, r).unwrap();
            assert!(d > prev, "delta_star not increasing at c = {c}");
            assert!(d > 0.0 && d < eps);
            prev = d;
        }
    }

    #[test]
    fn c_crit_decreasing_in_eps() {
        for r in [2u32, 3] {
            let c1 = c_crit(1.0f64, r).unwrap();
            let c2 = c_crit(2.0f64, r).unwrap();
            assert!(c2 < c1, "r={r}: c_crit(2) = {c2} vs c_crit(1) = {c1}");
        }
    }

    #[test]
    fn poisson_regime_iff_c_at_most_crit() {
        // Remark-2 consistency on an eps grid
        let r = 2;
        for i in 1..=10 {
            let eps = 0.3 * i as f64;
            let crit = c_crit(eps, r).unwrap();
            for mult in [0.2f64, 0.7, 0.95] {
                let sol = solve(mult * crit, eps, r, DEFAULT_TIE_TOL).unwrap();
                assert_eq!(sol.minimizers, vec![0.0]);
            }
            for mult in [1.05f64, 2.0, 10.0] {
                let sol = solve(mult * crit, eps, r, DEFAULT_TIE_TOL).unwrap();
                assert!(!sol.minimizers.contains(&0.0));
            }
        }
    }

    #[test]
    fn rate_continuity_and_growth_in_eps() {
        let c = 2.0f64;
        for r in [2u32, 3] {
            for i in 1..=30 {
                let eps = 0.2 * i as f64;
                let v1 = solve(c, eps, r, DEFAULT_TIE_TOL).unwrap().value;
                let v2 = solve(c, eps + 1e-6, r, DEFAULT_TIE_TOL).unwrap().value;
                assert!((v1 - v2).abs() <= 1e-4, "jump at eps={eps}: {v1} vs {v2}");
            }
            // monotone unbounded growth: I = min(phi(eps), F(alpha, eps))
            // and both branches increase in eps
            let mut prev = 0.0f64;
            for i in 1..=20 {
                let eps = 2.5 * i as f64;
                let v = solve(c, eps, r, DEFAULT_TIE_TOL).unwrap().value;
                assert!(v >= prev, "I(c, eps) dropped at eps = {eps}");
                prev = v;
            }
            let lo = solve(c, 1.0, r, DEFAULT_TIE_TOL).unwrap().value;
            assert!(prev > lo * 3.0, "I(c, 50) = {prev} vs I(c, 1) = {lo}");
        }
    }

    #[test]
    fn curve_samples_shape() {
        let pts = curve_samples(0.5f64, 1.0, 2, 100);
        assert_eq!(pts.len(), 100);
        assert!(pts[0].delta > 0.0);
        assert_eq!(pts[99].delta, 1.0);
        for p in &pts {
            assert!((p.g - h_log(p.delta, 1.0) - f_alpha_prime(0.5, p.delta, 1.0, 2).unwrap()
                + p.h
                - p.h)
                .abs()
                < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn alpha_c_roundtrip(log_c in -6.0f64..6.0, r in 2u32..5) {
            let c = 10f64.powf(log_c);
            let back = c_of_alpha(alpha_of_c(c, r), r);
            prop_assert!((back - c).abs() / c < 1e-12);
        }

        #[test]
        fn solve_value_below_endpoints(log_c in -2.0f64..4.0, eps in 0.1f64..4.0, r in 2u32..4) {
            let c = 10f64.powf(log_c);
            let sol = solve(c, eps, r, DEFAULT_TIE_TOL).unwrap();
            let endpoint = phi(eps).unwrap();
            let localized = psi(r, eps).unwrap() * c.powf(1.0 / r as f64 - 1.0);
            prop_assert!(sol.value <= endpoint + 1e-12);
            prop_assert!(sol.value <= localized + 1e-12);
        }
    }
}
