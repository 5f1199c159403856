//! Binomial coefficients, exact and in log space.
//!
//! Small arguments use exact integer arithmetic so the desk-scale oracles
//! stay bit-exact; larger arguments switch to log-gamma. The switchover
//! is at `n = 20`, below which `C(n,k)` fits a `u64` with room to spare.

use crate::real::Real;

/// Largest `n` for which `log_binomial` uses exact integer arithmetic.
pub const EXACT_BINOM_LIMIT: u64 = 20;

/// Exact `C(n, k)` in `u128`; 0 when `k > n`.
///
/// Intermediate products of `t` consecutive integers are divisible by
/// `t!`, so the divide-as-you-go loop never truncates.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// `C(n, k)` as a scalar, exact below the integer limit, via the product
/// formula otherwise (exact until the result exceeds 2^53).
pub fn binomial_real<R: Real>(n: u64, k: u64) -> R {
    if k > n {
        return R::zero();
    }
    if n <= EXACT_BINOM_LIMIT {
        return R::from_count(binomial_u128(n, k) as u64);
    }
    let k = k.min(n - k);
    let mut c = R::one();
    for i in 0..k {
        c = c * R::from_count(n - i) / R::from_count(i + 1);
    }
    c
}

/// `log C(n, k)`; `-inf` when `k > n`.
pub fn log_binomial<R: Real>(n: u64, k: u64) -> R {
    if k > n {
        return R::neg_infinity();
    }
    if n <= EXACT_BINOM_LIMIT {
        return R::from_count(binomial_u128(n, k) as u64).ln();
    }
    let nr = R::from_count(n);
    let kr = R::from_count(k);
    (nr + R::one()).lgamma() - (kr + R::one()).lgamma() - (nr - kr + R::one()).lgamma()
}

/// `r!` as a scalar; `r` is a star arm count, always single digits here.
pub fn factorial_real<R: Real>(r: u32) -> R {
    let mut f = R::one();
    for i in 2..=r as u64 {
        f = f * R::from_count(i);
    }
    f
}
