//! Exact distributions for sums of star counts of independent binomials.
//!
//! The central object is `Y = Σ_i C(X_i, r)` with `X_i ~ Bin(N, p)`
//! i.i.d.; the cutoff variants `Y' = Σ_{X_i ≤ R} C(X_i, r)` and
//! `Y'' = Σ_{X_i > R} C(X_i, r)` split the sum at a degree cutoff `R`.
//! Distributions are pushforwards convolved in log space by binary
//! powering over dense arrays (the support of `C(Bin(N,p), r)` is small
//! and its gaps are bounded, so dense beats sparse maps here).

use crate::binom::{binomial_real, binomial_u128};
use crate::dist::{DiscreteDistribution, JointDistribution};
use crate::logspace::{log_add_exp, convolve_log_power};
use crate::oracles::OracleConfig;
use crate::{Error, Result};

/// Which terms of `Y` to keep: all of them, only those with `X_i` at or
/// below the cutoff (`Y'`), or only those above it (`Y''`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumPart {
    Whole,
    Small { cutoff: u64 },
    Large { cutoff: u64 },
}

/// Exact log-space pmf of `Bin(trials, p)` by the stable ratio
/// recurrence `pmf(k+1)/pmf(k) = (N-k)p / ((k+1)(1-p))`.
pub fn exact_binomial_pmf(trials: u64, p: f64) -> Result<DiscreteDistribution> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0,1], got {p}")));
    }
    if p == 0.0 {
        return Ok(DiscreteDistribution::point(0));
    }
    if p == 1.0 {
        return Ok(DiscreteDistribution::point(trials));
    }
    let log_p = p.ln();
    let log_q = (-p).ln_1p();
    let mut log_mass = Vec::with_capacity(trials as usize + 1);
    let mut lm = trials as f64 * log_q;
    log_mass.push(lm);
    for k in 0..trials {
        lm += ((trials - k) as f64).ln() - ((k + 1) as f64).ln() + log_p - log_q;
        log_mass.push(lm);
    }
    DiscreteDistribution::new((0..=trials).collect(), log_mass)
}

/// Star count of one coordinate: `C(x, r)` masked by the sum part.
fn term_value(x: u64, r: u32, part: SumPart) -> u64 {
    let keep = match part {
        SumPart::Whole => true,
        SumPart::Small { cutoff } => x <= cutoff,
        SumPart::Large { cutoff } => x > cutoff,
    };
    if keep {
        binomial_u128(x, r as u64) as u64
    } else {
        0
    }
}

/// Dense log-pmf of `C(X, r)` (masked per `part`) for `X ~ Bin(trials, p)`.
fn pushforward_dense(trials: u64, p: f64, r: u32, part: SumPart) -> Result<Vec<f64>> {
    let base = exact_binomial_pmf(trials, p)?;
    let max_value = (0..=trials)
        .map(|x| term_value(x, r, part))
        .max()
        .unwrap_or(0);
    let mut dense = vec![f64::NEG_INFINITY; max_value as usize + 1];
    for (&x, &lm) in base.support().iter().zip(base.log_masses()) {
        let v = term_value(x, r, part) as usize;
        dense[v] = log_add_exp(dense[v], lm);
    }
    Ok(dense)
}

/// Exact distribution of `Y`, `Y'` or `Y''` for `n` i.i.d. coordinates.
pub fn exact_y_distribution(
    n: u64,
    trials: u64,
    p: f64,
    r: u32,
    part: SumPart,
    cfg: &OracleConfig,
) -> Result<DiscreteDistribution> {
    let single = pushforward_dense(trials, p, r, part)?;
    let support_len = n
        .checked_mul(single.len() as u64 - 1)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::Domain("support size overflow".to_string()))?;
    if support_len > cfg.max_support {
        return Err(Error::Guard {
            name: "max_support",
            actual: support_len,
            limit: cfg.max_support,
        });
    }
    Ok(DiscreteDistribution::from_dense_log(&convolve_log_power(
        &single, n,
    )))
}

/// `log P(Y ≥ (1+ε)ν)` with `ν = n C(trials, r) p^r`, exactly.
pub fn exact_iid_tail(
    n: u64,
    trials: u64,
    p: f64,
    r: u32,
    eps: f64,
    cfg: &OracleConfig,
) -> Result<f64> {
    let nu = n as f64 * binomial_real::<f64>(trials, r as u64) * p.powi(r as i32);
    let dist = exact_y_distribution(n, trials, p, r, SumPart::Whole, cfg)?;
    Ok(dist.log_tail((1.0 + eps) * nu))
}

/// `log P(Y' ≥ (1+ε)ν)` — the truncated-sum tail targeted by the tilted
/// estimator. The threshold uses the full-sum mean `ν`.
pub fn exact_truncated_tail(
    n: u64,
    trials: u64,
    p: f64,
    r: u32,
    cutoff: u64,
    eps: f64,
    cfg: &OracleConfig,
) -> Result<f64> {
    let nu = n as f64 * binomial_real::<f64>(trials, r as u64) * p.powi(r as i32);
    let dist = exact_y_distribution(n, trials, p, r, SumPart::Small { cutoff }, cfg)?;
    Ok(dist.log_tail((1.0 + eps) * nu))
}

#[derive(Clone)]
struct Dense2 {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Dense2 {
    fn unit() -> Self {
        Dense2 {
            rows: 1,
            cols: 1,
            data: vec![0.0],
        }
    }
}

fn conv2(a: &Dense2, b: &Dense2) -> Dense2 {
    let rows = a.rows + b.rows - 1;
    let cols = a.cols + b.cols - 1;
    let mut hi = vec![f64::NEG_INFINITY; rows * cols];
    let visit = |out: &mut dyn FnMut(usize, f64)| {
        for ia in 0..a.rows {
            for ja in 0..a.cols {
                let la = a.data[ia * a.cols + ja];
                if la == f64::NEG_INFINITY {
                    continue;
                }
                for ib in 0..b.rows {
                    for jb in 0..b.cols {
                        let lb = b.data[ib * b.cols + jb];
                        if lb == f64::NEG_INFINITY {
                            continue;
                        }
                        out((ia + ib) * cols + (ja + jb), la + lb);
                    }
                }
            }
        }
    };
    visit(&mut |idx, s| {
        if s > hi[idx] {
            hi[idx] = s;
        }
    });
    let mut acc = vec![0.0f64; rows * cols];
    visit(&mut |idx, s| {
        acc[idx] += (s - hi[idx]).exp();
    });
    let data = hi
        .iter()
        .zip(&acc)
        .map(|(&h, &s)| if h == f64::NEG_INFINITY { h } else { h + s.ln() })
        .collect();
    Dense2 { rows, cols, data }
}

fn conv2_power(base: &Dense2, n: u64) -> Dense2 {
    let mut result = Dense2::unit();
    let mut square = base.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = conv2(&result, &square);
        }
        k >>= 1;
        if k > 0 {
            square = conv2(&square, &square);
        }
    }
    result
}

/// Exact joint distribution of `(Y', Y'')`. Each coordinate of the
/// underlying vector contributes to exactly one of the two sums, so the
/// per-coordinate joint law lives on the two axes and the full joint is
/// its `n`-fold 2-D convolution.
pub fn exact_joint_y_split(
    n: u64,
    trials: u64,
    p: f64,
    r: u32,
    cutoff: u64,
    cfg: &OracleConfig,
) -> Result<JointDistribution> {
    let base = exact_binomial_pmf(trials, p)?;
    let small_max = (0..=trials.min(cutoff))
        .map(|x| binomial_u128(x, r as u64) as u64)
        .max()
        .unwrap_or(0);
    let large_max = if cutoff >= trials {
        0
    } else {
        binomial_u128(trials, r as u64) as u64
    };
    let single = {
        let rows = small_max as usize + 1;
        let cols = large_max as usize + 1;
        let mut data = vec![f64::NEG_INFINITY; rows * cols];
        for (&x, &lm) in base.support().iter().zip(base.log_masses()) {
            let (i, j) = if x <= cutoff {
                (binomial_u128(x, r as u64) as usize, 0)
            } else {
                (0, binomial_u128(x, r as u64) as usize)
            };
            let idx = i * cols + j;
            data[idx] = log_add_exp(data[idx], lm);
        }
        Dense2 { rows, cols, data }
    };
    let cells = (n * small_max + 1)
        .checked_mul(n * large_max + 1)
        .ok_or_else(|| Error::Domain("joint support overflow".to_string()))?;
    if cells > cfg.max_support {
        return Err(Error::Guard {
            name: "max_support",
            actual: cells,
            limit: cfg.max_support,
        });
    }
    let full = conv2_power(&single, n);
    JointDistribution::from_dense(full.rows, full.cols, full.data)
}

/// Smallest possible `Σ m_i` over integer vectors in `[0, N]^n` subject
/// to `Σ m_i^r ≥ t`: equals `⌊t/N^r⌋ N + b` with
/// `b = min { m : m^r ≥ {t/N^r} N^r }`.
pub fn convex_sum_min(r: u32, trials: u64, n: u64, t: f64) -> Result<u64> {
    if r < 1 {
        return Err(Error::Domain("r must be at least 1".to_string()));
    }
    let cap = (trials as f64).powi(r as i32);
    if !(0.0..=(n as f64) * cap).contains(&t) {
        return Err(Error::Domain(format!(
            "t must lie in [0, n N^r] = [0, {}], got {t}",
            n as f64 * cap
        )));
    }
    if t <= 0.0 {
        return Ok(0);
    }
    let full = (t / cap).floor();
    let mut q = full as u64;
    let mut y = t - full * cap;
    // guard against rounding placing y just past a full block
    if y >= cap {
        q += 1;
        y = 0.0;
    }
    let pow = |m: u64| (m as f64).powi(r as i32);
    // smallest m in [0, N] with m^r >= y
    let mut lo = 0u64;
    let mut hi = trials;
    if pow(hi) < y {
        // only possible through rounding at the very top of the range
        return Ok(q * trials + trials);
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pow(mid) >= y {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(q * trials + lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn binomial_pmf_small_cases() {
        let d = exact_binomial_pmf(1, 0.3).unwrap();
        assert!((d.log_pmf(0) - 0.7f64.ln()).abs() < 1e-15);
        assert!((d.log_pmf(1) - 0.3f64.ln()).abs() < 1e-15);

        let d = exact_binomial_pmf(4, 0.5).unwrap();
        for (k, c) in [(0u64, 1.0f64), (1, 4.0), (2, 6.0), (3, 4.0), (4, 1.0)] {
            assert!((d.log_pmf(k) - (c / 16.0).ln()).abs() < 1e-13);
        }

        assert_eq!(exact_binomial_pmf(5, 0.0).unwrap().support(), &[0]);
        assert_eq!(exact_binomial_pmf(5, 1.0).unwrap().support(), &[5]);
    }

    #[test]
    fn binomial_pmf_normalizes_and_has_right_mean() {
        for &(n, p) in &[(10u64, 0.2f64), (30, 0.05), (50, 0.7)] {
            let d = exact_binomial_pmf(n, p).unwrap();
            assert!(d.log_total().abs() < 1e-12, "n={n} p={p}");
            assert!((d.mean() - n as f64 * p).abs() < 1e-10);
        }
    }

    #[test]
    fn y_distribution_hand_case() {
        // n = 2, N = 2, p = 1/2, r = 2: C(X,2) is 1 iff X = 2 (prob 1/4)
        let d = exact_y_distribution(2, 2, 0.5, 2, SumPart::Whole, &cfg()).unwrap();
        assert_eq!(d.support(), &[0, 1, 2]);
        assert!((d.log_pmf(0) - (9.0f64 / 16.0).ln()).abs() < 1e-13);
        assert!((d.log_pmf(1) - (6.0f64 / 16.0).ln()).abs() < 1e-13);
        assert!((d.log_pmf(2) - (1.0f64 / 16.0).ln()).abs() < 1e-13);
    }

    #[test]
    fn y_distribution_single_coordinate_is_pushforward() {
        let d = exact_y_distribution(1, 4, 0.3, 2, SumPart::Whole, &cfg()).unwrap();
        let base = exact_binomial_pmf(4, 0.3).unwrap();
        // C(x,2) maps {0,1} -> 0, 2 -> 1, 3 -> 3, 4 -> 6
        let zero = log_add_exp(base.log_pmf(0), base.log_pmf(1));
        assert!((d.log_pmf(0) - zero).abs() < 1e-13);
        assert!((d.log_pmf(1) - base.log_pmf(2)).abs() < 1e-13);
        assert!((d.log_pmf(3) - base.log_pmf(3)).abs() < 1e-13);
        assert!((d.log_pmf(6) - base.log_pmf(4)).abs() < 1e-13);
    }

    #[test]
    fn y_distribution_mean_is_nu() {
        let (n, trials, p, r) = (10u64, 9u64, 0.2f64, 2u32);
        let d = exact_y_distribution(n, trials, p, r, SumPart::Whole, &cfg()).unwrap();
        let nu = n as f64 * binomial_real::<f64>(trials, r as u64) * p.powi(r as i32);
        assert!((d.mean() - nu).abs() < 1e-9, "{} vs {nu}", d.mean());
        assert!(d.log_total().abs() < 1e-11);
    }

    #[test]
    fn iid_tail_trivial_cases() {
        // above the maximum support
        let v = exact_iid_tail(3, 4, 0.3, 2, 100.0, &cfg()).unwrap();
        assert_eq!(v, f64::NEG_INFINITY);
        // threshold 0 is the whole space
        let v = exact_iid_tail(3, 4, 0.3, 2, -1.0, &cfg()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn support_guard_fires() {
        let tight = OracleConfig {
            max_support: 10,
            ..OracleConfig::default()
        };
        let res = exact_y_distribution(10, 9, 0.2, 2, SumPart::Whole, &tight);
        assert!(matches!(res, Err(Error::Guard { name: "max_support", .. })));
    }

    #[test]
    fn joint_degenerate_cases() {
        // cutoff >= trials: Y'' is identically zero and the joint matches Y
        let j = exact_joint_y_split(3, 4, 0.3, 2, 4, &cfg()).unwrap();
        assert_eq!(j.cols(), 1);
        let marg = j.marginal_first();
        let y = exact_y_distribution(3, 4, 0.3, 2, SumPart::Whole, &cfg()).unwrap();
        assert_eq!(marg.support(), y.support());
        for (a, b) in marg.log_masses().iter().zip(y.log_masses()) {
            assert!((a - b).abs() < 1e-12);
        }
        // cutoff below r: Y' is identically zero
        let j = exact_joint_y_split(3, 4, 0.3, 2, 1, &cfg()).unwrap();
        assert_eq!(j.rows(), 1);
        assert!(j.log_total().abs() < 1e-12);
    }

    #[test]
    fn joint_splits_are_consistent_with_marginals() {
        let (n, trials, p, r, cutoff) = (3u64, 4u64, 0.3f64, 2u32, 2u64);
        let j = exact_joint_y_split(n, trials, p, r, cutoff, &cfg()).unwrap();
        assert!(j.log_total().abs() < 1e-12);
        let yp = exact_y_distribution(n, trials, p, r, SumPart::Small { cutoff }, &cfg()).unwrap();
        let ypp = exact_y_distribution(n, trials, p, r, SumPart::Large { cutoff }, &cfg()).unwrap();
        let m1 = j.marginal_first();
        let m2 = j.marginal_second();
        assert_eq!(m1.support(), yp.support());
        assert_eq!(m2.support(), ypp.support());
        for (a, b) in m1.log_masses().iter().zip(yp.log_masses()) {
            assert!((a - b).abs() < 1e-11);
        }
        for (a, b) in m2.log_masses().iter().zip(ypp.log_masses()) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn convex_sum_min_examples() {
        // brute-force witness: (3,1,0,0,0) has sum of squares 10 and sum 4
        assert_eq!(convex_sum_min(2, 3, 5, 10.0).unwrap(), 4);
        // exact multiples of N^r
        assert_eq!(convex_sum_min(2, 3, 5, 18.0).unwrap(), 6);
        assert_eq!(convex_sum_min(3, 4, 4, 128.0).unwrap(), 8);
        // zero target
        assert_eq!(convex_sum_min(2, 3, 5, 0.0).unwrap(), 0);
        // out of range
        assert!(convex_sum_min(2, 3, 5, 46.0).is_err());
        assert!(convex_sum_min(2, 3, 5, -1.0).is_err());
    }
}
