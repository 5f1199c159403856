//! Log-domain arithmetic helpers.
//!
//! Tail probabilities here underflow `f64` long before the interesting
//! parameter range, so every probability in this crate is carried as a
//! natural logarithm and combined with the usual log-sum-exp tricks.

use crate::real::Real;

/// `log(e^a + e^b)` without leaving the log domain.
pub fn log_add_exp<R: Real>(a: R, b: R) -> R {
    if a == R::neg_infinity() {
        return b;
    }
    if b == R::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log Σ e^{x_i}` over a slice; `-inf` for an empty slice.
pub fn log_sum_exp<R: Real>(xs: &[R]) -> R {
    let mut hi = R::neg_infinity();
    for &x in xs {
        if x > hi {
            hi = x;
        }
    }
    if hi == R::neg_infinity() || hi.is_infinite() {
        return hi;
    }
    let mut acc = R::zero();
    for &x in xs {
        acc += (x - hi).exp();
    }
    hi + acc.ln()
}

/// Dense log-space convolution: `out[s] = log Σ_{i+j=s} e^{a[i] + b[j]}`.
///
/// Two passes (max, then shifted accumulation) keep every output cell at
/// full precision regardless of the dynamic range of the inputs.
pub fn convolve_log(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = a.len() + b.len() - 1;
    let mut hi = vec![f64::NEG_INFINITY; len];
    for (i, &ai) in a.iter().enumerate() {
        if ai == f64::NEG_INFINITY {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == f64::NEG_INFINITY {
                continue;
            }
            let s = ai + bj;
            if s > hi[i + j] {
                hi[i + j] = s;
            }
        }
    }
    let mut acc = vec![0.0f64; len];
    for (i, &ai) in a.iter().enumerate() {
        if ai == f64::NEG_INFINITY {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == f64::NEG_INFINITY {
                continue;
            }
            acc[i + j] += (ai + bj - hi[i + j]).exp();
        }
    }
    hi.iter()
        .zip(&acc)
        .map(|(&h, &s)| if h == f64::NEG_INFINITY { h } else { h + s.ln() })
        .collect()
}

/// `n`-fold log-space self-convolution by binary powering.
pub fn convolve_log_power(base: &[f64], n: u64) -> Vec<f64> {
    let mut result = vec![0.0f64]; // point mass at zero
    let mut square = base.to_vec();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = convolve_log(&result, &square);
        }
        k >>= 1;
        if k > 0 {
            square = convolve_log(&square, &square);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_basics() {
        let v = log_add_exp(0.0f64, 0.0);
        assert!((v - 2.0f64.ln()).abs() < 1e-15);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, -3.0), -3.0);
        assert_eq!(log_add_exp(-3.0f64, f64::NEG_INFINITY), -3.0);
    }

    #[test]
    fn log_sum_exp_handles_wide_range() {
        let xs = [-1000.0f64, -1000.0, -1000.0, -1000.0];
        let v = log_sum_exp(&xs);
        assert!((v - (-1000.0 + 4.0f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp::<f64>(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn convolution_matches_fair_coin() {
        // Bin(1, 1/2) convolved with itself twice = Bin(3, 1/2).
        let half = 0.5f64.ln();
        let coin = vec![half, half];
        let out = convolve_log_power(&coin, 3);
        let expected = [1.0f64, 3.0, 3.0, 1.0].map(|c| (c / 8.0).ln());
        assert_eq!(out.len(), 4);
        for (o, e) in out.iter().zip(expected.iter()) {
            assert!((o - e).abs() < 1e-14);
        }
    }

    #[test]
    fn convolution_skips_holes() {
        // support {0, 2} with equal mass; the square has support {0, 2, 4}.
        let half = 0.5f64.ln();
        let a = vec![half, f64::NEG_INFINITY, half];
        let sq = convolve_log(&a, &a);
        assert_eq!(sq.len(), 5);
        assert!((sq[0] - 0.25f64.ln()).abs() < 1e-14);
        assert_eq!(sq[1], f64::NEG_INFINITY);
        assert!((sq[2] - 0.5f64.ln()).abs() < 1e-14);
        assert_eq!(sq[3], f64::NEG_INFINITY);
        assert!((sq[4] - 0.25f64.ln()).abs() < 1e-14);
    }
}
