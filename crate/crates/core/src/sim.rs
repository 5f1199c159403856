//! Seeded Monte-Carlo estimators of the upper-tail probability.
//!
//! Three estimators: [`naive_tail`] samples the model directly;
//! [`tilted_tail`] importance-samples the truncated sum `Y'` under the
//! exponentially tilted per-coordinate law (tilt `h`, default
//! `log(1+ε)`); [`planted_tail_lower`] combines the exact probability of
//! planting hub vertices with a Monte-Carlo estimate of the residual
//! graph's typical behavior, yielding a stochastic lower bound.
//!
//! Determinism contract: all randomness is counter-based and keyed by
//! `(seed, sample index, variable index)`, accumulation is either exact
//! integer counting or fixed-order summation over the sample index, so
//! identical `(seed, parameters)` produce bit-identical estimates for
//! any worker count.

use serde::{Deserialize, Serialize};

use crate::binom::{binomial_real, binomial_u128};
use crate::dist::DiscreteDistribution;
use crate::logspace::log_sum_exp;
use crate::oracles::graphs::DegreeSequence;
use crate::oracles::iid::exact_binomial_pmf;
use crate::rate::{classify_regime, phi_order, star_rate_asymptotic, RegimeTag, StarParams};
use crate::rng::{CounterRng, SampleStream};
use crate::{Error, Result};

/// How many samples, which stream key, and how many workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOptions {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimOptions {
    pub fn new(samples: u64, seed: u64) -> Self {
        SimOptions {
            samples,
            seed,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Domain("samples must be at least 1".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Naive,
    Tilted,
    Planted,
}

/// A point estimate of a tail probability with its uncertainty.
///
/// `log_estimate` is `None` exactly when the estimate is zero (no hits);
/// otherwise it equals `log(estimate)` up to f64 rounding and is the
/// authoritative value for small tails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub estimate: f64,
    pub log_estimate: Option<f64>,
    pub std_error: f64,
    pub samples: u64,
    pub estimator: EstimatorKind,
    pub seed: u64,
}

/// The JSON record emitted for one simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub estimator: EstimatorKind,
    pub params: StarParams<f64>,
    pub seed: u64,
    pub samples: u64,
    pub estimate: f64,
    pub log_estimate: Option<f64>,
    pub std_error: f64,
}

impl SimRecord {
    pub fn new(params: &StarParams<f64>, estimate: &TailEstimate) -> Self {
        SimRecord {
            estimator: estimate.estimator,
            params: *params,
            seed: estimate.seed,
            samples: estimate.samples,
            estimate: estimate.estimate,
            log_estimate: estimate.log_estimate,
            std_error: estimate.std_error,
        }
    }
}

/// Which model [`naive_tail`] samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// Degrees of one `G(n,p)` draw; threshold `(1+ε)μ`.
    GnpDegrees,
    /// `n` i.i.d. `Bin(trials, p)` coordinates; threshold `(1+ε)ν`.
    IidBinomial,
}

/// Split the sample range into contiguous per-worker chunks and map each
/// on its own thread; results come back in chunk order.
fn run_chunks<T, F>(samples: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<u64>) -> T + Sync,
{
    let workers = workers.max(1).min(samples.max(1) as usize);
    let chunk = samples.div_ceil(workers as u64);
    let ranges: Vec<std::ops::Range<u64>> = (0..workers as u64)
        .map(|w| (w * chunk).min(samples)..((w + 1) * chunk).min(samples))
        .collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|range| scope.spawn(|| f(range)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

/// Degree sequence of one `G(n,p)` draw; edges are independent
/// Bernoulli(p) indexed by their lexicographic pair rank.
pub fn sample_gnp_degrees(n: u64, p: f64, stream: &SampleStream) -> DegreeSequence {
    let nu = n as usize;
    let mut degrees = vec![0u32; nu];
    let mut var = 0u64;
    for u in 0..nu {
        for v in u + 1..nu {
            if stream.bernoulli(var, p) {
                degrees[u] += 1;
                degrees[v] += 1;
            }
            var += 1;
        }
    }
    DegreeSequence::new(degrees).expect("sampled degrees are always valid")
}

/// `Σ_i C(d_i, r)` in exact integer arithmetic.
pub fn star_count(d: &DegreeSequence, r: u32) -> u128 {
    d.star_count(r)
}

/// Partition of the star count at a degree cutoff: the pair
/// `(Σ_{x ≤ R} C(x,r), Σ_{x > R} C(x,r))`.
pub fn split_sum<I: IntoIterator<Item = u64>>(values: I, r: u32, cutoff: u64) -> (u128, u128) {
    let mut small = 0u128;
    let mut large = 0u128;
    for x in values {
        let term = binomial_u128(x, r as u64);
        if x <= cutoff {
            small += term;
        } else {
            large += term;
        }
    }
    (small, large)
}

/// Wilson-interval half width at one sigma; zero when every sample hit
/// (the event was deterministic at these parameters).
fn wilson_std_error(hits: u64, samples: u64) -> f64 {
    if hits == samples {
        return 0.0;
    }
    let n = samples as f64;
    let p_hat = hits as f64 / n;
    (p_hat * (1.0 - p_hat) / n + 1.0 / (4.0 * n * n)).sqrt() / (1.0 + 1.0 / n)
}

fn estimate_from_hits(hits: u64, opts: &SimOptions, estimator: EstimatorKind) -> TailEstimate {
    let estimate = hits as f64 / opts.samples as f64;
    TailEstimate {
        estimate,
        log_estimate: (hits > 0).then(|| estimate.ln()),
        std_error: wilson_std_error(hits, opts.samples),
        samples: opts.samples,
        estimator,
        seed: opts.seed,
    }
}

/// Direct estimator of `P(count ≥ (1+ε)·mean)` for either model.
pub fn naive_tail(
    params: &StarParams<f64>,
    eps: f64,
    mode: SampleMode,
    opts: &SimOptions,
) -> Result<TailEstimate> {
    opts.validate()?;
    if eps < -1.0 {
        return Err(Error::Domain(format!("eps must be at least -1, got {eps}")));
    }
    let threshold = match mode {
        SampleMode::GnpDegrees => (1.0 + eps) * params.mu,
        SampleMode::IidBinomial => (1.0 + eps) * params.nu,
    };
    let rng = CounterRng::new(opts.seed);
    let hits: u64 = match mode {
        SampleMode::GnpDegrees => run_chunks(opts.samples, opts.workers, |range| {
            let mut hits = 0u64;
            for s in range {
                let d = sample_gnp_degrees(params.n, params.p, &rng.sample_stream(s));
                if d.star_count(params.r) as f64 >= threshold {
                    hits += 1;
                }
            }
            hits
        })
        .into_iter()
        .sum(),
        SampleMode::IidBinomial => {
            let pmf = exact_binomial_pmf(params.trials, params.p)?;
            let values = pmf.support().to_vec();
            let cdf = pmf.cdf();
            run_chunks(opts.samples, opts.workers, |range| {
                let mut hits = 0u64;
                for s in range {
                    let stream = rng.sample_stream(s);
                    let mut total = 0u128;
                    for i in 0..params.n {
                        let x = stream.from_cdf(i, &values, &cdf);
                        total += binomial_u128(x, params.r as u64);
                    }
                    if total as f64 >= threshold {
                        hits += 1;
                    }
                }
                hits
            })
            .into_iter()
            .sum()
        }
    };
    Ok(estimate_from_hits(hits, opts, EstimatorKind::Naive))
}

/// The truncated per-coordinate law `ζ` with its exponential tilt.
///
/// `ζ_0 = P(X = 0) + P(X > R)` and `ζ_j = P(X = j)` for `1 ≤ j ≤ R`,
/// where `X ~ Bin(trials, p)`; the tilted law has mass proportional to
/// `exp(h C(j,r)) ζ_j` with normalizer `exp(Λ(h))`.
#[derive(Debug, Clone)]
pub struct TiltedBinomial {
    pub trials: u64,
    pub p: f64,
    pub r: u32,
    pub h: f64,
    pub cutoff: u64,
    /// The truncated (untilted) law.
    pub zeta: DiscreteDistribution,
    /// `Λ(h) = log E exp(h C(Z,r))`.
    pub log_lambda: f64,
    values: Vec<u64>,
    stars: Vec<u64>,
    tilted_cdf: Vec<f64>,
}

impl TiltedBinomial {
    pub fn new(trials: u64, p: f64, r: u32, h: f64, cutoff: u64) -> Result<Self> {
        if cutoff < r as u64 {
            return Err(Error::Domain(format!(
                "cutoff R = {cutoff} is below r = {r}; the truncated sum would be degenerate"
            )));
        }
        if !h.is_finite() {
            return Err(Error::Domain(format!("tilt h must be finite, got {h}")));
        }
        let base = exact_binomial_pmf(trials, p)?;
        let top = cutoff.min(trials);
        let mut dense = vec![f64::NEG_INFINITY; top as usize + 1];
        // all mass above the cutoff collapses onto zero
        let above: Vec<f64> = base
            .support()
            .iter()
            .zip(base.log_masses())
            .filter(|(&x, _)| x > cutoff)
            .map(|(_, &lm)| lm)
            .collect();
        let mut zero_terms = above;
        zero_terms.push(base.log_pmf(0));
        dense[0] = log_sum_exp(&zero_terms);
        for j in 1..=top {
            dense[j as usize] = base.log_pmf(j);
        }
        let zeta = DiscreteDistribution::from_dense_log(&dense);
        let values = zeta.support().to_vec();
        let stars: Vec<u64> = values
            .iter()
            .map(|&j| binomial_u128(j, r as u64) as u64)
            .collect();
        let tilted_log: Vec<f64> = zeta
            .log_masses()
            .iter()
            .zip(&stars)
            .map(|(&lm, &s)| lm + h * s as f64)
            .collect();
        let log_lambda = log_sum_exp(&tilted_log);
        let mut acc = 0.0;
        let mut tilted_cdf = Vec::with_capacity(tilted_log.len());
        for &lt in &tilted_log {
            acc += (lt - log_lambda).exp();
            tilted_cdf.push(acc);
        }
        if let Some(last) = tilted_cdf.last_mut() {
            *last = 1.0f64.max(*last);
        }
        Ok(TiltedBinomial {
            trials,
            p,
            r,
            h,
            cutoff,
            zeta,
            log_lambda,
            values,
            stars,
            tilted_cdf,
        })
    }

    /// Draws one coordinate from the tilted law and returns its star
    /// count `C(Z, r)`.
    fn draw_stars(&self, stream: &SampleStream, var: u64) -> u64 {
        let u = stream.uniform(var);
        let idx = self
            .tilted_cdf
            .partition_point(|&c| c <= u)
            .min(self.values.len() - 1);
        self.stars[idx]
    }

    /// `Λ'(h)` — the tilted mean of `C(Z, r)`.
    pub fn tilted_mean_stars(&self) -> f64 {
        let tilted_log: Vec<f64> = self
            .zeta
            .log_masses()
            .iter()
            .zip(&self.stars)
            .map(|(&lm, &s)| lm + self.h * s as f64 - self.log_lambda)
            .collect();
        tilted_log
            .iter()
            .zip(&self.stars)
            .map(|(&lt, &s)| s as f64 * lt.exp())
            .sum()
    }
}

/// The tractable tilt `h_ε = log(1+ε)`.
pub fn default_tilt(eps: f64) -> f64 {
    eps.ln_1p()
}

/// Finite-`n` instantiation of the cutoff: `R = ⌈η M⌉` with
/// `η = log^{-2}(1/p)` and `M = min{(r! ε ν)^{1/r}, trials}`, clamped to
/// `[r, trials]`.
pub fn default_cutoff(n: u64, trials: u64, p: f64, r: u32, eps: f64) -> u64 {
    let nu = n as f64 * binomial_real::<f64>(trials, r as u64) * p.powi(r as i32);
    let rf: f64 = (1..=r as u64).product::<u64>() as f64;
    let m = (rf * eps * nu).powf(1.0 / r as f64).min(trials as f64);
    let eta = (1.0 / p).ln().powi(-2);
    ((eta * m).ceil() as u64).clamp(r as u64, trials)
}

/// Numerically optimized tilt: solves `Λ'(h) = t` for the per-coordinate
/// target `t = (1+ε) C(trials, r) p^r` by bisection.
pub fn optimal_tilt(trials: u64, p: f64, r: u32, cutoff: u64, eps: f64) -> Result<f64> {
    let target = (1.0 + eps) * binomial_real::<f64>(trials, r as u64) * p.powi(r as i32);
    let sup = binomial_u128(cutoff.min(trials), r as u64) as f64;
    if target >= sup {
        return Err(Error::Domain(format!(
            "tilted mean cannot reach t = {target}; truncated maximum is {sup}"
        )));
    }
    let mean_at = |h: f64| -> Result<f64> {
        Ok(TiltedBinomial::new(trials, p, r, h, cutoff)?.tilted_mean_stars())
    };
    let mut hi = 1.0f64;
    let mut guard = 0;
    while mean_at(hi)? < target && guard < 64 {
        hi *= 2.0;
        guard += 1;
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean_at(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The exponential-moment upper bound `n (Λ(h) - h t)` on
/// `log P(Y' ≥ (1+ε)ν)`, with `t = (1+ε) C(trials,r) p^r`.
pub fn exp_moment_upper_log(n: u64, tb: &TiltedBinomial, eps: f64) -> f64 {
    let t = (1.0 + eps) * binomial_real::<f64>(tb.trials, tb.r as u64) * tb.p.powi(tb.r as i32);
    n as f64 * (tb.log_lambda - tb.h * t)
}

/// Importance-sampling estimator of `P(Y' ≥ (1+ε)ν)`: each coordinate is
/// drawn from the tilted law and each hitting sample carries weight
/// `exp(n Λ(h) - h Y')`. Unbiased for the exact truncated tail.
pub fn tilted_tail(
    n: u64,
    trials: u64,
    p: f64,
    r: u32,
    eps: f64,
    cutoff: u64,
    tilt: Option<f64>,
    opts: &SimOptions,
) -> Result<TailEstimate> {
    opts.validate()?;
    let h = tilt.unwrap_or_else(|| default_tilt(eps));
    let tb = TiltedBinomial::new(trials, p, r, h, cutoff)?;
    let nu = n as f64 * binomial_real::<f64>(trials, r as u64) * p.powi(r as i32);
    let threshold = (1.0 + eps) * nu;
    let rng = CounterRng::new(opts.seed);
    let log_weight_base = n as f64 * tb.log_lambda;

    // per-sample log weights in sample order (NEG_INFINITY = miss), so the
    // reduction below is independent of the worker partition
    let chunks = run_chunks(opts.samples, opts.workers, |range| {
        let mut out = Vec::with_capacity((range.end - range.start) as usize);
        for s in range {
            let stream = rng.sample_stream(s);
            let mut y_small = 0u64;
            for i in 0..n {
                y_small += tb.draw_stars(&stream, i);
            }
            out.push(if y_small as f64 >= threshold {
                log_weight_base - h * y_small as f64
            } else {
                f64::NEG_INFINITY
            });
        }
        out
    });
    let log_weights: Vec<f64> = chunks.into_iter().flatten().collect();

    let hi = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return Ok(TailEstimate {
            estimate: 0.0,
            log_estimate: None,
            std_error: 0.0,
            samples: opts.samples,
            estimator: EstimatorKind::Tilted,
            seed: opts.seed,
        });
    }
    let mut s1 = 0.0f64;
    let mut s2 = 0.0f64;
    for &lw in &log_weights {
        if lw > f64::NEG_INFINITY {
            let w = (lw - hi).exp();
            s1 += w;
            s2 += w * w;
        }
    }
    let n_samples = opts.samples as f64;
    let log_estimate = hi + (s1 / n_samples).ln();
    // delta method on the weighted mean, in the shifted scale
    let var_scaled = ((s2 - s1 * s1 / n_samples) / (n_samples - 1.0).max(1.0) / n_samples)
        .max(0.0);
    let std_error = hi.exp() * var_scaled.sqrt();
    Ok(TailEstimate {
        estimate: log_estimate.exp(),
        log_estimate: Some(log_estimate),
        std_error,
        samples: opts.samples,
        estimator: EstimatorKind::Tilted,
        seed: opts.seed,
    })
}

/// Planting parameters of the lower-bound construction: `a` full hubs
/// plus one vertex of degree at least `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedConfig {
    /// Number of hub vertices forced to full degree.
    pub a: u64,
    /// Real-valued degree threshold of the partial hub.
    pub b: f64,
    /// Excess slack `δ` of the construction.
    pub delta: f64,
}

impl PlantedConfig {
    /// `a = ⌊(ε+δ)ρ⌋`; `b` per the regime of the instance: the root
    /// scale `(r!(ε+δ)μ)^{1/r}` below the fractional range,
    /// `{(ε+δ)ρ}^{1/r} (n-1)` inside it, and `n-1` above it.
    pub fn from_instance(
        params: &StarParams<f64>,
        eps: f64,
        delta: f64,
        window: f64,
    ) -> Result<Self> {
        if !(eps > 0.0) || !(delta > 0.0) {
            return Err(Error::Domain(format!(
                "eps and delta must be positive, got eps={eps}, delta={delta}"
            )));
        }
        let boosted = eps + delta;
        let a = (boosted * params.rho).floor() as u64;
        let cap = (params.n - 1) as f64;
        let rf: f64 = (1..=params.r as u64).product::<u64>() as f64;
        let b = match classify_regime(params, window) {
            RegimeTag::PoissonTransition(_) | RegimeTag::Intermediate => {
                (rf * boosted * params.mu).powf(1.0 / params.r as f64)
            }
            RegimeTag::Fractional(rho) => {
                let x = boosted * rho;
                (x - x.floor()).powf(1.0 / params.r as f64) * cap
            }
            RegimeTag::Dense => cap,
        };
        Ok(PlantedConfig {
            a,
            b: b.min(cap),
            delta,
        })
    }

    /// Integer degree threshold `⌈b⌉` actually planted.
    pub fn degree_threshold(&self) -> u64 {
        self.b.ceil() as u64
    }
}

/// `log [ p^{a(n-1) - C(a,2)} P(Bin(n-1-a, p) ≥ ⌈b⌉ - a) ]` — the exact
/// probability of the planted event.
pub fn planted_log_exact_factor(params: &StarParams<f64>, config: &PlantedConfig) -> Result<f64> {
    let a = config.a;
    if a + 1 >= params.n {
        return Err(Error::Domain(format!(
            "planting a = {a} hubs leaves no residual graph on n = {} vertices",
            params.n
        )));
    }
    let hub_edges = a as f64 * (params.n - 1) as f64 - binomial_u128(a, 2) as f64;
    let log_hub = hub_edges * params.p.ln();
    let need = config.degree_threshold() as i64 - a as i64;
    let log_partial = if need <= 0 {
        0.0
    } else {
        exact_binomial_pmf(params.n - 1 - a, params.p)?.log_tail(need as f64)
    };
    Ok(log_hub + log_partial)
}

/// The planted estimate with its pieces, for diagnostics and cross
/// checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedBreakdown {
    pub config: PlantedConfig,
    /// Exact log-probability of the planted event.
    pub log_exact_factor: f64,
    /// Monte-Carlo estimate of `P(X̂ ≥ (1-δ/2) μ̂)` on the residual graph.
    pub residual: TailEstimate,
    /// Product of the two factors.
    pub combined: TailEstimate,
}

/// Stochastic lower-bound estimator from the planted-hub construction,
/// with the exact factor and the residual estimate broken out.
pub fn planted_tail_breakdown(
    params: &StarParams<f64>,
    eps: f64,
    delta: f64,
    opts: &SimOptions,
) -> Result<PlantedBreakdown> {
    opts.validate()?;
    let config = PlantedConfig::from_instance(params, eps, delta, crate::rate::DEFAULT_REGIME_WINDOW)?;
    let log_exact_factor = planted_log_exact_factor(params, &config)?;
    let residual_n = params.n - config.a - 1;
    if residual_n <= params.r as u64 {
        return Err(Error::Domain(format!(
            "residual graph on {residual_n} vertices cannot hold an {}-star",
            params.r
        )));
    }
    let residual_params = StarParams::new(params.r, residual_n, params.p)?;
    // P(X̂ ≥ (1 - δ/2) μ̂) is the naive threshold at eps' = -δ/2
    let residual = naive_tail(
        &residual_params,
        -delta / 2.0,
        SampleMode::GnpDegrees,
        opts,
    )?;
    let factor = log_exact_factor.exp();
    let log_estimate = residual
        .log_estimate
        .map(|lr| log_exact_factor + lr);
    let combined = TailEstimate {
        estimate: log_estimate.map_or(0.0, f64::exp),
        log_estimate,
        std_error: factor * residual.std_error,
        samples: opts.samples,
        estimator: EstimatorKind::Planted,
        seed: opts.seed,
    };
    Ok(PlantedBreakdown {
        config,
        log_exact_factor,
        residual,
        combined,
    })
}

/// The combined planted lower-bound estimate.
pub fn planted_tail_lower(
    params: &StarParams<f64>,
    eps: f64,
    delta: f64,
    opts: &SimOptions,
) -> Result<TailEstimate> {
    Ok(planted_tail_breakdown(params, eps, delta, opts)?.combined)
}

/// Empirical check of the negative-association inequality
/// `P(Y' ≥ t, Y'' ≥ u) ≤ P(Y' ≥ t) P(Y'' ≥ u)` in the i.i.d. model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// z-score of `lhs - rhs` against a rough delta-method error; a
    /// diagnostic, not a test statistic (the two sides share samples).
    pub z: f64,
    pub joint_hits: u64,
    pub first_hits: u64,
    pub second_hits: u64,
    pub samples: u64,
    pub seed: u64,
}

pub fn na_empirical_check(
    n: u64,
    trials: u64,
    p: f64,
    r: u32,
    cutoff: u64,
    t: f64,
    u: f64,
    opts: &SimOptions,
) -> Result<NaCheck> {
    opts.validate()?;
    let pmf = exact_binomial_pmf(trials, p)?;
    let values = pmf.support().to_vec();
    let cdf = pmf.cdf();
    let rng = CounterRng::new(opts.seed);
    let triples = run_chunks(opts.samples, opts.workers, |range| {
        let mut joint = 0u64;
        let mut first = 0u64;
        let mut second = 0u64;
        for s in range {
            let stream = rng.sample_stream(s);
            let draws = (0..n).map(|i| stream.from_cdf(i, &values, &cdf));
            let (yp, ypp) = split_sum(draws, r, cutoff);
            let hit_p = yp as f64 >= t;
            let hit_pp = ypp as f64 >= u;
            first += u64::from(hit_p);
            second += u64::from(hit_pp);
            joint += u64::from(hit_p && hit_pp);
        }
        (joint, first, second)
    });
    let (joint_hits, first_hits, second_hits) = triples
        .into_iter()
        .fold((0, 0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1, acc.2 + x.2));
    let nf = opts.samples as f64;
    let lhs = joint_hits as f64 / nf;
    let pa = first_hits as f64 / nf;
    let pb = second_hits as f64 / nf;
    let rhs = pa * pb;
    let var = lhs * (1.0 - lhs) / nf
        + (pb * pb * pa * (1.0 - pa) + pa * pa * pb * (1.0 - pb)) / nf;
    let z = if var > 0.0 { (lhs - rhs) / var.sqrt() } else { 0.0 };
    Ok(NaCheck {
        lhs,
        rhs,
        z,
        joint_hits,
        first_hits,
        second_hits,
        samples: opts.samples,
        seed: opts.seed,
    })
}

/// Side-by-side comparison of a measured tail against the asymptotic
/// prediction; purely diagnostic, no pass/fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateComparison {
    pub neg_log_estimate: f64,
    pub tag: RegimeTag<f64>,
    /// The selected case of the four-case rate.
    pub predicted: f64,
    pub phi_order: f64,
    pub ratio_to_predicted: f64,
    pub ratio_to_phi_order: f64,
}

pub fn rate_comparison(
    params: &StarParams<f64>,
    eps: f64,
    estimate: &TailEstimate,
    window: f64,
) -> Result<RateComparison> {
    let log_estimate = estimate.log_estimate.ok_or_else(|| {
        Error::Domain("rate comparison needs a positive estimate".to_string())
    })?;
    let neg_log = -log_estimate;
    let tag = classify_regime(params, window);
    let predicted = star_rate_asymptotic(params, eps, &tag)?;
    let order = phi_order(params);
    Ok(RateComparison {
        neg_log_estimate: neg_log,
        tag,
        predicted,
        phi_order: order,
        ratio_to_predicted: neg_log / predicted,
        ratio_to_phi_order: neg_log / order,
    })
}
