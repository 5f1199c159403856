//! Exact graph-side oracles: enumeration by degree sequence, the
//! asymptotic enumeration formula, degree-sequence measures and the
//! exhaustive `G(n,p)` star-count tail.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::binom::{binomial_real, binomial_u128, log_binomial};
use crate::dist::DiscreteDistribution;
use crate::logspace::log_sum_exp;
use crate::oracles::OracleConfig;
use crate::{Error, Result};

/// A prescribed degree sequence on `n` labeled vertices.
///
/// Construction only enforces `d_i ≤ n-1`; odd-sum sequences are allowed
/// (they are realized by no graph, which several oracles must be able to
/// report rather than reject).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        let n = degrees.len();
        if n == 0 {
            return Err(Error::Domain("degree sequence must be non-empty".to_string()));
        }
        if let Some(&d) = degrees.iter().find(|&&d| d as usize >= n) {
            return Err(Error::Domain(format!(
                "degree {d} is impossible on {n} vertices"
            )));
        }
        Ok(DegreeSequence { degrees })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree_sum(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    pub fn has_even_sum(&self) -> bool {
        self.degree_sum() % 2 == 0
    }

    /// Edge count `m = (Σ d_i)/2`; `None` for odd sums.
    pub fn edge_count(&self) -> Option<u64> {
        let s = self.degree_sum();
        (s % 2 == 0).then_some(s / 2)
    }

    /// Edge density `λ = m / C(n,2)` as an exact rational.
    pub fn edge_density(&self) -> Option<Ratio<u64>> {
        let pairs = binomial_u128(self.n() as u64, 2) as u64;
        if pairs == 0 {
            return None;
        }
        self.edge_count().map(|m| Ratio::new(m, pairs))
    }

    pub fn edge_density_f64(&self) -> Option<f64> {
        self.edge_density()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
    }

    /// Total star count `Σ_i C(d_i, r)` of any graph realizing this
    /// sequence, in exact integer arithmetic.
    pub fn star_count(&self, r: u32) -> u128 {
        self.degrees
            .iter()
            .map(|&d| binomial_u128(d as u64, r as u64))
            .sum()
    }
}

/// Erdős–Gallai test: is this sequence the degree sequence of some
/// simple graph? (Even sum plus the `n` partial-sum inequalities.)
pub fn erdos_gallai_graphical(degrees: &[u32]) -> bool {
    if degrees.is_empty() {
        return true;
    }
    let sum: u64 = degrees.iter().map(|&d| d as u64).sum();
    if sum % 2 != 0 {
        return false;
    }
    let mut sorted: Vec<u64> = degrees.iter().map(|&d| d as u64).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut prefix = 0u64;
    for k in 1..=sorted.len() {
        prefix += sorted[k - 1];
        let k64 = k as u64;
        let slack: u64 = sorted[k..].iter().map(|&d| d.min(k64)).sum();
        if prefix > k64 * (k64 - 1) + slack {
            return false;
        }
    }
    true
}

/// Exact number of labeled graphs realizing `d`, by backtracking over
/// the vertex pairs in lexicographic order.
///
/// Pruning: residual degree of either endpoint may never exceed its
/// count of undecided incident pairs, and whenever a vertex row
/// completes, the residual sequence on the remaining vertices (whose
/// undecided pairs form a complete graph) must be graphical.
pub fn count_graphs_with_degrees(d: &DegreeSequence, cfg: &OracleConfig) -> Result<u64> {
    let n = d.n();
    if n as u32 > cfg.max_enum_vertices {
        return Err(Error::Guard {
            name: "max_enum_vertices",
            actual: n as u64,
            limit: cfg.max_enum_vertices as u64,
        });
    }
    if !d.has_even_sum() {
        return Ok(0);
    }
    if !erdos_gallai_graphical(d.degrees()) {
        return Ok(0);
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut residual: Vec<u32> = d.degrees().to_vec();
    let mut free: Vec<u32> = vec![(n - 1) as u32; n];
    count_recursive(0, &pairs, &mut residual, &mut free)
}

fn count_recursive(
    idx: usize,
    pairs: &[(usize, usize)],
    residual: &mut [u32],
    free: &mut [u32],
) -> Result<u64> {
    if idx == pairs.len() {
        return Ok(u64::from(residual.iter().all(|&x| x == 0)));
    }
    let (u, v) = pairs[idx];
    let row_complete = v == residual.len() - 1;
    free[u] -= 1;
    free[v] -= 1;
    let mut total = 0u64;
    // no edge between u and v
    if residual[u] <= free[u] && residual[v] <= free[v] {
        if !row_complete || erdos_gallai_graphical_u32(&residual[u + 1..]) {
            total += count_recursive(idx + 1, pairs, residual, free)?;
        }
    }
    // edge between u and v
    if residual[u] > 0 && residual[v] > 0 {
        residual[u] -= 1;
        residual[v] -= 1;
        if residual[u] <= free[u] && residual[v] <= free[v] {
            if !row_complete || erdos_gallai_graphical_u32(&residual[u + 1..]) {
                total += count_recursive(idx + 1, pairs, residual, free)?;
            }
        }
        residual[u] += 1;
        residual[v] += 1;
    }
    free[u] += 1;
    free[v] += 1;
    Ok(total)
}

fn erdos_gallai_graphical_u32(degrees: &[u32]) -> bool {
    erdos_gallai_graphical(degrees)
}

/// Asymptotic enumeration estimate for `g(d)` with its applicability
/// diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McKayWormaldEstimate {
    /// Log of the formula value; `-inf` when degenerate.
    pub log_count: f64,
    /// Edge density hit 0 or 1, where the formula is undefined.
    pub degenerate: bool,
    /// Whether the finite-`n` proxy `max_i d_i ≤ m^{1/4}` of the
    /// formula's validity condition holds.
    pub max_degree_condition: bool,
}

/// Evaluates `√2 exp(1/4 - (γ_n/(2λ(1-λ)))²) (λ^λ (1-λ)^{1-λ})^{C(n,2)}
/// Π C(n-1, d_i)` in log space, with
/// `γ_n = (n-1)^{-2} (Σ d_i² - n d̄²)`.
pub fn mckay_wormald_estimate(d: &DegreeSequence) -> McKayWormaldEstimate {
    let n = d.n() as f64;
    let pairs = binomial_real::<f64>(d.n() as u64, 2);
    let m = d.degree_sum() as f64 / 2.0;
    let lambda = if pairs > 0.0 { m / pairs } else { 0.0 };
    let max_degree = d.degrees().iter().copied().max().unwrap_or(0) as f64;
    let max_degree_condition = max_degree <= m.powf(0.25);
    if lambda <= 0.0 || lambda >= 1.0 {
        return McKayWormaldEstimate {
            log_count: f64::NEG_INFINITY,
            degenerate: true,
            max_degree_condition,
        };
    }
    let mean_degree = d.degree_sum() as f64 / n;
    let sum_sq: f64 = d.degrees().iter().map(|&x| (x as f64) * (x as f64)).sum();
    let gamma_n = (sum_sq - n * mean_degree * mean_degree) / ((n - 1.0) * (n - 1.0));
    let gamma_term = gamma_n / (2.0 * lambda * (1.0 - lambda));
    let log_entropy = lambda * lambda.ln() + (1.0 - lambda) * (1.0 - lambda).ln();
    let log_products: f64 = d
        .degrees()
        .iter()
        .map(|&di| log_binomial::<f64>(d.n() as u64 - 1, di as u64))
        .sum();
    let log_count =
        0.5 * 2.0f64.ln() + 0.25 - gamma_term * gamma_term + pairs * log_entropy + log_products;
    McKayWormaldEstimate {
        log_count,
        degenerate: false,
        max_degree_condition,
    }
}

/// Log-probabilities of one degree vector under the two measures being
/// compared: the degree sequence of `G(n,p)` (`log P_D`) and the i.i.d.
/// binomial vector (`log P_B`).
pub fn exact_degree_measures(
    p: f64,
    d: &DegreeSequence,
    cfg: &OracleConfig,
) -> Result<(f64, f64)> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p must lie in (0,1), got {p}")));
    }
    let n = d.n() as u64;
    let g = count_graphs_with_degrees(d, cfg)?;
    let pairs = binomial_u128(n, 2) as u64;
    let log_pd = match (g, d.edge_count()) {
        (0, _) | (_, None) => f64::NEG_INFINITY,
        (g, Some(m)) => {
            (g as f64).ln() + m as f64 * p.ln() + (pairs - m) as f64 * (-p).ln_1p()
        }
    };
    let log_pb = d
        .degrees()
        .iter()
        .map(|&di| {
            log_binomial::<f64>(n - 1, di as u64)
                + di as f64 * p.ln()
                + (n - 1 - di as u64) as f64 * (-p).ln_1p()
        })
        .sum();
    Ok((log_pd, log_pb))
}

/// Joint histogram of (star count, edge count) over all `2^{C(n,2)}`
/// labeled graphs on `n` vertices; the exact `G(n,p)` star tail for any
/// `p` and threshold is a weighted sum over its cells.
#[derive(Debug, Clone)]
pub struct StarEdgeHistogram {
    pub n: u64,
    pub r: u32,
    /// `C(n,2)`, the number of potential edges.
    pub edge_slots: u32,
    max_stars: u64,
    counts: Vec<u64>,
}

impl StarEdgeHistogram {
    /// Number of graphs with exactly this star and edge count.
    pub fn count(&self, stars: u64, edges: u32) -> u64 {
        if stars > self.max_stars || edges > self.edge_slots {
            return 0;
        }
        self.counts[stars as usize * (self.edge_slots as usize + 1) + edges as usize]
    }

    pub fn max_stars(&self) -> u64 {
        self.max_stars
    }

    pub fn total_graphs(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// `log P(X ≥ threshold)` under `G(n,p)`, grouping the sum by
    /// (star count, edge count) for stability.
    pub fn log_tail(&self, p: f64, threshold: f64) -> f64 {
        let s_min = threshold.max(0.0).ceil() as u64;
        if s_min > self.max_stars {
            return f64::NEG_INFINITY;
        }
        let log_p = p.ln();
        let log_q = (-p).ln_1p();
        let mut terms = Vec::new();
        for s in s_min..=self.max_stars {
            for m in 0..=self.edge_slots {
                let c = self.count(s, m);
                if c > 0 {
                    terms.push(
                        (c as f64).ln()
                            + m as f64 * log_p
                            + (self.edge_slots - m) as f64 * log_q,
                    );
                }
            }
        }
        log_sum_exp(&terms)
    }

    /// Exact distribution of the star count under `G(n,p)`.
    pub fn star_distribution(&self, p: f64) -> DiscreteDistribution {
        let log_p = p.ln();
        let log_q = (-p).ln_1p();
        let dense: Vec<f64> = (0..=self.max_stars)
            .map(|s| {
                let terms: Vec<f64> = (0..=self.edge_slots)
                    .filter_map(|m| {
                        let c = self.count(s, m);
                        (c > 0).then(|| {
                            (c as f64).ln()
                                + m as f64 * log_p
                                + (self.edge_slots - m) as f64 * log_q
                        })
                    })
                    .collect();
                log_sum_exp(&terms)
            })
            .collect();
        DiscreteDistribution::from_dense_log(&dense)
    }
}

/// Builds the histogram by visiting every labeled graph once, in
/// Gray-code order so each step flips one edge and updates the two
/// endpoint degrees in O(1).
pub fn exact_gnp_star_histogram(n: u64, r: u32, cfg: &OracleConfig) -> Result<StarEdgeHistogram> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 vertices, got {n}")));
    }
    if n as u32 > cfg.max_enum_vertices {
        return Err(Error::Guard {
            name: "max_enum_vertices",
            actual: n,
            limit: cfg.max_enum_vertices as u64,
        });
    }
    let nu = n as usize;
    let edge_slots = (n * (n - 1) / 2) as u32;
    let pairs: Vec<(usize, usize)> = (0..nu)
        .flat_map(|u| (u + 1..nu).map(move |v| (u, v)))
        .collect();
    let star_table: Vec<u64> = (0..nu as u64)
        .map(|d| binomial_u128(d, r as u64) as u64)
        .collect();
    let max_stars = n * star_table[nu - 1];
    let mut counts = vec![0u64; (max_stars as usize + 1) * (edge_slots as usize + 1)];

    let mut degrees = vec![0u32; nu];
    let mut state = 0u64;
    let mut stars = 0u64;
    let mut edges = 0u32;
    counts[0] += 1; // empty graph
    for k in 1u64..(1u64 << edge_slots) {
        let bit = k.trailing_zeros() as usize;
        let (u, v) = pairs[bit];
        state ^= 1 << bit;
        let inserted = state >> bit & 1 == 1;
        stars -= star_table[degrees[u] as usize] + star_table[degrees[v] as usize];
        if inserted {
            degrees[u] += 1;
            degrees[v] += 1;
            edges += 1;
        } else {
            degrees[u] -= 1;
            degrees[v] -= 1;
            edges -= 1;
        }
        stars += star_table[degrees[u] as usize] + star_table[degrees[v] as usize];
        counts[stars as usize * (edge_slots as usize + 1) + edges as usize] += 1;
    }
    Ok(StarEdgeHistogram {
        n,
        r,
        edge_slots,
        max_stars,
        counts,
    })
}

/// `log P(X ≥ (1+ε)μ)` for the star count of `G(n,p)`, by exhaustive
/// enumeration.
pub fn exact_gnp_star_tail(n: u64, p: f64, r: u32, eps: f64, cfg: &OracleConfig) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p must lie in (0,1), got {p}")));
    }
    let hist = exact_gnp_star_histogram(n, r, cfg)?;
    let mu = n as f64 * binomial_real::<f64>(n - 1, r as u64) * p.powi(r as i32);
    Ok(hist.log_tail(p, (1.0 + eps) * mu))
}
