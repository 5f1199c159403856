//! Exact discrete distributions in log space.
//!
//! Supports are integer-valued (counts of stars or edges); masses are
//! kept as natural logs so that desk-scale tail probabilities far below
//! `f64` underflow remain exact.

use serde::{Deserialize, Serialize};

use crate::logspace::{log_add_exp, log_sum_exp};
use crate::{Error, Result};

/// A probability mass function over a strictly increasing integer
/// support, stored in log space. Zero-mass points are never stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    support: Vec<u64>,
    log_mass: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(support: Vec<u64>, log_mass: Vec<f64>) -> Result<Self> {
        if support.len() != log_mass.len() {
            return Err(Error::Domain(format!(
                "support and log_mass lengths differ: {} vs {}",
                support.len(),
                log_mass.len()
            )));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "support must be strictly increasing".to_string(),
            ));
        }
        if log_mass.iter().any(|m| m.is_nan() || *m > 0.0) {
            return Err(Error::Domain(
                "log masses must be non-positive and not NaN".to_string(),
            ));
        }
        Ok(DiscreteDistribution { support, log_mass })
    }

    /// Point mass at a single value.
    pub fn point(value: u64) -> Self {
        DiscreteDistribution {
            support: vec![value],
            log_mass: vec![0.0],
        }
    }

    /// From a dense array where index `i` carries `log P(X = i)`;
    /// `-inf` holes are dropped.
    pub fn from_dense_log(dense: &[f64]) -> Self {
        let mut support = Vec::new();
        let mut log_mass = Vec::new();
        for (i, &lm) in dense.iter().enumerate() {
            if lm > f64::NEG_INFINITY {
                support.push(i as u64);
                log_mass.push(lm.min(0.0));
            }
        }
        DiscreteDistribution { support, log_mass }
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn log_masses(&self) -> &[f64] {
        &self.log_mass
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `log P(X = value)`; `-inf` off the support.
    pub fn log_pmf(&self, value: u64) -> f64 {
        match self.support.binary_search(&value) {
            Ok(i) => self.log_mass[i],
            Err(_) => f64::NEG_INFINITY,
        }
    }

    /// Log of the total mass; 0 for a normalized distribution.
    pub fn log_total(&self) -> f64 {
        log_sum_exp(&self.log_mass)
    }

    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.log_mass)
            .map(|(&k, &lm)| k as f64 * lm.exp())
            .sum()
    }

    /// `log P(X ≥ threshold)` for a real threshold.
    pub fn log_tail(&self, threshold: f64) -> f64 {
        let masses: Vec<f64> = self
            .support
            .iter()
            .zip(&self.log_mass)
            .filter(|(&k, _)| k as f64 >= threshold)
            .map(|(_, &lm)| lm)
            .collect();
        log_sum_exp(&masses)
    }

    /// Linear-space CDF table aligned with the support, for inversion
    /// sampling. The last entry is forced to 1.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0f64;
        let mut out = Vec::with_capacity(self.len());
        for &lm in &self.log_mass {
            acc += lm.exp();
            out.push(acc);
        }
        if let Some(last) = out.last_mut() {
            *last = 1.0f64.max(*last);
        }
        out
    }

    /// CSV rendering with the fixed header `support,log_mass` and
    /// 17-significant-digit floats.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("support,log_mass\n");
        for (k, lm) in self.support.iter().zip(&self.log_mass) {
            out.push_str(&format!("{k},{lm:.16e}\n"));
        }
        out
    }
}

/// Exact joint distribution of a pair of integer statistics, on a dense
/// `(rows x cols)` grid of log masses with `-inf` holes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    log_mass: Vec<f64>,
}

impl JointDistribution {
    pub fn from_dense(rows: usize, cols: usize, log_mass: Vec<f64>) -> Result<Self> {
        if rows * cols != log_mass.len() {
            return Err(Error::Domain(format!(
                "dense joint grid size mismatch: {rows} x {cols} vs {}",
                log_mass.len()
            )));
        }
        Ok(JointDistribution {
            rows,
            cols,
            log_mass,
        })
    }

    /// Point mass at the origin.
    pub fn unit() -> Self {
        JointDistribution {
            rows: 1,
            cols: 1,
            log_mass: vec![0.0],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn log_pmf(&self, first: u64, second: u64) -> f64 {
        let (i, j) = (first as usize, second as usize);
        if i >= self.rows || j >= self.cols {
            return f64::NEG_INFINITY;
        }
        self.log_mass[i * self.cols + j]
    }

    /// All support points with finite mass.
    pub fn support_pairs(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.log_mass[i * self.cols + j] > f64::NEG_INFINITY {
                    out.push((i as u64, j as u64));
                }
            }
        }
        out
    }

    /// `log P(first ≥ t, second ≥ u)`.
    pub fn log_joint_tail(&self, t: f64, u: f64) -> f64 {
        let i0 = t.max(0.0).ceil() as usize;
        let j0 = u.max(0.0).ceil() as usize;
        let mut masses = Vec::new();
        for i in i0..self.rows {
            for j in j0..self.cols {
                let lm = self.log_mass[i * self.cols + j];
                if lm > f64::NEG_INFINITY {
                    masses.push(lm);
                }
            }
        }
        log_sum_exp(&masses)
    }

    /// Marginal of the first coordinate.
    pub fn marginal_first(&self) -> DiscreteDistribution {
        let mut dense = vec![f64::NEG_INFINITY; self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                dense[i] = log_add_exp(dense[i], self.log_mass[i * self.cols + j]);
            }
        }
        DiscreteDistribution::from_dense_log(&dense)
    }

    /// Marginal of the second coordinate.
    pub fn marginal_second(&self) -> DiscreteDistribution {
        let mut dense = vec![f64::NEG_INFINITY; self.cols];
        for j in 0..self.cols {
            for i in 0..self.rows {
                dense[j] = log_add_exp(dense[j], self.log_mass[i * self.cols + j]);
            }
        }
        DiscreteDistribution::from_dense_log(&dense)
    }

    pub fn log_total(&self) -> f64 {
        let finite: Vec<f64> = self
            .log_mass
            .iter()
            .copied()
            .filter(|m| *m > f64::NEG_INFINITY)
            .collect();
        log_sum_exp(&finite)
    }
}
