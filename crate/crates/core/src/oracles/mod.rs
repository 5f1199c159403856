//! Exact small-scale ground truth.
//!
//! Two flavors: [`iid`] works with sums of functions of independent
//! binomials via log-space convolution; [`graphs`] enumerates labeled
//! graphs (by degree sequence or exhaustively) for exact `G(n,p)`
//! quantities. Everything here is deterministic and exact up to f64
//! rounding; the guards below keep runtimes at desk scale.

pub mod graphs;
pub mod iid;

pub use graphs::DegreeSequence;
pub use iid::SumPart;

/// Cost guards for the exhaustive oracles. These are configuration, not
/// constants: raising them trades time for reach. Defaults keep any
/// single oracle call around a minute on one core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest `n` for graph enumeration by degree sequence and for the
    /// exhaustive `G(n,p)` tail (cost `2^{C(n,2)}`).
    pub max_enum_vertices: u32,
    /// Largest dense support size for log-space convolutions.
    pub max_support: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_enum_vertices: 7,
            max_support: 10_000_000,
        }
    }
}
