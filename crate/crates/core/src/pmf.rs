//! Truncated probability mass functions on the nonnegative integers.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Values below this are rejected; values in `[-NEGATIVE_SLACK, 0)` are clamped.
pub const NEGATIVE_SLACK: f64 = 1e-10;
/// Allowed excess of the total mass over one.
pub const MASS_SLACK: f64 = 1e-8;

/// Where a distribution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Analytic,
    Exact,
    Simulated,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Analytic => "analytic",
            Provenance::Exact => "exact",
            Provenance::Simulated => "simulated",
        }
    }
}

/// `P(X = k)` for `k < values.len()`, plus an upper bound on the mass beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    pub values: Vec<f64>,
    pub tail_bound: f64,
    pub provenance: Provenance,
}

impl Pmf {
    /// Clamps tiny negative values and sets `tail_bound = max(0, 1 - Σ values)`.
    pub fn new(mut values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        for (index, v) in values.iter_mut().enumerate() {
            if !v.is_finite() || *v < -NEGATIVE_SLACK {
                return Err(Error::NegativeMass { index, value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let total: f64 = values.iter().sum();
        if total > 1.0 + MASS_SLACK {
            return Err(Error::Domain("probabilities sum to more than one"));
        }
        Ok(Pmf {
            values,
            tail_bound: (1.0 - total).max(0.0),
            provenance,
        })
    }

    /// Point mass at `k`.
    pub fn point(k: usize, provenance: Provenance) -> Self {
        let mut values = vec![0.0; k + 1];
        values[k] = 1.0;
        Pmf {
            values,
            tail_bound: 0.0,
            provenance,
        }
    }

    pub fn mass(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Mean of the truncated part.
    pub fn mean(&self) -> f64 {
        self.values.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    /// Second moment of the truncated part.
    pub fn second_moment(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, p)| (k * k) as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment() - m * m
    }

    /// `P(X > k)` computed as `1 - P(X ≤ k)`.
    pub fn survival(&self, k: usize) -> f64 {
        1.0 - self.values.iter().take(k + 1).sum::<f64>()
    }

    /// Distribution of `⌊X / block⌋`; atoms not fully covered are dropped.
    pub fn aggregate(&self, block: usize) -> Pmf {
        let len = self.values.len() / block;
        let values: Vec<f64> = (0..len)
            .map(|k| self.values[k * block..(k + 1) * block].iter().sum())
            .collect();
        let total: f64 = values.iter().sum();
        Pmf {
            values,
            tail_bound: (1.0 - total).max(0.0),
            provenance: self.provenance,
        }
    }

    /// Keeps atoms `0..len`.
    pub fn truncate(&self, len: usize) -> Pmf {
        let values: Vec<f64> = self.values.iter().copied().take(len).collect();
        let total: f64 = values.iter().sum();
        Pmf {
            values,
            tail_bound: (1.0 - total).max(0.0),
            provenance: self.provenance,
        }
    }

    /// Total variation distance over the listed atoms, with the unlisted mass
    /// of each side counted as disjoint.
    pub fn total_variation(&self, other: &Pmf) -> f64 {
        let len = self.values.len().max(other.values.len());
        let listed: f64 = (0..len).map(|k| (self.mass(k) - other.mass(k)).abs()).sum();
        0.5 * (listed + (self.tail_bound - other.tail_bound).abs())
    }
}
