//! Density-normalized histograms over a fixed range.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform-bin histogram normalized as a probability density: densities
/// integrate to the in-range fraction of the samples (out-of-range samples
/// count toward the normalization but land in no bin).
#[derive(Debug, Clone)]
pub struct Histogram<R: Real> {
    edges: Vec<R>,
    counts: Vec<usize>,
    densities: Vec<R>,
    total: usize,
    out_of_range: usize,
}

impl<R: Real> Histogram<R> {
    pub fn from_values(values: &[R], bins: usize, lo: R, hi: R) -> Result<Self> {
        if bins < 1 {
            return Err(Error::InvalidParameter("histogram needs at least one bin".into()));
        }
        if !(hi > lo) {
            return Err(Error::InvalidParameter("histogram range must be nonempty".into()));
        }
        if values.is_empty() {
            return Err(Error::InvalidParameter("histogram needs at least one sample".into()));
        }
        let nb = R::of(bins as f64);
        let width = (hi - lo) / nb;
        let edges: Vec<R> = (0..=bins).map(|i| lo + width * R::of(i as f64)).collect();
        let mut counts = vec![0usize; bins];
        let mut out_of_range = 0usize;
        for &v in values {
            if v < lo || v > hi {
                out_of_range += 1;
                continue;
            }
            let mut idx = ((v - lo) / width).to_f64().unwrap_or(0.0) as usize;
            if idx >= bins {
                idx = bins - 1; // v == hi lands in the last bin
            }
            counts[idx] += 1;
        }
        let total = values.len();
        let norm = R::of(total as f64) * width;
        let densities = counts.iter().map(|&c| R::of(c as f64) / norm).collect();
        Ok(Self { edges, counts, densities, total, out_of_range })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// bins + 1 edges.
    pub fn edges(&self) -> &[R] {
        &self.edges
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn densities(&self) -> &[R] {
        &self.densities
    }

    pub fn bin_width(&self) -> R {
        self.edges[1] - self.edges[0]
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn out_of_range(&self) -> usize {
        self.out_of_range
    }

    /// ℓ₁ distance Σ|p_i − q_i| between this histogram's per-bin masses
    /// and reference masses q (e.g. an analytic density integrated over
    /// the same bins).
    pub fn l1_distance_to_masses(&self, reference: &[R]) -> R {
        assert_eq!(reference.len(), self.bins());
        let w = self.bin_width();
        self.densities
            .iter()
            .zip(reference.iter())
            .map(|(&d, &q)| (d * w - q).abs())
            .fold(R::zero(), |a, b| a + b)
    }
}

/// Fraction of samples outside the closed interval [lo, hi].
pub fn fraction_outside<R: Real>(values: &[R], lo: R, hi: R) -> R {
    if values.is_empty() {
        return R::zero();
    }
    let n = values.iter().filter(|&&v| v < lo || v > hi).count();
    R::of(n as f64) / R::of(values.len() as f64)
}
