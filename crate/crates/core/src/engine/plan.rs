use std::ops::Range;

use crate::error::EngineError;
use crate::mesh::ZInterval;

/// Ordered slicing heights.
#[derive(Debug, Clone, PartialEq)]
pub enum SlicePlan {
    /// Heights `z0 + j * tau` for `j` in `0..count`.
    Uniform { z0: f64, tau: f64, count: usize },
    /// Strictly increasing heights.
    Explicit(Vec<f64>),
}

impl SlicePlan {
    pub fn uniform(z0: f64, tau: f64, count: usize) -> Result<Self, EngineError> {
        if !(tau > 0.0 && tau.is_finite()) || !z0.is_finite() {
            return Err(EngineError::InvalidConfig(format!("slice thickness must be positive, got {tau}")));
        }
        Ok(SlicePlan::Uniform { z0, tau, count })
    }

    /// Uniform plan starting at `z_lo` with as many slices as fit in
    /// `[z_lo, z_hi]`: `floor((z_hi - z_lo) / tau) + 1`, tolerant to a
    /// rounding error of 1e-9 slices.
    pub fn covering(z_lo: f64, z_hi: f64, tau: f64) -> Result<Self, EngineError> {
        if !(z_hi >= z_lo) {
            return Err(EngineError::InvalidConfig(format!("empty height range [{z_lo}, {z_hi}]")));
        }
        Self::uniform(z_lo, tau, 0)?;
        let count = ((z_hi - z_lo) / tau + 1e-9).floor() as usize + 1;
        Self::uniform(z_lo, tau, count)
    }

    pub fn explicit(heights: Vec<f64>) -> Result<Self, EngineError> {
        if heights.iter().any(|h| !h.is_finite()) {
            return Err(EngineError::InvalidConfig("non-finite slice height".into()));
        }
        if let Some(w) = heights.windows(2).find(|w| w[0] >= w[1]) {
            return Err(EngineError::InvalidConfig(format!(
                "slice heights must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(SlicePlan::Explicit(heights))
    }

    pub fn len(&self) -> usize {
        match self {
            SlicePlan::Uniform { count, .. } => *count,
            SlicePlan::Explicit(h) => h.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Height of slice `j`; `j` must be below `len()`.
    pub fn height(&self, j: usize) -> f64 {
        match self {
            SlicePlan::Uniform { z0, tau, .. } => z0 + j as f64 * tau,
            SlicePlan::Explicit(h) => h[j],
        }
    }

    pub fn heights(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.height(j)).collect()
    }

    /// Indices of slices with heights in `[lo, hi]`.
    pub fn range_between(&self, lo: f64, hi: f64) -> Range<usize> {
        let n = self.len();
        if !(lo <= hi) || n == 0 {
            return 0..0;
        }
        match self {
            SlicePlan::Explicit(h) => {
                let a = bisect_height(h, lo);
                let b = h.partition_point(|&x| x <= hi);
                a..b.max(a)
            }
            SlicePlan::Uniform { z0, tau, .. } => {
                let clamp = |v: f64| v.clamp(0.0, n as f64) as usize;
                // rounding estimates, then exact correction against height(j)
                let mut a = clamp(first_index_estimate(*z0, *tau, lo) as f64);
                while a < n && self.height(a) < lo {
                    a += 1;
                }
                while a > 0 && self.height(a - 1) >= lo {
                    a -= 1;
                }
                let mut b = clamp(((hi - z0) / tau).floor() + 1.0);
                while b > 0 && self.height(b - 1) > hi {
                    b -= 1;
                }
                while b < n && self.height(b) <= hi {
                    b += 1;
                }
                a..b.max(a)
            }
        }
    }
}

/// The direct rounding formula `floor((lo - z0) / tau)`. It can land one
/// slice below the first height `>= lo`; [`affected_slices`] corrects that.
pub fn first_index_estimate(z0: f64, tau: f64, lo: f64) -> i64 {
    ((lo - z0) / tau).floor() as i64
}

/// Smallest index `i` with `heights[i] >= z`, or `heights.len()`.
pub fn bisect_height(heights: &[f64], z: f64) -> usize {
    heights.partition_point(|&h| h < z)
}

/// Slices whose heights lie in `[z_min - r_max, z_max + r_max]`, as a
/// half-open index range (empty when none).
pub fn affected_slices(interval: ZInterval, r_max: f64, plan: &SlicePlan) -> Range<usize> {
    plan.range_between(interval.z_min - r_max, interval.z_max + r_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> ZInterval {
        ZInterval { z_min: a, z_max: b }
    }

    #[test]
    fn bisection() {
        let h = [0.1, 0.25, 0.45, 0.7];
        assert_eq!(bisect_height(&h, 0.3), 2);
        assert_eq!(bisect_height(&h, 0.05), 0);
        assert_eq!(bisect_height(&h, 0.9), 4);
        assert_eq!(bisect_height(&h, 0.25), 1);
    }

    #[test]
    fn uniform_first_slice() {
        let plan = SlicePlan::uniform(0.0, 0.04, 100).unwrap();
        assert_eq!(first_index_estimate(0.0, 0.04, 0.5), 12);
        // 12 * 0.04 = 0.48 is below the coverage start 0.5
        let r = affected_slices(iv(1.0, 1.2), 0.5, &plan);
        assert_eq!(r.start, 13);
        assert!(plan.height(r.end - 1) <= 1.7 && plan.height(r.end) > 1.7);
    }

    #[test]
    fn explicit_ranges() {
        let plan = SlicePlan::explicit(vec![0.5, 1.0, 1.5]).unwrap();
        assert_eq!(affected_slices(iv(1.0, 1.0), 0.0, &plan), 1..2);
        assert!(affected_slices(iv(2.0, 3.0), 0.1, &plan).is_empty());
        assert!(affected_slices(iv(-3.0, -2.0), 0.1, &plan).is_empty());
        assert_eq!(affected_slices(iv(-3.0, 9.0), 0.0, &plan), 0..3);
    }

    #[test]
    fn covering_count() {
        let p = SlicePlan::covering(-0.2, 1.2, 0.1).unwrap();
        assert_eq!(p.len(), 15);
        assert!(SlicePlan::covering(0.0, 1.0, 0.0).is_err());
        assert!(SlicePlan::explicit(vec![1.0, 1.0]).is_err());
    }
}
