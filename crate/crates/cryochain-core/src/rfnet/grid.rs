//! Frequency grids shared by records, chains, and reports.

use alloc::vec::Vec;

use super::RfNetError;

/// Strictly increasing list of positive analysis frequencies in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points_hz: Vec<f64>,
}

impl FrequencyGrid {
    /// Wrap explicit grid points, validating finiteness, positivity, and
    /// strict monotonicity.
    pub fn new(points_hz: Vec<f64>) -> Result<Self, RfNetError> {
        if points_hz.is_empty() {
            return Err(RfNetError::EmptyGrid);
        }
        for (i, &p) in points_hz.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(RfNetError::BadFrequency { index: i, value_hz: p });
            }
            if i > 0 && p <= points_hz[i - 1] {
                return Err(RfNetError::NonMonotonicGrid { index: i });
            }
        }
        Ok(Self { points_hz })
    }

    /// Evenly spaced grid from `start_hz` to `stop_hz` inclusive.
    pub fn linspace(start_hz: f64, stop_hz: f64, n_points: usize) -> Result<Self, RfNetError> {
        if n_points == 0 {
            return Err(RfNetError::EmptyGrid);
        }
        if n_points == 1 {
            return Self::new(alloc::vec![start_hz]);
        }
        let step = (stop_hz - start_hz) / (n_points - 1) as f64;
        let mut points = Vec::with_capacity(n_points);
        for i in 0..n_points {
            // Endpoint written exactly so linspace(a, b, n) always ends on b.
            let p = if i + 1 == n_points { stop_hz } else { start_hz + step * i as f64 };
            points.push(p);
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points_hz
    }

    pub fn len(&self) -> usize {
        self.points_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        // Construction rejects empty grids; kept for clippy symmetry with len.
        self.points_hz.is_empty()
    }

    pub fn min_hz(&self) -> f64 {
        self.points_hz[0]
    }

    pub fn max_hz(&self) -> f64 {
        self.points_hz[self.points_hz.len() - 1]
    }

    /// True when every point of `other` lies within this grid's span.
    pub fn covers(&self, other: &FrequencyGrid) -> bool {
        other.min_hz() >= self.min_hz() && other.max_hz() <= self.max_hz()
    }
}
