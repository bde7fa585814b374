//! Uniform one-dimensional grids.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("grid bounds must be finite with max > min, got [{min}, {max}]")]
    BadBounds { min: f64, max: f64 },
    #[error("grid is not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("grid is not uniform (spacing deviates by {0:e})")]
    NotUniform(f64),
}

/// `n` equally spaced points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self, GridError> {
        let g = UniformGrid { min, max, n };
        g.validate()?;
        Ok(g)
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self, GridError> {
        Self::new(-half_width, half_width, n)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if self.n < 2 {
            return Err(GridError::TooFewPoints(self.n));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.max > self.min) {
            return Err(GridError::BadBounds {
                min: self.min,
                max: self.max,
            });
        }
        Ok(())
    }

    /// Recognizes an explicit list of points as a uniform grid.
    pub fn from_points(points: &[f64]) -> Result<Self, GridError> {
        check_increasing(points)?;
        let g = Self::new(points[0], points[points.len() - 1], points.len())?;
        let h = g.step();
        let worst = points
            .iter()
            .enumerate()
            .map(|(i, &x)| (x - g.at(i)).abs())
            .fold(0.0, f64::max);
        if worst > 1e-9 * h.max(g.max.abs().max(g.min.abs())) {
            return Err(GridError::NotUniform(worst));
        }
        Ok(g)
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    pub fn at(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.at(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Trapezoid rule for samples on this grid.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        let h = self.step();
        let inner: f64 = values.iter().sum();
        h * (inner - 0.5 * (values[0] + values[values.len() - 1]))
    }
}

pub fn check_increasing(points: &[f64]) -> Result<(), GridError> {
    if points.len() < 2 {
        return Err(GridError::TooFewPoints(points.len()));
    }
    for i in 1..points.len() {
        if !(points[i] > points[i - 1]) {
            return Err(GridError::NotIncreasing(i));
        }
    }
    Ok(())
}
