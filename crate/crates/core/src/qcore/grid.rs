use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform periodic grid on `[x_min, x_max)` with cell-centred points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n_points: usize,
    x_min: f64,
    x_max: f64,
}

impl Grid {
    pub fn new(n_points: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if n_points < 8 {
            return Err(Error::GridTooSmall(n_points));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "need finite x_max > x_min, got [{x_min}, {x_max})"
            )));
        }
        Ok(Self { n_points, x_min, x_max })
    }

    /// Grid of `n_points` centred on the origin with total length `length`.
    pub fn centered(n_points: usize, length: f64) -> Result<Self> {
        Self::new(n_points, -0.5 * length, 0.5 * length)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_points as f64
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Position of point `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Left edge of cell `i`; `edge(n)` is `x_max`.
    pub fn edge(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    /// Index of the cell containing `x`, if inside the box.
    pub fn cell_of(&self, x: f64) -> Option<usize> {
        if x < self.x_min || x >= self.x_max {
            return None;
        }
        Some((((x - self.x_min) / self.dx()) as usize).min(self.n_points - 1))
    }

    /// Signed minimal-image separation `a − b` on the periodic box.
    pub fn periodic_delta(&self, a: f64, b: f64) -> f64 {
        let l = self.length();
        let d = a - b;
        d - l * (d / l).round()
    }

    /// Periodic linear interpolation of grid samples at `x`.
    pub fn interpolate<T>(&self, values: &[T], x: f64) -> T
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    {
        let n = self.n_points;
        let s = (x - self.x_min) / self.dx() - 0.5;
        let f = s.floor();
        let w = s - f;
        let i0 = (f as i64).rem_euclid(n as i64) as usize;
        let i1 = (i0 + 1) % n;
        values[i0] * (1.0 - w) + values[i1] * w
    }

    pub(crate) fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}
