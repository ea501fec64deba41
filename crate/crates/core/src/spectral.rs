//! Fourier pseudospectral calculus on the uniform periodic grid `x_j = 2πj/M`.
//!
//! Multi-component samples are stored row-major: node `j`, component `c`
//! lives at `data[j * dim + c]`.

use crate::error::{invalid, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Default fraction of the resolved band kept by derivatives (the 2/3 rule).
pub const DEFAULT_DEALIAS: f64 = 2.0 / 3.0;

#[derive(Clone)]
pub struct GridSpec {
    points: usize,
    dealias_fraction: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridSpec")
            .field("points", &self.points)
            .field("dealias_fraction", &self.dealias_fraction)
            .finish()
    }
}

impl PartialEq for GridSpec {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.dealias_fraction == other.dealias_fraction
    }
}

impl GridSpec {
    pub fn new(points: usize, dealias_fraction: f64) -> Result<Self> {
        if points < 16 || !points.is_multiple_of(2) {
            return invalid(format!("grid size must be even and at least 16, got {points}"));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return invalid(format!("dealias fraction must lie in (0, 1], got {dealias_fraction}"));
        }
        let mut planner = FftPlanner::new();
        Ok(GridSpec {
            points,
            dealias_fraction,
            forward: planner.plan_fft_forward(points),
            inverse: planner.plan_fft_inverse(points),
        })
    }

    /// Grid with the 2/3 dealiasing rule.
    pub fn with_points(points: usize) -> Result<Self> {
        Self::new(points, DEFAULT_DEALIAS)
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.points as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.spacing() * j as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.node(j)).collect()
    }

    /// Largest wavenumber kept by derivatives. The Nyquist mode is always dropped.
    pub fn cutoff(&self) -> usize {
        let c = (self.dealias_fraction * self.points as f64 / 2.0).floor() as usize;
        c.min(self.points / 2 - 1)
    }

    /// Signed wavenumber of FFT bin `j`.
    pub fn wavenumber(&self, j: usize) -> i64 {
        let m = self.points as i64;
        let j = j as i64;
        if j <= m / 2 {
            j
        } else {
            j - m
        }
    }

    /// Trapezoidal rule `(2π/M) Σ f_j`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.points);
        self.spacing() * values.iter().sum::<f64>()
    }

    /// Mean of every component over the grid.
    pub fn mean(&self, data: &[f64], dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for row in data.chunks_exact(dim) {
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out.iter_mut().for_each(|o| *o /= self.points as f64);
        out
    }

    /// Multiplies every component by the Fourier symbol `sym(k)`.
    ///
    /// With `filtered` set, bins above the cutoff (and Nyquist) are zeroed.
    pub fn apply_symbol(
        &self,
        data: &[f64],
        dim: usize,
        filtered: bool,
        sym: impl Fn(f64) -> Complex64,
    ) -> Vec<f64> {
        let m = self.points;
        debug_assert_eq!(data.len(), m * dim);
        let cutoff = self.cutoff() as i64;
        let symbol: Vec<Complex64> = (0..m)
            .map(|j| {
                let k = self.wavenumber(j);
                if filtered && (k.abs() > cutoff || 2 * k.unsigned_abs() as usize == m) {
                    Complex64::new(0.0, 0.0)
                } else {
                    sym(k as f64)
                }
            })
            .collect();
        let scale = 1.0 / m as f64;
        let mut out = vec![0.0; m * dim];
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for c in 0..dim {
            for j in 0..m {
                buf[j] = Complex64::new(data[j * dim + c], 0.0);
            }
            self.forward.process(&mut buf);
            for (b, s) in buf.iter_mut().zip(&symbol) {
                *b *= s * scale;
            }
            self.inverse.process(&mut buf);
            for j in 0..m {
                out[j * dim + c] = buf[j].re;
            }
        }
        out
    }

    /// `order`-th derivative of every component, dealiased.
    pub fn derivative(&self, data: &[f64], dim: usize, order: u32) -> Vec<f64> {
        self.apply_symbol(data, dim, true, |k| Complex64::new(0.0, k).powu(order))
    }

    /// Mean-free solution `w` of `w'' = f`, dealiased. The mean of `f` is ignored.
    pub fn inverse_second_derivative(&self, data: &[f64], dim: usize) -> Vec<f64> {
        self.apply_symbol(data, dim, true, |k| {
            if k == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-1.0 / (k * k), 0.0)
            }
        })
    }
}
