//! Small numeric helpers shared across modules.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Radians per microradian.
pub const URAD: f64 = 1e-6;

/// 10/ln(10): converts a natural-log power ratio to decibels.
pub const DB_PER_NEPER: f64 = 4.342_944_819_032_518;

/// A quantity resolved on the two tracking axes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Axes {
    pub pitch: f64,
    pub azimuth: f64,
}

impl Axes {
    pub const ZERO: Axes = Axes {
        pitch: 0.0,
        azimuth: 0.0,
    };

    pub const fn new(pitch: f64, azimuth: f64) -> Self {
        Self { pitch, azimuth }
    }

    pub fn splat(v: f64) -> Self {
        Self::new(v, v)
    }

    pub fn norm(self) -> f64 {
        self.pitch.hypot(self.azimuth)
    }

    pub fn map(self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self::new(f(self.pitch), f(self.azimuth))
    }

    pub fn zip(self, other: Axes, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        Self::new(f(self.pitch, other.pitch), f(self.azimuth, other.azimuth))
    }

    pub fn is_finite(self) -> bool {
        self.pitch.is_finite() && self.azimuth.is_finite()
    }
}

impl Add for Axes {
    type Output = Axes;
    fn add(self, rhs: Axes) -> Axes {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for Axes {
    type Output = Axes;
    fn sub(self, rhs: Axes) -> Axes {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for Axes {
    type Output = Axes;
    fn neg(self) -> Axes {
        self.map(|a| -a)
    }
}

impl Mul<f64> for Axes {
    type Output = Axes;
    fn mul(self, rhs: f64) -> Axes {
        self.map(|a| a * rhs)
    }
}

/// Neumaier-compensated running sum, accumulated in call order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Population mean and standard deviation with a fixed, compensated
/// summation order. Returns `None` for an empty slice.
pub fn mean_std(values: impl IntoIterator<Item = f64> + Clone) -> Option<(f64, f64, usize)> {
    let mut sum = CompensatedSum::default();
    let mut n = 0usize;
    for v in values.clone() {
        sum.add(v);
        n += 1;
    }
    if n == 0 {
        return None;
    }
    let mean = sum.value() / n as f64;
    let mut sq = CompensatedSum::default();
    for v in values {
        let d = v - mean;
        sq.add(d * d);
    }
    Some((mean, (sq.value() / n as f64).sqrt(), n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        s.add(1.0);
        s.add(-1e16);
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn mean_std_of_three() {
        let (m, sd, n) = mean_std([1.0, 2.0, 3.0]).unwrap();
        assert_eq!(n, 3);
        assert!((m - 2.0).abs() < 1e-15);
        assert!((sd - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
