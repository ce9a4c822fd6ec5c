//! Shape-preserving piecewise cubic Hermite interpolation (PCHIP).
//!
//! Interior slopes are the weighted harmonic mean of neighbouring secants
//! (zero at local extrema), endpoint slopes the one-sided three-point formula
//! clipped to preserve shape. On any interval where the data are monotone the
//! interpolant is monotone.

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Pchip<T: Scalar> {
    xs: Vec<T>,
    ys: Vec<T>,
    slopes: Vec<T>,
}

impl<T: Scalar> Pchip<T> {
    pub fn new(xs: Vec<T>, ys: Vec<T>) -> Result<Self> {
        if xs.len() != ys.len() {
            return invalid("pchip: abscissae and ordinates differ in length");
        }
        if xs.is_empty() {
            return invalid("pchip: no samples");
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return invalid("pchip: abscissae must be strictly increasing");
        }
        let slopes = slopes(&xs, &ys);
        Ok(Self { xs, ys, slopes })
    }

    pub fn knots(&self) -> &[T] {
        &self.xs
    }

    pub fn values(&self) -> &[T] {
        &self.ys
    }

    pub fn slopes(&self) -> &[T] {
        &self.slopes
    }

    /// Evaluates the interpolant; outside the knot range the end cubic is extended.
    pub fn eval(&self, x: T) -> T {
        let n = self.xs.len();
        if n == 1 {
            return self.ys[0];
        }
        let k = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let h = self.xs[k + 1] - self.xs[k];
        let del = (self.ys[k + 1] - self.ys[k]) / h;
        let (d0, d1) = (self.slopes[k], self.slopes[k + 1]);
        let c2 = (T::lit(3.0) * del - T::lit(2.0) * d0 - d1) / h;
        let c3 = (d0 - T::lit(2.0) * del + d1) / (h * h);
        let s = x - self.xs[k];
        self.ys[k] + s * (d0 + s * (c2 + s * c3))
    }
}

fn sign<T: Scalar>(v: T) -> i8 {
    if v > T::zero() {
        1
    } else if v < T::zero() {
        -1
    } else {
        0
    }
}

fn slopes<T: Scalar>(xs: &[T], ys: &[T]) -> Vec<T> {
    let n = xs.len();
    if n == 1 {
        return vec![T::zero()];
    }
    let h: Vec<T> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<T> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
    if n == 2 {
        return vec![del[0], del[0]];
    }
    let mut d = vec![T::zero(); n];
    let two = T::lit(2.0);
    for k in 1..n - 1 {
        if sign(del[k - 1]) * sign(del[k]) > 0 {
            let w1 = two * h[k] + h[k - 1];
            let w2 = h[k] + two * h[k - 1];
            d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }
    d[0] = end_slope(h[0], h[1], del[0], del[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    d
}

fn end_slope<T: Scalar>(h0: T, h1: T, del0: T, del1: T) -> T {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let d = ((two * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if sign(d) != sign(del0) {
        T::zero()
    } else if sign(del0) != sign(del1) && d.abs() > (three * del0).abs() {
        three * del0
    } else {
        d
    }
}
