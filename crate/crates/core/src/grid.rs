//! Collocation grids, differentiation matrices, coefficient transforms and
//! domain maps.
//!
//! Chebyshev nodes are stored in descending order, `x_0 = 1`, `x_{n-1} = -1`.
//! After an affine map onto `[a, b]` this means index `0` is the right
//! endpoint `b` and index `n - 1` the left endpoint `a`.

use faer::Mat;

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Chebyshev–Gauss–Lobatto grid with its first and second derivative matrices.
#[derive(Clone, Debug)]
pub struct ChebGrid<T: Scalar> {
    nodes: Vec<T>,
    d1: Mat<T>,
    d2: Option<Mat<T>>,
}

impl<T: Scalar> ChebGrid<T> {
    pub fn n_points(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn d1(&self) -> &Mat<T> {
        &self.d1
    }

    /// Second derivative matrix; `None` when built with `max_order = 1`.
    pub fn d2(&self) -> Option<&Mat<T>> {
        self.d2.as_ref()
    }
}

/// Uniform sinc grid `center + (j - (n-1)/2) h` with its second derivative matrix.
#[derive(Clone, Debug)]
pub struct SincGrid<T: Scalar> {
    step_h: T,
    center: T,
    nodes: Vec<T>,
    d2: Mat<T>,
}

impl<T: Scalar> SincGrid<T> {
    pub fn n_points(&self) -> usize {
        self.nodes.len()
    }

    pub fn step_h(&self) -> T {
        self.step_h
    }

    pub fn center(&self) -> T {
        self.center
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn d2(&self) -> &Mat<T> {
        &self.d2
    }
}

/// Affine bijection between a physical interval `[a, b]` and `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap<T: Scalar> {
    a: T,
    b: T,
}

impl<T: Scalar> AffineMap<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return invalid(format!("affine map needs finite a < b, got [{a}, {b}]"));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    /// `d(xi)/dx = 2 / (b - a)`.
    pub fn scale(&self) -> T {
        T::lit(2.0) / (self.b - self.a)
    }

    /// Constant term of `xi = scale * x + offset`.
    pub fn offset(&self) -> T {
        -(self.a + self.b) / (self.b - self.a)
    }

    /// Physical point for a reference coordinate in `[-1, 1]`.
    pub fn from_reference(&self, xi: T) -> T {
        if xi == T::one() {
            return self.b;
        }
        if xi == -T::one() {
            return self.a;
        }
        let two = T::lit(2.0);
        (self.a + self.b) / two + xi * ((self.b - self.a) / two)
    }

    /// Reference coordinate for a physical point.
    pub fn to_reference(&self, x: T) -> T {
        let two = T::lit(2.0);
        (x - (self.a + self.b) / two) / ((self.b - self.a) / two)
    }
}

/// Chebyshev–Gauss–Lobatto points `cos(j pi / (n-1))`, `j = 0..n-1`.
pub fn cgl_nodes<T: Scalar>(n: usize) -> Result<Vec<T>> {
    if n < 2 {
        return invalid(format!("need at least 2 CGL nodes, got {n}"));
    }
    let m = n - 1;
    // sin form is exactly antisymmetric and hits 0, ±1 exactly
    let half_pi = T::FRAC_PI_2();
    Ok((0..n)
        .map(|j| {
            let k = m as i64 - 2 * j as i64;
            (half_pi * T::lit(k as f64) / T::from_count(m)).sin()
        })
        .collect())
}

/// Chebyshev differentiation matrices on `n` CGL points.
///
/// Off-diagonal entries use the trigonometric form of `x_k - x_j` with the
/// flipping trick, diagonal entries are negative row sums, and the second
/// derivative comes from the direct recursion
/// `D_l = l Z .* (C .* diag(D_{l-1}) - D_{l-1})` rather than from `D_1 D_1`.
pub fn cheb_diff<T: Scalar>(n: usize, max_order: usize) -> Result<ChebGrid<T>> {
    if !(1..=2).contains(&max_order) {
        return invalid(format!("max_order must be 1 or 2, got {max_order}"));
    }
    let nodes = cgl_nodes::<T>(n)?;
    let m = n - 1;
    let two = T::lit(2.0);
    let theta: Vec<T> = (0..n).map(|k| T::from_count(k) * T::PI() / T::from_count(m)).collect();

    // dx[i][j] = x_i - x_j
    let n1 = n / 2;
    let mut dx = Mat::<T>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = if i < n1 {
                two * ((theta[j] + theta[i]) / two).sin() * ((theta[j] - theta[i]) / two).sin()
            } else {
                let (ii, jj) = (n - 1 - i, n - 1 - j);
                -(two * ((theta[jj] + theta[ii]) / two).sin() * ((theta[jj] - theta[ii]) / two).sin())
            };
            dx[(i, j)] = v;
        }
    }

    let c = |k: usize| if k == 0 || k == m { two } else { T::one() };
    let sign = |k: usize| if k % 2 == 0 { T::one() } else { -T::one() };

    let mut z = Mat::<T>::zeros(n, n);
    let mut cmat = Mat::<T>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                z[(i, j)] = T::one() / dx[(i, j)];
            }
            cmat[(i, j)] = sign(i + j) * c(i) / c(j);
        }
    }

    let mut prev = Mat::<T>::identity(n, n);
    let mut mats = Vec::with_capacity(max_order);
    for ell in 1..=max_order {
        let l = T::from_count(ell);
        let mut next = Mat::<T>::zeros(n, n);
        for i in 0..n {
            let di = prev[(i, i)];
            let mut row_sum = T::zero();
            for j in 0..n {
                if i == j {
                    continue;
                }
                let v = l * z[(i, j)] * (cmat[(i, j)] * di - prev[(i, j)]);
                next[(i, j)] = v;
                row_sum = row_sum + v;
            }
            next[(i, i)] = -row_sum;
        }
        mats.push(next.clone());
        prev = next;
    }
    let mut it = mats.into_iter();
    let d1 = it.next().expect("order 1 always built");
    let d2 = it.next();
    Ok(ChebGrid { nodes, d1, d2 })
}

/// Sinc second-derivative matrix on `2m + 1` nodes `center + k h`, `k = -m..m`.
pub fn sinc_d2<T: Scalar>(m: usize, h: T, center: T) -> Result<SincGrid<T>> {
    if m < 1 {
        return invalid("sinc half-width must be at least 1");
    }
    sinc_d2_points(2 * m + 1, h, center)
}

/// Sinc second-derivative matrix on `n` nodes symmetric about `center`.
///
/// For odd `n` the center is itself a node; for even `n` the nodes sit at
/// half-integer multiples of `h`.
pub fn sinc_d2_points<T: Scalar>(n: usize, h: T, center: T) -> Result<SincGrid<T>> {
    if !(h > T::zero()) || !h.is_finite() {
        return invalid(format!("sinc step must be positive, got {h}"));
    }
    if n < 2 {
        return invalid("sinc grid needs at least 2 points");
    }
    let half = T::from_count(n - 1) / T::lit(2.0);
    let nodes: Vec<T> = (0..n).map(|j| center + (T::from_count(j) - half) * h).collect();
    let h2 = h * h;
    let diag = -T::PI() * T::PI() / (T::lit(3.0) * h2);
    let d2 = Mat::from_fn(n, n, |j, k| {
        if j == k {
            diag
        } else {
            let m = j.abs_diff(k);
            let s = if m % 2 == 0 { T::one() } else { -T::one() };
            let mm = T::from_count(m);
            -T::lit(2.0) * s / (h2 * mm * mm)
        }
    });
    Ok(SincGrid { step_h: h, center, nodes, d2 })
}

/// Maps a reference grid onto `[a, b]`, scaling `d1` by `2/(b-a)` and `d2` by its square.
pub fn map_matrices<T: Scalar>(grid: &ChebGrid<T>, map: &AffineMap<T>) -> Result<ChebGrid<T>> {
    if map.b() <= map.a() {
        return invalid("map needs b > a");
    }
    let s = map.scale();
    let nodes = grid.nodes.iter().map(|&xi| map.from_reference(xi)).collect();
    let d1 = Mat::from_fn(grid.d1.nrows(), grid.d1.ncols(), |i, j| grid.d1[(i, j)] * s);
    let d2 = grid
        .d2
        .as_ref()
        .map(|d| Mat::from_fn(d.nrows(), d.ncols(), |i, j| d[(i, j)] * s * s));
    Ok(ChebGrid { nodes, d1, d2 })
}

/// Chebyshev grid in the logarithmic coordinate `s = ln x` on `[a, b]`, `0 < a < b`.
///
/// `nodes` are the physical points `x_j = exp(s_j)`. The matrices are the
/// plain `d/ds` and `d²/ds²` operators; `d/dx = x^{-1} d/ds` and
/// `x² d²/dx² = d²/ds² - d/ds`.
#[derive(Clone, Debug)]
pub struct LogGrid<T: Scalar> {
    pub nodes: Vec<T>,
    pub ds1: Mat<T>,
    pub ds2: Mat<T>,
}

pub fn log_graded<T: Scalar>(n: usize, a: T, b: T) -> Result<LogGrid<T>> {
    if !(a > T::zero()) || b <= a {
        return invalid(format!("log grading needs 0 < a < b, got [{a}, {b}]"));
    }
    let reference = cheb_diff::<T>(n, 2)?;
    let map = AffineMap::new(a.ln(), b.ln())?;
    let mapped = map_matrices(&reference, &map)?;
    let mut nodes: Vec<T> = mapped.nodes.iter().map(|s| s.exp()).collect();
    // pin the endpoints against exp/ln round-off
    nodes[0] = b;
    nodes[n - 1] = a;
    Ok(LogGrid {
        nodes,
        ds1: mapped.d1,
        ds2: mapped.d2.expect("order 2 requested"),
    })
}

/// Chebyshev coefficients of the polynomial interpolating `values` at CGL nodes.
pub fn cheb_coeffs<T: Scalar>(values: &[T]) -> Result<Vec<T>> {
    if values.len() < 2 {
        return invalid("coefficient transform needs at least 2 values");
    }
    let n = values.len() - 1;
    let nn = T::from_count(n);
    let mut c: Vec<T> = T::dct1(values).into_iter().map(|v| v / nn).collect();
    c[0] = c[0] / T::lit(2.0);
    c[n] = c[n] / T::lit(2.0);
    Ok(c)
}

/// Values at CGL nodes of the Chebyshev series with coefficients `coeffs`.
pub fn cheb_values<T: Scalar>(coeffs: &[T]) -> Result<Vec<T>> {
    if coeffs.len() < 2 {
        return invalid("inverse transform needs at least 2 coefficients");
    }
    let n = coeffs.len() - 1;
    let half = T::lit(0.5);
    let a: Vec<T> = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| if k == 0 || k == n { c } else { c * half })
        .collect();
    Ok(T::dct1(&a))
}

/// Integral over `[lo, hi] ⊂ [-1, 1]` of the interpolant through CGL samples.
pub fn integrate_interpolant<T: Scalar>(values: &[T], lo: T, hi: T) -> Result<T> {
    if !(lo >= -T::one() && hi <= T::one() && lo <= hi) {
        return invalid(format!("integration bounds [{lo}, {hi}] outside [-1, 1]"));
    }
    let c = cheb_coeffs(values)?;
    let antiderivative = |x: T, k: usize| -> T {
        let t = |m: usize| (T::from_count(m) * x.acos()).cos();
        match k {
            0 => x,
            1 => x * x / T::lit(2.0),
            _ => {
                let kk = T::from_count(k);
                t(k + 1) / (T::lit(2.0) * (kk + T::one())) - t(k - 1) / (T::lit(2.0) * (kk - T::one()))
            }
        }
    };
    Ok(c
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (k, &ck)| acc + ck * (antiderivative(hi, k) - antiderivative(lo, k))))
}
