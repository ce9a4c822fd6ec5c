//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::sync::Arc;

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::{num_complex::Complex, FftPlanner};

/// Real floating-point type the solvers are generic over (`f32` or `f64`).
///
/// Besides the `num-traits` float interface this carries the dense linear
/// algebra bound required by `faer` and a cosine transform hook used by the
/// Chebyshev coefficient routines.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + faer::traits::RealField
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Never fails for the supported types.
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("f64 literal representable")
    }

    /// Converts a count or index.
    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable")
    }

    /// Type-I discrete cosine transform of `a` (length `N + 1`, `N >= 1`):
    /// `F_j = a_0 + (-1)^j a_N + 2 sum_{k=1}^{N-1} a_k cos(pi j k / N)`.
    fn dct1(a: &[Self]) -> Vec<Self>;
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn dct1(a: &[Self]) -> Vec<Self> {
                let n = a.len() - 1;
                if n == 0 {
                    return vec![a[0]];
                }
                let len = 2 * n;
                let mut buf: Vec<Complex<$t>> = Vec::with_capacity(len);
                buf.extend(a.iter().map(|&v| Complex::new(v, 0.0)));
                buf.extend(a[1..n].iter().rev().map(|&v| Complex::new(v, 0.0)));
                let fft: Arc<dyn rustfft::Fft<$t>> = FftPlanner::new().plan_fft_forward(len);
                fft.process(&mut buf);
                buf.truncate(n + 1);
                buf.into_iter().map(|c| c.re).collect()
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);
