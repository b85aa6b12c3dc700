//! Scalar abstraction shared by every numerical module.
//!
//! Algorithms are written once against [`Real`] and instantiated for `f32`,
//! `f64` and the extended-precision [`DoubleDouble`](crate::DoubleDouble).
//! Pure polynomial algebra (see [`Polynomial`](crate::Polynomial)) only needs
//! ring operations and additionally works over exact rationals.

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed};

/// Real floating-point scalar accepted by the approximation routines.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Signed + Sum + Debug + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every supported type represents all `f64`
    /// values closely enough that the conversion cannot fail.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn of(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable")
    }

    /// Lossy conversion used for reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Signed + Sum + Debug + Send + Sync + 'static
{
}

/// `n!` evaluated in `T`.
pub fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::of(k))
}

/// Binomial coefficient `C(n, k)` evaluated in `T` by the multiplicative rule.
pub fn binomial<T: Real>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, i| acc * T::of(n - i) / T::of(i + 1))
}
