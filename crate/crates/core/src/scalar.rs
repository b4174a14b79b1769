//! Real scalar abstraction shared by every numeric routine in the crate.
//!
//! All linear algebra is written against [`Real`], so the same code runs in
//! `f64` (the default, with the tolerances the verification suites use) and
//! in `f32` for cheap exploratory work.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type usable as the real part of a complex amplitude.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Default comparison tolerance for structural predicates.
    fn default_tol() -> Self;

    /// Eigenvalues and residual norms below this are treated as exactly zero.
    fn rank_eps() -> Self;

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("real scalar convertible to f64")
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-9
    }

    fn rank_eps() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-4
    }

    fn rank_eps() -> Self {
        1e-5
    }
}

/// Complex amplitude over a [`Real`] component type.
pub type Cplx<T> = Complex<T>;

pub(crate) fn is_finite<T: Real>(z: &Cplx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> Cplx<T> {
    Complex::new(re, T::zero())
}
