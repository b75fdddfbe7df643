//! Scalar abstraction shared by the numerical modules.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the geometry is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64` for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn coth(self) -> Self {
        self.tanh().recip()
    }

    /// Default absolute target for adaptive quadrature panels.
    fn quadrature_tolerance() -> Self;
}

impl Real for f32 {
    fn quadrature_tolerance() -> Self {
        1e-6
    }
}

impl Real for f64 {
    fn quadrature_tolerance() -> Self {
        1e-12
    }
}

/// Value and first two derivatives of a scalar function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

impl<T: Real> Jet<T> {
    pub fn new(value: T, d1: T, d2: T) -> Self {
        Self { value, d1, d2 }
    }

    pub fn constant(value: T) -> Self {
        Self::new(value, T::zero(), T::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coth_matches_cosh_over_sinh() {
        let x = 0.8_f64;
        assert!((x.coth() - x.cosh() / x.sinh()).abs() < 1e-15);
        let y = 0.8_f32;
        assert!((y.coth() - y.cosh() / y.sinh()).abs() < 1e-6);
    }

    #[test]
    fn literal_conversion() {
        assert_eq!(<f32 as Real>::lit(0.5), 0.5f32);
        assert_eq!(<f64 as Real>::lit(2.0298), 2.0298);
    }
}
