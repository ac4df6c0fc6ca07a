//! Minimal commutative-ring abstraction used by polynomials and series.
//!
//! Method names carry an `r` prefix so they never collide with the
//! `std::ops` operator methods that the concrete types also implement.

use crate::scalar::Scalar;
use std::fmt::Debug;

/// A commutative ring with unity whose elements embed the scalar tower.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync + 'static {
    /// Additive identity.
    fn zero() -> Self;
    /// Multiplicative identity.
    fn one() -> Self;
    /// Exact zero test.
    fn is_zero(&self) -> bool;
    /// Sum.
    fn radd(&self, rhs: &Self) -> Self;
    /// Difference.
    fn rsub(&self, rhs: &Self) -> Self;
    /// Product.
    fn rmul(&self, rhs: &Self) -> Self;
    /// Additive inverse.
    fn rneg(&self) -> Self;
    /// Embedding of an exact scalar.
    fn from_scalar(s: &Scalar) -> Self;
    /// Multiplication by an exact scalar.
    fn scale(&self, s: &Scalar) -> Self {
        self.rmul(&Self::from_scalar(s))
    }
    /// Multiplicative inverse when it exists in the ring.
    fn try_inv(&self) -> Option<Self>;
    /// Exact one test.
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    /// Integer power by repeated squaring.
    fn rpow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.rmul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.rmul(&base);
            }
        }
        acc
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse; panics on zero.
    fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }
}
