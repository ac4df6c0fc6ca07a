//! Gaussian extension `K[i]` of the scalar tower.

use crate::ring::{Field, Ring};
use crate::scalar::Scalar;
use std::fmt;

/// An element `re + i·im` with exact scalar parts.
#[derive(Clone, PartialEq)]
pub struct Cx {
    /// Real part.
    pub re: Scalar,
    /// Imaginary part.
    pub im: Scalar,
}

impl Cx {
    /// Builds `re + i·im`.
    pub fn new(re: Scalar, im: Scalar) -> Cx {
        Cx { re, im }
    }

    /// A real element.
    pub fn real(re: Scalar) -> Cx {
        Cx { re, im: Scalar::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Cx {
        Cx { re: Scalar::zero(), im: Scalar::one() }
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Cx {
        Cx { re: self.re.clone(), im: -&self.im }
    }

    /// Squared modulus `re² + im²`.
    pub fn norm_sq(&self) -> Scalar {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// Rendering `a+b*i`.
    pub fn render(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => "0".into(),
            (false, true) => self.re.render(),
            (true, false) => format!("{}*i", self.im.render()),
            (false, false) => format!("({}+{}*i)", self.re.render(), self.im.render()),
        }
    }
}

impl fmt::Debug for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Ring for Cx {
    fn zero() -> Self {
        Cx::real(Scalar::zero())
    }
    fn one() -> Self {
        Cx::real(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn radd(&self, r: &Self) -> Self {
        Cx { re: &self.re + &r.re, im: &self.im + &r.im }
    }
    fn rsub(&self, r: &Self) -> Self {
        Cx { re: &self.re - &r.re, im: &self.im - &r.im }
    }
    fn rmul(&self, r: &Self) -> Self {
        Cx {
            re: &(&self.re * &r.re) - &(&self.im * &r.im),
            im: &(&self.re * &r.im) + &(&self.im * &r.re),
        }
    }
    fn rneg(&self) -> Self {
        Cx { re: -&self.re, im: -&self.im }
    }
    fn from_scalar(s: &Scalar) -> Self {
        Cx::real(s.clone())
    }
    fn scale(&self, s: &Scalar) -> Self {
        Cx { re: &self.re * s, im: &self.im * s }
    }
    fn try_inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        let ni = n.checked_inv()?;
        Some(Cx { re: &self.re * &ni, im: -&(&self.im * &ni) })
    }
}

impl Field for Cx {}
