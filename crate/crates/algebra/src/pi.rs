//! Polynomials in the transcendental symbol π with exact scalar coefficients.
//!
//! Because π is transcendental over the algebraic numbers, a π-polynomial is
//! zero iff all coefficients vanish, and its sign can be decided by interval
//! evaluation with a sufficiently tight rational enclosure of π.

use crate::interval::Interval;
use crate::qpoly::Q;
use crate::ring::Ring;
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// `Σ c_j π^j` with scalar coefficients.
#[derive(Clone, PartialEq)]
pub struct PiPoly {
    c: Vec<Scalar>,
}

impl PiPoly {
    /// From coefficients (low → high).
    pub fn new(mut c: Vec<Scalar>) -> PiPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        PiPoly { c }
    }

    /// Constant.
    pub fn constant(s: Scalar) -> PiPoly {
        PiPoly::new(vec![s])
    }

    /// The symbol π.
    pub fn pi() -> PiPoly {
        PiPoly::new(vec![Scalar::int(0), Scalar::int(1)])
    }

    /// `(2π)^j`.
    pub fn two_pi_pow(j: u32) -> PiPoly {
        let mut c = vec![Scalar::int(0); j as usize + 1];
        c[j as usize] = Scalar::rational(Q::from_integer(BigInt::from(2).pow(j)));
        PiPoly::new(c)
    }

    /// Coefficients (low → high).
    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    /// Degree in π (`None` for zero).
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// The value if it does not involve π.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.c.len() {
            0 => Some(Scalar::int(0)),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    /// Rigorous enclosure of the real value with the given relative precision in bits.
    pub fn enclose(&self, bits: u32) -> Interval {
        let pi = pi_enclosure(bits);
        let w = Q::new(BigInt::one(), BigInt::one() << bits);
        let mut acc = Interval::point(Q::zero());
        for c in self.c.iter().rev() {
            acc = acc.mul(&pi).add(&c.enclose(&w));
        }
        acc
    }

    /// Exact sign (π is transcendental, so a nonzero polynomial never vanishes).
    pub fn signum(&self) -> i32 {
        if self.c.is_empty() {
            return 0;
        }
        let mut bits = 64;
        loop {
            if let Some(s) = self.enclose(bits).sign() {
                return s;
            }
            bits *= 2;
        }
    }

    /// Floating-point value.
    pub fn to_f64(&self) -> f64 {
        let mut acc = 0.0;
        for c in self.c.iter().rev() {
            acc = acc * std::f64::consts::PI + c.to_f64();
        }
        acc
    }

    /// Rendering such as `2*π + 1/3*π^2`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (j, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match j {
                0 => String::new(),
                1 => "π".to_string(),
                _ => format!("π^{j}"),
            };
            if j == 0 {
                parts.push(c.render());
            } else if c.is_one() {
                parts.push(mono);
            } else {
                parts.push(format!("{}*{}", c.render(), mono));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for PiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Ring for PiPoly {
    fn zero() -> Self {
        PiPoly { c: Vec::new() }
    }
    fn one() -> Self {
        PiPoly::constant(Scalar::int(1))
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn radd(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        PiPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).cloned().unwrap_or_else(Scalar::zero);
                    let b = o.c.get(i).cloned().unwrap_or_else(Scalar::zero);
                    a + b
                })
                .collect(),
        )
    }
    fn rsub(&self, o: &Self) -> Self {
        self.radd(&o.rneg())
    }
    fn rmul(&self, o: &Self) -> Self {
        if self.c.is_empty() || o.c.is_empty() {
            return PiPoly::zero();
        }
        let mut r = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] = &r[i + j] + &(a * b);
            }
        }
        PiPoly::new(r)
    }
    fn rneg(&self) -> Self {
        PiPoly::new(self.c.iter().map(|x| -x).collect())
    }
    fn from_scalar(s: &Scalar) -> Self {
        PiPoly::constant(s.clone())
    }
    fn try_inv(&self) -> Option<Self> {
        match self.as_scalar() {
            Some(s) => s.checked_inv().map(PiPoly::constant),
            None => None,
        }
    }
}

/// Rational enclosure of π with width below `2^-bits`, from Machin's formula
/// `π = 16·atan(1/5) − 4·atan(1/239)` with alternating-series error bounds.
pub fn pi_enclosure(bits: u32) -> Interval {
    let tol = Q::new(BigInt::one(), BigInt::one() << (bits + 8));
    let a = atan_inv(5, &tol);
    let b = atan_inv(239, &tol);
    a.scale(&Q::from_integer(BigInt::from(16))).sub(&b.scale(&Q::from_integer(BigInt::from(4))))
}

/// Enclosure of `atan(1/n)` by truncating its alternating Taylor series.
fn atan_inv(n: i64, tol: &Q) -> Interval {
    let x = Q::new(BigInt::one(), BigInt::from(n));
    let x2 = &x * &x;
    let mut term = x.clone(); // x^{2k+1}
    let mut sum = Q::zero();
    let mut k: i64 = 0;
    loop {
        let t = &term / Q::from_integer(BigInt::from(2 * k + 1));
        if &t < tol {
            // Remainder of an alternating series with decreasing terms is bounded by the next term.
            return Interval::new(&sum - &t, &sum + &t);
        }
        if k % 2 == 0 {
            sum += &t;
        } else {
            sum -= &t;
        }
        term = &term * &x2;
        k += 1;
    }
}
