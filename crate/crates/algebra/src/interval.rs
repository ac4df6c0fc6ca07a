//! Closed intervals with exact rational endpoints.
//!
//! Used for sign determination of algebraic numbers and for certified
//! polynomial bounds; endpoints never round, so enclosures are rigorous.

use crate::qpoly::Q;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// A closed interval `[lo, hi]` with `lo ≤ hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    /// Lower endpoint.
    pub lo: Q,
    /// Upper endpoint.
    pub hi: Q,
}

impl Interval {
    /// Interval from endpoints (swapped if given in the wrong order).
    pub fn new(a: Q, b: Q) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Degenerate interval `[x, x]`.
    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    /// Interval from two `i64` rationals `a/d .. b/d`.
    pub fn from_ints(a: i64, b: i64) -> Self {
        Interval::new(Q::from_integer(a.into()), Q::from_integer(b.into()))
    }

    /// Width `hi − lo`.
    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    /// Midpoint.
    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(BigInt::from(2))
    }

    /// True iff 0 ∈ [lo, hi].
    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// True iff `x ∈ [lo, hi]`.
    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Strict sign when the interval excludes zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> Q {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Smallest absolute value over the interval.
    pub fn mig(&self) -> Q {
        if self.contains_zero() {
            Q::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            -self.hi.clone()
        }
    }

    /// Sum.
    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    /// Difference.
    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    /// Negation.
    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    /// Product.
    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        Interval { lo, hi }
    }

    /// Multiplication by an exact rational.
    pub fn scale(&self, c: &Q) -> Interval {
        Interval::new(&self.lo * c, &self.hi * c)
    }

    /// Integer power (tight for even powers of intervals straddling zero).
    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(Q::from_integer(BigInt::from(1)));
        }
        let a = num_traits::pow(self.lo.clone(), e as usize);
        let b = num_traits::pow(self.hi.clone(), e as usize);
        if e.is_multiple_of(2) && self.contains_zero() {
            Interval { lo: Q::zero(), hi: if a > b { a } else { b } }
        } else {
            Interval::new(a, b)
        }
    }

    /// Convex hull.
    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: if self.lo < o.lo { self.lo.clone() } else { o.lo.clone() },
            hi: if self.hi > o.hi { self.hi.clone() } else { o.hi.clone() },
        }
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: Q) -> Interval {
        Interval { lo: -r.clone(), hi: r }
    }

    /// Horner enclosure of a rational polynomial over this interval.
    pub fn eval_qpoly(&self, p: &[Q]) -> Interval {
        let mut acc = Interval::point(Q::zero());
        for c in p.iter().rev() {
            acc = acc.mul(self).add(&Interval::point(c.clone()));
        }
        acc
    }

    /// Floating-point rendering of the endpoints.
    pub fn to_f64(&self) -> (f64, f64) {
        (self.lo.to_f64().unwrap_or(f64::NAN), self.hi.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
