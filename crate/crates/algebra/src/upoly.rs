//! Dense univariate polynomials over an arbitrary coefficient ring.

use crate::error::{AlgebraError, Result};
use crate::ring::{Field, Ring};
use crate::scalar::Scalar;
use std::fmt;

/// Univariate polynomial with coefficients stored low → high, trimmed.
#[derive(Clone, PartialEq)]
pub struct UPoly<R: Ring> {
    c: Vec<R>,
}

impl<R: Ring> fmt::Debug for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.c)
    }
}

impl<R: Ring> UPoly<R> {
    /// Polynomial from coefficients (low → high).
    pub fn new(mut c: Vec<R>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    /// Zero polynomial.
    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    /// Constant polynomial.
    pub fn constant(a: R) -> Self {
        UPoly::new(vec![a])
    }

    /// The variable `x`.
    pub fn x() -> Self {
        UPoly::new(vec![R::zero(), R::one()])
    }

    /// Coefficients (low → high).
    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(R::zero)
    }

    /// Degree (`None` for zero).
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// True iff zero.
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> R {
        self.c.last().cloned().unwrap_or_else(R::zero)
    }

    /// Order of vanishing at 0 (`None` for zero).
    pub fn ord(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    /// Sum.
    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i).radd(&o.coeff(i))).collect())
    }

    /// Difference.
    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i).rsub(&o.coeff(i))).collect())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        UPoly::new(self.c.iter().map(|x| x.rneg()).collect())
    }

    /// Product.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut r = vec![R::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] = r[i + j].radd(&a.rmul(b));
            }
        }
        UPoly::new(r)
    }

    /// Multiplication by a coefficient.
    pub fn scale(&self, a: &R) -> Self {
        UPoly::new(self.c.iter().map(|x| x.rmul(a)).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![R::zero(); k];
        c.extend(self.c.iter().cloned());
        UPoly::new(c)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x.scale(&Scalar::int(i as i64)))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for a in self.c.iter().rev() {
            acc = acc.rmul(x).radd(a);
        }
        acc
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &UPoly<R>) -> UPoly<R> {
        let mut acc = UPoly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(g).add(&UPoly::constant(a.clone()));
        }
        acc
    }

    /// Substitution `self(x + a)`.
    pub fn shift(&self, a: &R) -> Self {
        self.compose(&UPoly::new(vec![a.clone(), R::one()]))
    }

    /// Coefficientwise map into another ring.
    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> UPoly<S> {
        UPoly::new(self.c.iter().map(f).collect())
    }
}

impl<F: Field> UPoly<F> {
    /// Euclidean division.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self)> {
        let db = b.degree().ok_or(AlgebraError::ZeroPolynomial)?;
        let inv = b.lc().inv();
        let mut r = self.c.clone();
        let mut q = vec![F::zero(); r.len().saturating_sub(db).max(1)];
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let coef = r[dr].rmul(&inv);
            let s = dr - db;
            for (i, bc) in b.c.iter().enumerate() {
                r[s + i] = r[s + i].rsub(&coef.rmul(bc));
            }
            q[s] = coef;
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    /// Exact division; errors on a nonzero remainder.
    pub fn div_exact(&self, b: &Self) -> Result<Self> {
        let (q, r) = self.divrem(b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::InexactDivision("univariate polynomial".into()))
        }
    }

    /// Monic normalization.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free part (monic).
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).expect("nonzero").0.monic()
    }
}
