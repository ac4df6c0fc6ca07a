//! Bivariate polynomials `K[ρ][z]` with exact gcd.
//!
//! Used to factor the common part of the two components of a reduced planar
//! field: the gcd is computed by the primitive polynomial remainder sequence
//! in `z` over the coefficient ring `K[ρ]`.

use crate::blowup::{cyl, RHO, Z};
use crate::error::{CoreError, Result};
use hopf3_algebra::{Mono, Ring, Scalar, Series, Trunc, UPoly};

/// A polynomial in `z` whose coefficients are polynomials in `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    c: Vec<UPoly<Scalar>>,
}

impl BiPoly {
    fn new(mut c: Vec<UPoly<Scalar>>) -> BiPoly {
        while c.last().is_some_and(|p| p.is_zero()) {
            c.pop();
        }
        BiPoly { c }
    }

    /// Converts an exact cylinder-chart polynomial in `(z, ρ)`.
    pub fn from_series(s: &Series<Scalar>) -> BiPoly {
        let dz = s.degree_in(Z).unwrap_or(0) as usize;
        let dr = s.degree_in(RHO).unwrap_or(0) as usize;
        let mut c = vec![vec![Scalar::zero(); dr + 1]; dz + 1];
        for (m, v) in s.terms() {
            c[m[Z] as usize][m[RHO] as usize] = v.clone();
        }
        BiPoly::new(c.into_iter().map(UPoly::new).collect())
    }

    /// Converts back to a series over `(z, ρ)`.
    pub fn to_series(&self) -> Series<Scalar> {
        let mut terms = Vec::new();
        for (i, p) in self.c.iter().enumerate() {
            for (j, v) in p.coeffs().iter().enumerate() {
                terms.push((Mono::from_slice(&[i as u32, j as u32]), v.clone()));
            }
        }
        Series::from_terms(&cyl(), terms, Trunc::Exact)
    }

    /// Zero test.
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree in `z`.
    pub fn deg_z(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn lc(&self) -> &UPoly<Scalar> {
        self.c.last().expect("nonzero")
    }

    /// Value at `z = ρ = 0`.
    pub fn at_origin(&self) -> Scalar {
        self.c.first().map(|p| p.coeff(0)).unwrap_or_else(Scalar::zero)
    }

    /// Derivative in `z`.
    pub fn deriv_z(&self) -> BiPoly {
        BiPoly::new(self.c.iter().enumerate().skip(1).map(|(i, p)| p.scale(&Scalar::int(i as i64))).collect())
    }

    /// Gcd of the coefficients (monic in `ρ`).
    pub fn content(&self) -> UPoly<Scalar> {
        let mut g = UPoly::zero();
        for p in &self.c {
            g = g.gcd(p);
            if g.degree() == Some(0) {
                break;
            }
        }
        g
    }

    /// Primitive part together with the content.
    pub fn primitive(&self) -> (UPoly<Scalar>, BiPoly) {
        if self.is_zero() {
            return (UPoly::zero(), self.clone());
        }
        let g = self.content();
        let c = self.c.iter().map(|p| p.div_exact(&g).expect("content divides")).collect();
        (g, BiPoly::new(c))
    }

    fn scale_poly(&self, a: &UPoly<Scalar>) -> BiPoly {
        BiPoly::new(self.c.iter().map(|p| p.mul(a)).collect())
    }

    fn sub(&self, o: &BiPoly) -> BiPoly {
        let n = self.c.len().max(o.c.len());
        let z = UPoly::zero();
        BiPoly::new((0..n).map(|i| self.c.get(i).unwrap_or(&z).sub(o.c.get(i).unwrap_or(&z))).collect())
    }

    fn shift_z(&self, k: usize) -> BiPoly {
        let mut c = vec![UPoly::zero(); k];
        c.extend(self.c.iter().cloned());
        BiPoly::new(c)
    }

    /// Pseudo-remainder in `z`.
    fn prem(&self, b: &BiPoly) -> BiPoly {
        let db = b.deg_z().expect("nonzero divisor");
        let lb = b.lc().clone();
        let mut a = self.clone();
        while let Some(da) = a.deg_z() {
            if da < db {
                break;
            }
            let la = a.lc().clone();
            a = a.scale_poly(&lb).sub(&b.shift_z(da - db).scale_poly(&la));
        }
        a
    }

    /// Gcd in `K[ρ][z]`, normalized with monic content and monic leading `ρ`-coefficient.
    pub fn gcd(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return o.normalized();
        }
        if o.is_zero() {
            return self.normalized();
        }
        let (ca, mut a) = self.primitive();
        let (cb, mut b) = o.primitive();
        let c = ca.gcd(&cb);
        if a.deg_z() < b.deg_z() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive().1 };
        }
        a.scale_poly(&c).normalized()
    }

    fn normalized(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc().lc();
        let inv = l.checked_inv().expect("nonzero leading coefficient");
        BiPoly::new(self.c.iter().map(|p| p.scale(&inv)).collect())
    }

    /// Exact quotient; errors unless `b` divides `self`.
    pub fn div_exact(&self, b: &BiPoly) -> Result<BiPoly> {
        let db = b.deg_z().ok_or_else(|| CoreError::Internal("division by zero polynomial".into()))?;
        let mut a = self.clone();
        let mut q = vec![UPoly::zero(); a.c.len().saturating_sub(db).max(1)];
        while let Some(da) = a.deg_z() {
            if da < db {
                return Err(CoreError::Internal("inexact bivariate division".into()));
            }
            let t = a.lc().div_exact(b.lc()).map_err(|_| CoreError::Internal("inexact bivariate division".into()))?;
            a = a.sub(&b.shift_z(da - db).scale_poly(&t));
            q[da - db] = t;
        }
        Ok(BiPoly::new(q))
    }

    /// Squarefree part in `z` of the primitive part (content dropped).
    pub fn squarefree(&self) -> BiPoly {
        let (_, p) = self.primitive();
        if p.deg_z().unwrap_or(0) == 0 {
            return p;
        }
        let g = p.gcd(&p.deriv_z());
        p.div_exact(&g).expect("gcd divides").primitive().1
    }

    /// Evaluation at `z = 0` as a polynomial in `ρ`.
    pub fn at_z_zero(&self) -> UPoly<Scalar> {
        self.c.first().cloned().unwrap_or_else(UPoly::zero)
    }

    /// Evaluation at `ρ = 0` as a polynomial in `z`.
    pub fn at_rho_zero(&self) -> UPoly<Scalar> {
        UPoly::new(self.c.iter().map(|p| p.coeff(0)).collect())
    }
}

impl BiPoly {
    /// Substitutes `z = h(ρ)`.
    pub fn eval_z(&self, h: &UPoly<Scalar>) -> UPoly<Scalar> {
        let mut acc = UPoly::zero();
        for p in self.c.iter().rev() {
            acc = acc.mul(h).add(p);
        }
        acc
    }

    /// Derivative in `ρ`.
    pub fn deriv_rho(&self) -> BiPoly {
        BiPoly::new(self.c.iter().map(|p| p.derivative()).collect())
    }

    /// True when `ρ` divides the polynomial.
    pub fn rho_divides(&self) -> bool {
        self.c.iter().all(|p| p.coeff(0).is_zero())
    }

    /// True when `z` divides the polynomial.
    pub fn z_divides(&self) -> bool {
        self.c.first().is_none_or(|p| p.is_zero())
    }

    /// Coefficient of `z^i ρ^j`.
    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        self.c.get(i).map(|p| p.coeff(j)).unwrap_or_else(Scalar::zero)
    }
}

impl BiPoly {
    /// Sum.
    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let n = self.c.len().max(o.c.len());
        let z = UPoly::zero();
        BiPoly::new((0..n).map(|i| self.c.get(i).unwrap_or(&z).add(o.c.get(i).unwrap_or(&z))).collect())
    }

    /// Product.
    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::new(Vec::new());
        }
        let mut c = vec![UPoly::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        BiPoly::new(c)
    }
}
