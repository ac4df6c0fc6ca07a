//! Exact real root isolation.
//!
//! Over the rationals, polynomials are factored into irreducibles; linear
//! factors give rational roots and every real root of a higher-degree factor
//! becomes the generator of its own [`NumberField`]. Over a number field
//! `K = Q(α)` the polynomial is factored over `K` (norm, rational
//! factorization and gcd lifting); linear factors give roots in `K`, while a
//! real root of a nonlinear `K`-irreducible factor would need a nested
//! extension and is reported as [`AlgebraError::TowerExceeded`].

use crate::error::{AlgebraError, Result};
use crate::interval::Interval;
use crate::qpoly::{self, IsolatedRoot, Q};
use crate::scalar::{NumberField, Scalar};
use crate::upoly::UPoly;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::sync::Arc;

/// All distinct real roots of a rational polynomial, sorted increasingly.
pub fn isolate_real_roots(p: &[Q]) -> Result<Vec<Scalar>> {
    if qpoly::degree(p).is_none() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    for (f, _) in qpoly::factor(p)? {
        match qpoly::degree(&f) {
            Some(0) | None => {}
            Some(1) => roots.push(Scalar::rational(-f[0].clone() / &f[1])),
            Some(_) => {
                for r in qpoly::isolate(&f)? {
                    match r {
                        IsolatedRoot::Exact(x) => roots.push(Scalar::rational(x)),
                        IsolatedRoot::Interval(lo, hi) => {
                            let field = NumberField::new(f.clone(), lo, hi)?;
                            roots.push(Scalar::generator(&field));
                        }
                    }
                }
            }
        }
    }
    roots.sort_by(cmp_real);
    Ok(roots)
}

/// Total order on distinct real scalars, valid across different number fields.
pub fn cmp_real(a: &Scalar, b: &Scalar) -> Ordering {
    if a.compatible(b) {
        return a.partial_cmp(b).expect("compatible");
    }
    let mut w = Q::new(BigInt::one(), BigInt::from(1u64 << 20));
    loop {
        let ia = a.enclose(&w);
        let ib = b.enclose(&w);
        if ia.hi < ib.lo {
            return Ordering::Less;
        }
        if ib.hi < ia.lo {
            return Ordering::Greater;
        }
        w /= Q::from_integer(BigInt::from(1u64 << 20));
    }
}

/// Common number field of a set of scalars (`None` when all are rational).
pub fn common_field(xs: &[Scalar]) -> Result<Option<Arc<NumberField>>> {
    let mut f: Option<Arc<NumberField>> = None;
    for x in xs {
        if let Some(g) = x.field() {
            match &f {
                None => f = Some(g.clone()),
                Some(h) => {
                    if !(Arc::ptr_eq(h, g) || h.same_as(g)) {
                        return Err(AlgebraError::IncompatibleFields);
                    }
                }
            }
        }
    }
    Ok(f)
}

/// All distinct real roots of a polynomial with scalar coefficients, sorted increasingly.
///
/// Roots of rational polynomials may lie in any number field. For genuinely
/// algebraic coefficients, only roots inside the coefficient field are
/// representable; others raise [`AlgebraError::TowerExceeded`].
pub fn real_roots(p: &UPoly<Scalar>) -> Result<Vec<Scalar>> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let field = common_field(p.coeffs())?;
    let Some(field) = field else {
        let qp: Vec<Q> = p.coeffs().iter().map(|c| c.as_rational().expect("rational")).collect();
        return isolate_real_roots(&qp);
    };
    let mut roots = Vec::new();
    for f in factor_over_field(&p.squarefree(), &field)? {
        match f.degree() {
            Some(0) | None => {}
            Some(1) => roots.push(-(f.coeff(0) / f.coeff(1))),
            Some(_) => {
                if count_real_roots_over_field(&f) > 0 {
                    return Err(AlgebraError::TowerExceeded(format!(
                        "real root of a degree-{} factor over Q(α), α a {}",
                        f.degree().unwrap_or(0),
                        field.describe()
                    )));
                }
            }
        }
    }
    roots.sort_by(cmp_real);
    roots.dedup();
    Ok(roots)
}

/// Lifts a `K`-polynomial to a bivariate rational polynomial `P(y, z)` with `α ↦ y`,
/// returned as coefficient vectors in `y` for each power of `z`.
fn lift(p: &UPoly<Scalar>) -> Vec<Vec<Q>> {
    p.coeffs().iter().map(|c| c.coeffs().to_vec()).collect()
}

/// Norm `N(z) = Res_y(m(y), P(y, z))` computed by evaluation and interpolation.
pub fn norm(p: &UPoly<Scalar>, field: &NumberField) -> Vec<Q> {
    let m = field.minpoly();
    let dz = p.degree().unwrap_or(0);
    let npts = dz * field.degree() + 1;
    let lifted = lift(p);
    let mut xs = Vec::with_capacity(npts);
    let mut ys = Vec::with_capacity(npts);
    for j in 0..npts {
        let z = Q::from_integer(BigInt::from(j as i64));
        // P(y, z) as a polynomial in y.
        let mut py: Vec<Q> = Vec::new();
        let mut zp = Q::one();
        for cy in &lifted {
            py = qpoly::add(&py, &qpoly::scale(cy, &zp));
            zp *= &z;
        }
        xs.push(z);
        ys.push(qpoly::resultant(m, &py));
    }
    interpolate(&xs, &ys)
}

/// Lagrange interpolation through the given points.
fn interpolate(xs: &[Q], ys: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::new();
    for i in 0..xs.len() {
        if ys[i].is_zero() {
            continue;
        }
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for j in 0..xs.len() {
            if i != j {
                basis = qpoly::mul(&basis, &[-xs[j].clone(), Q::one()]);
                denom *= &xs[i] - &xs[j];
            }
        }
        out = qpoly::add(&out, &qpoly::scale(&basis, &(&ys[i] / denom)));
    }
    out
}

/// Factorization of a square-free polynomial over `K = Q(α)` into monic irreducibles.
pub fn factor_over_field(f: &UPoly<Scalar>, field: &Arc<NumberField>) -> Result<Vec<UPoly<Scalar>>> {
    let f = f.monic();
    if f.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let alpha = Scalar::generator(field);
    for s in 0..32i64 {
        let shift = &alpha * &Scalar::int(-s);
        let g = f.shift(&shift);
        let n = norm(&g, field);
        let nd = qpoly::derivative(&n);
        if qpoly::degree(&qpoly::gcd(&n, &nd)).unwrap_or(0) != 0 {
            continue;
        }
        let mut out = Vec::new();
        for (ni, _) in qpoly::factor(&n)? {
            let nk = UPoly::new(ni.iter().map(|c| Scalar::rational(c.clone())).collect());
            let h = g.gcd(&nk);
            if h.degree().unwrap_or(0) > 0 {
                out.push(h.shift(&(&alpha * &Scalar::int(s))).monic());
            }
        }
        return Ok(out);
    }
    Err(AlgebraError::TowerExceeded("no square-free norm shift found".into()))
}

/// Number of distinct real roots of a square-free polynomial over a real number field,
/// via a Sturm sequence with exact sign evaluation.
pub fn count_real_roots_over_field(f: &UPoly<Scalar>) -> usize {
    let seq = sturm_over_field(f);
    let bound = cauchy_bound(f);
    variations(&seq, &(-bound.clone())).saturating_sub(variations(&seq, &bound))
}

fn sturm_over_field(f: &UPoly<Scalar>) -> Vec<UPoly<Scalar>> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].divrem(&seq[n - 1]).expect("nonzero").1;
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

fn variations(seq: &[UPoly<Scalar>], x: &Q) -> usize {
    let xs = Scalar::rational(x.clone());
    let mut last = 0;
    let mut count = 0;
    for p in seq {
        let s = p.eval(&xs).signum();
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn cauchy_bound(f: &UPoly<Scalar>) -> Q {
    let lc = f.lc();
    let w = Q::new(BigInt::one(), BigInt::from(1u64 << 30));
    let mut m = Q::zero();
    for c in &f.coeffs()[..f.coeffs().len() - 1] {
        let r = (c / &lc).enclose(&w);
        let v = r.mag();
        if v > m {
            m = v;
        }
    }
    m + Q::from_integer(BigInt::from(2))
}

/// Rigorous enclosure of a real scalar root as an interval of width at most `w`.
pub fn root_enclosure(r: &Scalar, w: &Q) -> Interval {
    r.enclose(w)
}

/// Minimal gap between consecutive sorted real roots, as a rational lower bound.
pub fn min_gap_lower_bound(roots: &[Scalar]) -> Option<Q> {
    if roots.len() < 2 {
        return None;
    }
    let w = Q::new(BigInt::one(), BigInt::from(1u64 << 40));
    let mut best: Option<Q> = None;
    for pair in roots.windows(2) {
        let a = pair[0].enclose(&w);
        let b = pair[1].enclose(&w);
        let g = &b.lo - &a.hi;
        if best.as_ref().is_none_or(|x| &g < x) {
            best = Some(g);
        }
    }
    best
}
