//! Dense univariate polynomials over the rationals (coefficients low → high).
//!
//! These free functions are the workhorse beneath number-field arithmetic,
//! Sturm sequences and exact root isolation.

use crate::error::{AlgebraError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Exact rational number.
pub type Q = BigRational;

/// Rational from integer numerator and denominator.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Removes trailing zero coefficients in place.
pub fn trim(p: &mut Vec<Q>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Returns a trimmed copy.
pub fn trimmed(p: &[Q]) -> Vec<Q> {
    let mut v = p.to_vec();
    trim(&mut v);
    v
}

/// Degree, `None` for the zero polynomial.
pub fn degree(p: &[Q]) -> Option<usize> {
    let mut d = p.len();
    while d > 0 && p[d - 1].is_zero() {
        d -= 1;
    }
    d.checked_sub(1)
}

/// Sum.
pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Q::zero);
        let y = b.get(i).cloned().unwrap_or_else(Q::zero);
        r.push(x + y);
    }
    trim(&mut r);
    r
}

/// Difference.
pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Q::zero);
        let y = b.get(i).cloned().unwrap_or_else(Q::zero);
        r.push(x - y);
    }
    trim(&mut r);
    r
}

/// Product.
pub fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(&mut r);
    r
}

/// Multiplication by a rational constant.
pub fn scale(a: &[Q], c: &Q) -> Vec<Q> {
    let mut r: Vec<Q> = a.iter().map(|x| x * c).collect();
    trim(&mut r);
    r
}

/// Euclidean division `a = q·b + r` with `deg r < deg b`.
pub fn divrem(a: &[Q], b: &[Q]) -> Result<(Vec<Q>, Vec<Q>)> {
    let db = degree(b).ok_or(AlgebraError::ZeroPolynomial)?;
    let mut r = trimmed(a);
    let lb = b[db].clone();
    let mut quo = vec![Q::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lb;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[shift + i] -= &c * bc;
        }
        quo[shift] = c;
        trim(&mut r);
    }
    trim(&mut quo);
    Ok((quo, r))
}

/// Remainder of Euclidean division.
pub fn rem(a: &[Q], b: &[Q]) -> Result<Vec<Q>> {
    Ok(divrem(a, b)?.1)
}

/// Makes a polynomial monic (zero stays zero).
pub fn monic(p: &[Q]) -> Vec<Q> {
    match degree(p) {
        None => Vec::new(),
        Some(d) => {
            let l = p[d].clone();
            p[..=d].iter().map(|c| c / &l).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = trimmed(a);
    let mut y = trimmed(b);
    while !y.is_empty() {
        let r = rem(&x, &y).expect("nonzero divisor");
        x = y;
        y = r;
    }
    monic(&x)
}

/// Extended Euclid: returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
pub fn ext_gcd(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>, Vec<Q>) {
    let (mut r0, mut r1) = (trimmed(a), trimmed(b));
    let (mut s0, mut s1) = (vec![Q::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Q::one()]);
    while !r1.is_empty() {
        let (qt, r) = divrem(&r0, &r1).expect("nonzero divisor");
        let s = sub(&s0, &mul(&qt, &s1));
        let t = sub(&t0, &mul(&qt, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    match degree(&r0) {
        None => (r0, s0, t0),
        Some(d) => {
            let l = r0[d].clone();
            (
                scale(&r0, &(Q::one() / &l)),
                scale(&s0, &(Q::one() / &l)),
                scale(&t0, &(Q::one() / &l)),
            )
        }
    }
}

/// Formal derivative.
pub fn derivative(p: &[Q]) -> Vec<Q> {
    let mut r: Vec<Q> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut r);
    r
}

/// Horner evaluation at a rational point.
pub fn eval(p: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Sign of `p(x)` as −1, 0, 1.
pub fn sign_at(p: &[Q], x: &Q) -> i32 {
    let v = eval(p, x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Square-free part `p / gcd(p, p')`, made monic.
pub fn squarefree(p: &[Q]) -> Vec<Q> {
    let p = trimmed(p);
    if degree(&p).unwrap_or(0) == 0 {
        return monic(&p);
    }
    let g = gcd(&p, &derivative(&p));
    monic(&divrem(&p, &g).expect("nonzero gcd").0)
}

/// Substitution `p(x + a)` (Taylor shift).
pub fn shift(p: &[Q], a: &Q) -> Vec<Q> {
    let mut r: Vec<Q> = Vec::new();
    for c in p.iter().rev() {
        // r = r·(x + a) + c
        let mut nr = vec![Q::zero(); r.len() + 1];
        for (i, x) in r.iter().enumerate() {
            nr[i + 1] += x;
            nr[i] += x * a;
        }
        nr[0] += c;
        r = nr;
    }
    trim(&mut r);
    r
}

/// Sturm sequence of a polynomial.
pub fn sturm_sequence(p: &[Q]) -> Vec<Vec<Q>> {
    let mut seq = vec![trimmed(p), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r = rem(&seq[n - 2], &seq[n - 1]).expect("nonzero");
        if r.is_empty() {
            break;
        }
        seq.push(scale(&r, &-Q::one()));
    }
    seq
}

fn sign_variations(seq: &[Vec<Q>], x: &Q) -> usize {
    let mut last = 0;
    let mut count = 0;
    for p in seq {
        let s = sign_at(p, x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn sturm_count(seq: &[Vec<Q>], a: &Q, b: &Q) -> usize {
    sign_variations(seq, a).saturating_sub(sign_variations(seq, b))
}

/// Cauchy bound: every real root lies in `(-B, B)`.
pub fn root_bound(p: &[Q]) -> Q {
    let d = degree(p).expect("nonzero");
    let l = p[d].abs();
    let mut m = Q::zero();
    for c in &p[..d] {
        let v = c.abs() / &l;
        if v > m {
            m = v;
        }
    }
    m + Q::one()
}

/// A real root of a square-free polynomial, either exact or isolated.
#[derive(Debug, Clone, PartialEq)]
pub enum IsolatedRoot {
    /// Exact rational root.
    Exact(Q),
    /// The unique root lies in the open interval `(lo, hi)` and `p(lo)·p(hi) < 0`.
    Interval(Q, Q),
}

/// Isolates all distinct real roots of `p` (square-free part taken internally), sorted increasingly.
pub fn isolate(p: &[Q]) -> Result<Vec<IsolatedRoot>> {
    if degree(p).is_none() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let sf = squarefree(p);
    if degree(&sf) == Some(0) {
        return Ok(Vec::new());
    }
    let seq = sturm_sequence(&sf);
    let b = root_bound(&sf);
    let mut out = Vec::new();
    isolate_rec(&sf, &seq, -b.clone(), b, &mut out);
    Ok(out)
}

fn isolate_rec(p: &[Q], seq: &[Vec<Q>], a: Q, b: Q, out: &mut Vec<IsolatedRoot>) {
    // Invariant: p(a) != 0 and p(b) != 0; roots are counted in (a, b).
    let n = sturm_count(seq, &a, &b);
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push(IsolatedRoot::Interval(a, b));
        return;
    }
    let two = Q::from_integer(BigInt::from(2));
    let mid = (&a + &b) / &two;
    if sign_at(p, &mid) == 0 {
        // Exact rational root: cut out a small root-free punctured neighbourhood.
        let mut e = (&b - &a) / Q::from_integer(BigInt::from(8));
        loop {
            let (l, r) = (&mid - &e, &mid + &e);
            if sign_at(p, &l) != 0 && sign_at(p, &r) != 0 && sturm_count(seq, &l, &r) == 1 {
                isolate_rec(p, seq, a, l, out);
                out.push(IsolatedRoot::Exact(mid));
                isolate_rec(p, seq, r, b, out);
                return;
            }
            e /= &two;
        }
    }
    isolate_rec(p, seq, a, mid.clone(), out);
    isolate_rec(p, seq, mid, b, out);
}

/// Bisects an isolating interval until its width is below `width`.
pub fn refine(p: &[Q], lo: &Q, hi: &Q, width: &Q) -> (Q, Q) {
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let sa = sign_at(p, &a);
    let two = Q::from_integer(BigInt::from(2));
    while &(&b - &a) > width {
        let m = (&a + &b) / &two;
        let sm = sign_at(p, &m);
        if sm == 0 {
            // Exact rational root: collapse to a tiny interval around it.
            let e = width / Q::from_integer(BigInt::from(4));
            return (&m - &e, &m + &e);
        }
        if sm == sa {
            a = m;
        } else {
            b = m;
        }
    }
    (a, b)
}

/// Clears denominators and content: returns the primitive integer polynomial with positive leading coefficient.
pub fn to_primitive_integer(p: &[Q]) -> Vec<BigInt> {
    let p = trimmed(p);
    if p.is_empty() {
        return Vec::new();
    }
    let mut l = BigInt::one();
    for c in &p {
        l = l.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = p.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if p.last().map(|c| c.is_negative()).unwrap_or(false) {
        g = -g;
    }
    for c in ints.iter_mut() {
        *c = &*c / &g;
    }
    ints
}

/// Factorization over the rationals into monic irreducible factors with multiplicities.
pub fn factor(p: &[Q]) -> Result<Vec<(Vec<Q>, usize)>> {
    use algebraics::polynomial::Polynomial;
    let ints = to_primitive_integer(p);
    if ints.is_empty() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if ints.len() == 1 {
        return Ok(Vec::new());
    }
    let poly: Polynomial<BigInt> = ints.into();
    let f = poly.factor();
    let mut out: Vec<(Vec<Q>, usize)> = f
        .polynomial_factors
        .into_iter()
        .map(|pf| {
            let c: Vec<Q> = pf.polynomial.into_coefficients().into_iter().map(Q::from_integer).collect();
            (monic(&c), pf.power)
        })
        .collect();
    out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
    Ok(out)
}

/// Deterministic total order on polynomials (degree, then coefficients from the top).
pub fn cmp_poly(a: &[Q], b: &[Q]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.iter().rev().zip(b.iter().rev()) {
            match x.cmp(y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Resultant of two polynomials over the rationals (Euclidean recursion).
pub fn resultant(a: &[Q], b: &[Q]) -> Q {
    let (a, b) = (trimmed(a), trimmed(b));
    let (Some(da), Some(db)) = (degree(&a), degree(&b)) else {
        return Q::zero();
    };
    if db == 0 {
        return num_traits::pow(b[0].clone(), da);
    }
    if da == 0 {
        return num_traits::pow(a[0].clone(), db);
    }
    let r = rem(&a, &b).expect("nonzero");
    let Some(dr) = degree(&r) else {
        return Q::zero();
    };
    // res(a, b) = (-1)^{da·db} · lc(b)^{da − dr} · res(b, r)
    let sign = if (da * db) % 2 == 1 { -Q::one() } else { Q::one() };
    sign * num_traits::pow(b[db].clone(), da - dr) * resultant(&b, &r)
}

/// Renders a polynomial in the given variable name (for diagnostics and reports).
pub fn render(p: &[Q], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let cs = if c.is_one() && i > 0 {
            String::new()
        } else if (-c).is_one() && i > 0 {
            "-".to_string()
        } else if i > 0 {
            format!("{c}*")
        } else {
            format!("{c}")
        };
        parts.push(format!("{cs}{mono}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}
