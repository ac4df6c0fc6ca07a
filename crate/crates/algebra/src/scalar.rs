//! Exact real scalars: rationals and elements of a real number field `Q(α)`.
//!
//! A [`NumberField`] is given by the monic irreducible minimal polynomial of
//! a real algebraic number `α` together with an isolating rational interval.
//! A [`Scalar`] is either a rational or a polynomial in `α` of degree below
//! the field degree. Rational values are always stored without a field, so
//! the representation is canonical and equality is structural. Signs are
//! decided exactly by interval refinement of `α`; no floating point is used.

use crate::error::{AlgebraError, Result};
use crate::interval::Interval;
use crate::qpoly::{self, Q};
use crate::ring::{Field, Ring};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// The real number field `Q(α)` for a real algebraic number `α`.
#[derive(Debug, Clone)]
pub struct NumberField {
    minpoly: Vec<Q>,
    lo: Q,
    hi: Q,
    approx: f64,
}

impl NumberField {
    /// Builds `Q(α)` from a monic irreducible polynomial of degree ≥ 2 and an
    /// open interval `(lo, hi)` on which it changes sign and has exactly one root.
    pub fn new(minpoly: Vec<Q>, lo: Q, hi: Q) -> Result<Arc<NumberField>> {
        let m = qpoly::monic(&minpoly);
        let d = qpoly::degree(&m).ok_or(AlgebraError::ZeroPolynomial)?;
        if d < 2 {
            return Err(AlgebraError::Parse("number field needs degree ≥ 2".into()));
        }
        if qpoly::sign_at(&m, &lo) * qpoly::sign_at(&m, &hi) >= 0 {
            return Err(AlgebraError::Parse("interval does not isolate a simple root".into()));
        }
        let seq = qpoly::sturm_sequence(&m);
        if qpoly::sturm_count(&seq, &lo, &hi) != 1 {
            return Err(AlgebraError::Parse("interval contains more than one root".into()));
        }
        let w = Q::new(BigInt::one(), BigInt::one() << 64);
        let (lo, hi) = qpoly::refine(&m, &lo, &hi, &w);
        let approx = ((&lo + &hi) / Q::from_integer(2.into())).to_f64().unwrap_or(f64::NAN);
        Ok(Arc::new(NumberField { minpoly: m, lo, hi, approx }))
    }

    /// Field degree `[Q(α):Q]`.
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// Minimal polynomial of the generator (monic, low → high).
    pub fn minpoly(&self) -> &[Q] {
        &self.minpoly
    }

    /// Current isolating interval of the generator.
    pub fn interval(&self) -> (Q, Q) {
        (self.lo.clone(), self.hi.clone())
    }

    /// Floating-point approximation of the generator.
    pub fn approx(&self) -> f64 {
        self.approx
    }

    /// Isolating interval refined to width at most `w`.
    pub fn refined(&self, w: &Q) -> (Q, Q) {
        qpoly::refine(&self.minpoly, &self.lo, &self.hi, w)
    }

    /// True iff both descriptions denote the same generator.
    pub fn same_as(&self, other: &NumberField) -> bool {
        if self.minpoly != other.minpoly {
            return false;
        }
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        if lo >= hi {
            return false;
        }
        let seq = qpoly::sturm_sequence(&self.minpoly);
        qpoly::sturm_count(&seq, lo, hi) == 1
    }

    /// Human-readable description `root of p in (lo, hi)`.
    pub fn describe(&self) -> String {
        format!(
            "root of {} near {:.12}",
            qpoly::render(&self.minpoly, "x"),
            self.approx
        )
    }
}

/// An exact real scalar: rational, or an element of a real number field.
#[derive(Clone)]
pub struct Scalar {
    field: Option<Arc<NumberField>>,
    c: Vec<Q>,
}

fn fields_compatible(a: &Option<Arc<NumberField>>, b: &Option<Arc<NumberField>>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => Arc::ptr_eq(x, y) || x.same_as(y),
        _ => true,
    }
}

impl Scalar {
    /// Exact rational scalar.
    pub fn rational(q: Q) -> Scalar {
        if q.is_zero() {
            Scalar { field: None, c: Vec::new() }
        } else {
            Scalar { field: None, c: vec![q] }
        }
    }

    /// Integer scalar.
    pub fn int(n: i64) -> Scalar {
        Scalar::rational(Q::from_integer(BigInt::from(n)))
    }

    /// Rational scalar `n/d`.
    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::rational(Q::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The generator `α` of a number field.
    pub fn generator(field: &Arc<NumberField>) -> Scalar {
        Scalar::from_poly(field, &[Q::zero(), Q::one()])
    }

    /// The element `p(α)` of a number field.
    pub fn from_poly(field: &Arc<NumberField>, p: &[Q]) -> Scalar {
        let r = qpoly::rem(p, field.minpoly()).expect("nonzero modulus");
        Scalar::canonical(Some(field.clone()), r)
    }

    fn canonical(field: Option<Arc<NumberField>>, mut c: Vec<Q>) -> Scalar {
        qpoly::trim(&mut c);
        if c.len() <= 1 {
            Scalar { field: None, c }
        } else {
            Scalar { field, c }
        }
    }

    /// Number field of this scalar (`None` for rationals).
    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    /// Coefficients of the representing polynomial in `α`.
    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    /// The rational value, if the scalar is rational.
    pub fn as_rational(&self) -> Option<Q> {
        match self.c.len() {
            0 => Some(Q::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    /// True iff the scalar is rational.
    pub fn is_rational(&self) -> bool {
        self.c.len() <= 1
    }

    /// True iff the two scalars can be combined arithmetically.
    pub fn compatible(&self, other: &Scalar) -> bool {
        fields_compatible(&self.field, &other.field)
    }

    /// Like [`Scalar::compatible`] but reporting an error.
    pub fn check_compatible(&self, other: &Scalar) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(AlgebraError::IncompatibleFields)
        }
    }

    fn join(&self, other: &Scalar) -> Option<Arc<NumberField>> {
        match (&self.field, &other.field) {
            (Some(x), Some(y)) => {
                assert!(
                    Arc::ptr_eq(x, y) || x.same_as(y),
                    "arithmetic between incompatible number fields"
                );
                Some(x.clone())
            }
            (Some(x), None) => Some(x.clone()),
            (None, Some(y)) => Some(y.clone()),
            (None, None) => None,
        }
    }

    /// Exact sign: −1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.as_rational() {
            Some(q) => {
                if q.is_zero() {
                    0
                } else if q.is_positive() {
                    1
                } else {
                    -1
                }
            }
            None => {
                let f = self.field.as_ref().expect("irrational scalar has a field");
                let m = f.minpoly();
                let (mut a, mut b) = f.interval();
                let sa = qpoly::sign_at(m, &a);
                let two = Q::from_integer(BigInt::from(2));
                loop {
                    if let Some(s) = Interval::new(a.clone(), b.clone()).eval_qpoly(&self.c).sign() {
                        return s;
                    }
                    let mid = (&a + &b) / &two;
                    let sm = qpoly::sign_at(m, &mid);
                    if sm == 0 {
                        // The generator is rational — impossible for an irreducible minimal polynomial.
                        unreachable!("irreducible minimal polynomial has a rational root");
                    }
                    if sm == sa {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
            }
        }
    }

    /// Exact zero test.
    pub fn is_zero_exact(&self) -> bool {
        self.c.is_empty()
    }

    /// Absolute value.
    pub fn abs(&self) -> Scalar {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Rigorous rational enclosure of width at most `w` (or exact point for rationals).
    pub fn enclose(&self, w: &Q) -> Interval {
        match self.as_rational() {
            Some(q) => Interval::point(q),
            None => {
                let f = self.field.as_ref().expect("field");
                let mut width = w.clone();
                loop {
                    let (a, b) = f.refined(&width);
                    let iv = Interval::new(a, b).eval_qpoly(&self.c);
                    if &iv.width() <= w {
                        return iv;
                    }
                    width /= Q::from_integer(BigInt::from(16));
                }
            }
        }
    }

    /// Floating-point approximation.
    pub fn to_f64(&self) -> f64 {
        match self.as_rational() {
            Some(q) => q.to_f64().unwrap_or(f64::NAN),
            None => {
                let w = Q::new(BigInt::one(), BigInt::one() << 60);
                self.enclose(&w).mid().to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn checked_inv(&self) -> Option<Scalar> {
        if self.c.is_empty() {
            return None;
        }
        match self.as_rational() {
            Some(q) => Some(Scalar::rational(Q::one() / q)),
            None => {
                let f = self.field.as_ref().expect("field");
                let (g, s, _) = qpoly::ext_gcd(&self.c, f.minpoly());
                debug_assert_eq!(g.len(), 1, "minimal polynomial must be irreducible");
                Some(Scalar::from_poly(f, &s))
            }
        }
    }

    /// Integer power.
    pub fn powi(&self, e: u32) -> Scalar {
        self.rpow(e)
    }

    /// Rational square root when it exists.
    pub fn rational_sqrt(q: &Q) -> Option<Q> {
        if q.is_negative() {
            return None;
        }
        let n = q.numer().sqrt();
        let d = q.denom().sqrt();
        if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
            Some(Q::new(n, d))
        } else {
            None
        }
    }

    /// Textual rendering with the generator named `a`.
    pub fn render(&self) -> String {
        match self.as_rational() {
            Some(q) => format!("{q}"),
            None => format!("({})", qpoly::render(&self.c, "a")),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.c == other.c && (self.c.len() <= 1 || fields_compatible(&self.field, &other.field))
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        if !self.compatible(other) {
            return None;
        }
        Some(match (self - other).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::rational(Q::from_integer(0.into()))
    }
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Scalar {
        Scalar::rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let f = self.join(o);
        Scalar::canonical(f, qpoly::add(&self.c, &o.c))
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let f = self.join(o);
        Scalar::canonical(f, qpoly::sub(&self.c, &o.c))
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let f = self.join(o);
        let p = qpoly::mul(&self.c, &o.c);
        match &f {
            Some(field) if p.len() > field.degree() => Scalar::from_poly(field, &p),
            _ => Scalar::canonical(f, p),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.checked_inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { field: self.field.clone(), c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::rational(Q::zero())
    }
    fn one() -> Self {
        Scalar::int(1)
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn radd(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn rsub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn rmul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn rneg(&self) -> Self {
        -self
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn try_inv(&self) -> Option<Self> {
        self.checked_inv()
    }
}

impl Field for Scalar {}
