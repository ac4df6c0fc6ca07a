//! Sparse multivariate truncated power series with trust-order bookkeeping.
//!
//! A [`Series`] is a sparse map from exponent tuples to coefficients in a
//! [`Ring`], together with a [`Trunc`] describing through which order it is
//! trustworthy: `Trunc::Order { dist, k }` means every term whose degree in
//! the distinguished variables `dist` is at most `k` is exact, and no term
//! beyond that order is stored. Every operation propagates the minimum
//! trustworthy order, so jet-order drift cannot happen silently.

use crate::error::{AlgebraError, Result};
use crate::ring::Ring;
use crate::scalar::Scalar;
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Domain tag of a series variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Ranges over the reals.
    Real,
    /// Ranges over the nonnegative reals.
    NonNegative,
    /// An angle modulo 2π.
    Angle,
}

/// A named series variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Var {
    /// Display name.
    pub name: String,
    /// Domain tag.
    pub domain: Domain,
}

/// Shared ordered variable list.
pub type VarList = Arc<Vec<Var>>;

/// Builds a variable list from `(name, domain)` pairs.
pub fn var_list(spec: &[(&str, Domain)]) -> VarList {
    Arc::new(spec.iter().map(|(n, d)| Var { name: n.to_string(), domain: *d }).collect())
}

/// Exponent tuple.
pub type Mono = SmallVec<[u32; 4]>;

/// Trustworthiness of a series.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Trunc {
    /// An exact polynomial: every term is known.
    Exact,
    /// Terms of degree ≤ `k` in the distinguished variables are exact; nothing beyond is stored.
    Order {
        /// Sorted indices of the distinguished variables.
        dist: Vec<usize>,
        /// Trustworthy order.
        k: u32,
    },
}

impl Trunc {
    /// Total-order truncation over all `n` variables.
    pub fn total(n: usize, k: u32) -> Trunc {
        Trunc::Order { dist: (0..n).collect(), k }
    }

    /// Truncation in a single variable.
    pub fn partial(x: usize, k: u32) -> Trunc {
        Trunc::Order { dist: vec![x], k }
    }

    /// The trustworthy order (`None` for exact).
    pub fn order(&self) -> Option<u32> {
        match self {
            Trunc::Exact => None,
            Trunc::Order { k, .. } => Some(*k),
        }
    }

    fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Sound combination for sums: union of distinguished sets, minimum order.
    pub fn meet(&self, o: &Trunc) -> Trunc {
        match (self, o) {
            (Trunc::Exact, t) | (t, Trunc::Exact) => t.clone(),
            (Trunc::Order { dist: d1, k: k1 }, Trunc::Order { dist: d2, k: k2 }) => {
                Trunc::Order { dist: Trunc::union(d1, d2), k: (*k1).min(*k2) }
            }
        }
    }
}

/// Jet order: total degree `k`, or degree `k` in a single distinguished variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JetOrder {
    /// Order.
    pub k: u32,
    /// Distinguished variable index for a partial jet.
    pub var: Option<usize>,
}

impl JetOrder {
    /// Total-degree jet order.
    pub fn total(k: u32) -> JetOrder {
        JetOrder { k, var: None }
    }

    /// Partial jet order in variable `x`.
    pub fn partial(x: usize, k: u32) -> JetOrder {
        JetOrder { k, var: Some(x) }
    }

    fn trunc(&self, n: usize) -> Trunc {
        match self.var {
            None => Trunc::total(n, self.k),
            Some(x) => Trunc::partial(x, self.k),
        }
    }
}

/// Sparse multivariate truncated series.
#[derive(Clone, PartialEq)]
pub struct Series<C: Ring> {
    vars: VarList,
    terms: BTreeMap<Mono, C>,
    trunc: Trunc,
}

fn dist_degree(m: &Mono, dist: &[usize]) -> u32 {
    dist.iter().map(|&i| m[i]).sum()
}

impl<C: Ring> Series<C> {
    /// Exact zero.
    pub fn zero(vars: &VarList) -> Self {
        Series { vars: vars.clone(), terms: BTreeMap::new(), trunc: Trunc::Exact }
    }

    /// Exact constant.
    pub fn constant(vars: &VarList, c: C) -> Self {
        let mut s = Series::zero(vars);
        if !c.is_zero() {
            s.terms.insert(SmallVec::from_elem(0, vars.len()), c);
        }
        s
    }

    /// Exact monomial `c · x^e`.
    pub fn monomial(vars: &VarList, e: &[u32], c: C) -> Self {
        assert_eq!(e.len(), vars.len(), "exponent arity");
        let mut s = Series::zero(vars);
        if !c.is_zero() {
            s.terms.insert(SmallVec::from_slice(e), c);
        }
        s
    }

    /// The variable with index `i`.
    pub fn var(vars: &VarList, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Series::monomial(vars, &e, C::one())
    }

    /// Builds a series from terms; repeated exponents are summed.
    pub fn from_terms(vars: &VarList, terms: impl IntoIterator<Item = (Mono, C)>, trunc: Trunc) -> Self {
        let mut s = Series { vars: vars.clone(), terms: BTreeMap::new(), trunc };
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "exponent arity");
            s.add_term(m, c);
        }
        s.clip();
        s
    }

    fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                let v = x.radd(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *x = v;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn clip(&mut self) {
        if let Trunc::Order { dist, k } = &self.trunc {
            let (dist, k) = (dist.clone(), *k);
            self.terms.retain(|m, _| dist_degree(m, &dist) <= k);
        }
    }

    /// Variable list.
    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Index of a variable by name.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Trust metadata.
    pub fn trunc(&self) -> &Trunc {
        &self.trunc
    }

    /// Iterator over `(exponent, coefficient)` in deterministic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True iff no terms are stored.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(&Mono::from_slice(e)).cloned().unwrap_or_else(C::zero)
    }

    /// Replaces the trust metadata, clipping terms beyond the new order.
    ///
    /// Raising the order of an already truncated series would fabricate
    /// information and is rejected.
    pub fn with_trunc(mut self, t: Trunc) -> Result<Self> {
        if let (Trunc::Order { dist: d0, k: k0 }, Trunc::Order { dist: d1, k: k1 }) = (&self.trunc, &t) {
            let covered = d1.iter().all(|i| d0.contains(i)) || d0 == d1;
            if !covered || k1 > k0 {
                return Err(AlgebraError::OrderExceeded { requested: *k1, available: *k0 });
            }
        }
        if let (Trunc::Order { k: k0, .. }, Trunc::Exact) = (&self.trunc, &t) {
            return Err(AlgebraError::OrderExceeded { requested: u32::MAX, available: *k0 });
        }
        self.trunc = t;
        self.clip();
        Ok(self)
    }

    /// Declares an exact polynomial trustworthy only through the given order
    /// (used when the polynomial is a truncation of a longer series).
    pub fn assume_trunc(mut self, t: Trunc) -> Self {
        self.trunc = t;
        self.clip();
        self
    }

    fn check_vars(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &o.vars) || self.vars == o.vars {
            Ok(())
        } else {
            Err(AlgebraError::VariableMismatch(format!(
                "{:?} vs {:?}",
                self.vars.iter().map(|v| &v.name).collect::<Vec<_>>(),
                o.vars.iter().map(|v| &v.name).collect::<Vec<_>>()
            )))
        }
    }

    /// Minimal degree in the given variables over all stored terms (`None` for zero).
    pub fn nu(&self, dist: &[usize]) -> Option<u32> {
        self.terms.keys().map(|m| dist_degree(m, dist)).min()
    }

    /// Minimal exponent of variable `x` (`None` for zero).
    pub fn var_order(&self, x: usize) -> Option<u32> {
        self.nu(&[x])
    }

    /// Total degree of the highest stored term (`None` for zero).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Maximal exponent of variable `x` among stored terms.
    pub fn degree_in(&self, x: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[x]).max()
    }

    /// Sum.
    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let mut r = self.clone();
        r.trunc = self.trunc.meet(&o.trunc);
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r.clip();
        Ok(r)
    }

    /// Difference.
    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.rneg())
    }

    /// Multiplication by a ring element.
    pub fn mul_coeff(&self, a: &C) -> Self {
        if a.is_zero() {
            let mut z = Series::zero(&self.vars);
            z.trunc = self.trunc.clone();
            return z;
        }
        self.map_coeffs(|c| c.rmul(a))
    }

    /// Multiplication by an exact scalar.
    pub fn scale(&self, s: &Scalar) -> Self {
        self.mul_coeff(&C::from_scalar(s))
    }

    /// Coefficientwise map preserving the support structure.
    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), trunc: self.trunc.clone() };
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                r.terms.insert(m.clone(), v);
            }
        }
        r
    }

    /// Coefficientwise map into another ring.
    pub fn map_ring<D: Ring>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        Series { vars: self.vars.clone(), terms, trunc: self.trunc.clone() }
    }

    /// Product with jet-correct trust propagation:
    /// `j_k(F·G) = j_k(j_{k−ν(G)}F · j_{k−ν(F)}G)`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let trunc = match (&self.trunc, &o.trunc) {
            (Trunc::Exact, Trunc::Exact) => Trunc::Exact,
            _ => {
                let dist = match self.trunc.meet(&o.trunc) {
                    Trunc::Order { dist, .. } => dist,
                    Trunc::Exact => unreachable!(),
                };
                let nf = self.nu(&dist);
                let ng = o.nu(&dist);
                let kf = self.trunc.order().map(|k| k as u64);
                let kg = o.trunc.order().map(|k| k as u64);
                // Exact zero factors make the product exactly zero.
                if (nf.is_none() && kf.is_none()) || (ng.is_none() && kg.is_none()) {
                    return Ok(Series::zero(&self.vars));
                }
                let bound = |k: Option<u64>, nu_other: Option<u32>, k_other: Option<u64>| -> u64 {
                    match k {
                        None => u64::MAX,
                        Some(k) => match nu_other {
                            Some(n) => k + n as u64,
                            // The other factor is a truncated zero: it is O(order k_other + 1).
                            None => k + k_other.map(|x| x + 1).unwrap_or(0),
                        },
                    }
                };
                let k = bound(kf, ng, kg).min(bound(kg, nf, kf));
                Trunc::Order { dist, k: k.min(u32::MAX as u64) as u32 }
            }
        };
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), trunc: trunc.clone() };
        let (dist, kmax) = match &trunc {
            Trunc::Exact => (Vec::new(), u32::MAX),
            Trunc::Order { dist, k } => (dist.clone(), *k),
        };
        for (m1, c1) in &self.terms {
            let d1 = dist_degree(m1, &dist);
            if d1 > kmax {
                continue;
            }
            for (m2, c2) in &o.terms {
                if d1 + dist_degree(m2, &dist) > kmax {
                    continue;
                }
                let m: Mono = m1.iter().zip(m2.iter()).map(|(a, b)| a + b).collect();
                r.add_term(m, c1.rmul(c2));
            }
        }
        Ok(r)
    }

    /// `j_k(f·g)` for a requested jet order (the `series_mul` operation).
    pub fn mul_jet(&self, o: &Self, k: JetOrder) -> Result<Self> {
        let p = self.mul(o)?;
        p.jet_order_relaxed(k)
    }

    fn jet_order_relaxed(&self, k: JetOrder) -> Result<Self> {
        let t = k.trunc(self.nvars());
        let mut r = self.clone();
        r.trunc = match (&self.trunc, &t) {
            (Trunc::Exact, t) => t.clone(),
            (Trunc::Order { dist: d0, k: k0 }, Trunc::Order { dist: d1, k: k1 }) => {
                if d0 == d1 {
                    Trunc::Order { dist: d0.clone(), k: (*k0).min(*k1) }
                } else {
                    return self.jet_order(k);
                }
            }
            _ => unreachable!(),
        };
        r.clip();
        Ok(r)
    }

    /// Total-degree jet `j_k`.
    pub fn jet(&self, k: u32) -> Result<Self> {
        if let Some(avail) = self.trunc.order() {
            if k > avail {
                return Err(AlgebraError::OrderExceeded { requested: k, available: avail });
            }
        }
        let mut r = self.clone();
        r.trunc = Trunc::total(self.nvars(), k);
        r.clip();
        Ok(r)
    }

    /// Partial jet `j_k^x`: drops terms of degree > k in `x`.
    pub fn jet_partial(&self, x: usize, k: u32) -> Result<Self> {
        match &self.trunc {
            Trunc::Exact => {}
            Trunc::Order { dist, k: avail } => {
                if dist.as_slice() != [x] {
                    return Err(AlgebraError::OrderExceeded { requested: k, available: 0 });
                }
                if k > *avail {
                    return Err(AlgebraError::OrderExceeded { requested: k, available: *avail });
                }
            }
        }
        let mut r = self.clone();
        r.trunc = Trunc::partial(x, k);
        r.clip();
        Ok(r)
    }

    /// Jet for a [`JetOrder`].
    pub fn jet_order(&self, k: JetOrder) -> Result<Self> {
        match k.var {
            None => self.jet(k.k),
            Some(x) => self.jet_partial(x, k.k),
        }
    }

    /// Inverse of a unit: `j_k(f · f⁻¹) = 1`.
    ///
    /// The part of `f` of degree zero in the distinguished variables must be a
    /// nonzero constant of the coefficient ring that is itself invertible.
    pub fn invert(&self, k: JetOrder) -> Result<Self> {
        let n = self.nvars();
        let t = k.trunc(n);
        let dist = match &t {
            Trunc::Order { dist, .. } => dist.clone(),
            Trunc::Exact => unreachable!(),
        };
        let mut c0: Option<C> = None;
        for (m, c) in &self.terms {
            if dist_degree(m, &dist) == 0 {
                if m.iter().any(|&e| e != 0) {
                    return Err(AlgebraError::NotUnit("degree-zero part is not constant".into()));
                }
                c0 = Some(c.clone());
            }
        }
        let c0 = c0.ok_or_else(|| AlgebraError::NotUnit("zero constant term".into()))?;
        let inv0 = c0.try_inv().ok_or_else(|| AlgebraError::NotUnit("constant term not invertible".into()))?;
        let kk = match self.trunc.order() {
            Some(avail) => avail.min(k.k),
            None => k.k,
        };
        let tt = Trunc::Order { dist: dist.clone(), k: kk };
        // g = f/c0 − 1, inverse = c0⁻¹ Σ (−g)^i.
        let one = Series::constant(&self.vars, C::one());
        let g = self.mul_coeff(&inv0).sub(&one)?.assume_trunc(tt.clone());
        let mg = g.neg();
        let mut acc = one.clone().assume_trunc(tt.clone());
        let mut pow = one.assume_trunc(tt.clone());
        for _ in 0..kk {
            pow = pow.mul(&mg)?;
            if pow.is_empty() {
                break;
            }
            acc = acc.add(&pow)?;
        }
        let mut r = acc.mul_coeff(&inv0);
        r.trunc = tt;
        r.clip();
        Ok(r)
    }

    /// Substitution `x ↦ x + a` in an untruncated variable.
    pub fn translate(&self, x: usize, a: &Scalar) -> Result<Self> {
        if let Trunc::Order { dist, .. } = &self.trunc {
            if dist.contains(&x) {
                return Err(AlgebraError::TruncatedTranslation(self.vars[x].name.clone()));
            }
        }
        if a.is_zero() {
            return Ok(self.clone());
        }
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), trunc: self.trunc.clone() };
        for (m, c) in &self.terms {
            let e = m[x];
            // (x + a)^e = Σ binom(e, i) a^{e−i} x^i
            let mut binom = Scalar::one();
            for i in (0..=e).rev() {
                let p = e - i;
                let coef = c.rmul(&C::from_scalar(&(&binom * &a.powi(p))));
                let mut mm = m.clone();
                mm[x] = i;
                r.add_term(mm, coef);
                // binom(e, i−1) = binom(e, i) · i / (e − i + 1)
                if i > 0 {
                    binom = &(&binom * &Scalar::int(i as i64)) / &Scalar::int((e - i + 1) as i64);
                }
            }
        }
        Ok(r)
    }

    /// Partial derivative with respect to variable `x`.
    pub fn deriv(&self, x: usize) -> Self {
        let trunc = match &self.trunc {
            Trunc::Order { dist, k } if dist.contains(&x) => {
                Trunc::Order { dist: dist.clone(), k: k.saturating_sub(1) }
            }
            t => t.clone(),
        };
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), trunc };
        for (m, c) in &self.terms {
            if m[x] == 0 {
                continue;
            }
            let mut mm = m.clone();
            mm[x] -= 1;
            r.add_term(mm, c.scale(&Scalar::int(m[x] as i64)));
        }
        r.clip();
        r
    }

    /// Multiplication by `x^p`.
    pub fn mul_var_pow(&self, x: usize, p: u32) -> Self {
        let trunc = match &self.trunc {
            Trunc::Order { dist, k } if dist.contains(&x) => Trunc::Order { dist: dist.clone(), k: k + p },
            t => t.clone(),
        };
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), trunc };
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            mm[x] += p;
            r.terms.insert(mm, c.clone());
        }
        r
    }

    /// Exact division by `x^p`; errors if some term has a lower power of `x`.
    pub fn div_var_pow(&self, x: usize, p: u32) -> Result<Self> {
        let trunc = match &self.trunc {
            Trunc::Order { dist, k } if dist.contains(&x) => {
                if *k < p {
                    return Err(AlgebraError::OrderExceeded { requested: p, available: *k });
                }
                Trunc::Order { dist: dist.clone(), k: k - p }
            }
            t => t.clone(),
        };
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), trunc };
        for (m, c) in &self.terms {
            if m[x] < p {
                return Err(AlgebraError::InexactDivision(format!(
                    "term not divisible by {}^{}",
                    self.vars[x].name, p
                )));
            }
            let mut mm = m.clone();
            mm[x] -= p;
            r.terms.insert(mm, c.clone());
        }
        Ok(r)
    }

    /// Restriction to `x = 0`.
    pub fn at_zero(&self, x: usize) -> Self {
        let mut r = self.clone();
        r.terms.retain(|m, _| m[x] == 0);
        r
    }

    /// The coefficient of `x^p` as a series in the same variables (with `x` absent).
    pub fn coeff_of(&self, x: usize, p: u32) -> Self {
        let mut r = Series { vars: self.vars.clone(), terms: BTreeMap::new(), trunc: self.trunc.clone() };
        if let Trunc::Order { dist, k } = &self.trunc {
            if dist.contains(&x) {
                r.trunc = Trunc::Order { dist: dist.clone(), k: k.saturating_sub(p) };
            }
        }
        for (m, c) in &self.terms {
            if m[x] == p {
                let mut mm = m.clone();
                mm[x] = 0;
                r.terms.insert(mm, c.clone());
            }
        }
        r
    }

    /// Homogeneous part of total degree `d` in the given variables.
    pub fn part_of_degree(&self, dist: &[usize], d: u32) -> Self {
        let mut r = self.clone();
        r.terms.retain(|m, _| dist_degree(m, dist) == d);
        r
    }

    /// Composition: replaces variable `i` by `subs[i]` (series over `new_vars`).
    ///
    /// The result's trust order combines the substitutes' own trust with the
    /// image of this series' untrusted tail: if this series is trustworthy
    /// through degree `k` in its distinguished variables and each of those
    /// substitutes has order at least `ν` in `out_dist`, the tail starts at
    /// order `(k+1)·ν` in `out_dist`.
    pub fn substitute(&self, new_vars: &VarList, subs: &[Series<C>], out_dist: Option<&[usize]>) -> Result<Series<C>> {
        assert_eq!(subs.len(), self.nvars(), "one substitute per variable");
        for s in subs {
            if !(Arc::ptr_eq(&s.vars, new_vars) || *s.vars == **new_vars) {
                return Err(AlgebraError::VariableMismatch("substitute variable list".into()));
            }
        }
        let tail_trunc = match (&self.trunc, out_dist) {
            (Trunc::Exact, _) => Trunc::Exact,
            (Trunc::Order { dist, k }, Some(od)) => {
                let nu = dist.iter().map(|&i| subs[i].nu(od).unwrap_or(u32::MAX)).min().unwrap_or(u32::MAX);
                let order = ((*k as u64 + 1) * nu as u64).saturating_sub(1).min(u32::MAX as u64) as u32;
                Trunc::Order { dist: od.to_vec(), k: order }
            }
            (Trunc::Order { .. }, None) => {
                return Err(AlgebraError::OrderExceeded { requested: u32::MAX, available: 0 });
            }
        };
        let cap = tail_trunc.meet(&subs.iter().fold(Trunc::Exact, |t, s| t.meet(&s.trunc)));
        let clip = |s: Series<C>| -> Series<C> {
            match &cap {
                Trunc::Exact => s,
                Trunc::Order { dist, k } => {
                    let mut s = s;
                    if let Trunc::Order { dist: d2, k: k2 } = &s.trunc {
                        if d2 == dist && k2 <= k {
                            return s;
                        }
                    }
                    s.trunc = s.trunc.meet(&Trunc::Order { dist: dist.clone(), k: *k });
                    s.clip();
                    s
                }
            }
        };
        // Powers cache per variable.
        let mut powers: Vec<Vec<Series<C>>> = vec![vec![Series::constant(new_vars, C::one())]; self.nvars()];
        let mut acc = Series::zero(new_vars);
        acc.trunc = tail_trunc.clone();
        for (m, c) in &self.terms {
            let mut term = Series::constant(new_vars, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let last = powers[i].last().expect("nonempty").clone();
                    let next = clip(last.mul(&subs[i])?);
                    powers[i].push(next);
                }
                term = clip(term.mul(&powers[i][e as usize])?);
            }
            acc = acc.add(&term)?;
        }
        acc.trunc = acc.trunc.meet(&tail_trunc);
        acc.clip();
        Ok(acc)
    }

    /// Re-labels the series over a different but equal-arity variable list.
    pub fn relabel(&self, new_vars: &VarList) -> Self {
        assert_eq!(new_vars.len(), self.nvars());
        Series { vars: new_vars.clone(), terms: self.terms.clone(), trunc: self.trunc.clone() }
    }

    /// Structural equality of the stored terms, ignoring trust metadata.
    pub fn same_terms(&self, o: &Self) -> bool {
        self.terms == o.terms
    }

    /// Floating-point evaluation given a coefficient evaluator.
    pub fn eval_f64(&self, point: &[f64], coef: impl Fn(&C) -> f64) -> f64 {
        let mut s = 0.0;
        for (m, c) in &self.terms {
            let mut t = coef(c);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= point[i].powi(e as i32);
                }
            }
            s += t;
        }
        s
    }

    /// Rendering with a coefficient renderer.
    pub fn render_with(&self, coef: impl Fn(&C) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut mono = Vec::new();
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => mono.push(self.vars[i].name.clone()),
                    _ => mono.push(format!("{}^{}", self.vars[i].name, e)),
                }
            }
            let cs = coef(c);
            if mono.is_empty() {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("{}*{}", cs, mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

impl<C: Ring> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with(|c| format!("({c:?})")))?;
        if let Trunc::Order { dist, k } = &self.trunc {
            let names: Vec<&str> = dist.iter().map(|&i| self.vars[i].name.as_str()).collect();
            write!(f, " + O({}; {})", names.join(","), k + 1)?;
        }
        Ok(())
    }
}

impl Series<Scalar> {
    /// Rendering with scalar coefficients.
    pub fn render(&self) -> String {
        self.render_with(|c| c.render())
    }
}
