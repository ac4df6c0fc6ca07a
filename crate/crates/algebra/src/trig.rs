//! Trigonometric polynomials in an angle θ and their θ-polynomial extension.
//!
//! [`TrigPoly`] is a finite Fourier sum `a₀ + Σ (a_k cos kθ + b_k sin kθ)`.
//! [`ThetaTrig`] is a polynomial in θ with [`TrigPoly`] coefficients; it is
//! closed under antidifferentiation, which is what jet transport along the
//! angular flow requires. Evaluating a [`ThetaTrig`] at θ = 2π yields a
//! [`PiPoly`].

use crate::pi::PiPoly;
use crate::ring::Ring;
use crate::scalar::Scalar;
use std::fmt;

/// Finite Fourier sum with exact scalar coefficients.
#[derive(Clone, PartialEq)]
pub struct TrigPoly {
    cos: Vec<Scalar>,
    sin: Vec<Scalar>,
}

fn get(v: &[Scalar], k: usize) -> Scalar {
    v.get(k).cloned().unwrap_or_else(Scalar::zero)
}

impl TrigPoly {
    /// From cosine and sine coefficient lists (index = frequency; `sin[0]` is ignored).
    pub fn new(mut cos: Vec<Scalar>, mut sin: Vec<Scalar>) -> TrigPoly {
        if !sin.is_empty() {
            sin[0] = Scalar::zero();
        }
        let n = cos.len().max(sin.len());
        cos.resize(n, Scalar::zero());
        sin.resize(n, Scalar::zero());
        while !cos.is_empty() && cos.last().is_some_and(|x| x.is_zero()) && sin.last().is_some_and(|x| x.is_zero()) {
            cos.pop();
            sin.pop();
        }
        TrigPoly { cos, sin }
    }

    /// Constant.
    pub fn constant(s: Scalar) -> TrigPoly {
        TrigPoly::new(vec![s], vec![])
    }

    /// `cos θ`.
    pub fn cos_theta() -> TrigPoly {
        TrigPoly::new(vec![Scalar::zero(), Scalar::one()], vec![])
    }

    /// `sin θ`.
    pub fn sin_theta() -> TrigPoly {
        TrigPoly::new(vec![], vec![Scalar::zero(), Scalar::one()])
    }

    /// Cosine coefficient of frequency `k`.
    pub fn a(&self, k: usize) -> Scalar {
        get(&self.cos, k)
    }

    /// Sine coefficient of frequency `k`.
    pub fn b(&self, k: usize) -> Scalar {
        get(&self.sin, k)
    }

    /// Highest frequency present plus one.
    pub fn len(&self) -> usize {
        self.cos.len()
    }

    /// True iff zero.
    pub fn is_empty(&self) -> bool {
        self.cos.is_empty()
    }

    /// Mean value over a period (`a₀`).
    pub fn mean(&self) -> Scalar {
        self.a(0)
    }

    /// The constant value, if θ-independent.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.cos.len() <= 1 {
            Some(self.a(0))
        } else {
            None
        }
    }

    /// Value at θ = 0 (and at every multiple of 2π).
    pub fn at_zero(&self) -> Scalar {
        let mut s = Scalar::zero();
        for c in &self.cos {
            s = &s + c;
        }
        s
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, theta: f64) -> f64 {
        let mut s = 0.0;
        for k in 0..self.cos.len() {
            let kt = k as f64 * theta;
            s += self.cos[k].to_f64() * kt.cos() + self.sin[k].to_f64() * kt.sin();
        }
        s
    }

    /// θ-derivative.
    pub fn derivative(&self) -> TrigPoly {
        let n = self.cos.len();
        let mut c = vec![Scalar::zero(); n];
        let mut s = vec![Scalar::zero(); n];
        for k in 1..n {
            let kk = Scalar::int(k as i64);
            c[k] = &self.sin[k] * &kk;
            s[k] = -(&self.cos[k] * &kk);
        }
        TrigPoly::new(c, s)
    }

    /// Coefficientwise map over the scalar coefficients.
    pub fn map_scalars(&self, f: impl Fn(&Scalar) -> Scalar) -> TrigPoly {
        TrigPoly::new(self.cos.iter().map(&f).collect(), self.sin.iter().map(&f).collect())
    }

    /// All scalar coefficients (cosine then sine).
    pub fn scalars(&self) -> impl Iterator<Item = &Scalar> {
        self.cos.iter().chain(self.sin.iter())
    }

    /// Bound on `sup_θ |f(θ)|` as a float (`Σ |a_k| + |b_k|`).
    pub fn sup_bound_f64(&self) -> f64 {
        self.scalars().map(|x| x.to_f64().abs()).sum()
    }

    /// Rendering such as `1 + 2*cos(θ) - sin(2θ)`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for k in 0..self.cos.len() {
            for (coef, name) in [(&self.cos[k], "cos"), (&self.sin[k], "sin")] {
                if coef.is_zero() || (k == 0 && name == "sin") {
                    continue;
                }
                if k == 0 {
                    parts.push(coef.render());
                } else {
                    let arg = if k == 1 { "θ".to_string() } else { format!("{k}θ") };
                    parts.push(format!("{}*{}({})", coef.render(), name, arg));
                }
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Ring for TrigPoly {
    fn zero() -> Self {
        TrigPoly { cos: Vec::new(), sin: Vec::new() }
    }
    fn one() -> Self {
        TrigPoly::constant(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.cos.is_empty()
    }
    fn radd(&self, o: &Self) -> Self {
        let n = self.cos.len().max(o.cos.len());
        TrigPoly::new(
            (0..n).map(|k| &get(&self.cos, k) + &get(&o.cos, k)).collect(),
            (0..n).map(|k| &get(&self.sin, k) + &get(&o.sin, k)).collect(),
        )
    }
    fn rsub(&self, o: &Self) -> Self {
        self.radd(&o.rneg())
    }
    fn rmul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return TrigPoly::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.map_scalars(|x| x * &c);
        }
        if let Some(c) = o.as_constant() {
            return self.map_scalars(|x| x * &c);
        }
        let n = self.cos.len() + o.cos.len();
        let mut c = vec![Scalar::zero(); n];
        let mut s = vec![Scalar::zero(); n];
        let half = Scalar::frac(1, 2);
        for i in 0..self.cos.len() {
            let (ai, bi) = (&self.cos[i], &self.sin[i]);
            if ai.is_zero() && bi.is_zero() {
                continue;
            }
            for j in 0..o.cos.len() {
                let (aj, bj) = (&o.cos[j], &o.sin[j]);
                let sum = i + j;
                let dif = i.abs_diff(j);
                // cos i cos j = ½[cos(i−j) + cos(i+j)]
                if !ai.is_zero() && !aj.is_zero() {
                    let p = &(ai * aj) * &half;
                    c[dif] = &c[dif] + &p;
                    c[sum] = &c[sum] + &p;
                }
                // sin i sin j = ½[cos(i−j) − cos(i+j)]
                if !bi.is_zero() && !bj.is_zero() {
                    let p = &(bi * bj) * &half;
                    c[dif] = &c[dif] + &p;
                    c[sum] = &c[sum] - &p;
                }
                // sin i cos j = ½[sin(i+j) + sin(i−j)]
                if !bi.is_zero() && !aj.is_zero() {
                    let p = &(bi * aj) * &half;
                    s[sum] = &s[sum] + &p;
                    if i >= j {
                        s[dif] = &s[dif] + &p;
                    } else {
                        s[dif] = &s[dif] - &p;
                    }
                }
                // cos i sin j = ½[sin(i+j) − sin(i−j)]
                if !ai.is_zero() && !bj.is_zero() {
                    let p = &(ai * bj) * &half;
                    s[sum] = &s[sum] + &p;
                    if i >= j {
                        s[dif] = &s[dif] - &p;
                    } else {
                        s[dif] = &s[dif] + &p;
                    }
                }
            }
        }
        TrigPoly::new(c, s)
    }
    fn rneg(&self) -> Self {
        self.map_scalars(|x| -x)
    }
    fn from_scalar(s: &Scalar) -> Self {
        TrigPoly::constant(s.clone())
    }
    fn scale(&self, s: &Scalar) -> Self {
        self.map_scalars(|x| x * s)
    }
    fn try_inv(&self) -> Option<Self> {
        self.as_constant().and_then(|c| c.checked_inv()).map(TrigPoly::constant)
    }
}

/// Polynomial in θ with trigonometric-polynomial coefficients: `Σ θ^j T_j(θ)`.
#[derive(Clone, PartialEq)]
pub struct ThetaTrig {
    c: Vec<TrigPoly>,
}

impl ThetaTrig {
    /// From θ-power coefficients (low → high).
    pub fn new(mut c: Vec<TrigPoly>) -> ThetaTrig {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ThetaTrig { c }
    }

    /// Lift of a trigonometric polynomial.
    pub fn from_trig(t: TrigPoly) -> ThetaTrig {
        ThetaTrig::new(vec![t])
    }

    /// Coefficient of `θ^j`.
    pub fn coeff(&self, j: usize) -> TrigPoly {
        self.c.get(j).cloned().unwrap_or_else(TrigPoly::zero)
    }

    /// Highest θ-power plus one.
    pub fn len(&self) -> usize {
        self.c.len()
    }

    /// True iff zero.
    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Antiderivative vanishing at θ = 0.
    pub fn integrate(&self) -> ThetaTrig {
        let mut acc = ThetaTrig::zero();
        for (j, t) in self.c.iter().enumerate() {
            for k in 0..t.len() {
                let (a, b) = (t.a(k), t.b(k));
                if !a.is_zero() {
                    acc = acc.radd(&integrate_mono(j, k, false).scale(&a));
                }
                if !b.is_zero() {
                    acc = acc.radd(&integrate_mono(j, k, true).scale(&b));
                }
            }
        }
        acc
    }

    /// θ-derivative.
    pub fn derivative(&self) -> ThetaTrig {
        let mut out = vec![TrigPoly::zero(); self.c.len()];
        for (j, t) in self.c.iter().enumerate() {
            out[j] = out[j].radd(&t.derivative());
            if j > 0 {
                out[j - 1] = out[j - 1].radd(&t.scale(&Scalar::int(j as i64)));
            }
        }
        ThetaTrig::new(out)
    }

    /// Value at θ = 2π as a π-polynomial.
    pub fn at_two_pi(&self) -> PiPoly {
        let mut acc = PiPoly::zero();
        for (j, t) in self.c.iter().enumerate() {
            let v = t.at_zero();
            if !v.is_zero() {
                acc = acc.radd(&PiPoly::two_pi_pow(j as u32).scale(&v));
            }
        }
        acc
    }

    /// Value at θ = 0.
    pub fn at_zero(&self) -> Scalar {
        self.coeff(0).at_zero()
    }

    /// Taylor coefficients at θ = 0 up to degree `n` (inclusive).
    pub fn taylor_at_zero(&self, n: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n + 1];
        for (j, t) in self.c.iter().enumerate() {
            for k in 0..t.len() {
                let (a, b) = (t.a(k), t.b(k));
                // cos kθ = Σ (−1)^m k^{2m} θ^{2m}/(2m)!, sin kθ = Σ (−1)^m k^{2m+1} θ^{2m+1}/(2m+1)!
                let mut fact = Scalar::one();
                let kk = Scalar::int(k as i64);
                let mut kp = Scalar::one();
                for d in 0..=n {
                    if d > 0 {
                        fact = &fact * &Scalar::int(d as i64);
                        kp = &kp * &kk;
                    }
                    if j + d > n {
                        break;
                    }
                    let sign = if (d / 2) % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
                    let base = &(&kp / &fact) * &sign;
                    if d % 2 == 0 {
                        if !a.is_zero() {
                            out[j + d] = &out[j + d] + &(&base * &a);
                        }
                    } else if !b.is_zero() {
                        out[j + d] = &out[j + d] + &(&base * &b);
                    }
                }
            }
        }
        out
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for t in self.c.iter().rev() {
            acc = acc * theta + t.eval_f64(theta);
        }
        acc
    }

    /// The θ-free trigonometric part, if there is no secular term.
    pub fn as_trig(&self) -> Option<TrigPoly> {
        if self.c.len() <= 1 {
            Some(self.coeff(0))
        } else {
            None
        }
    }
}

/// `∫₀^θ s^j · (cos|sin)(k s) ds` as a [`ThetaTrig`].
fn integrate_mono(j: usize, k: usize, sine: bool) -> ThetaTrig {
    if k == 0 {
        if sine {
            return ThetaTrig::zero();
        }
        let mut c = vec![TrigPoly::zero(); j + 2];
        c[j + 1] = TrigPoly::constant(Scalar::frac(1, j as i64 + 1));
        return ThetaTrig::new(c);
    }
    let kk = Scalar::int(k as i64);
    let inv_k = Scalar::one() / &kk;
    let mono = |coef: Scalar, sine: bool| {
        let mut t_cos = vec![Scalar::zero(); k + 1];
        let mut t_sin = vec![Scalar::zero(); k + 1];
        if sine {
            t_sin[k] = coef;
        } else {
            t_cos[k] = coef;
        }
        let mut c = vec![TrigPoly::zero(); j + 1];
        c[j] = TrigPoly::new(t_cos, t_sin);
        ThetaTrig::new(c)
    };
    if !sine {
        // ∫ s^j cos ks = θ^j sin kθ / k − (j/k) ∫ s^{j−1} sin ks
        let head = mono(inv_k.clone(), true);
        if j == 0 {
            head
        } else {
            head.rsub(&integrate_mono(j - 1, k, true).scale(&(&Scalar::int(j as i64) * &inv_k)))
        }
    } else {
        // ∫ s^j sin ks = −θ^j cos kθ / k + [j = 0]/k + (j/k) ∫ s^{j−1} cos ks
        let head = mono(-inv_k.clone(), false);
        if j == 0 {
            head.radd(&ThetaTrig::from_trig(TrigPoly::constant(inv_k)))
        } else {
            head.radd(&integrate_mono(j - 1, k, false).scale(&(&Scalar::int(j as i64) * &inv_k)))
        }
    }
}

impl fmt::Debug for ThetaTrig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_zero())
            .map(|(j, t)| if j == 0 { format!("({})", t.render()) } else { format!("θ^{j}·({})", t.render()) })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Ring for ThetaTrig {
    fn zero() -> Self {
        ThetaTrig { c: Vec::new() }
    }
    fn one() -> Self {
        ThetaTrig::from_trig(TrigPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn radd(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        ThetaTrig::new((0..n).map(|j| self.coeff(j).radd(&o.coeff(j))).collect())
    }
    fn rsub(&self, o: &Self) -> Self {
        self.radd(&o.rneg())
    }
    fn rmul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ThetaTrig::zero();
        }
        let mut r = vec![TrigPoly::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] = r[i + j].radd(&a.rmul(b));
            }
        }
        ThetaTrig::new(r)
    }
    fn rneg(&self) -> Self {
        ThetaTrig::new(self.c.iter().map(|t| t.rneg()).collect())
    }
    fn from_scalar(s: &Scalar) -> Self {
        ThetaTrig::from_trig(TrigPoly::constant(s.clone()))
    }
    fn scale(&self, s: &Scalar) -> Self {
        ThetaTrig::new(self.c.iter().map(|t| t.scale(s)).collect())
    }
    fn try_inv(&self) -> Option<Self> {
        self.as_trig().and_then(|t| t.try_inv()).map(ThetaTrig::from_trig)
    }
}
