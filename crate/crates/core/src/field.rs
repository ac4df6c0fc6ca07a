//! Polynomial vector fields on R³ and their complexified form.
//!
//! A [`PolyField3`] stores the three components of `ξ = A₁∂x + A₂∂y + A₃∂z`
//! as exact polynomials in `(x, y, z)`. The module also provides the passage
//! to the complex coordinates `(w, w̄, z)`, `w = x + iy`, in which the
//! rotation `−y∂x + x∂y` is diagonal, and the realification of rotationally
//! symmetric fields `T(−y∂x + x∂y) + R(x∂x + y∂y) + Z∂z`.

use crate::error::{CoreError, Result};
use hopf3_algebra::{var_list, Cx, Domain, Mono, Q, Ring, Scalar, Series, Trunc, VarList};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// The ambient variables `(x, y, z)`.
pub fn xyz() -> VarList {
    static V: OnceLock<VarList> = OnceLock::new();
    V.get_or_init(|| var_list(&[("x", Domain::Real), ("y", Domain::Real), ("z", Domain::Real)])).clone()
}

/// The complex variables `(w, w̄, z)`.
pub fn wwz() -> VarList {
    static V: OnceLock<VarList> = OnceLock::new();
    V.get_or_init(|| var_list(&[("w", Domain::Real), ("wb", Domain::Real), ("z", Domain::Real)])).clone()
}

/// The invariant variables `(u, v) = (x² + y², z)`.
pub fn uv() -> VarList {
    static V: OnceLock<VarList> = OnceLock::new();
    V.get_or_init(|| var_list(&[("u", Domain::NonNegative), ("v", Domain::Real)])).clone()
}

/// A polynomial vector field on R³ vanishing at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyField3 {
    comps: [Series<Scalar>; 3],
}

/// Exponent-keyed textual form of a field: each component maps `"i,j,k"`
/// (the exponents of `x, y, z`) to an exact rational string such as `"-3/8"`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    /// Coefficients of the `∂x` component.
    #[serde(default)]
    pub x: BTreeMap<String, String>,
    /// Coefficients of the `∂y` component.
    #[serde(default)]
    pub y: BTreeMap<String, String>,
    /// Coefficients of the `∂z` component.
    #[serde(default)]
    pub z: BTreeMap<String, String>,
}

fn parse_exponents(key: &str) -> Result<Mono> {
    let parts: Vec<&str> = key.trim().trim_start_matches('[').trim_end_matches(']').split(',').collect();
    if parts.len() != 3 {
        return Err(CoreError::Input(format!("monomial key `{key}` must list three exponents `i,j,k`")));
    }
    let mut m = Mono::new();
    for p in parts {
        let e: u32 = p
            .trim()
            .parse()
            .map_err(|_| CoreError::Input(format!("monomial key `{key}`: `{}` is not a nonnegative integer", p.trim())))?;
        m.push(e);
    }
    Ok(m)
}

/// Parses an exact rational such as `"3"`, `"-3/8"` or `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(CoreError::Input(format!("`{s}` is not an exact rational")));
        }
        let digits = format!("{ip}{fp}");
        let num: Q = digits.parse().map_err(|_| CoreError::Input(format!("`{s}` is not an exact rational")))?;
        let den: Q = format!("1{}", "0".repeat(fp.len())).parse().expect("power of ten");
        return Ok(num / den);
    }
    t.parse().map_err(|_| CoreError::Input(format!("`{s}` is not an exact rational")))
}

fn render_key(m: &Mono) -> String {
    m.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

impl FieldSpec {
    /// Parses the textual form into a field.
    pub fn to_field(&self) -> Result<PolyField3> {
        let v = xyz();
        let mut comps = Vec::with_capacity(3);
        for (name, map) in [("x", &self.x), ("y", &self.y), ("z", &self.z)] {
            let mut terms = Vec::new();
            for (k, c) in map {
                let m = parse_exponents(k).map_err(|e| CoreError::Input(format!("component {name}: {e}")))?;
                let q = parse_rational(c).map_err(|e| CoreError::Input(format!("component {name}, key {k}: {e}")))?;
                terms.push((m, Scalar::rational(q)));
            }
            comps.push(Series::from_terms(&v, terms, Trunc::Exact));
        }
        let z = comps.pop().expect("three");
        let y = comps.pop().expect("three");
        let x = comps.pop().expect("three");
        PolyField3::new([x, y, z])
    }

    /// Textual form of a field with rational coefficients.
    pub fn from_field(f: &PolyField3) -> Result<FieldSpec> {
        let mut out = FieldSpec::default();
        for (i, map) in [&mut out.x, &mut out.y, &mut out.z].into_iter().enumerate() {
            for (m, c) in f.comps[i].terms() {
                let q = c
                    .as_rational()
                    .ok_or_else(|| CoreError::Input("irrational coefficients have no textual form".into()))?;
                map.insert(render_key(m), q.to_string());
            }
        }
        Ok(out)
    }
}

impl PolyField3 {
    /// Builds a field from three exact polynomials in `(x, y, z)`; rejects constant terms.
    pub fn new(comps: [Series<Scalar>; 3]) -> Result<PolyField3> {
        let v = xyz();
        for (i, c) in comps.iter().enumerate() {
            if **c.vars() != *v {
                return Err(CoreError::Input(format!("component {i} is not a polynomial in (x, y, z)")));
            }
            if !c.coeff(&[0, 0, 0]).is_zero() {
                return Err(CoreError::Input(format!("component {i} does not vanish at the origin")));
            }
        }
        Ok(PolyField3 { comps })
    }

    /// Components `(A₁, A₂, A₃)`.
    pub fn comps(&self) -> &[Series<Scalar>; 3] {
        &self.comps
    }

    /// Component `i`.
    pub fn comp(&self, i: usize) -> &Series<Scalar> {
        &self.comps[i]
    }

    /// Maximal total degree of the components.
    pub fn degree(&self) -> u32 {
        self.comps.iter().filter_map(|c| c.total_degree()).max().unwrap_or(0)
    }

    /// Linear part as a matrix: entry `[i][j]` is `∂A_i/∂x_j(0)`.
    pub fn linear_part(&self) -> [[Scalar; 3]; 3] {
        let mut a: [[Scalar; 3]; 3] = Default::default();
        for (i, row) in a.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let mut m = [0u32; 3];
                m[j] = 1;
                *e = self.comps[i].coeff(&m);
            }
        }
        a
    }

    /// Total-degree jet `j_k` of every component.
    pub fn jet(&self, k: u32) -> Result<PolyField3> {
        let c = |s: &Series<Scalar>| -> Result<Series<Scalar>> {
            let t = Series::from_terms(
                s.vars(),
                s.terms().filter(|(m, _)| m.iter().sum::<u32>() <= k).map(|(m, c)| (m.clone(), c.clone())),
                Trunc::Exact,
            );
            Ok(t)
        };
        PolyField3::new([c(&self.comps[0])?, c(&self.comps[1])?, c(&self.comps[2])?])
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, p: [f64; 3]) -> [f64; 3] {
        let e = |s: &Series<Scalar>| s.eval_f64(&p, |c| c.to_f64());
        [e(&self.comps[0]), e(&self.comps[1]), e(&self.comps[2])]
    }

    /// Derivation action `ξ(g)` on a polynomial `g(x, y, z)`.
    pub fn apply(&self, g: &Series<Scalar>) -> Result<Series<Scalar>> {
        let mut acc = Series::zero(g.vars());
        for i in 0..3 {
            acc = acc.add(&self.comps[i].mul(&g.deriv(i))?)?;
        }
        Ok(acc)
    }

    /// Lie bracket `[self, other]`.
    pub fn lie_bracket(&self, other: &PolyField3) -> Result<PolyField3> {
        let mut out = Vec::with_capacity(3);
        for i in 0..3 {
            out.push(self.apply(&other.comps[i])?.sub(&other.apply(&self.comps[i])?)?);
        }
        let z = out.pop().expect("three");
        let y = out.pop().expect("three");
        let x = out.pop().expect("three");
        Ok(PolyField3 { comps: [x, y, z] })
    }

    /// Componentwise difference.
    pub fn sub(&self, o: &PolyField3) -> Result<PolyField3> {
        Ok(PolyField3 {
            comps: [
                self.comps[0].sub(&o.comps[0])?,
                self.comps[1].sub(&o.comps[1])?,
                self.comps[2].sub(&o.comps[2])?,
            ],
        })
    }

    /// Linear change of coordinates followed by a time rescaling:
    /// `M⁻¹ ξ(M X) / b` where the columns of `m` are the new basis vectors.
    pub fn linear_conjugate(&self, m: &[[Scalar; 3]; 3], minv: &[[Scalar; 3]; 3], b: &Scalar) -> Result<PolyField3> {
        let v = xyz();
        let subs: Vec<Series<Scalar>> = (0..3)
            .map(|i| {
                let terms = (0..3).map(|j| {
                    let mut e = Mono::from_elem(0, 3);
                    e[j] = 1;
                    (e, m[i][j].clone())
                });
                Series::from_terms(&v, terms, Trunc::Exact)
            })
            .collect();
        let pulled: Vec<Series<Scalar>> =
            self.comps.iter().map(|c| c.substitute(&v, &subs, None)).collect::<std::result::Result<_, _>>()?;
        let binv = b.checked_inv().ok_or_else(|| CoreError::NotHopf("b = 0".into()))?;
        let mut out = Vec::with_capacity(3);
        for row in minv.iter() {
            let mut acc = Series::zero(&v);
            for (j, p) in pulled.iter().enumerate() {
                acc = acc.add(&p.scale(&row[j]))?;
            }
            out.push(acc.scale(&binv));
        }
        let z = out.pop().expect("three");
        let y = out.pop().expect("three");
        let x = out.pop().expect("three");
        PolyField3::new([x, y, z])
    }

    /// Complexified components `(ẇ, ż)` over `(w, w̄, z)` with `ẇ = A₁ + iA₂`.
    pub fn complexify(&self) -> Result<(Series<Cx>, Series<Cx>)> {
        let c = wwz();
        let half = Scalar::frac(1, 2);
        let w = Series::<Cx>::var(&c, 0);
        let wb = Series::<Cx>::var(&c, 1);
        // x = (w + w̄)/2, y = −i(w − w̄)/2
        let x = w.add(&wb)?.scale(&half);
        let y = w.sub(&wb)?.mul_coeff(&Cx::new(Scalar::zero(), -half.clone()));
        let subs = [x, y, Series::var(&c, 2)];
        let to_c = |s: &Series<Scalar>| -> Result<Series<Cx>> {
            Ok(s.map_ring(|q| Cx::real(q.clone())).substitute(&c, &subs, None)?)
        };
        let fx = to_c(&self.comps[0])?;
        let fy = to_c(&self.comps[1])?;
        let fw = fx.add(&fy.mul_coeff(&Cx::i()))?;
        Ok((fw, to_c(&self.comps[2])?))
    }

    /// True iff the field has the rotationally symmetric form
    /// `T(−y∂x + x∂y) + R(x∂x + y∂y) + Z∂z` with `T, R, Z` functions of `(x² + y², z)`.
    pub fn is_rotationally_symmetric(&self) -> Result<bool> {
        let (fw, fz) = self.complexify()?;
        Ok(fw.terms().all(|(m, _)| m[0] == m[1] + 1) && fz.terms().all(|(m, _)| m[0] == m[1]))
    }

    /// The rotationally symmetric field with the given invariant functions.
    pub fn from_invariants(t: &Series<Scalar>, r: &Series<Scalar>, z: &Series<Scalar>) -> Result<PolyField3> {
        let v = xyz();
        let xs = Series::<Scalar>::var(&v, 0);
        let ys = Series::<Scalar>::var(&v, 1);
        let u = xs.mul(&xs)?.add(&ys.mul(&ys)?)?;
        let subs = [u, Series::var(&v, 2)];
        let tt = t.substitute(&v, &subs, None)?;
        let rr = r.substitute(&v, &subs, None)?;
        let zz = z.substitute(&v, &subs, None)?;
        let a1 = xs.mul(&rr)?.sub(&ys.mul(&tt)?)?;
        let a2 = ys.mul(&rr)?.add(&xs.mul(&tt)?)?;
        PolyField3::new([a1, a2, zz])
    }
}

/// Complex conjugation of a series over `(w, w̄, z)`: conjugates the
/// coefficients and swaps the exponents of `w` and `w̄`.
pub fn conj_wwz(s: &Series<Cx>) -> Series<Cx> {
    let terms = s.terms().map(|(m, c)| {
        let mut mm = m.clone();
        mm.swap(0, 1);
        (mm, c.conj())
    });
    Series::from_terms(s.vars(), terms, s.trunc().clone())
}

/// Real and imaginary parts of `F(x + iy, x − iy, z)` as polynomials in `(x, y, z)`.
pub fn realify(s: &Series<Cx>) -> Result<(Series<Scalar>, Series<Scalar>)> {
    let v = xyz();
    let x = Series::<Cx>::var(&v, 0);
    let iy = Series::<Cx>::var(&v, 1).mul_coeff(&Cx::i());
    let subs = [x.add(&iy)?, x.sub(&iy)?, Series::var(&v, 2)];
    let e = Series::from_terms(s.vars(), s.terms().map(|(m, c)| (m.clone(), c.clone())), Trunc::Exact)
        .substitute(&v, &subs, None)?;
    let re = Series::from_terms(&v, e.terms().map(|(m, c)| (m.clone(), c.re.clone())), Trunc::Exact);
    let im = Series::from_terms(&v, e.terms().map(|(m, c)| (m.clone(), c.im.clone())), Trunc::Exact);
    Ok((re, im))
}
