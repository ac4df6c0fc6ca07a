//! Hopf detection and the rotational (Takens) normal form.
//!
//! After an exact linear change and a time rescaling the linear part becomes
//! `−y∂x + x∂y`. In the coordinates `(w, w̄, z)` the adjoint action of the
//! rotation is diagonal: the monomial `w^a w̄^b z^c ∂w` has eigenvalue
//! `i(a − b − 1)` and `w^a w̄^b z^c ∂z` has eigenvalue `i(a − b)`. Degree by
//! degree, every non-resonant monomial is removed by the near-identity change
//! `id + h`, choosing the zero component in the kernel, which leaves exactly
//! the rotationally invariant terms `T(−y∂x + x∂y) + R(x∂x + y∂y) + Z∂z`.

use crate::error::{CoreError, Result};
use crate::field::{conj_wwz, realify, uv, wwz, xyz, PolyField3};
use hopf3_algebra::roots::isolate_real_roots;
use hopf3_algebra::{Cx, Mono, Q, Ring, Scalar, Series, Trunc};
use serde::Serialize;

/// Eigenvalue configuration of a Hopf singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HopfCase {
    /// Third eigenvalue `c = 0`.
    ZeroHopf,
    /// Third eigenvalue `c ≠ 0`.
    SemiHyperbolic,
}

/// Spectral data and the linearizing change of a Hopf singularity.
#[derive(Debug, Clone)]
pub struct HopfData {
    /// Rotation speed `b > 0` (possibly algebraic).
    pub b: Scalar,
    /// Third eigenvalue.
    pub c: Scalar,
    /// Eigenvalue configuration.
    pub case: HopfCase,
    /// Change matrix; its columns `e, f, v₃` satisfy `Ae = bf`, `Af = −be`, `Av₃ = cv₃`.
    pub change: [[Scalar; 3]; 3],
    /// Inverse of the change matrix.
    pub inverse: [[Scalar; 3]; 3],
}

type Mat3 = [[Scalar; 3]; 3];

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut r: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut s = Scalar::zero();
            for k in 0..3 {
                s = &s + &(&a[i][k] * &b[k][j]);
            }
            r[i][j] = s;
        }
    }
    r
}

fn mat_vec(a: &Mat3, v: &[Scalar; 3]) -> [Scalar; 3] {
    let mut r: [Scalar; 3] = Default::default();
    for i in 0..3 {
        let mut s = Scalar::zero();
        for k in 0..3 {
            s = &s + &(&a[i][k] * &v[k]);
        }
        r[i] = s;
    }
    r
}

/// Basis of the kernel of a 3×3 matrix by exact Gauss–Jordan elimination.
fn kernel(a: &Mat3) -> Vec<[Scalar; 3]> {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..3 {
        let Some(p) = (row..3).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].checked_inv().expect("nonzero pivot");
        for j in 0..3 {
            m[row][j] = &m[row][j] * &inv;
        }
        for r in 0..3 {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..3 {
                    m[r][j] = &m[r][j] - &(&f * &m[row][j]);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..3).filter(|c| !pivots.contains(c)) {
        let mut v: [Scalar; 3] = Default::default();
        v[free] = Scalar::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[r][free];
        }
        basis.push(v);
    }
    basis
}

fn inverse(a: &Mat3) -> Option<Mat3> {
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.to_vec();
            for j in 0..3 {
                row.push(if i == j { Scalar::one() } else { Scalar::zero() });
            }
            row
        })
        .collect();
    for col in 0..3 {
        let p = (col..3).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].checked_inv()?;
        for j in 0..6 {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in 0..3 {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..6 {
                    m[r][j] = &m[r][j] - &(&f * &m[col][j]);
                }
            }
        }
    }
    let mut r: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = m[i][j + 3].clone();
        }
    }
    Some(r)
}

fn positive_sqrt(q: &Q) -> Result<Scalar> {
    if let Some(r) = Scalar::rational_sqrt(q) {
        return Ok(Scalar::rational(r));
    }
    let p = vec![-q.clone(), Q::from_integer(0.into()), Q::from_integer(1.into())];
    let roots = isolate_real_roots(&p)?;
    roots
        .into_iter()
        .find(|r| r.signum() > 0)
        .ok_or_else(|| CoreError::Internal("square root of a positive rational".into()))
}

/// Checks that the spectrum of `Dξ(0)` is `{±bi, c}` with `b ≠ 0` and
/// returns the exact linearizing change.
pub fn detect_hopf(xi: &PolyField3) -> Result<HopfData> {
    let a = xi.linear_part();
    let c = &(&a[0][0] + &a[1][1]) + &a[2][2];
    let minor = |i: usize, j: usize| &(&a[i][i] * &a[j][j]) - &(&a[i][j] * &a[j][i]);
    let e2 = &(&minor(0, 1) + &minor(0, 2)) + &minor(1, 2);
    let det = {
        let t1 = &a[0][0] * &(&(&a[1][1] * &a[2][2]) - &(&a[1][2] * &a[2][1]));
        let t2 = &a[0][1] * &(&(&a[1][0] * &a[2][2]) - &(&a[1][2] * &a[2][0]));
        let t3 = &a[0][2] * &(&(&a[1][0] * &a[2][1]) - &(&a[1][1] * &a[2][0]));
        &(&t1 - &t2) + &t3
    };
    // λ³ − cλ² + b²λ − cb² = (λ − c)(λ² + b²)
    if e2.signum() <= 0 || det != &c * &e2 {
        return Err(CoreError::NotHopf(format!(
            "characteristic polynomial λ³ − ({})λ² + ({})λ − ({}) has no factor λ² + b², b ≠ 0",
            c.render(),
            e2.render(),
            det.render()
        )));
    }
    let e2q = e2.as_rational().ok_or_else(|| CoreError::Input("linear part must be rational".into()))?;
    let b = positive_sqrt(&e2q)?;
    let mut sq = mat_mul(&a, &a);
    for (i, row) in sq.iter_mut().enumerate() {
        row[i] = &row[i] + &e2;
    }
    let plane = kernel(&sq);
    let mut shifted = a.clone();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] = &row[i] - &c;
    }
    let axis = kernel(&shifted);
    if plane.len() != 2 || axis.len() != 1 {
        return Err(CoreError::NotHopf("eigenspaces have unexpected dimensions".into()));
    }
    let e = plane[0].clone();
    let binv = b.checked_inv().expect("b > 0");
    let ae = mat_vec(&a, &e);
    let f: [Scalar; 3] = [&ae[0] * &binv, &ae[1] * &binv, &ae[2] * &binv];
    let v3 = axis[0].clone();
    let mut m: Mat3 = Default::default();
    for i in 0..3 {
        m[i][0] = e[i].clone();
        m[i][1] = f[i].clone();
        m[i][2] = v3[i].clone();
    }
    let inv = inverse(&m).ok_or_else(|| CoreError::NotHopf("degenerate eigenbasis".into()))?;
    let case = if c.is_zero() { HopfCase::ZeroHopf } else { HopfCase::SemiHyperbolic };
    Ok(HopfData { b, c, case, change: m, inverse: inv })
}

/// Brings the linear part to `−y∂x + x∂y + (c/b) z∂z` and rescales time by `1/b`.
pub fn normalize_linear(xi: &PolyField3, h: &HopfData) -> Result<PolyField3> {
    let g = xi.linear_conjugate(&h.change, &h.inverse, &h.b)?;
    let l = g.linear_part();
    let cb = &h.c * &h.b.checked_inv().expect("b > 0");
    let expect = |i: usize, j: usize| -> Scalar {
        match (i, j) {
            (0, 1) => Scalar::int(-1),
            (1, 0) => Scalar::one(),
            (2, 2) => cb.clone(),
            _ => Scalar::zero(),
        }
    };
    for i in 0..3 {
        for j in 0..3 {
            if l[i][j] != expect(i, j) {
                return Err(CoreError::Internal("linear normalization failed".into()));
            }
        }
    }
    Ok(g)
}

/// The rotational normal form `T(−y∂x + x∂y) + R(x∂x + y∂y) + Z∂z` with the
/// normalizing change.
#[derive(Debug, Clone)]
pub struct RotationalNormalForm {
    /// `T(u, v)`, `T(0, 0) = 1`.
    pub t: Series<Scalar>,
    /// `R(u, v)`.
    pub r: Series<Scalar>,
    /// `Z(u, v)`.
    pub z: Series<Scalar>,
    /// Working order `ℓ`: the field `T(−y∂x + x∂y) + R(x∂x + y∂y) + Z∂z`
    /// is exact through total degree `ℓ` in `(x, y, z)`.
    pub order: u32,
    /// True when the (linearly normalized) input already has the symmetric
    /// form; then `T, R, Z` are exact polynomials and the change is the identity.
    pub exact: bool,
    /// The near-identity change `φ_ℓ` in the linearly normalized coordinates,
    /// through total degree `ℓ + 1`.
    pub phi: [Series<Scalar>; 3],
    /// `ξ_ℓ = j_{ℓ+1}(φ_ℓ^* ξ)` in the linearly normalized coordinates.
    pub xi_l: PolyField3,
    /// Spectral data.
    pub hopf: HopfData,
}

fn invariants_from_complex(fw: &Series<Cx>, fz: &Series<Cx>) -> Result<(Series<Scalar>, Series<Scalar>, Series<Scalar>)> {
    let v = uv();
    let mut t = Vec::new();
    let mut r = Vec::new();
    let mut z = Vec::new();
    for (m, c) in fw.terms() {
        if m[0] != m[1] + 1 {
            return Err(CoreError::Internal("non-resonant ∂w term survived normalization".into()));
        }
        let e: Mono = Mono::from_slice(&[m[1], m[2]]);
        r.push((e.clone(), c.re.clone()));
        t.push((e, c.im.clone()));
    }
    for (m, c) in fz.terms() {
        if m[0] != m[1] {
            return Err(CoreError::Internal("non-resonant ∂z term survived normalization".into()));
        }
        if !c.im.is_zero() {
            return Err(CoreError::Internal("resonant ∂z coefficient is not real".into()));
        }
        z.push((Mono::from_slice(&[m[0], m[2]]), c.re.clone()));
    }
    Ok((
        Series::from_terms(&v, t, Trunc::Exact),
        Series::from_terms(&v, r, Trunc::Exact),
        Series::from_terms(&v, z, Trunc::Exact),
    ))
}

fn clip_exact(s: &Series<Cx>, k: u32) -> Series<Cx> {
    Series::from_terms(
        s.vars(),
        s.terms().filter(|(m, _)| m.iter().sum::<u32>() <= k).map(|(m, c)| (m.clone(), c.clone())),
        Trunc::Exact,
    )
}

/// Computes the rotational normal form through order `ℓ`.
///
/// The input must be a zero-Hopf singularity; the linear normalization of
/// [`detect_hopf`] is applied first.
pub fn takens_normal_form(xi: &PolyField3, h: &HopfData, order: u32) -> Result<RotationalNormalForm> {
    if h.case != HopfCase::ZeroHopf {
        return Err(CoreError::SemiHyperbolic(h.c.render()));
    }
    if order < 1 {
        return Err(CoreError::Input("normal-form order must be at least 1".into()));
    }
    let g = normalize_linear(xi, h)?;
    let v = xyz();
    let identity = [Series::var(&v, 0), Series::var(&v, 1), Series::var(&v, 2)];
    let (fw0, fz0) = g.complexify()?;
    if g.is_rotationally_symmetric()? {
        let (t, r, z) = invariants_from_complex(&fw0, &fz0)?;
        return Ok(RotationalNormalForm { t, r, z, order, exact: true, phi: identity, xi_l: g, hopf: h.clone() });
    }
    let c = wwz();
    let top = order + 1;
    let tr = Trunc::total(3, top);
    let mut fw = fw0.assume_trunc(tr.clone());
    let mut fz = fz0.assume_trunc(tr.clone());
    let mut phi = [Series::var(&c, 0), Series::var(&c, 1), Series::var(&c, 2)].map(|s: Series<Cx>| s.assume_trunc(tr.clone()));
    for d in 2..=order {
        let mut hw = Vec::new();
        for (m, coef) in fw.terms() {
            if m.iter().sum::<u32>() == d && m[0] != m[1] + 1 {
                let k = m[0] as i64 - m[1] as i64 - 1;
                // coef / (i k) = −i coef / k
                let q = coef.rmul(&Cx::new(Scalar::zero(), Scalar::frac(-1, k)));
                hw.push((m.clone(), q));
            }
        }
        let mut hz = Vec::new();
        for (m, coef) in fz.terms() {
            if m.iter().sum::<u32>() == d && m[0] != m[1] {
                let k = m[0] as i64 - m[1] as i64;
                hz.push((m.clone(), coef.rmul(&Cx::new(Scalar::zero(), Scalar::frac(-1, k)))));
            }
        }
        if hw.is_empty() && hz.is_empty() {
            continue;
        }
        let hw = Series::from_terms(&c, hw, Trunc::Exact);
        let hwb = conj_wwz(&hw);
        let hz = Series::from_terms(&c, hz, Trunc::Exact);
        let hs = [hw, hwb, hz];
        let subs: Vec<Series<Cx>> = (0..3)
            .map(|i| Ok(Series::<Cx>::var(&c, i).add(&hs[i])?.assume_trunc(tr.clone())))
            .collect::<Result<_>>()?;
        let dist = [0usize, 1, 2];
        let vw = fw.substitute(&c, &subs, Some(&dist))?;
        let vz = fz.substitute(&c, &subs, Some(&dist))?;
        // Solve Y = V − Dh·Y by fixed-point iteration; each pass fixes one more degree.
        let dh: Vec<[Series<Cx>; 3]> = hs.iter().map(|s| [s.deriv(0), s.deriv(1), s.deriv(2)]).collect();
        let mut yw = vw.clone();
        let mut yz = vz.clone();
        for _ in 0..=top {
            let ywb = conj_wwz(&yw);
            let ys = [&yw, &ywb, &yz];
            let corr = |row: &[Series<Cx>; 3]| -> Result<Series<Cx>> {
                let mut acc = Series::zero(&c).assume_trunc(tr.clone());
                for j in 0..3 {
                    acc = acc.add(&row[j].mul(ys[j])?)?;
                }
                Ok(acc)
            };
            let nw = vw.sub(&corr(&dh[0])?)?.assume_trunc(tr.clone());
            let nz = vz.sub(&corr(&dh[2])?)?.assume_trunc(tr.clone());
            let done = nw.same_terms(&yw) && nz.same_terms(&yz);
            yw = nw;
            yz = nz;
            if done {
                break;
            }
        }
        fw = yw;
        fz = yz;
        phi = [
            phi[0].substitute(&c, &subs, Some(&dist))?.assume_trunc(tr.clone()),
            phi[1].substitute(&c, &subs, Some(&dist))?.assume_trunc(tr.clone()),
            phi[2].substitute(&c, &subs, Some(&dist))?.assume_trunc(tr.clone()),
        ];
    }
    let (t, r, z) = invariants_from_complex(&clip_exact(&fw, order), &clip_exact(&fz, order))?;
    // Realify: x = Re φ_w, y = Im φ_w, z = Re φ_z.
    let (px, py) = realify(&clip_exact(&phi[0], top))?;
    let (pz, _) = realify(&clip_exact(&phi[2], top))?;
    let (ax, ay) = realify(&clip_exact(&fw, top))?;
    let (az, _) = realify(&clip_exact(&fz, top))?;
    let xi_l = PolyField3::new([ax, ay, az])?;
    Ok(RotationalNormalForm { t, r, z, order, exact: false, phi: [px, py, pz], xi_l, hopf: h.clone() })
}

impl RotationalNormalForm {
    /// The symmetric polynomial field `ξ̂_ℓ = T(−y∂x + x∂y) + R(x∂x + y∂y) + Z∂z`.
    pub fn symmetric_field(&self) -> Result<PolyField3> {
        PolyField3::from_invariants(&self.t, &self.r, &self.z)
    }

    /// True iff the singularity is not isolated along the z-axis to the order examined.
    pub fn z_axis_restriction(&self) -> Series<Scalar> {
        self.z.at_zero(0)
    }
}

/// The polynomial field `ξ_ℓ` of the normal-form run with `j_ℓ(ξ_ℓ) = j_ℓ(ξ̂)`.
///
/// For symmetric input this is `j_ℓ(ξ)`, which equals `ξ` once `ℓ ≥ deg ξ`.
pub fn truncated_normal_form(nf: &RotationalNormalForm, order: u32) -> Result<PolyField3> {
    if nf.exact {
        if order >= nf.xi_l.degree() {
            return Ok(nf.xi_l.clone());
        }
        return nf.xi_l.jet(order);
    }
    Ok(nf.xi_l.clone())
}

/// Outcome of the isolation test on `Z(0, v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Isolation {
    /// `Z(0, v)` has a nonzero coefficient at `v^order`.
    Isolated {
        /// Lowest order with a nonzero coefficient.
        order: u32,
    },
    /// `Z(0, v) ≡ 0` exactly: the z-axis consists of singular points.
    AxisOfSingularities,
    /// All coefficients through order `k` vanish.
    Undetermined {
        /// Examined order.
        k: u32,
    },
}

/// Reads the lowest nonzero coefficient of `Z(0, v)` up to order `k`.
pub fn isolated_singularity_check(nf: &RotationalNormalForm, k: u32) -> Isolation {
    let axis = nf.z_axis_restriction();
    let lowest = axis.terms().map(|(m, _)| m[1]).min();
    match lowest {
        Some(o) if o <= k => Isolation::Isolated { order: o },
        None if nf.exact => Isolation::AxisOfSingularities,
        _ => Isolation::Undetermined { k },
    }
}
