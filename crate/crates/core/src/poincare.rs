//! First-return maps along non-corner characteristic cycles.
//!
//! Along a cycle `{z = ω, ρ = 0}` of a cylinder chart the angular component is
//! a unit, so trajectories are graphs over θ and solve
//! `dz/dθ = B_z/B_θ`, `dρ/dθ = B_ρ/B_θ`. The jet of the time-2π map is
//! computed by jet transport: Picard iteration on series whose coefficients
//! are θ-polynomials with trigonometric coefficients. Evaluation at θ = 2π
//! lands in `K[π]`, so zero tests on the jet are exact.

use crate::bipoly::BiPoly;
use crate::blowup::{cyl, BlowupTree, ElementKind, Label, RHO, Z};
use crate::error::{CoreError, Result};
use crate::planar::{LeafRecord, Separatrix};
use hopf3_algebra::qpoly::{q, qi};
use hopf3_algebra::{var_list, Domain, Interval, JetOrder, Mono, PiPoly, Ring, Scalar, Series, ThetaTrig, Trunc, TrigPoly, UPoly, VarList, Q};
use serde::Serialize;
use std::sync::OnceLock;

/// The one-variable list `(ρ)` used for curve restrictions.
pub fn rho_line() -> VarList {
    static V: OnceLock<VarList> = OnceLock::new();
    V.get_or_init(|| var_list(&[("rho", Domain::NonNegative)])).clone()
}

/// The chart field around a non-corner cycle, translated so the cycle is `z = 0`.
#[derive(Debug, Clone)]
pub struct CycleField {
    /// Element label.
    pub label: Label,
    /// Element index.
    pub element: usize,
    /// Center `ω` in the chart's `z`-coordinate.
    pub omega: Scalar,
    /// Divisor exponent `n₁` of the chart.
    pub n1: u32,
    /// `B_θ`.
    pub b_theta: Series<TrigPoly>,
    /// `B_z`.
    pub b_z: Series<TrigPoly>,
    /// `B_ρ`.
    pub b_rho: Series<TrigPoly>,
    /// Translated reduced planar components, when the chart is rotationally symmetric.
    pub planar: Option<(BiPoly, BiPoly)>,
    /// Total order through which the chart field is trustworthy (`None` = exact).
    pub trust: Option<u32>,
}

/// Extracts the translated chart field of a non-corner cycle.
pub fn cycle_field(tree: &BlowupTree, e: usize) -> Result<CycleField> {
    let el = &tree.elements[e];
    if el.kind != ElementKind::NonCornerCycle {
        return Err(CoreError::UnknownElement(format!("{} is not a non-corner cycle", el.label)));
    }
    let ch = &tree.charts[el.chart];
    let f = ch.field.cylinder().ok_or_else(|| CoreError::Internal("cycle outside a cylinder chart".into()))?;
    let tr = |s: &Series<TrigPoly>| s.translate(Z, &el.omega);
    let planar = match &ch.planar {
        Some(p) => Some((
            BiPoly::from_series(&p.a_z.translate(Z, &el.omega)?),
            BiPoly::from_series(&p.a_rho.translate(Z, &el.omega)?),
        )),
        None => None,
    };
    Ok(CycleField {
        label: el.label.clone(),
        element: e,
        omega: el.omega.clone(),
        n1: ch.planar.as_ref().map(|p| p.n1).unwrap_or(0),
        b_theta: tr(&f.b_theta)?,
        b_z: tr(&f.b_z)?,
        b_rho: tr(&f.b_rho)?,
        planar,
        trust: tree.chart_trust(el.chart),
    })
}

impl CycleField {
    /// Builds a cycle field from θ-independent components over `(z, ρ)` (cycle at the origin).
    pub fn symmetric(label: Label, b_theta: &Series<Scalar>, b_z: &Series<Scalar>, b_rho: &Series<Scalar>) -> Result<CycleField> {
        let lift = |s: &Series<Scalar>| s.map_ring(|c| TrigPoly::constant(c.clone()));
        let n1 = [b_z, b_rho].iter().filter_map(|s| s.var_order(RHO)).min().unwrap_or(0);
        let planar = Some((BiPoly::from_series(&b_z.div_var_pow(RHO, n1)?), BiPoly::from_series(&b_rho.div_var_pow(RHO, n1)?)));
        Ok(CycleField {
            label,
            element: usize::MAX,
            omega: Scalar::zero(),
            n1,
            b_theta: lift(b_theta),
            b_z: lift(b_z),
            b_rho: lift(b_rho),
            planar,
            trust: None,
        })
    }

    /// True when no coefficient depends on θ.
    pub fn is_autonomous(&self) -> bool {
        [&self.b_theta, &self.b_z, &self.b_rho].iter().all(|s| s.terms().all(|(_, c)| c.as_constant().is_some()))
    }

    fn check_order(&self, n: u32) -> Result<()> {
        match self.trust {
            Some(t) if t < n => Err(CoreError::Undetermined(format!(
                "cycle {}: jet order {n} exceeds the chart's trustworthy order {t}",
                self.label
            ))),
            _ => Ok(()),
        }
    }

    /// `(B_z/B_θ, B_ρ/B_θ)` to total order `n`.
    pub fn angular_field(&self, n: u32) -> Result<[Series<TrigPoly>; 2]> {
        let b0 = self.b_theta.coeff(&[0, 0]);
        if b0.as_constant().is_none_or(|c| c.is_zero()) {
            return Err(CoreError::Internal(format!("cycle {}: B_θ is not a unit along the cycle", self.label)));
        }
        let k = JetOrder::total(n);
        let inv = self.b_theta.invert(k)?;
        Ok([self.b_z.mul_jet(&inv, k)?, self.b_rho.mul_jet(&inv, k)?])
    }
}

/// Jet of the first-return map `P(z, ρ)` on `{θ = 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareJet {
    /// `z ∘ P`.
    pub z: Series<PiPoly>,
    /// `ρ ∘ P`.
    pub rho: Series<PiPoly>,
    /// Total jet order.
    pub order: u32,
}

fn id_pi(i: usize, n: u32) -> Series<PiPoly> {
    Series::var(&cyl(), i).assume_trunc(Trunc::total(2, n))
}

impl PoincareJet {
    /// `(z∘P − z, ρ∘P − ρ)`.
    pub fn displacement(&self) -> Result<[Series<PiPoly>; 2]> {
        Ok([self.z.sub(&id_pi(Z, self.order))?, self.rho.sub(&id_pi(RHO, self.order))?])
    }

    /// The linear part of `P` is the identity.
    pub fn is_tangent_to_identity(&self) -> Result<bool> {
        Ok(self.displacement()?.iter().all(|d| d.terms().all(|(m, _)| m[0] + m[1] >= 2)))
    }

    /// `ρ` divides both components of `P − id` (the divisor is pointwise fixed).
    pub fn fixes_divisor(&self) -> Result<bool> {
        Ok(self.displacement()?.iter().all(|d| d.terms().all(|(m, _)| m[RHO] >= 1)))
    }

    /// Floating-point evaluation `(z∘P, ρ∘P)`.
    pub fn eval_f64(&self, z: f64, rho: f64) -> (f64, f64) {
        (self.z.eval_f64(&[z, rho], |c| c.to_f64()), self.rho.eval_f64(&[z, rho], |c| c.to_f64()))
    }
}

/// Jet of the time-2π map of `dz/dθ = B_z/B_θ, dρ/dθ = B_ρ/B_θ` by jet transport.
pub fn poincare_jet(cf: &CycleField, n: u32) -> Result<PoincareJet> {
    cf.check_order(n)?;
    let [fz, fr] = cf.angular_field(n)?;
    let c = cyl();
    let lift = |s: &Series<TrigPoly>| s.map_ring(|t| ThetaTrig::from_trig(t.clone()));
    let (gz, gr) = (lift(&fz), lift(&fr));
    let idt = |i: usize| Series::<ThetaTrig>::var(&c, i).assume_trunc(Trunc::total(2, n));
    let mut phi = [idt(Z), idt(RHO)];
    let dist = [Z, RHO];
    for _ in 0..=n + 1 {
        let rz = gz.substitute(&c, &phi, Some(&dist))?.jet(n)?;
        let rr = gr.substitute(&c, &phi, Some(&dist))?.jet(n)?;
        let next = [
            idt(Z).add(&rz.map_coeffs(|t| t.integrate()))?,
            idt(RHO).add(&rr.map_coeffs(|t| t.integrate()))?,
        ];
        if next[0].same_terms(&phi[0]) && next[1].same_terms(&phi[1]) {
            break;
        }
        phi = next;
    }
    let eval = |s: &Series<ThetaTrig>| s.map_ring(|t| t.at_two_pi()).assume_trunc(Trunc::total(2, n));
    Ok(PoincareJet { z: eval(&phi[0]), rho: eval(&phi[1]), order: n })
}

/// Truncated `Exp(2π X)` applied to the coordinates for an autonomous cycle field
/// `X = (B_z/B_θ)∂z + (B_ρ/B_θ)∂ρ`, through total order `n`.
pub fn exp_flow_jet(cf: &CycleField, n: u32) -> Result<PoincareJet> {
    if !cf.is_autonomous() {
        return Err(CoreError::Undetermined(format!("cycle {}: the exponential check needs a θ-independent field", cf.label)));
    }
    let [fz, fr] = cf.angular_field(n)?;
    let cst = |s: &Series<TrigPoly>| s.map_ring(|t| PiPoly::constant(t.as_constant().expect("autonomous")));
    let (xz, xr) = (cst(&fz), cst(&fr));
    let k = JetOrder::total(n);
    let apply = |g: &Series<PiPoly>| -> Result<Series<PiPoly>> {
        Ok(xz.mul_jet(&g.deriv(Z), k)?.add(&xr.mul_jet(&g.deriv(RHO), k)?)?.jet(n)?)
    };
    let exp = |i: usize| -> Result<Series<PiPoly>> {
        let mut acc = id_pi(i, n);
        let mut term = id_pi(i, n);
        for j in 1..=n {
            // term ← (2π/j) X(term)
            let coef = PiPoly::two_pi_pow(1).scale(&Scalar::frac(1, j as i64));
            term = apply(&term)?.mul_coeff(&coef);
            if term.is_empty() {
                break;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc.jet(n)?)
    };
    Ok(PoincareJet { z: exp(Z)?, rho: exp(RHO)?, order: n })
}

/// Compares the jet-transport map with `Exp(2πX)` through total order `k`.
pub fn exp_identity_holds(cf: &CycleField, k: u32) -> Result<bool> {
    let a = poincare_jet(cf, k)?;
    let b = exp_flow_jet(cf, k)?;
    Ok(a.z.same_terms(&b.z) && a.rho.same_terms(&b.rho))
}

/// Formal invariant surface `z = h(ρ)` through a non-corner cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSurfaceJet {
    /// Cycle label.
    pub label: Label,
    /// `h` (θ-independent on rotationally symmetric charts).
    pub h: UPoly<Scalar>,
    /// Order computed.
    pub order: u32,
    /// True when `z = h(ρ)` is exactly invariant for the chart's polynomial data.
    pub exact: bool,
}

impl InvariantSurfaceJet {
    /// `h` as a one-variable series in `ρ`.
    pub fn h_series<C: Ring>(&self) -> Series<C> {
        let r = rho_line();
        Series::from_terms(
            &r,
            self.h.coeffs().iter().enumerate().map(|(i, c)| (Mono::from_slice(&[i as u32]), C::from_scalar(c))),
            Trunc::Exact,
        )
    }

    /// Generator `H = z − h(ρ)` over `(z, ρ)`.
    pub fn generator(&self) -> Series<Scalar> {
        let c = cyl();
        let mut terms = vec![(Mono::from_slice(&[1, 0]), Scalar::one())];
        for (i, a) in self.h.coeffs().iter().enumerate() {
            terms.push((Mono::from_slice(&[0, i as u32]), -a));
        }
        Series::from_terms(&c, terms, Trunc::Exact)
    }

    /// Floating-point `h(ρ)`.
    pub fn eval_f64(&self, rho: f64) -> f64 {
        self.h.coeffs().iter().rev().fold(0.0, |acc, c| acc * rho + c.to_f64())
    }
}

/// `B_z(h, ρ) − ∂_ρh · B_ρ(h, ρ) − ∂_θh · B_θ` restricted to the candidate surface, as a series in `ρ`.
pub fn invariance_residual(cf: &CycleField, h: &UPoly<Scalar>) -> Result<Series<TrigPoly>> {
    let r = rho_line();
    let hs: Series<TrigPoly> = Series::from_terms(
        &r,
        h.coeffs().iter().enumerate().map(|(i, c)| (Mono::from_slice(&[i as u32]), TrigPoly::constant(c.clone()))),
        Trunc::Exact,
    );
    let subs = [hs.clone(), Series::var(&r, 0)];
    let bz = cf.b_z.substitute(&r, &subs, Some(&[0]))?;
    let br = cf.b_rho.substitute(&r, &subs, Some(&[0]))?;
    Ok(bz.sub(&hs.deriv(0).mul(&br)?)?)
}

/// The invariant surface through a non-corner cycle to order `k`, from the
/// cycle's planar certificate, checked against the chart field.
pub fn invariant_surface_jet(cf: &CycleField, leaf: &LeafRecord, k: u32) -> Result<InvariantSurfaceJet> {
    let sing = leaf
        .singularity
        .as_ref()
        .ok_or_else(|| CoreError::Internal(format!("cycle {} has no planar certificate", cf.label)))?;
    let sep: Separatrix = crate::planar::separatrix(sing, k)?;
    let res = invariance_residual(cf, &sep.h)?;
    if res.terms().any(|(m, _)| m[0] <= k) {
        return Err(CoreError::Internal(format!("cycle {}: invariance residual does not vanish through order {k}", cf.label)));
    }
    Ok(InvariantSurfaceJet { label: cf.label.clone(), h: sep.h, order: k, exact: sep.exact && res.is_empty() })
}

/// `P` restricted to the invariant curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRestriction {
    /// `Θ(ρ) = ρ∘P(h(ρ), ρ)`.
    pub theta: Series<PiPoly>,
    /// `ord(Θ − ρ) − 1`, or `None` when `Θ = id` through the computed order.
    pub m: Option<u32>,
    /// Jet order.
    pub order: u32,
}

fn compose_h(h: &UPoly<Scalar>, x: &Series<PiPoly>, n: u32) -> Result<Series<PiPoly>> {
    let mut acc = Series::zero(x.vars()).assume_trunc(x.trunc().clone());
    for c in h.coeffs().iter().rev() {
        acc = acc.mul(x)?.jet(n)?.add(&Series::constant(x.vars(), PiPoly::constant(c.clone())))?;
    }
    Ok(acc)
}

/// Restricts `P` to `z = h(ρ)` and checks that the curve is invariant.
pub fn restriction_to_curve(p: &PoincareJet, gamma: &InvariantSurfaceJet) -> Result<CurveRestriction> {
    let n = p.order.min(gamma.order);
    let r = rho_line();
    let subs = [gamma.h_series::<PiPoly>(), Series::var(&r, 0)];
    let zr = p.z.substitute(&r, &subs, Some(&[0]))?.jet(n)?;
    let theta = p.rho.substitute(&r, &subs, Some(&[0]))?.jet(n)?;
    let back = compose_h(&gamma.h, &theta, n)?;
    if !zr.sub(&back)?.jet(n)?.is_empty() {
        return Err(CoreError::Internal(format!("cycle {}: the curve is not invariant under P", gamma.label)));
    }
    let d = theta.sub(&Series::var(&r, 0))?;
    let m = d.var_order(0).map(|o| o - 1);
    Ok(CurveRestriction { theta, m, order: n })
}

/// `P` in coordinates `z' = z − h(ρ)` where the invariant curve is `{z' = 0}`.
pub fn straighten(p: &PoincareJet, gamma: &InvariantSurfaceJet) -> Result<PoincareJet> {
    let n = p.order;
    if gamma.h.is_zero() {
        return Ok(p.clone());
    }
    let c = cyl();
    let hz: Series<PiPoly> = gamma.h_series::<PiPoly>().substitute(&c, &[Series::var(&c, RHO)], None)?;
    let subs = [Series::var(&c, Z).add(&hz)?, Series::var(&c, RHO)];
    let zp = p.z.substitute(&c, &subs, Some(&[Z, RHO]))?.jet(n)?;
    let rp = p.rho.substitute(&c, &subs, Some(&[Z, RHO]))?.jet(n)?;
    let z2 = zp.sub(&compose_h(&gamma.h, &rp, n)?)?.jet(n)?;
    Ok(PoincareJet { z: z2, rho: rp, order: n })
}

/// Coordinate whose monotonicity rules out periodic points in a cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneCoord {
    /// `ρ`.
    Rho,
    /// `z`.
    Z,
}

/// FIX / NONFIX dichotomy for the invariant curve.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// `Γ ⊄ Fix(P)`: `ρ∘P − ρ = ρ^k(ρ^s Ã(ρ) + zB)`, `Ã(0) = α ≠ 0`.
    NonFix {
        /// `ord(Θ − ρ) − 1`.
        m: u32,
        /// Power of `ρ` dividing `ρ∘P − ρ`.
        k: u32,
        /// Order of `Ã`-part.
        s: u32,
        /// Leading coefficient of `Θ − ρ`.
        alpha: PiPoly,
    },
    /// `Γ ⊂ Sing`, hence `Γ ⊂ Fix(P)`, decided exactly on polynomial data.
    FixExact {
        /// Monotone component.
        coord: MonotoneCoord,
        /// Power of `ρ` dividing it.
        k1: u32,
        /// Power of `z` dividing it.
        k2: u32,
        /// Order of the `ρ`-only part of the cofactor.
        s: u32,
        /// Leading coefficient.
        alpha: PiPoly,
    },
    /// `Θ = id` through order `K` but membership `Γ ⊂ Fix(P)` is not decided.
    FixUpTo {
        /// Order checked.
        k: u32,
    },
}

impl Verdict {
    /// Short tag such as `NONFIX`.
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::NonFix { .. } => "NONFIX",
            Verdict::FixExact { .. } => "FIX-exact",
            Verdict::FixUpTo { .. } => "FIX-up-to",
        }
    }

    /// True for both FIX variants.
    pub fn is_fix(&self) -> bool {
        !matches!(self, Verdict::NonFix { .. })
    }
}

/// `Δ = ρ^a z^b (ρ^s Ã(ρ) + z B(z, ρ))`.
#[derive(Debug, Clone)]
struct Factored {
    a: u32,
    b: u32,
    s: u32,
    alpha: PiPoly,
    a_tilde: Series<PiPoly>,
    bpart: Series<PiPoly>,
}

fn factor(delta: &Series<PiPoly>) -> Option<Factored> {
    // Works on the stored jet terms; the truncated tail is accounted for separately.
    let a = delta.var_order(RHO)?;
    let b = delta.var_order(Z)?;
    let c = cyl();
    let mut at = Vec::new();
    let mut bt = Vec::new();
    for (m, v) in delta.terms() {
        let (i, j) = (m[Z] - b, m[RHO] - a);
        if i == 0 {
            at.push((j, v.clone()));
        } else {
            bt.push((Mono::from_slice(&[i - 1, j]), v.clone()));
        }
    }
    let s = at.iter().map(|(j, _)| *j).min()?;
    let alpha = at.iter().find(|(j, _)| *j == s)?.1.clone();
    let a_tilde = Series::from_terms(&c, at.into_iter().map(|(j, v)| (Mono::from_slice(&[0, j - s]), v)), Trunc::Exact);
    let bpart = Series::from_terms(&c, bt, Trunc::Exact);
    Some(Factored { a, b, s, alpha, a_tilde, bpart })
}

/// Decides FIX / NONFIX for the straightened map through order `k`.
pub fn fix_verdict(p: &PoincareJet, gamma: &InvariantSurfaceJet, cf: &CycleField, k: u32) -> Result<Verdict> {
    let ps = straighten(p, gamma)?;
    let restr = restriction_to_curve(p, gamma)?;
    let [dz, dr] = ps.displacement()?;
    if let Some(m) = restr.m.filter(|&m| m < k) {
        let f = factor(&dr).ok_or_else(|| CoreError::Internal("NONFIX displacement without leading term".into()))?;
        if f.b != 0 || f.a + f.s != m + 1 {
            return Err(CoreError::Internal(format!("cycle {}: inconsistent NONFIX orders", gamma.label)));
        }
        return Ok(Verdict::NonFix { m, k: f.a, s: f.s, alpha: f.alpha });
    }
    // Divisibility only decides Γ ⊂ Fix(P) when the chart field is the exact
    // normal form; truncated normal forms leave the question open.
    let exact = gamma.exact
        && cf.trust.is_none()
        && match &cf.planar {
            Some((pp, qq)) => pp.eval_z(&gamma.h).is_zero() && qq.eval_z(&gamma.h).is_zero(),
            None => false,
        };
    if !exact {
        return Ok(Verdict::FixUpTo { k });
    }
    let (coord, delta) = if !dr.is_empty() { (MonotoneCoord::Rho, dr) } else { (MonotoneCoord::Z, dz) };
    match factor(&delta) {
        Some(f) => Ok(Verdict::FixExact { coord, k1: f.a, k2: f.b, s: f.s, alpha: f.alpha }),
        None => Ok(Verdict::FixUpTo { k }),
    }
}

/// Certified cone `Σ_{N,C,δ} = {|z − h(ρ)| < Cρ^N, 0 < ρ < δ}` around the curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeParams {
    /// Cone order `N`.
    pub n: u32,
    /// Radius `δ`.
    pub delta: Q,
    /// Aperture `C`.
    pub c: Q,
    /// Verdict the cone certifies.
    pub verdict: Verdict,
    /// Coordinate that is strictly monotone under `P` off `Γ` inside the cone.
    pub coord: MonotoneCoord,
    /// Sign of the displacement of the monotone coordinate (for `z^b` with even `b` or `b = 0`).
    pub sign: i32,
    /// Certified bound `K ≥ |B|` on the box.
    pub k_bound: Q,
    /// Heuristic tail coefficient used (see [`cone_parameters`]).
    pub tail: Q,
}

fn enclose(c: &PiPoly) -> Interval {
    c.enclose(64)
}

/// Interval enclosure of a series over a box `(z, ρ)`.
pub fn enclose_series(s: &Series<PiPoly>, zb: &Interval, rb: &Interval) -> Interval {
    let mut acc = Interval::point(qi(0));
    for (m, c) in s.terms() {
        acc = acc.add(&enclose(c).mul(&zb.pow(m[Z])).mul(&rb.pow(m[RHO])));
    }
    acc
}

fn qpow(x: &Q, e: u32) -> Q {
    (0..e).fold(qi(1), |acc, _| acc * x)
}

/// Sum of coefficient magnitudes of the top-degree part of a jet, used as the
/// tail scale `M` in the heuristic bound `2·M·ρ^{n+1}`.
fn top_magnitude(s: &Series<PiPoly>, n: u32) -> Q {
    let mut m = qi(0);
    for (e, c) in s.terms() {
        if e[Z] + e[RHO] == n {
            m += enclose(c).mag();
        }
    }
    m
}

/// Finds `N` and `δ` such that, inside `Σ_{N,1,δ}`, the monotone component
/// of `P − id` has the sign of its leading coefficient off `Γ`.
///
/// The polynomial part is bounded with interval arithmetic; the truncated tail
/// is bounded heuristically by `2·M·ρ^{n+1}` with `M` the size of the top-order
/// jet terms.
pub fn cone_parameters(p: &PoincareJet, gamma: &InvariantSurfaceJet, verdict: &Verdict) -> Result<ConeParams> {
    let ps = straighten(p, gamma)?;
    let [dz, dr] = ps.displacement()?;
    let (coord, delta_s, n) = match verdict {
        Verdict::NonFix { m, .. } => (MonotoneCoord::Rho, dr, m + 1),
        Verdict::FixExact { coord, s, .. } => (*coord, if *coord == MonotoneCoord::Rho { dr } else { dz }, s + 1),
        Verdict::FixUpTo { k } => {
            return Err(CoreError::Undetermined(format!("cycle {}: Γ ⊂ Fix(P) only known through order {k}", gamma.label)))
        }
    };
    let f = factor(&delta_s).ok_or_else(|| CoreError::Internal("monotone component without leading term".into()))?;
    if n <= f.s {
        return Err(CoreError::Internal("cone order must exceed s".into()));
    }
    let lead = f.a + f.b + f.s;
    if p.order < lead + 1 {
        return Err(CoreError::Undetermined(format!(
            "cycle {}: jet order {} too low for a tail bound (needs {})",
            gamma.label,
            p.order,
            lead + 1
        )));
    }
    let alpha = enclose(&f.alpha);
    let amag = alpha.mig();
    let sign = alpha.sign().ok_or_else(|| CoreError::Internal("leading coefficient sign".into()))?;
    let quarter = amag.clone() / qi(4);
    let m_top = top_magnitude(&delta_s, p.order);
    let c = qi(1);
    let mut delta = q(1, 2);
    for _ in 0..60 {
        let rb = Interval::new(qi(0), delta.clone());
        let zmax = c.clone() * qpow(&delta, n);
        let zb = Interval::new(-zmax.clone(), zmax);
        let at = enclose_series(&f.a_tilde, &Interval::point(qi(0)), &rb);
        let kb = enclose_series(&f.bpart, &zb, &rb).mag();
        let tail = qi(2) * m_top.clone() * qpow(&delta, p.order + 1 - lead);
        let at_ok = at.sign() == Some(sign) && at.mig() * qi(2) >= amag;
        let b_ok = c.clone() * qpow(&delta, n - f.s) * kb.clone() < quarter;
        if at_ok && b_ok && tail < quarter {
            return Ok(ConeParams { n, delta, c, verdict: verdict.clone(), coord, sign, k_bound: kb, tail: m_top });
        }
        delta /= qi(2);
    }
    Err(CoreError::Undetermined(format!("cycle {}: no certifiable δ", gamma.label)))
}

/// For a map `φ` (identity plus higher-order terms) and curves `S₁ = {z = h₁}`,
/// `S₂ = {z = h₂}` with `φ(S₁) ⊂ S₂` to order `N`, finds `(C₂, δ₂)` with
/// `φ⁻¹(Σ_{N,C₂,δ₂}(S₂)) ⊂ Σ_{N,C₁,δ₁}(S₁)`, certified on the three boundary faces.
pub fn cone_transport_check(
    phi: &[Series<Scalar>; 2],
    h1: &UPoly<Scalar>,
    h2: &UPoly<Scalar>,
    n: u32,
    c1: &Q,
    d1: &Q,
) -> Result<(Q, Q)> {
    let c = cyl();
    let lin_ok = |s: &Series<Scalar>, i: usize| {
        s.terms().all(|(m, v)| {
            let deg = m[0] + m[1];
            deg >= 2 || (deg == 1 && m[i] == 1 && v.is_one()) || (deg == 1 && m[i] == 0 && v.is_zero())
        }) && s.coeff(&[0, 0]).is_zero()
    };
    if !lin_ok(&phi[0], Z) || !lin_ok(&phi[1], RHO) || phi[1].terms().any(|(m, _)| m[RHO] == 0) {
        return Err(CoreError::Input("φ must be tangent to the identity and preserve {ρ = 0}".into()));
    }
    let is_id = phi[0].same_terms(&Series::var(&c, Z)) && phi[1].same_terms(&Series::var(&c, RHO));
    if is_id && h1 == h2 {
        return Ok((c1.clone(), d1.clone()));
    }
    let bp = |s: &Series<Scalar>| BiPoly::from_series(s);
    let (pz, pr) = (bp(&phi[0]), bp(&phi[1]));
    // D(u, ρ) = φ_z(h₁ + u, ρ) − h₂(φ_ρ(h₁ + u, ρ)) with u = z − h₁.
    let shift = |b: &BiPoly| -> Result<BiPoly> {
        let hz = h1.coeffs().iter().enumerate().fold(Series::<Scalar>::zero(&c), |acc, (i, a)| {
            acc.add(&Series::monomial(&c, &[0, i as u32], a.clone())).expect("exact")
        });
        let subs = [Series::var(&c, Z).add(&hz)?, Series::var(&c, RHO)];
        Ok(BiPoly::from_series(&b.to_series().substitute(&c, &subs, None)?))
    };
    let (pz, pr) = (shift(&pz)?, shift(&pr)?);
    let mut h2_of_pr = BiPoly::from_series(&Series::zero(&c));
    for a in h2.coeffs().iter().rev() {
        h2_of_pr = h2_of_pr.mul(&pr).add(&BiPoly::from_series(&Series::constant(&c, a.clone())));
    }
    let d = pz.add(&h2_of_pr.mul(&BiPoly::from_series(&Series::constant(&c, Scalar::int(-1)))));
    let d0 = d.at_z_zero();
    if d0.ord().is_some_and(|o| o <= n as usize) {
        return Err(CoreError::Input(format!("φ(S₁) ⊂ S₂ fails below order {}", n + 1)));
    }
    let c2 = c1.clone() / qi(2);
    let rv = rho_line();
    // Faces u = σ C₁ ρ^N: E_σ(ρ) = D(σC₁ρ^N, ρ)/ρ^N and F_σ(ρ) = φ_ρ/ρ.
    let face = |sigma: i64| -> Result<(Series<Scalar>, Series<Scalar>)> {
        let u = Series::monomial(&rv, &[n], Scalar::rational(c1.clone() * qi(sigma)));
        let subs = [u, Series::var(&rv, 0)];
        let e = d.to_series().substitute(&rv, &subs, None)?.div_var_pow(0, n)?;
        let fr = pr.to_series().substitute(&rv, &subs, None)?.div_var_pow(0, 1)?;
        Ok((e, fr))
    };
    let faces = [face(1)?, face(-1)?];
    let ev = |s: &Series<Scalar>, x: &Interval| -> Interval {
        let mut acc = Interval::point(qi(0));
        for (m, v) in s.terms() {
            acc = acc.add(&Interval::point(v.as_rational().expect("rational cone data")).mul(&x.pow(m[0])));
        }
        acc
    };
    let mut d2 = d1.clone();
    for _ in 0..60 {
        let rb = Interval::new(qi(0), d2.clone());
        let mut ok = true;
        for (sigma, (e, fr)) in [1i64, -1].iter().zip(faces.iter()) {
            let lhs = ev(e, &rb).scale(&qi(*sigma));
            let rhs = ev(fr, &rb).pow(n).scale(&c2);
            if lhs.sub(&rhs).lo <= qi(0) {
                ok = false;
            }
        }
        // Face ρ = δ₁: the image stays beyond ρ = δ₂.
        let ub = Interval::new(-(c1.clone() * qpow(d1, n)), c1.clone() * qpow(d1, n));
        let mut img = Interval::point(qi(0));
        for (m, v) in pr.to_series().terms() {
            let iv = Interval::point(v.as_rational().expect("rational cone data"));
            img = img.add(&iv.mul(&ub.pow(m[Z])).mul(&Interval::point(d1.clone()).pow(m[RHO])));
        }
        if ok && img.lo >= d2 {
            return Ok((c2, d2));
        }
        d2 /= qi(2);
    }
    Err(CoreError::Undetermined("cone transport radius not certifiable".into()))
}
