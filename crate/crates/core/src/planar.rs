//! Adapted-simple classification of reduced planar singularities and the
//! resolution loop driving the blow-up engine.
//!
//! In a cylinder chart the field is rotationally symmetric, so the analysis
//! happens on the reduced planar field `χ' = A_z ∂z + A_ρ ∂ρ` at a point of the
//! divisor, translated to the origin. The divisor germ is `F = {ρ = 0}` off the
//! corners and `F = {ρ z = 0}` at corners.

use crate::bipoly::BiPoly;
use crate::blowup::{BlowupTree, ElementKind, Label, Z};
use crate::error::{CoreError, Result};
use hopf3_algebra::{Ring, Scalar, Series, UPoly};
use serde::Serialize;
use std::collections::BTreeMap;

/// Outcome of the simple-singularity test at one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimpleStatus {
    /// Isolated singularity, invariant divisor, eigenvalue ratio outside `Q_{>0}`.
    Simple,
    /// Needs further blow-ups.
    NonSimple,
    /// Curve of singularities `Γ` transversal to `F` with an adapted cofactor.
    NonSaturatedSimple,
    /// Regular point, `F` invariant (or the field crosses the other corner component).
    RegularAdapted,
    /// Regular point transverse to a dicritical divisor.
    RegularTransverse,
}

/// Factorization data of a non-isolated singular locus `χ' = s^r · χ̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularLocus {
    /// Squarefree generator of the singular curve.
    pub generator: BiPoly,
    /// Multiplicity of the branch through the point.
    pub r: u32,
    /// Cofactor field `(P̄, Q̄)`.
    pub cofactor: (BiPoly, BiPoly),
}

/// A reduced planar singularity with its certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSingularity {
    /// Corner point (`F = {ρz = 0}`).
    pub corner: bool,
    /// `A_z` translated to the point.
    pub p: BiPoly,
    /// `A_ρ` translated to the point.
    pub q: BiPoly,
    /// Classification.
    pub status: SimpleStatus,
    /// Eigenvalues `(λ_z, λ_ρ)` of the field (or of the cofactor in case 2).
    pub lambda: Option<[Scalar; 2]>,
    /// Case-2 factorization.
    pub locus: Option<SingularLocus>,
    /// Human-readable reason for a non-final status.
    pub reason: String,
}

/// True when `a/b` is a positive rational number.
pub fn ratio_is_positive_rational(a: &Scalar, b: &Scalar) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let r = a / b;
    r.is_rational() && r.signum() > 0
}

fn eigen_test(p: &BiPoly, q: &BiPoly) -> ([Scalar; 2], bool) {
    let lz = p.coeff(1, 0);
    let lr = q.coeff(0, 1);
    let ok = !(lz.is_zero() && lr.is_zero()) && !ratio_is_positive_rational(&lz, &lr);
    ([lz, lr], ok)
}

/// Classifies the reduced field `(p, q)` at the origin relative to the divisor germ.
pub fn simple_singularity_test(p: &Series<Scalar>, q: &Series<Scalar>, corner: bool) -> PlanarSingularity {
    classify_bipoly(BiPoly::from_series(p), BiPoly::from_series(q), corner)
}

fn classify_bipoly(p: BiPoly, q: BiPoly, corner: bool) -> PlanarSingularity {
    let mut out = PlanarSingularity {
        corner,
        p: p.clone(),
        q: q.clone(),
        status: SimpleStatus::NonSimple,
        lambda: None,
        locus: None,
        reason: String::new(),
    };
    let (p0, q0) = (p.at_origin(), q.at_origin());
    let rho_inv = q.rho_divides();
    if !p0.is_zero() || !q0.is_zero() {
        out.status = if corner {
            if (rho_inv && !p0.is_zero()) || (p.z_divides() && !q0.is_zero()) {
                SimpleStatus::RegularAdapted
            } else {
                out.reason = "regular corner point not adapted to both divisor components".into();
                SimpleStatus::NonSimple
            }
        } else if rho_inv {
            SimpleStatus::RegularAdapted
        } else if !q0.is_zero() {
            SimpleStatus::RegularTransverse
        } else {
            out.reason = "tangency with a dicritical divisor component".into();
            SimpleStatus::NonSimple
        };
        return out;
    }
    if !corner {
        let g = p.gcd(&q);
        if g.at_origin().is_zero() {
            return case_two(out, g);
        }
    }
    if !rho_inv {
        out.reason = "singular point on a dicritical divisor component".into();
        return out;
    }
    if corner && !p.z_divides() {
        out.reason = "corner singularity with a dicritical component {z = 0}".into();
        return out;
    }
    let (lambda, ok) = eigen_test(&p, &q);
    out.lambda = Some(lambda);
    if ok {
        out.status = SimpleStatus::Simple;
    } else {
        out.reason = "eigenvalues both zero or with positive rational ratio".into();
    }
    out
}

fn case_two(mut out: PlanarSingularity, g: BiPoly) -> PlanarSingularity {
    let s = g.squarefree();
    if s.deriv_z().at_origin().is_zero() {
        out.reason = "singular curve not smooth or tangent to the divisor".into();
        return out;
    }
    let mut h = g.clone();
    let mut r = 0;
    while h.at_origin().is_zero() {
        let d = h.gcd(&s);
        h = h.div_exact(&d).expect("gcd divides");
        r += 1;
    }
    let pb = out.p.div_exact(&g).expect("gcd divides");
    let qb = out.q.div_exact(&g).expect("gcd divides");
    let locus = SingularLocus { generator: s.clone(), r, cofactor: (pb.clone(), qb.clone()) };
    out.locus = Some(locus);
    if !qb.rho_divides() {
        out.reason = "cofactor field does not leave the divisor invariant".into();
        return out;
    }
    if !pb.at_origin().is_zero() {
        out.status = SimpleStatus::NonSaturatedSimple;
        return out;
    }
    let (lambda, ok) = eigen_test(&pb, &qb);
    out.lambda = Some(lambda);
    let chi_s = pb.mul(&s.deriv_z()).add(&qb.mul(&s.deriv_rho()));
    let invariant = s.gcd(&chi_s).at_origin().is_zero();
    if ok && invariant {
        out.status = SimpleStatus::NonSaturatedSimple;
    } else {
        out.reason = "cofactor singularity not simple or singular curve not invariant".into();
    }
    out
}

/// How a separatrix jet was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparatrixSource {
    /// Invariant curve tangent to the `ρ`-eigendirection of a simple singularity.
    Eigendirection,
    /// Branch of the curve of singularities.
    SingularCurve,
}

/// The invariant curve `z = h(ρ)` through a non-corner cycle, in the
/// translated coordinate of its point.
#[derive(Debug, Clone, PartialEq)]
pub struct Separatrix {
    /// `h` as a polynomial in `ρ` (`h(0) = 0`).
    pub h: UPoly<Scalar>,
    /// Jet order computed.
    pub order: u32,
    /// True when `z = h(ρ)` is an exact invariant curve of the polynomial data.
    pub exact: bool,
    /// Origin of the curve.
    pub source: SeparatrixSource,
}

fn truncate(p: &UPoly<Scalar>, k: usize) -> UPoly<Scalar> {
    UPoly::new(p.coeffs().iter().take(k + 1).cloned().collect())
}

fn graph_recursion(n: usize, f: impl Fn(&UPoly<Scalar>) -> UPoly<Scalar>, denom: impl Fn(usize) -> Scalar) -> Result<(UPoly<Scalar>, bool)> {
    let mut h = UPoly::<Scalar>::zero();
    for i in 1..=n {
        let e = f(&h).coeff(i);
        if e.is_zero() {
            continue;
        }
        let d = denom(i);
        let inv = d
            .checked_inv()
            .ok_or_else(|| CoreError::Internal(format!("resonant separatrix recursion at order {i}")))?;
        let mut c = h.coeffs().to_vec();
        c.resize(i + 1, Scalar::zero());
        c[i] = -&(&e * &inv);
        h = UPoly::new(c);
    }
    let exact = f(&h).is_zero();
    Ok((truncate(&h, n), exact))
}

/// Computes the separatrix jet of a final non-corner singularity to order `n`.
pub fn separatrix(sing: &PlanarSingularity, n: u32) -> Result<Separatrix> {
    let k = n as usize;
    match (&sing.status, &sing.locus) {
        (SimpleStatus::NonSaturatedSimple, Some(loc)) => {
            let s = &loc.generator;
            let sz = s.deriv_z().at_origin();
            let (h, exact) = graph_recursion(k, |h| s.eval_z(h), |_| sz.clone())?;
            Ok(Separatrix { h, order: n, exact, source: SeparatrixSource::SingularCurve })
        }
        (SimpleStatus::Simple, _) => {
            let [lz, lr] = sing.lambda.clone().expect("simple singularity has eigenvalues");
            let (p, q) = (&sing.p, &sing.q);
            let residual = |h: &UPoly<Scalar>| p.eval_z(h).sub(&h.derivative().mul(&q.eval_z(h)));
            let (h, exact) = graph_recursion(k, residual, |i| &lz - &(&Scalar::int(i as i64) * &lr))?;
            Ok(Separatrix { h, order: n, exact, source: SeparatrixSource::Eigendirection })
        }
        _ => Err(CoreError::Internal("separatrix requested at a point without a final singular status".into())),
    }
}

/// Final status of an element of `D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafStatus {
    /// Adapted simple singularity (isolated).
    AdaptedSimple,
    /// Non-saturated adapted simple singularity.
    NonSaturatedAdaptedSimple,
    /// Regular point adapted to the divisor.
    RegularAdapted,
    /// Characteristic singularity with `ż = z^t G`, `G(0) ≠ 0`.
    AxisPoleResolved,
}

/// Classification record of one element of the final tree.
#[derive(Debug, Clone)]
pub struct LeafRecord {
    /// Element index in the tree.
    pub element: usize,
    /// Element label.
    pub label: Label,
    /// Element kind.
    pub kind: ElementKind,
    /// Final status.
    pub status: LeafStatus,
    /// Planar certificate (cycles).
    pub singularity: Option<PlanarSingularity>,
    /// `t` of `ż = z^t G` (characteristic singularities).
    pub t: Option<u32>,
    /// `G(0)` (characteristic singularities).
    pub g0: Option<Scalar>,
    /// Separatrix jet (non-corner cycles).
    pub separatrix: Option<Separatrix>,
}

/// Result of classifying one element.
#[derive(Debug, Clone)]
pub enum ElementVerdict {
    /// Final status.
    Final(Box<LeafRecord>),
    /// The element must be blown up.
    BlowUp(String),
}

/// Translated reduced planar data at a cycle element.
pub fn element_planar(tree: &BlowupTree, e: usize) -> Result<(Series<Scalar>, Series<Scalar>, bool)> {
    let el = &tree.elements[e];
    let ch = &tree.charts[el.chart];
    let pd = ch
        .planar
        .as_ref()
        .ok_or_else(|| CoreError::Internal(format!("element {} does not lie in a cylinder chart", el.label)))?;
    let corner = el.kind == ElementKind::CornerCycle;
    if corner {
        Ok((pd.a_z.clone(), pd.a_rho.clone(), true))
    } else {
        Ok((pd.a_z.translate(Z, &el.omega)?, pd.a_rho.translate(Z, &el.omega)?, false))
    }
}

/// Classifies one element of the tree.
pub fn classify_element(tree: &BlowupTree, e: usize, separatrix_order: u32) -> Result<ElementVerdict> {
    let el = &tree.elements[e];
    let base = |status, singularity, separatrix, t, g0| LeafRecord {
        element: e,
        label: el.label.clone(),
        kind: el.kind,
        status,
        singularity,
        t,
        g0,
        separatrix,
    };
    if el.kind == ElementKind::CharacteristicSingularity {
        let ax = tree.charts[el.chart]
            .axis
            .as_ref()
            .ok_or_else(|| CoreError::Internal(format!("element {} does not lie in a point chart", el.label)))?;
        let g0 = ax.g.coeff(&[0, 0, 0]);
        if g0.is_zero() {
            return Ok(ElementVerdict::BlowUp(format!("z-component z^{} G with G(0) = 0", ax.t)));
        }
        return Ok(ElementVerdict::Final(Box::new(base(LeafStatus::AxisPoleResolved, None, None, Some(ax.t), Some(g0)))));
    }
    let (p, q, corner) = element_planar(tree, e)?;
    let sing = simple_singularity_test(&p, &q, corner);
    let status = match sing.status {
        SimpleStatus::Simple => LeafStatus::AdaptedSimple,
        SimpleStatus::NonSaturatedSimple => LeafStatus::NonSaturatedAdaptedSimple,
        SimpleStatus::RegularAdapted => LeafStatus::RegularAdapted,
        SimpleStatus::RegularTransverse | SimpleStatus::NonSimple => {
            let why = if sing.reason.is_empty() { "regular point transverse to a dicritical component".into() } else { sing.reason };
            return Ok(ElementVerdict::BlowUp(why));
        }
    };
    let sep = if !corner && status != LeafStatus::RegularAdapted { Some(separatrix(&sing, separatrix_order)?) } else { None };
    Ok(ElementVerdict::Final(Box::new(base(status, Some(sing), sep, None, None))))
}

/// Options of the resolution loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolutionOptions {
    /// Maximal number of blow-ups after `σ₀`.
    pub budget: u32,
    /// Jet order of separatrices.
    pub separatrix_order: u32,
}

impl Default for ResolutionOptions {
    fn default() -> Self {
        ResolutionOptions { budget: 20, separatrix_order: 8 }
    }
}

/// One line of the resolution log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionStep {
    /// Center blown up.
    pub center: Label,
    /// Why it was not final.
    pub reason: String,
}

/// Output of [`adapted_resolution`].
#[derive(Debug, Clone)]
pub struct ResolutionOutcome {
    /// The final (or partial) tree.
    pub tree: BlowupTree,
    /// Records of the active elements, in element order (complete only when resolved).
    pub leaves: Vec<LeafRecord>,
    /// Blow-ups performed, in order.
    pub steps: Vec<ResolutionStep>,
    /// `None` when every element is final; otherwise the reason the loop stopped.
    pub unresolved: Option<String>,
}

impl ResolutionOutcome {
    /// True when every element of `D` has a final status.
    pub fn resolved(&self) -> bool {
        self.unresolved.is_none()
    }

    /// The record of an element label.
    pub fn leaf(&self, label: &Label) -> Option<&LeafRecord> {
        self.leaves.iter().find(|l| &l.label == label)
    }
}

/// Blows up elements until all of them are adapted simple, regular adapted or
/// resolved axis poles, or until the budget runs out.
pub fn adapted_resolution(mut tree: BlowupTree, opts: ResolutionOptions) -> Result<ResolutionOutcome> {
    let mut cache: BTreeMap<usize, LeafRecord> = BTreeMap::new();
    let mut steps = Vec::new();
    loop {
        let mut pending = None;
        for e in tree.active_elements() {
            if cache.contains_key(&e) {
                continue;
            }
            match classify_element(&tree, e, opts.separatrix_order)? {
                ElementVerdict::Final(r) => {
                    cache.insert(e, *r);
                }
                ElementVerdict::BlowUp(why) => {
                    pending = Some((e, why));
                    break;
                }
            }
        }
        let Some((e, reason)) = pending else {
            let leaves = cache.into_values().collect();
            return Ok(ResolutionOutcome { tree, leaves, steps, unresolved: None });
        };
        if steps.len() as u32 >= opts.budget {
            let label = tree.elements[e].label.clone();
            let leaves = cache.into_values().collect();
            let msg = format!("blow-up budget of {} exhausted; element {label} still needs a blow-up ({reason})", opts.budget);
            return Ok(ResolutionOutcome { tree, leaves, steps, unresolved: Some(msg) });
        }
        steps.push(ResolutionStep { center: tree.elements[e].label.clone(), reason });
        tree.blow_up(e)?;
    }
}

/// Record of the axis-pole recursion at one end of the `z`-axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxisPole {
    /// Final element label.
    pub label: Label,
    /// Exponents `t` met along the recursion, first to last.
    pub t_trace: Vec<u32>,
    /// Number of characteristic-singularity blow-ups performed.
    pub iterations: u32,
}

/// Blows up the characteristic singularities at both ends of the axis until
/// `ż = z^t G` with `G` a unit.
pub fn resolve_axis_poles(tree: &mut BlowupTree, budget: u32) -> Result<Vec<AxisPole>> {
    let mut out = Vec::new();
    let roots: Vec<usize> = tree
        .active_elements()
        .into_iter()
        .filter(|&e| tree.elements[e].kind == ElementKind::CharacteristicSingularity)
        .collect();
    for start in roots {
        let mut e = start;
        let mut t_trace = Vec::new();
        let mut iterations = 0;
        loop {
            let ax = tree.charts[tree.elements[e].chart].axis.clone().expect("point chart");
            t_trace.push(ax.t);
            if !ax.g.coeff(&[0, 0, 0]).is_zero() {
                break;
            }
            if iterations >= budget {
                return Err(CoreError::BudgetExhausted(format!(
                    "axis pole {} not resolved after {budget} blow-ups (t trace {t_trace:?})",
                    tree.elements[start].label
                )));
            }
            tree.blow_up_characteristic_singularity(e)?;
            iterations += 1;
            let next = tree.elements[e].label.child(crate::blowup::Idx::Inf);
            e = tree.find(&next).expect("new characteristic singularity");
        }
        out.push(AxisPole { label: tree.elements[e].label.clone(), t_trace, iterations });
    }
    Ok(out)
}
