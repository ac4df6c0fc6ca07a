//! Assembly of the local cycle-locus classification.
//!
//! Pipeline: Hopf detection → rotational normal form → adapted resolution →
//! per-element certificates (axis poles, monotone corners and regular points,
//! Poincaré cones along non-corner cycles) → monotonicity boxes on the divisor
//! lines → cone-opening blow-ups → final case decision. Every certificate
//! carries the radius on which its sign condition was verified with exact
//! interval arithmetic.

use crate::blowup::{BlowupTree, ChartKind, ElementKind, Label, ScanRegion, TraceEntry, RHO, Z};
use crate::error::{CoreError, Result};
use crate::field::PolyField3;
use crate::normal_form::{detect_hopf, isolated_singularity_check, takens_normal_form, HopfCase, Isolation, RotationalNormalForm};
use crate::planar::{adapted_resolution, element_planar, LeafRecord, LeafStatus, ResolutionOptions, ResolutionStep};
use crate::poincare::{
    cone_parameters, cycle_field, fix_verdict, invariant_surface_jet, poincare_jet, ConeParams, InvariantSurfaceJet, MonotoneCoord,
    PoincareJet, Verdict,
};
use hopf3_algebra::qpoly::{q, qi};
use hopf3_algebra::{Interval, PiPoly, Ring, Scalar, Series, UPoly, Q};
use serde::Serialize;
use std::collections::BTreeMap;

/// Version tag of the report schema.
pub const SCHEMA: &str = "hopf3/1";

/// Options of [`classify`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyOptions {
    /// Normal-form order `ℓ`.
    pub order: u32,
    /// Blow-up budget of the adapted resolution.
    pub budget: u32,
    /// Box margin `ε` around divisor points (default: a quarter of the minimal gap).
    pub epsilon: Option<Q>,
    /// Initial box height `δ` before halving (default `1/2`).
    pub delta: Option<Q>,
    /// Maximal Poincaré jet order `K`; FIX decisions not reached by then are reported as FIX-up-to(K).
    pub fix_order: u32,
    /// Jet order of separatrices.
    pub separatrix_order: u32,
    /// Surface samples `(angles, radii)`.
    pub samples: (u32, u32),
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { order: 8, budget: 20, epsilon: None, delta: None, fix_order: 8, separatrix_order: 8, samples: (8, 6) }
    }
}

/// Case of the local cycle-locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    /// No cycles accumulate at the singularity.
    #[serde(rename = "i")]
    NoCycles,
    /// A finite non-empty family of limit central surfaces.
    #[serde(rename = "ii")]
    Surfaces,
    /// Case (ii) suggested by FIX verdicts that are only known up to a jet order.
    #[serde(rename = "ii-candidate")]
    Candidate,
    /// No verdict could be certified.
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl Case {
    /// True for the certified cases (i) and (ii).
    pub fn is_determinate(&self) -> bool {
        matches!(self, Case::NoCycles | Case::Surfaces)
    }
}

/// Spectral data.
#[derive(Debug, Clone, Serialize)]
pub struct HopfReport {
    /// Rotation speed `b`.
    pub b: String,
    /// Third eigenvalue `c`.
    pub c: String,
    /// Zero-Hopf or semi-hyperbolic.
    pub case: HopfCase,
}

/// Normal-form summary.
#[derive(Debug, Clone, Serialize)]
pub struct NormalFormReport {
    /// Order `ℓ`.
    pub order: u32,
    /// True when the input is already rotationally symmetric.
    pub exact: bool,
    /// `T(u, v)`.
    pub t: String,
    /// `R(u, v)`.
    pub r: String,
    /// `Z(u, v)`.
    pub z: String,
    /// Isolation of the singularity along the `z`-axis.
    pub isolation: Isolation,
}

/// Certificate of a characteristic singularity `ż = z^t G`, `G(0) ≠ 0`.
#[derive(Debug, Clone, Serialize)]
pub struct AxisCertificate {
    /// Exponent `t`.
    pub t: u32,
    /// `G(0)`.
    pub g0: String,
    /// Sign of `G` on the certified box.
    pub sign: i32,
    /// `r` such that `G` keeps its sign on `[−r, r]² × [0, r]`.
    pub radius: String,
    /// Decimal `r`.
    pub radius_approx: f64,
    /// Lower bound of `|G|` on the box.
    pub margin: f64,
    /// Exact `r`.
    #[serde(skip)]
    pub radius_exact: Q,
}

/// Certificate of a strictly monotone chart coordinate near an element.
#[derive(Debug, Clone, Serialize)]
pub struct MonotoneCertificate {
    /// Monotone coordinate.
    pub coord: MonotoneCoord,
    /// `e` in `A = x^e·U` with `U` a unit (`x` the monotone coordinate).
    pub exponent: u32,
    /// Eigenvalues `(λ_z, λ_ρ)` of the reduced field, when singular.
    pub lambda: Option<[String; 2]>,
    /// Sign of the coordinate's derivative off the divisor.
    pub sign: i32,
    /// `r` such that `U` keeps its sign on the box of half-width `r` (`z ≥ 0` at corners, `ρ ∈ [0, r]`).
    pub radius: String,
    /// Decimal `r`.
    pub radius_approx: f64,
    /// Lower bound of `|U|` on the box.
    pub margin: f64,
    /// Exact `r`.
    #[serde(skip)]
    pub radius_exact: Q,
}

/// One term `c·z^i·ρ^j` of a Poincaré jet.
#[derive(Debug, Clone, Serialize)]
pub struct JetTerm {
    /// Power of `z`.
    pub z: u32,
    /// Power of `ρ`.
    pub rho: u32,
    /// Exact coefficient in `Q[π]`.
    pub coeff: String,
    /// Decimal value.
    pub approx: f64,
}

fn jet_terms(s: &Series<PiPoly>) -> Vec<JetTerm> {
    s.terms()
        .map(|(m, c)| JetTerm { z: m[Z], rho: m[RHO], coeff: c.render(), approx: c.to_f64() })
        .collect()
}

/// FIX / NONFIX verdict.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    /// `NONFIX`, `FIX-exact` or `FIX-up-to`.
    pub tag: String,
    /// `m = ord(Θ − ρ) − 1` (NONFIX).
    pub m: Option<u32>,
    /// Power of `ρ` dividing the monotone displacement.
    pub k: Option<u32>,
    /// Power of `z` dividing it (FIX).
    pub k2: Option<u32>,
    /// `s`.
    pub s: Option<u32>,
    /// Leading coefficient `α`.
    pub alpha: Option<String>,
    /// Decimal `α`.
    pub alpha_approx: Option<f64>,
    /// Order `K` of a FIX-up-to verdict.
    pub up_to: Option<u32>,
}

impl VerdictReport {
    fn new(v: &Verdict) -> Self {
        let mut r =
            VerdictReport { tag: v.tag().into(), m: None, k: None, k2: None, s: None, alpha: None, alpha_approx: None, up_to: None };
        match v {
            Verdict::NonFix { m, k, s, alpha } => {
                r.m = Some(*m);
                r.k = Some(*k);
                r.s = Some(*s);
                r.alpha = Some(alpha.render());
                r.alpha_approx = Some(alpha.to_f64());
            }
            Verdict::FixExact { k1, k2, s, alpha, .. } => {
                r.k = Some(*k1);
                r.k2 = Some(*k2);
                r.s = Some(*s);
                r.alpha = Some(alpha.render());
                r.alpha_approx = Some(alpha.to_f64());
            }
            Verdict::FixUpTo { k } => r.up_to = Some(*k),
        }
        r
    }
}

/// Certified cone `|z − h(ρ)| < Cρ^N, 0 < ρ < δ`.
#[derive(Debug, Clone, Serialize)]
pub struct ConeReport {
    /// `N`.
    pub n: u32,
    /// `C`.
    pub c: String,
    /// `δ`.
    pub delta: String,
    /// Decimal `δ`.
    pub delta_approx: f64,
    /// Monotone coordinate of `P − id`.
    pub coord: MonotoneCoord,
    /// Sign of its leading coefficient.
    pub sign: i32,
    /// Certified `K ≥ |B|`.
    pub k_bound: String,
    /// Decimal `K`.
    pub k_bound_approx: f64,
    /// Tail coefficient.
    pub tail: String,
    /// Decimal tail coefficient.
    pub tail_approx: f64,
}

impl ConeReport {
    fn new(c: &ConeParams) -> Self {
        ConeReport {
            n: c.n,
            c: c.c.to_string(),
            delta: c.delta.to_string(),
            delta_approx: qf(&c.delta),
            coord: c.coord,
            sign: c.sign,
            k_bound: c.k_bound.to_string(),
            k_bound_approx: qf(&c.k_bound),
            tail: c.tail.to_string(),
            tail_approx: qf(&c.tail),
        }
    }
}

/// Certificate of a non-corner cycle.
#[derive(Debug, Clone, Serialize)]
pub struct CycleCertificate {
    /// Planar status of the cycle.
    pub status: LeafStatus,
    /// Poincaré jet order used.
    pub jet_order: u32,
    /// Verdict.
    pub verdict: VerdictReport,
    /// Invariant curve `z = h(ρ)` in the translated chart coordinate.
    pub h: String,
    /// True when `h` is an exact invariant curve.
    pub h_exact: bool,
    /// `z∘P − z`.
    pub displacement_z: Vec<JetTerm>,
    /// `ρ∘P − ρ`.
    pub displacement_rho: Vec<JetTerm>,
    /// Certified cone, when available.
    pub cone: Option<ConeReport>,
    /// Why no cone was certified.
    pub obstruction: Option<String>,
}

/// Payload of an element certificate.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CertificatePayload {
    /// Characteristic singularity.
    Axis(AxisCertificate),
    /// Monotone coordinate (corners, regular points).
    Monotone(MonotoneCertificate),
    /// Non-corner cycle.
    Cycle(Box<CycleCertificate>),
    /// Certification failed.
    Failed {
        /// Reason.
        reason: String,
    },
}

/// Certificate of one element of the resolved tree.
#[derive(Debug, Clone, Serialize)]
pub struct ElementCertificate {
    /// Element label.
    pub element: Label,
    /// Element kind.
    pub kind: ElementKind,
    /// Chart containing the element.
    pub chart: Label,
    /// Location on the divisor line.
    pub omega: String,
    /// Decimal location.
    pub omega_approx: f64,
    /// Payload.
    pub certificate: CertificatePayload,
}

impl ElementCertificate {
    fn new(tree: &BlowupTree, e: usize, certificate: CertificatePayload) -> Self {
        let el = &tree.elements[e];
        ElementCertificate {
            element: el.label.clone(),
            kind: el.kind,
            chart: tree.charts[el.chart].label.clone(),
            omega: el.omega.render(),
            omega_approx: el.omega.to_f64(),
            certificate,
        }
    }

    /// Certified radius of the payload (`δ` for cones), if any.
    pub fn radius(&self) -> Option<f64> {
        match &self.certificate {
            CertificatePayload::Axis(a) => Some(a.radius_approx),
            CertificatePayload::Monotone(m) => Some(m.radius_approx),
            CertificatePayload::Cycle(c) => c.cone.as_ref().map(|k| k.delta_approx),
            CertificatePayload::Failed { .. } => None,
        }
    }
}

/// One monotonicity box `[z_lo, z_hi] × (0, δ]` of a divisor line.
#[derive(Debug, Clone, Serialize)]
pub struct BoxCertificate {
    /// Lower `z`.
    pub z_lo: String,
    /// Upper `z`.
    pub z_hi: String,
    /// Decimal lower `z`.
    pub z_lo_approx: f64,
    /// Decimal upper `z`.
    pub z_hi_approx: f64,
    /// Height `δ`.
    pub delta: String,
    /// Decimal `δ`.
    pub delta_approx: f64,
    /// Monotone coordinate (`z`, or `ρ` on dicritical lines).
    pub coord: MonotoneCoord,
    /// Sign of its derivative.
    pub sign: i32,
    /// Lower bound of the reduced component on the box.
    pub margin: f64,
    /// Number of sub-boxes used by the interval check.
    pub pieces: usize,
    /// Dicritical sub-case: 2 when `z` is monotone as well, 3 when only the drift bound confines `z`.
    pub dicritical_case: Option<u8>,
    /// Case 3: the height satisfies `C·δ² < ε` with `C = sup|A_z| / inf|A_ρ|`.
    pub drift_bound: Option<String>,
}

/// Boxes of one chart.
#[derive(Debug, Clone, Serialize)]
pub struct BoxFamily {
    /// Chart label.
    pub chart: Label,
    /// Part of the divisor line covered.
    pub scan: ScanRegion,
    /// Dicritical divisor.
    pub dicritical: bool,
    /// Margin `ε` around divisor points.
    pub epsilon: String,
    /// Far end `Z` of the line segment `[−Z, Z]` handled by boxes.
    pub z_max: String,
    /// Divisor points (cycles and the corner).
    pub points: Vec<String>,
    /// Boxes.
    pub boxes: Vec<BoxCertificate>,
}

/// A sampled limit central surface.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceReport {
    /// Generating cycle.
    pub cycle: Label,
    /// Chart of the cycle.
    pub chart: Label,
    /// Center of the cycle.
    pub omega: String,
    /// Surface `z = ω + h(ρ)` in the chart.
    pub h: String,
    /// Exact invariant surface.
    pub exact: bool,
    /// Verdict tag.
    pub verdict: String,
    /// False for FIX-up-to candidates.
    pub confirmed: bool,
    /// Sampled chart radius.
    pub radius: f64,
    /// Ambient sample points `(x, y, z)` in the input coordinates.
    pub samples: Vec<[f64; 3]>,
}

/// One cone-opening blow-up.
#[derive(Debug, Clone, Serialize)]
pub struct OpeningStep {
    /// Element blown up.
    pub element: Label,
    /// Cone order before the blow-up.
    pub cone_order: u32,
}

/// The `N` blow-ups opening the cone of one non-corner cycle.
#[derive(Debug, Clone, Serialize)]
pub struct ConeOpening {
    /// Cycle.
    pub cycle: Label,
    /// Cone order `N`.
    pub cone_order: u32,
    /// Blow-ups performed.
    pub steps: Vec<OpeningStep>,
    /// Element containing the opened strict transform.
    pub result: Option<Label>,
    /// Why the opening stopped early.
    pub stopped: Option<String>,
}

/// Jet orders.
#[derive(Debug, Clone, Serialize)]
pub struct OrderReport {
    /// Normal-form order `ℓ`.
    pub ell: u32,
    /// `ℓ_M = max n^{(J)} + l + 1` of the resolved tree.
    pub ell_m: u32,
    /// `ℓ_{M'}` after the cone openings.
    pub ell_m_opened: u32,
    /// `ℓ' = max(ℓ, ℓ_{M'} + 1)`.
    pub ell_prime: u32,
    /// Length of the resolved sequence.
    pub length: u32,
    /// Length after the cone openings.
    pub length_opened: u32,
    /// Poincaré jet order per cycle.
    pub jet_orders: BTreeMap<String, u32>,
    /// `K`.
    pub fix_order: u32,
}

/// Resolution log.
#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    /// Resolution blow-ups with their reasons.
    pub resolution: Vec<ResolutionStep>,
    /// Full blow-up trace of the resolved tree.
    pub blowups: Vec<TraceEntry>,
    /// Why the resolution stopped early.
    pub unresolved: Option<String>,
}

/// The neighbourhood the certificates refer to.
#[derive(Debug, Clone, Serialize)]
pub struct RegionReport {
    /// Smallest certified radius over all certificates and boxes.
    pub radius: f64,
}

/// Classification report (schema `hopf3/1`).
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    /// Schema version.
    pub schema: String,
    /// Case.
    pub case: Case,
    /// One-line summary.
    pub summary: String,
    /// Spectral data.
    pub hopf: Option<HopfReport>,
    /// Normal form.
    pub normal_form: Option<NormalFormReport>,
    /// Limit central surfaces.
    pub surfaces: Vec<SurfaceReport>,
    /// Element certificates.
    pub certificates: Vec<ElementCertificate>,
    /// Monotonicity boxes.
    pub boxes: Vec<BoxFamily>,
    /// Cone openings.
    pub cone_openings: Vec<ConeOpening>,
    /// Jet orders.
    pub orders: Option<OrderReport>,
    /// Certified region.
    pub region: Option<RegionReport>,
    /// Resolution trace.
    pub trace: Option<TraceReport>,
    /// Warnings.
    pub warnings: Vec<String>,
}

impl ClassificationReport {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    fn bare(case: Case, summary: String, hopf: Option<HopfReport>) -> Self {
        ClassificationReport {
            schema: SCHEMA.into(),
            case,
            summary,
            hopf,
            normal_form: None,
            surfaces: Vec::new(),
            certificates: Vec::new(),
            boxes: Vec::new(),
            cone_openings: Vec::new(),
            orders: None,
            region: None,
            trace: None,
            warnings: Vec::new(),
        }
    }
}

/// Map from normal-form coordinates to the input coordinates.
#[derive(Debug, Clone)]
pub struct AmbientMap {
    /// Linear change (columns are the new basis vectors).
    pub change: [[f64; 3]; 3],
    /// Near-identity change `φ_ℓ`, absent when it is the identity.
    pub phi: Option<[Series<Scalar>; 3]>,
}

impl AmbientMap {
    /// The identity.
    pub fn identity() -> Self {
        AmbientMap { change: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], phi: None }
    }

    /// Input coordinates of a normal-form point.
    pub fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        let y = match &self.phi {
            Some(f) => [0, 1, 2].map(|i| f[i].eval_f64(&p, |c| c.to_f64())),
            None => p,
        };
        [0, 1, 2].map(|i| (0..3).map(|j| self.change[i][j] * y[j]).sum())
    }
}

/// Report plus the symbolic objects it was computed from.
#[derive(Debug, Clone)]
pub struct Classification {
    /// The report.
    pub report: ClassificationReport,
    /// Normal form, for zero-Hopf inputs.
    pub normal_form: Option<RotationalNormalForm>,
    /// Resolved tree (before cone openings).
    pub tree: Option<BlowupTree>,
    /// Tree after the cone openings.
    pub opened: Option<BlowupTree>,
    /// Normal-form → input coordinates.
    pub ambient: AmbientMap,
    /// Poincaré data of the non-corner cycles, keyed by element index of `tree`.
    pub cycles: Vec<(usize, CycleData)>,
}

fn qf(x: &Q) -> f64 {
    Scalar::rational(x.clone()).to_f64()
}

fn fine() -> Q {
    q(1, 1 << 62)
}

/// Interval enclosure of a polynomial over a box (one interval per variable).
pub fn enclose_poly(s: &Series<Scalar>, b: &[Interval]) -> Interval {
    let w = fine();
    let mut acc = Interval::point(qi(0));
    for (m, c) in s.terms() {
        let mut t = c.enclose(&w);
        for (i, &e) in m.iter().enumerate() {
            if e > 0 {
                t = t.mul(&b[i].pow(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// Certified sign of `s` on a box, bisecting coordinate `split` at most
/// `depth` times. Returns the sign, a lower bound of `|s|` and the number of
/// sub-boxes used.
pub fn certify_sign(s: &Series<Scalar>, b: &[Interval], split: usize, depth: u32) -> Option<(i32, Q, usize)> {
    let iv = enclose_poly(s, b);
    if let Some(sg) = iv.sign() {
        return Some((sg, iv.mig(), 1));
    }
    if depth == 0 {
        return None;
    }
    let mid = b[split].mid();
    let mut l = b.to_vec();
    l[split] = Interval::new(b[split].lo.clone(), mid.clone());
    let mut r = b.to_vec();
    r[split] = Interval::new(mid, b[split].hi.clone());
    let (s1, m1, p1) = certify_sign(s, &l, split, depth - 1)?;
    let (s2, m2, p2) = certify_sign(s, &r, split, depth - 1)?;
    (s1 == s2).then(|| (s1, if m1 < m2 { m1 } else { m2 }, p1 + p2))
}

const HALVINGS: u32 = 40;

/// Certificate of a characteristic singularity: `ż = z^t G` with `G(0) ≠ 0`
/// rules out cycles near the axis end, since `z > 0` increases or decreases
/// strictly along trajectories.
pub fn certify_characteristic_singularity(tree: &BlowupTree, e: usize) -> Result<ElementCertificate> {
    let el = &tree.elements[e];
    if el.kind != ElementKind::CharacteristicSingularity {
        return Err(CoreError::UnknownElement(format!("{} is not a characteristic singularity", el.label)));
    }
    let ax = tree.charts[el.chart]
        .axis
        .as_ref()
        .ok_or_else(|| CoreError::Internal(format!("element {} does not lie in a point chart", el.label)))?;
    let g0 = ax.g.coeff(&[0, 0, 0]);
    if g0.is_zero() {
        return Err(CoreError::Undetermined(format!("axis pole {}: G(0) = 0, resolve further", el.label)));
    }
    let mut r = qi(1);
    for _ in 0..HALVINGS {
        let b = [Interval::symmetric(r.clone()), Interval::symmetric(r.clone()), Interval::new(qi(0), r.clone())];
        let iv = enclose_poly(&ax.g, &b);
        if iv.sign() == Some(g0.signum()) {
            let cert = AxisCertificate {
                t: ax.t,
                g0: g0.render(),
                sign: g0.signum(),
                radius: r.to_string(),
                radius_approx: qf(&r),
                margin: qf(&iv.mig()),
                radius_exact: r.clone(),
            };
            return Ok(ElementCertificate::new(tree, e, CertificatePayload::Axis(cert)));
        }
        r /= qi(2);
    }
    Err(CoreError::Undetermined(format!("axis pole {}: no radius where G keeps its sign", el.label)))
}

/// `s = x^e·U` with `U(0) ≠ 0` and `e ≤ 1`.
fn unit_part(s: &Series<Scalar>, var: usize) -> Option<(u32, Series<Scalar>)> {
    if !s.coeff(&[0, 0]).is_zero() {
        return Some((0, s.clone()));
    }
    if s.var_order(var)? >= 1 {
        let u = s.div_var_pow(var, 1).ok()?;
        if !u.coeff(&[0, 0]).is_zero() {
            return Some((1, u));
        }
    }
    None
}

/// Monotone coordinate of a reduced planar field `(A_z, A_ρ)` at the origin:
/// one component is `x^e·U` with `e ≤ 1` and `U` a unit, so `x` is strictly
/// monotone along trajectories off the divisor. At singular points `z` is
/// preferred when `λ_z ≠ 0`; at regular points the nonvanishing component is
/// used. The box is `[0, r]²` at corners and `[−r, r] × [0, r]` otherwise.
pub fn monotone_coordinate(p: &Series<Scalar>, qq: &Series<Scalar>, corner: bool) -> Result<MonotoneCertificate> {
    let regular = !p.coeff(&[0, 0]).is_zero() || !qq.coeff(&[0, 0]).is_zero();
    let zopt = unit_part(p, Z);
    let ropt = unit_part(qq, RHO);
    let choice = if regular {
        if !qq.coeff(&[0, 0]).is_zero() {
            ropt.map(|u| (MonotoneCoord::Rho, u))
        } else {
            zopt.map(|u| (MonotoneCoord::Z, u))
        }
    } else {
        match (zopt, ropt) {
            (Some(u), _) => Some((MonotoneCoord::Z, u)),
            (None, Some(u)) => Some((MonotoneCoord::Rho, u)),
            (None, None) => None,
        }
    };
    let (coord, (exponent, u)) =
        choice.ok_or_else(|| CoreError::Internal("neither eigenvalue is nonzero at an adapted simple point".into()))?;
    if !corner && exponent > 0 {
        return Err(CoreError::Internal("singular non-corner point has no monotone coordinate".into()));
    }
    let lambda = (!regular).then(|| {
        let lz = p.coeff(&[1, 0]);
        let lr = qq.coeff(&[0, 1]);
        [lz.render(), lr.render()]
    });
    let sign = u.coeff(&[0, 0]).signum();
    let mut r = qi(1);
    for _ in 0..HALVINGS {
        let zb = if corner { Interval::new(qi(0), r.clone()) } else { Interval::symmetric(r.clone()) };
        let b = [zb, Interval::new(qi(0), r.clone())];
        let iv = enclose_poly(&u, &b);
        if iv.sign() == Some(sign) {
            return Ok(MonotoneCertificate {
                coord,
                exponent,
                lambda,
                sign,
                radius: r.to_string(),
                radius_approx: qf(&r),
                margin: qf(&iv.mig()),
                radius_exact: r.clone(),
            });
        }
        r /= qi(2);
    }
    Err(CoreError::Undetermined("no radius where the monotone unit keeps its sign".into()))
}

fn monotone_certificate(tree: &BlowupTree, e: usize) -> Result<ElementCertificate> {
    let (p, qq, corner) = element_planar(tree, e)?;
    let cert = monotone_coordinate(&p, &qq, corner).map_err(|err| match err {
        CoreError::Internal(m) => CoreError::Internal(format!("element {}: {m}", tree.elements[e].label)),
        CoreError::Undetermined(m) => CoreError::Undetermined(format!("element {}: {m}", tree.elements[e].label)),
        other => other,
    })?;
    Ok(ElementCertificate::new(tree, e, CertificatePayload::Monotone(cert)))
}

/// Certificate of a corner cycle: one of the reduced components is `x·U` (or
/// `U`) with `U` a unit, so the coordinate `x` is strictly monotone off the
/// divisor. `z` is preferred when `λ_z ≠ 0`.
pub fn certify_corner_cycle(tree: &BlowupTree, e: usize) -> Result<ElementCertificate> {
    if tree.elements[e].kind != ElementKind::CornerCycle {
        return Err(CoreError::UnknownElement(format!("{} is not a corner cycle", tree.elements[e].label)));
    }
    monotone_certificate(tree, e)
}

/// Data of a non-corner cycle certificate kept for later stages.
#[derive(Debug, Clone)]
pub struct CycleData {
    /// Poincaré jet.
    pub jet: PoincareJet,
    /// Invariant curve.
    pub gamma: InvariantSurfaceJet,
    /// Verdict.
    pub verdict: Verdict,
    /// Cone, when certified.
    pub cone: Option<ConeParams>,
}

/// Poincaré certificate of a non-corner cycle, escalating the jet order
/// from 4 up to `fix_order` (or the chart's trustworthy order, if lower)
/// until the verdict and its cone are certified.
pub fn certify_noncorner_cycle(tree: &BlowupTree, leaf: &LeafRecord, fix_order: u32) -> Result<(ElementCertificate, CycleData)> {
    let cf = cycle_field(tree, leaf.element)?;
    let top = cf.trust.map_or(fix_order, |t| t.min(fix_order)).max(1);
    let mut n = 4.min(top);
    loop {
        let jet = poincare_jet(&cf, n)?;
        let gamma = invariant_surface_jet(&cf, leaf, n)?;
        let verdict = fix_verdict(&jet, &gamma, &cf, n)?;
        let last = n >= top;
        let cone = match &verdict {
            Verdict::FixUpTo { .. } if !last => {
                n += 1;
                continue;
            }
            Verdict::FixUpTo { .. } => Err(CoreError::Undetermined(format!("Γ ⊂ Fix(P) only known through order {n}"))),
            _ => cone_parameters(&jet, &gamma, &verdict),
        };
        let (cone, obstruction) = match cone {
            Ok(c) => (Some(c), None),
            Err(CoreError::Undetermined(_)) if !last => {
                n += 1;
                continue;
            }
            Err(CoreError::Undetermined(msg)) => (None, Some(msg)),
            Err(e) => return Err(e),
        };
        let [dz, dr] = jet.displacement()?;
        let cert = CycleCertificate {
            status: leaf.status,
            jet_order: n,
            verdict: VerdictReport::new(&verdict),
            h: gamma.h_series::<Scalar>().render(),
            h_exact: gamma.exact,
            displacement_z: jet_terms(&dz),
            displacement_rho: jet_terms(&dr),
            cone: cone.as_ref().map(ConeReport::new),
            obstruction,
        };
        let ec = ElementCertificate::new(tree, leaf.element, CertificatePayload::Cycle(Box::new(cert)));
        return Ok((ec, CycleData { jet, gamma, verdict, cone }));
    }
}

fn root_enclosure(w: &Scalar) -> Interval {
    w.enclose(&q(1, 1 << 40))
}

/// Monotonicity boxes `[a, b] × (0, δ]` covering the divisor line of a
/// cylinder chart away from the `ε`-neighbourhoods of its points, up to
/// `|z| ≤ z_max`.
pub fn build_boxes(tree: &BlowupTree, chart: usize, epsilon: Option<&Q>, delta: Option<&Q>, z_max: &Q) -> Result<BoxFamily> {
    let ch = &tree.charts[chart];
    let scan = match ch.kind {
        ChartKind::Cylinder { scan, .. } => scan,
        ChartKind::Point => return Err(CoreError::Input(format!("chart {} is not a cylinder chart", ch.label))),
    };
    let pd = ch.planar.as_ref().ok_or_else(|| CoreError::Internal("cylinder chart without planar data".into()))?;
    let mut pts: Vec<Scalar> = tree
        .elements
        .iter()
        .filter(|e| e.chart == chart && e.kind == ElementKind::NonCornerCycle)
        .map(|e| e.omega.clone())
        .collect();
    if scan == ScanRegion::HalfLine {
        pts.push(Scalar::zero());
    }
    pts.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()));
    let encl: Vec<Interval> = pts.iter().map(root_enclosure).collect();
    let gaps: Vec<Q> = encl.windows(2).map(|w| &w[1].lo - &w[0].hi).collect();
    let min_gap = gaps.iter().min().cloned();
    let eps = match (epsilon, &min_gap) {
        (Some(e), Some(g)) if e * qi(2) >= *g => {
            return Err(CoreError::Input(format!("ε = {e} is not below half the minimal point gap {g} in chart {}", ch.label)))
        }
        (Some(e), _) if *e <= qi(0) => return Err(CoreError::Input("ε must be positive".into())),
        (Some(e), _) => e.clone(),
        (None, Some(g)) => g / qi(4),
        (None, None) => q(1, 4),
    };
    let mut segs: Vec<(Q, Q)> = Vec::new();
    let far = -z_max.clone();
    if encl.is_empty() {
        segs.push((far, z_max.clone()));
    } else {
        if scan == ScanRegion::FullLine {
            segs.push((far, &encl[0].lo - &eps));
        }
        for w in encl.windows(2) {
            segs.push((&w[0].hi + &eps, &w[1].lo - &eps));
        }
        segs.push((&encl[encl.len() - 1].hi + &eps, z_max.clone()));
    }
    let (poly, other, coord) =
        if pd.dicritical { (&pd.a_rho, &pd.a_z, MonotoneCoord::Rho) } else { (&pd.a_z, &pd.a_rho, MonotoneCoord::Z) };
    let d0 = delta.cloned().unwrap_or_else(|| q(1, 2));
    let mut boxes = Vec::new();
    for (a, b) in segs.into_iter().filter(|(a, b)| a < b) {
        let zb = Interval::new(a.clone(), b.clone());
        let mut d = d0.clone();
        let mut found = None;
        for _ in 0..HALVINGS {
            let bx = [zb.clone(), Interval::new(qi(0), d.clone())];
            if let Some((sign, mig, pieces)) = certify_sign(poly, &bx, Z, 14) {
                if !pd.dicritical {
                    found = Some((d.clone(), sign, mig, pieces, None, None));
                    break;
                }
                if certify_sign(other, &bx, Z, 14).is_some() {
                    found = Some((d.clone(), sign, mig, pieces, Some(2), None));
                    break;
                }
                // Case 3: z drifts by at most C·δ² with C = sup|A_z| / inf|A_ρ|.
                let c = enclose_poly(other, &bx).mag() / &mig;
                if &c * &d * &d < eps {
                    found = Some((d.clone(), sign, mig, pieces, Some(3), Some(c)));
                    break;
                }
            }
            d /= qi(2);
        }
        let (d, sign, mig, pieces, case, c) = found.ok_or_else(|| {
            CoreError::Undetermined(format!("chart {}: no certifiable box height on [{}, {}]", ch.label, qf(&a), qf(&b)))
        })?;
        boxes.push(BoxCertificate {
            z_lo: a.to_string(),
            z_hi: b.to_string(),
            z_lo_approx: qf(&a),
            z_hi_approx: qf(&b),
            delta: d.to_string(),
            delta_approx: qf(&d),
            coord,
            sign,
            margin: qf(&mig),
            pieces,
            dicritical_case: case,
            drift_bound: c.map(|c| c.to_string()),
        });
    }
    Ok(BoxFamily {
        chart: ch.label.clone(),
        scan,
        dicritical: pd.dicritical,
        epsilon: eps.to_string(),
        z_max: z_max.to_string(),
        points: pts.iter().map(|p| p.render()).collect(),
        boxes,
    })
}

/// Blows up a non-corner cycle `n` times along the strict transform of its
/// invariant curve; each blow-up lowers the cone order by one.
pub fn open_cone(tree: &mut BlowupTree, e: usize, h: &UPoly<Scalar>, n: u32) -> ConeOpening {
    let mut out =
        ConeOpening { cycle: tree.elements[e].label.clone(), cone_order: n, steps: Vec::new(), result: None, stopped: None };
    let mut cur = e;
    let mut h = h.clone();
    for k in (1..=n).rev() {
        out.steps.push(OpeningStep { element: tree.elements[cur].label.clone(), cone_order: k });
        let before = tree.elements.len();
        if let Err(err) = tree.blow_up_noncorner_cycle(cur) {
            out.stopped = Some(err.to_string());
            return out;
        }
        // z = ω + ρz': the curve z − ω = h(ρ) becomes z' = h(ρ)/ρ.
        let next_h: Vec<Scalar> = h.coeffs().iter().skip(1).cloned().collect();
        let omega = next_h.first().cloned().unwrap_or_else(Scalar::zero);
        let target = (before..tree.elements.len())
            .find(|&i| tree.elements[i].kind == ElementKind::NonCornerCycle && tree.elements[i].omega == omega);
        let Some(t) = target else {
            out.stopped = Some(format!("strict transform point z' = {} is not a characteristic cycle", omega.render()));
            return out;
        };
        let mut rest = next_h;
        if !rest.is_empty() {
            rest[0] = Scalar::zero();
        }
        h = UPoly::new(rest);
        cur = t;
    }
    out.result = Some(tree.elements[cur].label.clone());
    out
}

/// Runs the full pipeline.
pub fn classify(xi: &PolyField3, opts: &ClassifyOptions) -> Result<Classification> {
    let h = detect_hopf(xi)?;
    let hopf = HopfReport { b: h.b.render(), c: h.c.render(), case: h.case };
    let change = h.change.clone().map(|row| row.map(|v| v.to_f64()));
    if h.case == HopfCase::SemiHyperbolic {
        let summary = format!(
            "semi-hyperbolic singularity (c = {}): at most one limit central surface (a center manifold); not analyzed symbolically",
            h.c.render()
        );
        let mut report = ClassificationReport::bare(Case::Undetermined, summary, Some(hopf));
        report.warnings.push("semi-hyperbolic input: symbolic pipeline skipped".into());
        return Ok(Classification {
            report,
            normal_form: None,
            tree: None,
            opened: None,
            ambient: AmbientMap { change, phi: None },
            cycles: Vec::new(),
        });
    }
    let mut ell = opts.order.max(1);
    let mut rounds = 0;
    loop {
        let nf = takens_normal_form(xi, &h, ell)?;
        let ambient = AmbientMap { change, phi: if nf.exact { None } else { Some(nf.phi.clone()) } };
        let c = classify_normal_form(&nf, opts, hopf.clone(), ambient)?;
        let needs = c.report.orders.as_ref().map(|o| o.ell_prime).unwrap_or(ell);
        if nf.exact || needs <= ell || rounds >= 3 {
            return Ok(c);
        }
        ell = needs;
        rounds += 1;
    }
}

fn classify_normal_form(
    nf: &RotationalNormalForm,
    opts: &ClassifyOptions,
    hopf: HopfReport,
    ambient: AmbientMap,
) -> Result<Classification> {
    let ell = nf.order;
    let isolation = isolated_singularity_check(nf, ell);
    let nf_report = NormalFormReport {
        order: ell,
        exact: nf.exact,
        t: nf.t.render(),
        r: nf.r.render(),
        z: nf.z.render(),
        isolation: isolation.clone(),
    };
    let finish = |report: ClassificationReport, tree, opened, cycles| Classification {
        report,
        normal_form: Some(nf.clone()),
        tree,
        opened,
        ambient: ambient.clone(),
        cycles,
    };
    match isolation {
        Isolation::Isolated { .. } => {}
        Isolation::AxisOfSingularities => {
            let mut r = ClassificationReport::bare(
                Case::Undetermined,
                "the z-axis consists of singular points; the singularity is not isolated".into(),
                Some(hopf),
            );
            r.normal_form = Some(nf_report);
            return Ok(finish(r, None, None, Vec::new()));
        }
        Isolation::Undetermined { k } => {
            let mut r = ClassificationReport::bare(
                Case::Undetermined,
                format!("Z(0, v) vanishes through order {k}; isolation along the z-axis undecided"),
                Some(hopf),
            );
            r.normal_form = Some(nf_report);
            return Ok(finish(r, None, None, Vec::new()));
        }
    }
    let field = nf.symmetric_field()?;
    let trust = if nf.exact { None } else { Some(ell) };
    let tree = BlowupTree::blow_up_origin(&field, trust)?;
    let res = adapted_resolution(tree, ResolutionOptions { budget: opts.budget, separatrix_order: opts.separatrix_order })?;
    let trace = TraceReport { resolution: res.steps.clone(), blowups: res.tree.trace.clone(), unresolved: res.unresolved.clone() };
    let mut report = ClassificationReport::bare(Case::Undetermined, String::new(), Some(hopf));
    report.normal_form = Some(nf_report);
    report.trace = Some(trace);
    if let Some(msg) = &res.unresolved {
        report.summary = format!("adapted resolution incomplete: {msg}");
        return Ok(finish(report, Some(res.tree), None, Vec::new()));
    }
    let tree = res.tree;
    let mut warnings = Vec::new();

    // Per-element certificates, computed concurrently and merged in element order.
    let results: Vec<Result<(ElementCertificate, Option<CycleData>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = res
            .leaves
            .iter()
            .map(|leaf| {
                let tree = &tree;
                s.spawn(move || -> Result<(ElementCertificate, Option<CycleData>)> {
                    match leaf.kind {
                        ElementKind::CharacteristicSingularity => Ok((certify_characteristic_singularity(tree, leaf.element)?, None)),
                        ElementKind::CornerCycle => Ok((monotone_certificate(tree, leaf.element)?, None)),
                        ElementKind::NonCornerCycle if leaf.status == LeafStatus::RegularAdapted => {
                            Ok((monotone_certificate(tree, leaf.element)?, None))
                        }
                        ElementKind::NonCornerCycle => {
                            let (c, d) = certify_noncorner_cycle(tree, leaf, opts.fix_order)?;
                            Ok((c, Some(d)))
                        }
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("certificate worker panicked")).collect()
    });
    let mut certs = Vec::new();
    let mut cycles: Vec<(usize, CycleData)> = Vec::new();
    let mut failed = false;
    for (leaf, r) in res.leaves.iter().zip(results) {
        match r {
            Ok((c, d)) => {
                if let Some(d) = d {
                    cycles.push((leaf.element, d));
                }
                certs.push(c);
            }
            Err(err @ (CoreError::Undetermined(_) | CoreError::BudgetExhausted(_))) => {
                failed = true;
                warnings.push(format!("element {}: {err}", leaf.label));
                certs.push(ElementCertificate::new(&tree, leaf.element, CertificatePayload::Failed { reason: err.to_string() }));
            }
            Err(err) => return Err(err),
        }
    }

    // Boxes on every scanned divisor line.
    // The far ends of the divisor lines are covered by the axis and corner neighbourhoods.
    let end_radius = certs
        .iter()
        .filter_map(|c| match &c.certificate {
            CertificatePayload::Axis(a) => Some(a.radius_exact.clone()),
            CertificatePayload::Monotone(m) if c.kind == ElementKind::CornerCycle => Some(m.radius_exact.clone()),
            _ => None,
        })
        .min()
        .unwrap_or_else(|| qi(1));
    let z_max = {
        let far = qi(1) / end_radius;
        let cap = qi(1 << 10);
        if far > cap {
            cap
        } else {
            far
        }
    };
    let mut boxes = Vec::new();
    for (i, ch) in tree.charts.iter().enumerate() {
        if !matches!(ch.kind, ChartKind::Cylinder { scan: ScanRegion::FullLine | ScanRegion::HalfLine, .. }) {
            continue;
        }
        match build_boxes(&tree, i, opts.epsilon.as_ref(), opts.delta.as_ref(), &z_max) {
            Ok(b) => boxes.push(b),
            Err(CoreError::Undetermined(msg)) => {
                failed = true;
                warnings.push(msg);
            }
            Err(e) => return Err(e),
        }
    }

    // Cone openings along every certified non-corner cycle.
    let mut opened = tree.clone();
    let mut openings = Vec::new();
    for (e, d) in &cycles {
        if let Some(c) = &d.cone {
            let label = tree.elements[*e].label.clone();
            let idx = opened.find(&label).expect("same tree");
            let o = open_cone(&mut opened, idx, &d.gamma.h, c.n);
            if let Some(why) = &o.stopped {
                warnings.push(format!("cone opening of {label} stopped: {why}"));
            }
            openings.push(o);
        }
    }

    // Orders.
    let mut jet_orders = BTreeMap::new();
    for (e, d) in &cycles {
        jet_orders.insert(tree.elements[*e].label.to_string(), d.jet.order);
    }
    let kmax = jet_orders.values().copied().max().unwrap_or(0);
    let b0 = tree.jet_budget_check(kmax);
    let b1 = opened.jet_budget_check(kmax);
    let ell_prime = ell.max(b1.ell_m + 1);
    if !nf.exact && ell_prime > ell {
        warnings.push(format!("normal-form order ℓ = {ell} is below ℓ' = {ell_prime}"));
    }
    let orders = OrderReport {
        ell,
        ell_m: b0.ell_m,
        ell_m_opened: b1.ell_m,
        ell_prime,
        length: b0.length,
        length_opened: b1.length,
        jet_orders,
        fix_order: opts.fix_order,
    };

    // Surfaces.
    let mut surfaces = Vec::new();
    let mut candidates = 0;
    for (e, d) in &cycles {
        let confirmed = match &d.verdict {
            Verdict::FixExact { .. } => true,
            Verdict::FixUpTo { k } => {
                candidates += 1;
                warnings.push(format!("cycle {}: FIX-up-to({k}); surface unconfirmed", tree.elements[*e].label));
                false
            }
            Verdict::NonFix { .. } => continue,
        };
        let radius = d.cone.as_ref().map(|c| qf(&c.delta)).unwrap_or(0.25);
        surfaces.push(sample_surface(&tree, *e, &d.gamma, d.verdict.tag(), confirmed, radius, opts.samples, &ambient));
    }
    let confirmed = surfaces.iter().filter(|s| s.confirmed).count();
    let fixes_without_cone = cycles.iter().any(|(_, d)| d.cone.is_none() && !matches!(d.verdict, Verdict::FixUpTo { .. }));
    if fixes_without_cone {
        failed = true;
    }
    let (case, summary) = if failed {
        (Case::Undetermined, "some certificates could not be established".to_string())
    } else if candidates > 0 {
        (
            Case::Candidate,
            format!("case (ii) candidate — unconfirmed: {confirmed} confirmed and {candidates} FIX-up-to surfaces"),
        )
    } else if confirmed > 0 {
        (Case::Surfaces, format!("case (ii): {confirmed} limit central surface(s)"))
    } else {
        (Case::NoCycles, "case (i): no cycles accumulate at the singularity".to_string())
    };

    let radius = certs
        .iter()
        .filter_map(|c| c.radius())
        .chain(boxes.iter().flat_map(|b| b.boxes.iter().map(|x| x.delta_approx)))
        .fold(f64::INFINITY, f64::min);
    report.case = case;
    report.summary = summary;
    report.surfaces = surfaces;
    report.certificates = certs;
    report.boxes = boxes;
    report.cone_openings = openings;
    report.orders = Some(orders);
    report.region = radius.is_finite().then_some(RegionReport { radius });
    report.warnings = warnings;
    Ok(finish(report, Some(tree), Some(opened), cycles))
}

#[allow(clippy::too_many_arguments)]
fn sample_surface(
    tree: &BlowupTree,
    e: usize,
    gamma: &InvariantSurfaceJet,
    tag: &str,
    confirmed: bool,
    radius: f64,
    samples: (u32, u32),
    ambient: &AmbientMap,
) -> SurfaceReport {
    let el = &tree.elements[e];
    let w = el.omega.to_f64();
    let (na, nr) = (samples.0.max(1), samples.1.max(1));
    let mut pts = Vec::new();
    for i in 1..=nr {
        let rho = radius * i as f64 / nr as f64;
        let z = w + gamma.eval_f64(rho);
        for j in 0..na {
            let th = std::f64::consts::TAU * j as f64 / na as f64;
            pts.push(ambient.apply(tree.chart_to_ambient(el.chart, [th, z, rho])));
        }
    }
    SurfaceReport {
        cycle: el.label.clone(),
        chart: tree.charts[el.chart].label.clone(),
        omega: el.omega.render(),
        h: gamma.h_series::<Scalar>().render(),
        exact: gamma.exact,
        verdict: tag.into(),
        confirmed,
        radius,
        samples: pts,
    }
}
