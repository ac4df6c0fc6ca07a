//! Admissible blow-ups in explicit charts.
//!
//! The first blow-up `σ₀` of the origin is described by the cylinder chart
//! `C₀` (`x = ρ cos θ, y = ρ sin θ, z = ρz`) and the two point charts
//! `C_{±∞}` (`x = xz, y = yz, z = ±z`, `z ≥ 0`). Further blow-ups are
//! centered at characteristic elements:
//!
//! * a characteristic singularity (origin of a point chart) gives a corner
//!   cylinder chart and a new point chart;
//! * a non-corner characteristic cycle `{z = ω, ρ = 0}` gives the chart
//!   `z = ω + ρz'` and the two corner charts `z = ω ± z', ρ = ρ'z'`;
//! * a corner cycle `{z = ρ = 0}` gives the corner charts `z = ρz'` and
//!   `ρ = ρ'z'`.
//!
//! Chart fields are exact polynomials: cylinder charts carry the
//! coefficients `B_θ, B_z, B_ρ` (trigonometric polynomials in `θ`) of
//! `B_θ∂θ + B_z∂z + B_ρ∂ρ`, point charts carry three polynomial components.
//! The tree keeps every chart it ever produced together with the step that
//! produced it, so any other ambient field can be pulled back along the same
//! path.

use crate::error::{CoreError, Result};
use crate::field::{xyz, PolyField3};
use hopf3_algebra::roots::{cmp_real, real_roots};
use hopf3_algebra::{var_list, Domain, Ring, Scalar, Series, TrigPoly, UPoly, VarList};
use serde::Serialize;
use std::fmt;
use std::sync::OnceLock;

/// Index of the `z` coordinate in cylinder-chart series.
pub const Z: usize = 0;
/// Index of the `ρ` coordinate in cylinder-chart series.
pub const RHO: usize = 1;

/// The cylinder-chart variables `(z, ρ)`.
pub fn cyl() -> VarList {
    static V: OnceLock<VarList> = OnceLock::new();
    V.get_or_init(|| var_list(&[("z", Domain::Real), ("rho", Domain::NonNegative)])).clone()
}

/// One entry of an index tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Idx {
    /// `0`.
    Zero,
    /// `∞`.
    Inf,
    /// `−∞`.
    NegInf,
    /// A numbered characteristic cycle.
    N(u32),
}

impl fmt::Display for Idx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Idx::Zero => write!(f, "0"),
            Idx::Inf => write!(f, "inf"),
            Idx::NegInf => write!(f, "-inf"),
            Idx::N(n) => write!(f, "{n}"),
        }
    }
}

/// Index tuple of a chart or characteristic element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Label(pub Vec<Idx>);

impl Label {
    /// The label extended by one index.
    pub fn child(&self, i: Idx) -> Label {
        let mut v = self.0.clone();
        v.push(i);
        Label(v)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Which part of the divisor line `{ρ = 0}` a cylinder chart is responsible for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanRegion {
    /// The whole line `z ∈ R`.
    FullLine,
    /// The half-line `z ≥ 0`; `z = 0` is a corner.
    HalfLine,
    /// Only the corner point `z = ρ = 0`.
    CornerOnly,
}

/// Chart kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ChartKind {
    /// Coordinates `(x, y, z)`, `z ≥ 0`, divisor `{z = 0}`.
    Point,
    /// Coordinates `(θ, z, ρ)`, divisor `{ρ z^ε = 0}`.
    Cylinder {
        /// `ε = 1`: `z ≥ 0` and `{z = 0}` is a divisor component.
        corner: bool,
        /// Divisor part analyzed in this chart.
        scan: ScanRegion,
    },
}

/// Which of the charts of a cycle blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleSub {
    /// `z = ω + ρ'z', ρ = ρ'`.
    Zero,
    /// `z = ω + z', ρ = ρ'z'`.
    Inf,
    /// `z = ω − z', ρ = ρ'z'`.
    NegInf,
}

/// The substitution producing a chart from its parent.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// `x = ρ cos θ, y = ρ sin θ, z = ρz` applied to the parent's `(x, y, z)`.
    Cylinder,
    /// `x = xz, y = yz, z = sign·z` applied to the parent's `(x, y, z)`.
    Point {
        /// `±1`.
        sign: i8,
    },
    /// Blow-up of the circle `{z = ω, ρ = 0}` of a cylinder chart.
    Cycle {
        /// Center.
        omega: Scalar,
        /// Which chart.
        sub: CycleSub,
    },
}

impl Step {
    fn describe(&self) -> String {
        match self {
            Step::Cylinder => "x = rho*cos(theta), y = rho*sin(theta), z = rho*z'".into(),
            Step::Point { sign } => {
                if *sign > 0 {
                    "x = x'*z', y = y'*z', z = z'".into()
                } else {
                    "x = x'*z', y = y'*z', z = -z'".into()
                }
            }
            Step::Cycle { omega, sub } => {
                let w = omega.render();
                match sub {
                    CycleSub::Zero => format!("z = {w} + rho'*z', rho = rho'"),
                    CycleSub::Inf => format!("z = {w} + z', rho = rho'*z'"),
                    CycleSub::NegInf => format!("z = {w} - z', rho = rho'*z'"),
                }
            }
        }
    }
}

/// `B_θ∂θ + B_z∂z + B_ρ∂ρ` over `(z, ρ)` with trigonometric coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CylField {
    /// `B_θ`.
    pub b_theta: Series<TrigPoly>,
    /// `B_z`.
    pub b_z: Series<TrigPoly>,
    /// `B_ρ`.
    pub b_rho: Series<TrigPoly>,
}

/// A chart field.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartField {
    /// Point-chart components `(ẋ, ẏ, ż)`.
    Point([Series<Scalar>; 3]),
    /// Cylinder-chart coefficients.
    Cylinder(CylField),
}

impl ChartField {
    /// The cylinder coefficients, if any.
    pub fn cylinder(&self) -> Option<&CylField> {
        match self {
            ChartField::Cylinder(c) => Some(c),
            ChartField::Point(_) => None,
        }
    }

    /// The point-chart components, if any.
    pub fn point(&self) -> Option<&[Series<Scalar>; 3]> {
        match self {
            ChartField::Point(p) => Some(p),
            ChartField::Cylinder(_) => None,
        }
    }

    /// Floating-point evaluation: `(ẋ, ẏ, ż)` at `(x, y, z)` in point charts,
    /// `(θ̇, ż, ρ̇)` at `(θ, z, ρ)` in cylinder charts.
    pub fn eval_f64(&self, p: [f64; 3]) -> [f64; 3] {
        match self {
            ChartField::Point(c) => {
                let e = |s: &Series<Scalar>| s.eval_f64(&p, |v| v.to_f64());
                [e(&c[0]), e(&c[1]), e(&c[2])]
            }
            ChartField::Cylinder(c) => {
                let th = p[0];
                let e = |s: &Series<TrigPoly>| s.eval_f64(&p[1..], |v| v.eval_f64(th));
                [e(&c.b_theta), e(&c.b_z), e(&c.b_rho)]
            }
        }
    }
}

fn trig_series(s: &Series<Scalar>) -> Series<TrigPoly> {
    s.map_ring(|c| TrigPoly::constant(c.clone()))
}

/// Pullback of `(ẋ, ẏ, ż)` by `x = ρ cos θ, y = ρ sin θ, z = ρz`:
/// `B_ρ = cos θ ẋ + sin θ ẏ`, `B_θ = (cos θ ẏ − sin θ ẋ)/ρ`, `B_z = (ż − zB_ρ)/ρ`.
pub fn pull_to_cylinder(comps: &[Series<Scalar>; 3]) -> Result<CylField> {
    let c = cyl();
    let cos = Series::monomial(&c, &[0, 1], TrigPoly::cos_theta());
    let sin = Series::monomial(&c, &[0, 1], TrigPoly::sin_theta());
    let zr = Series::monomial(&c, &[1, 1], TrigPoly::one());
    let subs = [cos, sin, zr];
    let p: Vec<Series<TrigPoly>> =
        comps.iter().map(|s| trig_series(s).substitute(&c, &subs, None)).collect::<std::result::Result<_, _>>()?;
    let ct = Series::constant(&c, TrigPoly::cos_theta());
    let st = Series::constant(&c, TrigPoly::sin_theta());
    let b_rho = ct.mul(&p[0])?.add(&st.mul(&p[1])?)?;
    let b_theta = ct.mul(&p[1])?.sub(&st.mul(&p[0])?)?.div_var_pow(RHO, 1)?;
    let zv = Series::var(&c, Z);
    let b_z = p[2].sub(&zv.mul(&b_rho)?)?.div_var_pow(RHO, 1)?;
    Ok(CylField { b_theta, b_z, b_rho })
}

/// Pullback of `(ẋ, ẏ, ż)` by `x = xz, y = yz, z = sign·z`:
/// `ż' = sign·ż`, `ẋ' = (ẋ − x'ż')/z'`, `ẏ' = (ẏ − y'ż')/z'`.
pub fn pull_to_point(comps: &[Series<Scalar>; 3], sign: i8) -> Result<[Series<Scalar>; 3]> {
    let v = xyz();
    let s = Scalar::int(sign as i64);
    let subs = [
        Series::monomial(&v, &[1, 0, 1], Scalar::one()),
        Series::monomial(&v, &[0, 1, 1], Scalar::one()),
        Series::monomial(&v, &[0, 0, 1], s.clone()),
    ];
    let p: Vec<Series<Scalar>> =
        comps.iter().map(|c| c.substitute(&v, &subs, None)).collect::<std::result::Result<_, _>>()?;
    let zdot = p[2].scale(&s);
    let xv = Series::<Scalar>::var(&v, 0);
    let yv = Series::<Scalar>::var(&v, 1);
    let xdot = p[0].sub(&xv.mul(&zdot)?)?.div_var_pow(2, 1)?;
    let ydot = p[1].sub(&yv.mul(&zdot)?)?.div_var_pow(2, 1)?;
    Ok([xdot, ydot, zdot])
}

/// Pullback of a cylinder field by one of the charts of the blow-up of `{z = ω, ρ = 0}`.
pub fn pull_cycle(f: &CylField, omega: &Scalar, sub: CycleSub) -> Result<CylField> {
    let c = cyl();
    let z = Series::<TrigPoly>::var(&c, Z);
    let r = Series::<TrigPoly>::var(&c, RHO);
    let zr = Series::monomial(&c, &[1, 1], TrigPoly::one());
    let tr = |s: &Series<TrigPoly>| -> Result<Series<TrigPoly>> { Ok(s.translate(Z, omega)?) };
    let (bz, brho) = (tr(&f.b_z)?, tr(&f.b_rho)?);
    let bth = tr(&f.b_theta)?;
    match sub {
        CycleSub::Zero => {
            // z = ρ'z', ρ = ρ'  (after translation)
            let subs = [zr, r.clone()];
            let bz = bz.substitute(&c, &subs, None)?;
            let brho = brho.substitute(&c, &subs, None)?;
            let b_theta = bth.substitute(&c, &subs, None)?;
            let b_z = bz.sub(&z.mul(&brho)?)?.div_var_pow(RHO, 1).map_err(|_| {
                CoreError::Internal("blow-up center is not a singular circle of the chart field".into())
            })?;
            Ok(CylField { b_theta, b_z, b_rho: brho })
        }
        CycleSub::Inf | CycleSub::NegInf => {
            let neg = sub == CycleSub::NegInf;
            let zs = if neg { z.neg() } else { z.clone() };
            let subs = [zs, zr];
            let bz = bz.substitute(&c, &subs, None)?;
            let brho = brho.substitute(&c, &subs, None)?;
            let b_theta = bth.substitute(&c, &subs, None)?;
            let b_z = if neg { bz.neg() } else { bz.clone() };
            // ρ' = ρ/z': ρ̇' = (ρ̇ − ρ'ż')/z'
            let b_rho = brho.sub(&r.mul(&b_z)?)?.div_var_pow(Z, 1).map_err(|_| {
                CoreError::Internal("blow-up center is not a singular circle of the chart field".into())
            })?;
            Ok(CylField { b_theta, b_z, b_rho })
        }
    }
}

/// Applies a step to a parent chart field.
pub fn pull_step(parent: &ChartField, step: &Step) -> Result<ChartField> {
    match (parent, step) {
        (ChartField::Point(p), Step::Cylinder) => Ok(ChartField::Cylinder(pull_to_cylinder(p)?)),
        (ChartField::Point(p), Step::Point { sign }) => Ok(ChartField::Point(pull_to_point(p, *sign)?)),
        (ChartField::Cylinder(c), Step::Cycle { omega, sub }) => Ok(ChartField::Cylinder(pull_cycle(c, omega, *sub)?)),
        _ => Err(CoreError::Internal("step does not apply to the parent chart kind".into())),
    }
}

/// Maps chart coordinates to parent coordinates in floating point.
fn step_to_parent(step: &Step, p: [f64; 3]) -> [f64; 3] {
    match step {
        // cylinder coordinates are (θ, z, ρ); point coordinates (x, y, z)
        Step::Cylinder => {
            let (th, z, r) = (p[0], p[1], p[2]);
            [r * th.cos(), r * th.sin(), r * z]
        }
        Step::Point { sign } => [p[0] * p[2], p[1] * p[2], *sign as f64 * p[2]],
        Step::Cycle { omega, sub } => {
            let w = omega.to_f64();
            let (th, z, r) = (p[0], p[1], p[2]);
            match sub {
                CycleSub::Zero => [th, w + r * z, r],
                CycleSub::Inf => [th, w + z, r * z],
                CycleSub::NegInf => [th, w - z, r * z],
            }
        }
    }
}

/// Reduced planar data of a θ-independent cylinder chart:
/// `(B_z, B_ρ) = ρ^{n₁} z^{n₂} (A_z, A_ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarData {
    /// Power of `ρ`.
    pub n1: u32,
    /// Power of `z` (corner charts only).
    pub n2: u32,
    /// Reduced z-component.
    pub a_z: Series<Scalar>,
    /// Reduced ρ-component.
    pub a_rho: Series<Scalar>,
    /// `B_θ` (θ-independent).
    pub b_theta: Series<Scalar>,
    /// `A_ρ(z, 0) ≢ 0`.
    pub dicritical: bool,
}

fn constant_series(s: &Series<TrigPoly>) -> Option<Series<Scalar>> {
    let mut terms = Vec::new();
    for (m, c) in s.terms() {
        terms.push((m.clone(), c.as_constant()?));
    }
    Some(Series::from_terms(s.vars(), terms, s.trunc().clone()))
}

/// Computes the reduced planar data of a cylinder field.
pub fn planar_data(f: &CylField, corner: bool) -> Result<PlanarData> {
    let (bz, br, bt) = match (constant_series(&f.b_z), constant_series(&f.b_rho), constant_series(&f.b_theta)) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(CoreError::Internal("planar reduction needs a rotationally symmetric chart field".into())),
    };
    let order = |x: usize| -> Option<u32> {
        match (bz.var_order(x), br.var_order(x)) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a),
            (Some(a), Some(b)) => Some(a.min(b)),
        }
    };
    let n1 = order(RHO).ok_or_else(|| {
        CoreError::Undetermined("both planar components vanish identically in the chart".into())
    })?;
    let n2 = if corner { order(Z).unwrap_or(0) } else { 0 };
    let a_z = bz.div_var_pow(RHO, n1)?.div_var_pow(Z, n2)?;
    let a_rho = br.div_var_pow(RHO, n1)?.div_var_pow(Z, n2)?;
    let dicritical = !a_rho.at_zero(RHO).is_empty();
    Ok(PlanarData { n1, n2, a_z, a_rho, b_theta: bt, dicritical })
}

/// Restriction to `ρ = 0` as a univariate polynomial in `z`.
pub fn on_divisor(s: &Series<Scalar>) -> UPoly<Scalar> {
    let deg = s.degree_in(Z).unwrap_or(0) as usize;
    let mut c = vec![Scalar::zero(); deg + 1];
    for (m, v) in s.terms() {
        if m[RHO] == 0 {
            c[m[Z] as usize] = v.clone();
        }
    }
    UPoly::new(c)
}

/// `ż = z^t G` in a point chart.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisData {
    /// Power of `z`.
    pub t: u32,
    /// Cofactor.
    pub g: Series<Scalar>,
}

/// Factorizes the `z`-component of a point-chart field.
pub fn axis_data(comps: &[Series<Scalar>; 3]) -> Result<AxisData> {
    let t = comps[2]
        .var_order(2)
        .ok_or_else(|| CoreError::Undetermined("the z-component vanishes identically in a point chart".into()))?;
    Ok(AxisData { t, g: comps[2].div_var_pow(2, t)? })
}

/// Kind of a characteristic element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    /// Origin of a point chart.
    CharacteristicSingularity,
    /// Corner `{z = ρ = 0}` of a corner chart.
    CornerCycle,
    /// `{z = ω, ρ = 0}` off the corners.
    NonCornerCycle,
}

/// A characteristic element of the tree.
#[derive(Debug, Clone)]
pub struct Element {
    /// Index tuple.
    pub label: Label,
    /// Kind.
    pub kind: ElementKind,
    /// Chart in which the element is a coordinate point.
    pub chart: usize,
    /// `z`-coordinate of the element in its chart (0 for corners and singularities).
    pub omega: Scalar,
    /// Charts produced by blowing up the element (empty while it belongs to `D`).
    pub children: Vec<usize>,
}

impl Element {
    /// True while the element has not been blown up.
    pub fn active(&self) -> bool {
        self.children.is_empty()
    }
}

/// A chart of the tree.
#[derive(Debug, Clone)]
pub struct Chart {
    /// Index tuple.
    pub label: Label,
    /// Parent chart (`None` for the charts of `σ₀`).
    pub parent: Option<usize>,
    /// Substitution from the parent (or from the ambient space).
    pub step: Step,
    /// Number of blow-ups after `σ₀` on the path to this chart.
    pub depth: u32,
    /// Kind.
    pub kind: ChartKind,
    /// Pulled-back field.
    pub field: ChartField,
    /// Reduced planar data (cylinder charts).
    pub planar: Option<PlanarData>,
    /// Axis factorization (point charts).
    pub axis: Option<AxisData>,
    /// False once the chart's center has been blown up (point charts only).
    pub in_atlas: bool,
}

impl Chart {
    /// True for corner cylinder charts.
    pub fn is_corner(&self) -> bool {
        matches!(self.kind, ChartKind::Cylinder { corner: true, .. })
    }

    /// The divisor exponent `n^{(J)}`: `max(n₁, n₂)` in cylinder charts, `t` in point charts.
    pub fn divisor_exponent(&self) -> u32 {
        match (&self.planar, &self.axis) {
            (Some(p), _) => p.n1.max(p.n2),
            (_, Some(a)) => a.t,
            _ => 0,
        }
    }
}

/// One entry of the blow-up trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    /// Center of the blow-up.
    pub center: Label,
    /// Kind of the center.
    pub kind: ElementKind,
    /// Labels of the charts created.
    pub charts: Vec<Label>,
    /// Labels of the new characteristic elements.
    pub new_elements: Vec<Label>,
}

/// The bookkeeping of an admissible sequence of blow-ups.
#[derive(Debug, Clone)]
pub struct BlowupTree {
    /// The ambient (rotationally symmetric) field being resolved.
    pub source: PolyField3,
    /// `None` when `source` is the exact formal normal form; otherwise the
    /// order `ℓ` through which it agrees with it.
    pub trust: Option<u32>,
    /// All charts ever created.
    pub charts: Vec<Chart>,
    /// All characteristic elements ever created.
    pub elements: Vec<Element>,
    /// Ordered blow-up trace.
    pub trace: Vec<TraceEntry>,
}

/// Jet-budget summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JetBudget {
    /// Maximal divisor exponent over the atlas.
    pub max_n: u32,
    /// Length of the sequence (blow-ups after `σ₀`).
    pub length: u32,
    /// `ℓ_M = max n + l + 1`.
    pub ell_m: u32,
    /// Requested chart order `k`.
    pub k: u32,
    /// Minimal working order `ℓ_M + k`.
    pub ell_min: u32,
}

impl BlowupTree {
    /// Blows up the origin: charts `C₀, C_∞, C_{−∞}` and the elements
    /// `γ_{−∞}, γ₁, …, γ_m, γ_∞`.
    pub fn blow_up_origin(source: &PolyField3, trust: Option<u32>) -> Result<BlowupTree> {
        let mut t = BlowupTree { source: source.clone(), trust, charts: Vec::new(), elements: Vec::new(), trace: Vec::new() };
        let amb = ChartField::Point(source.comps().clone());
        let c0 = t.add_chart(
            Label(vec![Idx::Zero]),
            None,
            Step::Cylinder,
            ChartKind::Cylinder { corner: false, scan: ScanRegion::FullLine },
            &amb,
        )?;
        let cp = t.add_chart(Label(vec![Idx::Inf]), None, Step::Point { sign: 1 }, ChartKind::Point, &amb)?;
        let cm = t.add_chart(Label(vec![Idx::NegInf]), None, Step::Point { sign: -1 }, ChartKind::Point, &amb)?;
        let mut new = Vec::new();
        new.push(t.add_element(Label(vec![Idx::NegInf]), ElementKind::CharacteristicSingularity, cm, Scalar::zero()));
        new.extend(t.scan_cycles(c0, &Label::default())?);
        new.push(t.add_element(Label(vec![Idx::Inf]), ElementKind::CharacteristicSingularity, cp, Scalar::zero()));
        let _ = new;
        Ok(t)
    }

    fn add_chart(&mut self, label: Label, parent: Option<usize>, step: Step, kind: ChartKind, pf: &ChartField) -> Result<usize> {
        let field = pull_step(pf, &step)?;
        let depth = parent.map(|p| self.charts[p].depth + 1).unwrap_or(0);
        let (planar, axis) = match (&kind, &field) {
            (ChartKind::Cylinder { corner, .. }, ChartField::Cylinder(c)) => (Some(planar_data(c, *corner)?), None),
            (ChartKind::Point, ChartField::Point(p)) => (None, Some(axis_data(p)?)),
            _ => return Err(CoreError::Internal("chart kind and field disagree".into())),
        };
        if let Some(p) = &planar {
            if p.n1 == 0 {
                return Err(CoreError::Internal(format!("chart {label}: divisor {{rho = 0}} is not singular for the lifted field")));
            }
        }
        self.charts.push(Chart { label, parent, step, depth, kind, field, planar, axis, in_atlas: true });
        Ok(self.charts.len() - 1)
    }

    fn add_element(&mut self, label: Label, kind: ElementKind, chart: usize, omega: Scalar) -> usize {
        self.elements.push(Element { label, kind, chart, omega, children: Vec::new() });
        self.elements.len() - 1
    }

    /// Real points of the adapted singular locus on the divisor line of a chart.
    fn divisor_points(&self, chart: usize) -> Result<Vec<Scalar>> {
        let ch = &self.charts[chart];
        let scan = match ch.kind {
            ChartKind::Cylinder { scan, .. } => scan,
            ChartKind::Point => return Ok(Vec::new()),
        };
        if scan == ScanRegion::CornerOnly {
            return Ok(Vec::new());
        }
        let p = ch.planar.as_ref().expect("cylinder planar data");
        let poly = if p.dicritical { on_divisor(&p.a_rho) } else { on_divisor(&p.a_z) };
        if poly.is_zero() {
            return Err(CoreError::Internal(format!("chart {}: reduced field vanishes on the divisor", ch.label)));
        }
        let mut roots = real_roots(&poly)?;
        if scan == ScanRegion::HalfLine {
            roots.retain(|r| r.signum() > 0);
        }
        roots.sort_by(cmp_real);
        Ok(roots)
    }

    fn scan_cycles(&mut self, chart: usize, prefix: &Label) -> Result<Vec<usize>> {
        let roots = self.divisor_points(chart)?;
        let mut out = Vec::new();
        for (i, w) in roots.into_iter().enumerate() {
            out.push(self.add_element(prefix.child(Idx::N(i as u32 + 1)), ElementKind::NonCornerCycle, chart, w));
        }
        Ok(out)
    }

    fn record(&mut self, center: usize, charts: &[usize], new_elements: &[usize]) {
        let e = &self.elements[center];
        self.trace.push(TraceEntry {
            center: e.label.clone(),
            kind: e.kind,
            charts: charts.iter().map(|&c| self.charts[c].label.clone()).collect(),
            new_elements: new_elements.iter().map(|&i| self.elements[i].label.clone()).collect(),
        });
        self.elements[center].children = charts.to_vec();
    }

    fn element_index(&self, e: usize) -> Result<&Element> {
        let el = self.elements.get(e).ok_or_else(|| CoreError::UnknownElement(format!("#{e}")))?;
        if !el.active() {
            return Err(CoreError::UnknownElement(format!("{} was already blown up", el.label)));
        }
        Ok(el)
    }

    /// Blows up a characteristic singularity.
    pub fn blow_up_characteristic_singularity(&mut self, e: usize) -> Result<Vec<usize>> {
        let el = self.element_index(e)?.clone();
        if el.kind != ElementKind::CharacteristicSingularity {
            return Err(CoreError::UnknownElement(format!("{} is not a characteristic singularity", el.label)));
        }
        let parent = el.chart;
        let pf = self.charts[parent].field.clone();
        let j0 = self.add_chart(
            el.label.child(Idx::Zero),
            Some(parent),
            Step::Cylinder,
            ChartKind::Cylinder { corner: true, scan: ScanRegion::HalfLine },
            &pf,
        )?;
        let ji = self.add_chart(el.label.child(Idx::Inf), Some(parent), Step::Point { sign: 1 }, ChartKind::Point, &pf)?;
        self.charts[parent].in_atlas = false;
        let mut new = vec![self.add_element(el.label.child(Idx::NegInf), ElementKind::CornerCycle, j0, Scalar::zero())];
        new.extend(self.scan_cycles(j0, &el.label)?);
        new.push(self.add_element(el.label.child(Idx::Inf), ElementKind::CharacteristicSingularity, ji, Scalar::zero()));
        self.record(e, &[j0, ji], &new);
        Ok(vec![j0, ji])
    }

    /// Blows up a corner cycle.
    pub fn blow_up_corner_cycle(&mut self, e: usize) -> Result<Vec<usize>> {
        let el = self.element_index(e)?.clone();
        if el.kind != ElementKind::CornerCycle {
            return Err(CoreError::UnknownElement(format!("{} is not a corner cycle", el.label)));
        }
        let parent = el.chart;
        let pf = self.charts[parent].field.clone();
        let step = |sub| Step::Cycle { omega: Scalar::zero(), sub };
        let j0 = self.add_chart(
            el.label.child(Idx::Zero),
            Some(parent),
            step(CycleSub::Zero),
            ChartKind::Cylinder { corner: true, scan: ScanRegion::HalfLine },
            &pf,
        )?;
        let ji = self.add_chart(
            el.label.child(Idx::Inf),
            Some(parent),
            step(CycleSub::Inf),
            ChartKind::Cylinder { corner: true, scan: ScanRegion::CornerOnly },
            &pf,
        )?;
        let mut new = vec![self.add_element(el.label.child(Idx::NegInf), ElementKind::CornerCycle, j0, Scalar::zero())];
        new.extend(self.scan_cycles(j0, &el.label)?);
        new.push(self.add_element(el.label.child(Idx::Inf), ElementKind::CornerCycle, ji, Scalar::zero()));
        self.record(e, &[j0, ji], &new);
        Ok(vec![j0, ji])
    }

    /// Blows up a non-corner characteristic cycle.
    pub fn blow_up_noncorner_cycle(&mut self, e: usize) -> Result<Vec<usize>> {
        let el = self.element_index(e)?.clone();
        if el.kind != ElementKind::NonCornerCycle {
            return Err(CoreError::UnknownElement(format!("{} is not a non-corner cycle", el.label)));
        }
        let parent = el.chart;
        let pf = self.charts[parent].field.clone();
        let step = |sub| Step::Cycle { omega: el.omega.clone(), sub };
        let j0 = self.add_chart(
            el.label.child(Idx::Zero),
            Some(parent),
            step(CycleSub::Zero),
            ChartKind::Cylinder { corner: false, scan: ScanRegion::FullLine },
            &pf,
        )?;
        let ji = self.add_chart(
            el.label.child(Idx::Inf),
            Some(parent),
            step(CycleSub::Inf),
            ChartKind::Cylinder { corner: true, scan: ScanRegion::CornerOnly },
            &pf,
        )?;
        let jm = self.add_chart(
            el.label.child(Idx::NegInf),
            Some(parent),
            step(CycleSub::NegInf),
            ChartKind::Cylinder { corner: true, scan: ScanRegion::CornerOnly },
            &pf,
        )?;
        let mut new = vec![self.add_element(el.label.child(Idx::NegInf), ElementKind::CornerCycle, jm, Scalar::zero())];
        new.extend(self.scan_cycles(j0, &el.label)?);
        new.push(self.add_element(el.label.child(Idx::Inf), ElementKind::CornerCycle, ji, Scalar::zero()));
        self.record(e, &[j0, ji, jm], &new);
        Ok(vec![j0, ji, jm])
    }

    /// Blows up any active characteristic element.
    pub fn blow_up(&mut self, e: usize) -> Result<Vec<usize>> {
        match self.element_index(e)?.kind {
            ElementKind::CharacteristicSingularity => self.blow_up_characteristic_singularity(e),
            ElementKind::CornerCycle => self.blow_up_corner_cycle(e),
            ElementKind::NonCornerCycle => self.blow_up_noncorner_cycle(e),
        }
    }

    /// Finds an element by label.
    pub fn find(&self, label: &Label) -> Option<usize> {
        self.elements.iter().position(|e| &e.label == label)
    }

    /// Finds a chart by label.
    pub fn find_chart(&self, label: &Label) -> Option<usize> {
        self.charts.iter().position(|c| &c.label == label)
    }

    /// Indices of the elements of `D` (not yet blown up).
    pub fn active_elements(&self) -> Vec<usize> {
        (0..self.elements.len()).filter(|&i| self.elements[i].active()).collect()
    }

    /// Length `l` of the sequence (number of blow-ups after `σ₀`).
    pub fn length(&self) -> u32 {
        self.trace.len() as u32
    }

    /// Order through which the chart field agrees with the pullback of the
    /// formal normal form in the divisor variables (`None` = exact).
    pub fn chart_trust(&self, chart: usize) -> Option<u32> {
        self.trust.map(|l| l.saturating_sub(self.charts[chart].depth + 1))
    }

    /// `ℓ_M = max n^{(J)} + l + 1` over the current atlas and the minimal working order for chart jets of order `k`.
    pub fn jet_budget_check(&self, k: u32) -> JetBudget {
        let max_n = self.charts.iter().filter(|c| c.in_atlas).map(|c| c.divisor_exponent()).max().unwrap_or(0);
        let length = self.length();
        let ell_m = max_n + length + 1;
        JetBudget { max_n, length, ell_m, k, ell_min: ell_m + k }
    }

    /// Path of chart indices from a root chart of `σ₀` down to `chart`.
    pub fn path(&self, chart: usize) -> Vec<usize> {
        let mut p = vec![chart];
        let mut c = chart;
        while let Some(q) = self.charts[c].parent {
            p.push(q);
            c = q;
        }
        p.reverse();
        p
    }

    /// Pulls another ambient field back along the path of `chart`.
    pub fn pullback_along(&self, chart: usize, ambient: &PolyField3) -> Result<ChartField> {
        let mut f = ChartField::Point(ambient.comps().clone());
        for c in self.path(chart) {
            f = pull_step(&f, &self.charts[c].step)?;
        }
        Ok(f)
    }

    /// Chart coordinates `x` with `{x = 0}` contained in the exceptional divisor,
    /// as indices into the chart's series variables (`(z, ρ)` in cylinder
    /// charts, `(x, y, z)` in point charts). Found by mapping probe points of
    /// each coordinate hyperplane to the ambient space.
    pub fn divisor_coordinates(&self, chart: usize) -> Vec<usize> {
        let cylinder = matches!(self.charts[chart].kind, ChartKind::Cylinder { .. });
        let offset = usize::from(cylinder);
        let probes = [[0.37, 0.61, 0.29], [1.3, -0.45, 0.83], [2.9, 0.12, -0.71]];
        (0..3 - offset)
            .filter(|&i| {
                probes.iter().all(|p| {
                    let mut q = *p;
                    q[i + offset] = 0.0;
                    if cylinder && q[2] < 0.0 {
                        q[2] = -q[2];
                    }
                    self.chart_to_ambient(chart, q).iter().all(|c| c.abs() < 1e-12)
                })
            })
            .collect()
    }

    /// Divisor coordinates `x` of `chart` for which the partial jet `j_k^x` of
    /// the chart field differs from `j_k^x` of the pullback of the ambient
    /// jet `j_{k+l+1}(ambient)`, `l` the length of the tree. `ambient` must be
    /// the exact field the tree was built from.
    pub fn jet_coherence_defects(&self, chart: usize, ambient: &PolyField3, k: u32) -> Result<Vec<usize>> {
        let n = k + self.length() + 1;
        let clip = |s: &Series<Scalar>| {
            Series::from_terms(
                s.vars(),
                s.terms().filter(|(m, _)| m.iter().sum::<u32>() <= n).map(|(m, c)| (m.clone(), c.clone())),
                hopf3_algebra::Trunc::Exact,
            )
        };
        let truncated = PolyField3::new([0, 1, 2].map(|i| clip(ambient.comp(i))))?;
        let pulled = self.pullback_along(chart, &truncated)?;
        let mut defects = Vec::new();
        for x in self.divisor_coordinates(chart) {
            let same = match (&self.charts[chart].field, &pulled) {
                (ChartField::Point(a), ChartField::Point(b)) => {
                    a.iter().zip(b).all(|(u, v)| matches!((u.jet_partial(x, k), v.jet_partial(x, k)), (Ok(p), Ok(q)) if p.same_terms(&q)))
                }
                (ChartField::Cylinder(a), ChartField::Cylinder(b)) => [(&a.b_theta, &b.b_theta), (&a.b_z, &b.b_z), (&a.b_rho, &b.b_rho)]
                    .iter()
                    .all(|(u, v)| matches!((u.jet_partial(x, k), v.jet_partial(x, k)), (Ok(p), Ok(q)) if p.same_terms(&q))),
                _ => false,
            };
            if !same {
                defects.push(x);
            }
        }
        Ok(defects)
    }

    /// Ambient point of a chart point: `(θ, z, ρ)` for cylinder charts, `(x, y, z)` for point charts.
    pub fn chart_to_ambient(&self, chart: usize, p: [f64; 3]) -> [f64; 3] {
        let mut q = p;
        for c in self.path(chart).into_iter().rev() {
            q = step_to_parent(&self.charts[c].step, q);
        }
        q
    }

    /// Serializable audit view.
    pub fn report(&self) -> TreeReport {
        TreeReport {
            trust: self.trust,
            length: self.length(),
            charts: self
                .charts
                .iter()
                .map(|c| ChartReport {
                    label: c.label.clone(),
                    parent: c.parent.map(|p| self.charts[p].label.clone()),
                    substitution: c.step.describe(),
                    kind: c.kind,
                    depth: c.depth,
                    in_atlas: c.in_atlas,
                    field: render_field(&c.field),
                    n1: c.planar.as_ref().map(|p| p.n1),
                    n2: c.planar.as_ref().map(|p| p.n2),
                    a_z: c.planar.as_ref().map(|p| p.a_z.render()),
                    a_rho: c.planar.as_ref().map(|p| p.a_rho.render()),
                    dicritical: c.planar.as_ref().map(|p| p.dicritical),
                    axis_t: c.axis.as_ref().map(|a| a.t),
                    axis_cofactor: c.axis.as_ref().map(|a| a.g.render()),
                })
                .collect(),
            elements: self
                .elements
                .iter()
                .map(|e| ElementReport {
                    label: e.label.clone(),
                    kind: e.kind,
                    chart: self.charts[e.chart].label.clone(),
                    omega: e.omega.render(),
                    omega_approx: e.omega.to_f64(),
                    active: e.active(),
                })
                .collect(),
            trace: self.trace.clone(),
        }
    }
}

fn render_field(f: &ChartField) -> Vec<String> {
    match f {
        ChartField::Point(p) => p.iter().map(|s| s.render()).collect(),
        ChartField::Cylinder(c) => [&c.b_theta, &c.b_z, &c.b_rho].iter().map(|s| s.render_with(|t| t.render())).collect(),
    }
}

/// Audit view of a chart.
#[derive(Debug, Clone, Serialize)]
pub struct ChartReport {
    /// Index tuple.
    pub label: Label,
    /// Parent chart.
    pub parent: Option<Label>,
    /// Substitution from the parent.
    pub substitution: String,
    /// Kind.
    #[serde(flatten)]
    pub kind: ChartKind,
    /// Depth after `σ₀`.
    pub depth: u32,
    /// Still a chart of the atlas.
    pub in_atlas: bool,
    /// Rendered field components.
    pub field: Vec<String>,
    /// `n₁`.
    pub n1: Option<u32>,
    /// `n₂`.
    pub n2: Option<u32>,
    /// Rendered `A_z`.
    pub a_z: Option<String>,
    /// Rendered `A_ρ`.
    pub a_rho: Option<String>,
    /// Dicritical flag.
    pub dicritical: Option<bool>,
    /// Axis exponent `t`.
    pub axis_t: Option<u32>,
    /// Rendered axis cofactor.
    pub axis_cofactor: Option<String>,
}

/// Audit view of a characteristic element.
#[derive(Debug, Clone, Serialize)]
pub struct ElementReport {
    /// Index tuple.
    pub label: Label,
    /// Kind.
    pub kind: ElementKind,
    /// Chart label.
    pub chart: Label,
    /// Exact location.
    pub omega: String,
    /// Decimal location.
    pub omega_approx: f64,
    /// Still in `D`.
    pub active: bool,
}

/// Audit view of a blow-up tree.
#[derive(Debug, Clone, Serialize)]
pub struct TreeReport {
    /// Trust order of the source.
    pub trust: Option<u32>,
    /// Length.
    pub length: u32,
    /// Charts.
    pub charts: Vec<ChartReport>,
    /// Characteristic elements.
    pub elements: Vec<ElementReport>,
    /// Blow-up trace.
    pub trace: Vec<TraceEntry>,
}
