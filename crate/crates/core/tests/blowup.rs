use hopf3_algebra::{Mono, Ring, Scalar, Series, Trunc, TrigPoly};
use hopf3_core::blowup::*;
use hopf3_core::field::{xyz, PolyField3};
use hopf3_core::fixtures;

fn cpoly(terms: &[([u32; 2], i64, i64)]) -> Series<Scalar> {
    Series::from_terms(&cyl(), terms.iter().map(|(e, n, d)| (Mono::from_slice(e), Scalar::frac(*n, *d))), Trunc::Exact)
}

fn ppoly(terms: &[([u32; 3], i64, i64)]) -> Series<Scalar> {
    Series::from_terms(&xyz(), terms.iter().map(|(e, n, d)| (Mono::from_slice(e), Scalar::frac(*n, *d))), Trunc::Exact)
}

fn trig(s: &Series<Scalar>) -> Series<TrigPoly> {
    s.map_ring(|c| TrigPoly::constant(c.clone()))
}

/// Independent oracle: `B_θ = T(ρ², ρz)`, `B_z = Z(ρ², ρz)/ρ − zR(ρ², ρz)`, `B_ρ = ρR(ρ², ρz)`.
fn invariant_oracle(t: &Series<Scalar>, r: &Series<Scalar>, z: &Series<Scalar>) -> (Series<Scalar>, Series<Scalar>, Series<Scalar>) {
    let c = cyl();
    let subs = [cpoly(&[([0, 2], 1, 1)]), cpoly(&[([1, 1], 1, 1)])];
    let tt = t.substitute(&c, &subs, None).unwrap();
    let rr = r.substitute(&c, &subs, None).unwrap();
    let zz = z.substitute(&c, &subs, None).unwrap();
    let zv = Series::<Scalar>::var(&c, Z);
    let bz = zz.div_var_pow(RHO, 1).unwrap().sub(&zv.mul(&rr).unwrap()).unwrap();
    let br = rr.mul_var_pow(RHO, 1);
    (tt, bz, br)
}

fn uv(terms: &[([u32; 2], i64, i64)]) -> Series<Scalar> {
    Series::from_terms(&hopf3_core::field::uv(), terms.iter().map(|(e, n, d)| (Mono::from_slice(e), Scalar::frac(*n, *d))), Trunc::Exact)
}

#[test]
fn cone_origin_blow_up() {
    let tree = BlowupTree::blow_up_origin(&fixtures::cone(), None).unwrap();
    let c0 = tree.find_chart(&Label(vec![Idx::Zero])).unwrap();
    let f = tree.charts[c0].field.cylinder().unwrap();
    let (bt, bz, br) = invariant_oracle(&uv(&[([0, 0], 1, 1)]), &uv(&[([1, 0], 1, 1), ([0, 2], -1, 1)]), &uv(&[([0, 3], 1, 1), ([1, 1], -1, 1)]));
    assert_eq!(f.b_theta, trig(&bt));
    assert_eq!(f.b_z, trig(&bz));
    assert_eq!(f.b_rho, trig(&br));
    let p = tree.charts[c0].planar.as_ref().unwrap();
    assert_eq!(p.n1, 2);
    assert_eq!(p.a_z, cpoly(&[([3, 0], 2, 1), ([1, 0], -2, 1)]));
    assert_eq!(p.a_rho, cpoly(&[([0, 1], 1, 1), ([2, 1], -1, 1)]));
    assert!(!p.dicritical);
    let cycles: Vec<Scalar> = tree
        .elements
        .iter()
        .filter(|e| e.kind == ElementKind::NonCornerCycle)
        .map(|e| e.omega.clone())
        .collect();
    assert_eq!(cycles, vec![Scalar::int(-1), Scalar::zero(), Scalar::one()]);
    // D = {γ_{−∞}, γ₁, γ₂, γ₃, γ_∞}
    assert_eq!(tree.active_elements().len(), 5);
    // Point chart: ż = z³(1 − x² − y²).
    let cp = tree.find_chart(&Label(vec![Idx::Inf])).unwrap();
    let a = tree.charts[cp].axis.as_ref().unwrap();
    assert_eq!(a.t, 3);
    assert_eq!(a.g, ppoly(&[([0, 0, 0], 1, 1), ([2, 0, 0], -1, 1), ([0, 2, 0], -1, 1)]));
    let cm = tree.find_chart(&Label(vec![Idx::NegInf])).unwrap();
    assert_eq!(tree.charts[cm].axis.as_ref().unwrap().t, 3);
}

#[test]
fn plane_and_no_cycle_fixtures() {
    let tree = BlowupTree::blow_up_origin(&fixtures::plane(), None).unwrap();
    let p = tree.charts[0].planar.as_ref().unwrap();
    assert_eq!((p.n1, p.a_z.clone(), p.a_rho.is_empty()), (1, cpoly(&[([2, 0], 1, 1)]), true));
    let cyc: Vec<_> = tree.elements.iter().filter(|e| e.kind == ElementKind::NonCornerCycle).collect();
    assert_eq!(cyc.len(), 1);
    assert!(cyc[0].omega.is_zero());
    let a = tree.charts[1].axis.as_ref().unwrap();
    assert_eq!((a.t, a.g.clone()), (2, ppoly(&[([0, 0, 0], 1, 1)])));

    let tree = BlowupTree::blow_up_origin(&fixtures::no_cycles(), None).unwrap();
    let p = tree.charts[0].planar.as_ref().unwrap();
    assert_eq!(p.a_z, cpoly(&[([2, 0], 1, 1), ([0, 0], 1, 1)]));
    assert!(tree.elements.iter().all(|e| e.kind != ElementKind::NonCornerCycle));
    let a = tree.charts[1].axis.as_ref().unwrap();
    assert_eq!((a.t, a.g.clone()), (2, ppoly(&[([0, 0, 0], 1, 1), ([2, 0, 0], 1, 1), ([0, 2, 0], 1, 1)])));
}

#[test]
fn cycles_are_cycles_of_the_lifted_field() {
    let tree = BlowupTree::blow_up_origin(&fixtures::cone(), None).unwrap();
    for e in tree.elements.iter().filter(|e| e.kind == ElementKind::NonCornerCycle) {
        let f = tree.charts[e.chart].field.cylinder().unwrap();
        let at = |s: &Series<TrigPoly>| s.translate(Z, &e.omega).unwrap().coeff(&[0, 0]);
        assert!(at(&f.b_z).is_zero());
        assert!(at(&f.b_rho).is_zero());
        assert_eq!(at(&f.b_theta), TrigPoly::one());
    }
}

#[test]
fn noncorner_blow_up_at_one_has_emerging_cycle() {
    let mut tree = BlowupTree::blow_up_origin(&fixtures::cone(), None).unwrap();
    let e = tree.find(&Label(vec![Idx::N(3)])).unwrap();
    assert_eq!(tree.elements[e].omega, Scalar::one());
    let charts = tree.blow_up(e).unwrap();
    assert_eq!(charts.len(), 3);
    let j0 = &tree.charts[charts[0]];
    assert_eq!(j0.label, Label(vec![Idx::N(3), Idx::Zero]));
    // Hand substitution: A_z = z'(ρz' + 2)(3ρz' + 2), A_ρ = −ρ² z'(ρz' + 2).
    let p = j0.planar.as_ref().unwrap();
    assert_eq!(p.n1, 2);
    let az = cpoly(&[([1, 0], 4, 1), ([2, 1], 8, 1), ([3, 2], 3, 1)]);
    assert_eq!(p.a_z, az);
    assert_eq!(p.a_rho, cpoly(&[([1, 2], -2, 1), ([2, 3], -1, 1)]));
    let emerging = tree.find(&Label(vec![Idx::N(3), Idx::N(1)])).unwrap();
    assert!(tree.elements[emerging].omega.is_zero());
    // Corners of the two side charts.
    for l in [Idx::Inf, Idx::NegInf] {
        let c = tree.find(&Label(vec![Idx::N(3), l])).unwrap();
        assert_eq!(tree.elements[c].kind, ElementKind::CornerCycle);
    }
    assert_eq!(tree.length(), 1);
    // Every divisor intersection is a characteristic element: the two corners are in D.
    assert_eq!(tree.active_elements().len(), 5 - 1 + 3);
}

#[test]
fn corner_blow_up_recomputes_exponents() {
    // dz/dθ = 2ρ²z, dρ/dθ = ρ³ at the corner {z = ρ = 0}.
    let f = CylField {
        b_theta: trig(&cpoly(&[([0, 0], 1, 1)])),
        b_z: trig(&cpoly(&[([1, 2], 2, 1)])),
        b_rho: trig(&cpoly(&[([0, 3], 1, 1)])),
    };
    let j0 = pull_cycle(&f, &Scalar::zero(), CycleSub::Zero).unwrap();
    let p0 = planar_data(&j0, true).unwrap();
    assert_eq!((p0.n1, p0.n2), (2, 0));
    assert_eq!(p0.a_z, cpoly(&[([1, 0], 1, 1)]));
    assert_eq!(p0.a_rho, cpoly(&[([0, 1], 1, 1)]));
    let ji = pull_cycle(&f, &Scalar::zero(), CycleSub::Inf).unwrap();
    let pi = planar_data(&ji, true).unwrap();
    assert_eq!((pi.n1, pi.n2), (2, 2));
    assert_eq!(pi.a_z, cpoly(&[([1, 0], 2, 1)]));
    assert_eq!(pi.a_rho, cpoly(&[([0, 1], -1, 1)]));
}

#[test]
fn algebraic_center_translation() {
    // Z = v³ − 2uv: cycles at 0, ±√2.
    let v = xyz();
    let x = Series::<Scalar>::var(&v, 0);
    let y = Series::<Scalar>::var(&v, 1);
    let zc = ppoly(&[([0, 0, 3], 1, 1), ([2, 0, 1], -2, 1), ([0, 2, 1], -2, 1)]);
    let f = PolyField3::new([y.neg(), x.clone(), zc]).unwrap();
    let mut tree = BlowupTree::blow_up_origin(&f, None).unwrap();
    let root = tree
        .elements
        .iter()
        .position(|e| e.kind == ElementKind::NonCornerCycle && e.omega.signum() > 0)
        .unwrap();
    let w = tree.elements[root].omega.clone();
    assert_eq!(&w * &w, Scalar::int(2));
    let ch = tree.blow_up(root).unwrap();
    let p = tree.charts[ch[0]].planar.as_ref().unwrap();
    // A_z(√2 + ρz') / ρ-reduction: 4z' + 3√2 ρz'² + ρ²z'³.
    assert_eq!(p.a_z.coeff(&[1, 0]), Scalar::int(4));
    assert_eq!(p.a_z.coeff(&[2, 1]), &Scalar::int(3) * &w);
    assert_eq!(p.a_z.coeff(&[3, 2]), Scalar::one());
}

#[test]
fn characteristic_singularity_blow_up() {
    let mut tree = BlowupTree::blow_up_origin(&fixtures::plane(), None).unwrap();
    let e = tree.find(&Label(vec![Idx::Inf])).unwrap();
    let ch = tree.blow_up(e).unwrap();
    let j0 = &tree.charts[ch[0]];
    assert!(j0.is_corner());
    // The point chart field is ẋ = −y − xz, ẏ = x − yz, ż = z²; its corner chart
    // has B_z = ρz²·(1 + z·0) − … computed independently below.
    let pf = tree.charts[1].field.point().unwrap().clone();
    let oracle = pull_to_cylinder(&pf).unwrap();
    assert_eq!(j0.field.cylinder().unwrap(), &oracle);
    let ji = &tree.charts[ch[1]];
    assert_eq!(ji.axis.as_ref().unwrap().t, 2);
    assert!(!tree.charts[1].in_atlas);
    assert!(tree.find(&Label(vec![Idx::Inf, Idx::NegInf])).is_some());
    assert!(tree.find(&Label(vec![Idx::Inf, Idx::Inf])).is_some());
}

#[test]
fn jet_budget_formula() {
    let tree = BlowupTree::blow_up_origin(&fixtures::cone(), None).unwrap();
    let b = tree.jet_budget_check(4);
    // n^(0) = 2 in C₀, t = 3 in the point charts, l = 0.
    assert_eq!(b.max_n, 3);
    assert_eq!(b.ell_m, 4);
    assert_eq!(b.ell_min, 8);
    assert_eq!(tree.jet_budget_check(0).ell_min, b.ell_m);
}

#[test]
fn chart_maps_compose() {
    let mut tree = BlowupTree::blow_up_origin(&fixtures::cone(), None).unwrap();
    let e = tree.find(&Label(vec![Idx::N(3)])).unwrap();
    let ch = tree.blow_up(e).unwrap();
    // J0 of the cycle at 1: (θ, z', ρ) ↦ (ρ cos θ, ρ sin θ, ρ(1 + ρz')).
    let p = tree.chart_to_ambient(ch[0], [0.3, 0.5, 0.1]);
    let exp = [0.1 * 0.3f64.cos(), 0.1 * 0.3f64.sin(), 0.1 * (1.0 + 0.05)];
    for i in 0..3 {
        assert!((p[i] - exp[i]).abs() < 1e-15);
    }
    let json = serde_json::to_string(&tree.report()).unwrap();
    assert!(json.contains("\"(3,0)\""));
}
