use hopf3_algebra::{Mono, Ring, Scalar, Series, Trunc, UPoly};
use hopf3_core::bipoly::BiPoly;
use hopf3_core::blowup::*;
use hopf3_core::field::{xyz, PolyField3};
use hopf3_core::fixtures;
use hopf3_core::planar::*;
use proptest::prelude::*;

fn cpoly(terms: &[([u32; 2], i64, i64)]) -> Series<Scalar> {
    Series::from_terms(&cyl(), terms.iter().map(|(e, n, d)| (Mono::from_slice(e), Scalar::frac(*n, *d))), Trunc::Exact)
}

fn ppoly(terms: &[([u32; 3], i64, i64)]) -> Series<Scalar> {
    Series::from_terms(&xyz(), terms.iter().map(|(e, n, d)| (Mono::from_slice(e), Scalar::frac(*n, *d))), Trunc::Exact)
}

fn rotation_with_z(z: &[([u32; 3], i64, i64)]) -> PolyField3 {
    PolyField3::new([ppoly(&[([0, 1, 0], -1, 1)]), ppoly(&[([1, 0, 0], 1, 1)]), ppoly(z)]).unwrap()
}

fn resolve(f: &PolyField3) -> ResolutionOutcome {
    let tree = BlowupTree::blow_up_origin(f, None).unwrap();
    adapted_resolution(tree, ResolutionOptions::default()).unwrap()
}

/// `2z(z² − 1)∂z + ρ(1 − z²)∂ρ`.
fn cone_reduced() -> (Series<Scalar>, Series<Scalar>) {
    (cpoly(&[([3, 0], 2, 1), ([1, 0], -2, 1)]), cpoly(&[([0, 1], 1, 1), ([2, 1], -1, 1)]))
}

#[test]
fn cone_reduced_field_at_zero_is_simple() {
    let (p, q) = cone_reduced();
    let s = simple_singularity_test(&p, &q, false);
    assert_eq!(s.status, SimpleStatus::Simple);
    // Hand Jacobian at the origin: diag(−2, 1).
    assert_eq!(s.lambda, Some([Scalar::int(-2), Scalar::int(1)]));
}

#[test]
fn cone_reduced_field_at_one_is_non_saturated() {
    let (p, q) = cone_reduced();
    let s = simple_singularity_test(&p.translate(Z, &Scalar::one()).unwrap(), &q.translate(Z, &Scalar::one()).unwrap(), false);
    assert_eq!(s.status, SimpleStatus::NonSaturatedSimple);
    let loc = s.locus.unwrap();
    assert_eq!(loc.r, 1);
    // Factorization oracle: ẑ(ẑ + 2)[2(ẑ + 1)∂ẑ − ρ∂ρ].
    let g = BiPoly::from_series(&cpoly(&[([1, 0], 2, 1), ([2, 0], 1, 1)]));
    assert_eq!(loc.generator, g);
    assert_eq!(loc.cofactor.0, BiPoly::from_series(&cpoly(&[([0, 0], 2, 1), ([1, 0], 2, 1)])));
    assert_eq!(loc.cofactor.1, BiPoly::from_series(&cpoly(&[([0, 1], -1, 1)])));
    let s = simple_singularity_test(&p.translate(Z, &Scalar::int(-1)).unwrap(), &q.translate(Z, &Scalar::int(-1)).unwrap(), false);
    assert_eq!(s.status, SimpleStatus::NonSaturatedSimple);
}

#[test]
fn squared_singular_curve_has_multiplicity_two() {
    let s = simple_singularity_test(&cpoly(&[([2, 0], 1, 1)]), &cpoly(&[]), false);
    assert_eq!(s.status, SimpleStatus::NonSaturatedSimple);
    assert_eq!(s.locus.unwrap().r, 2);
}

#[test]
fn corner_certificates() {
    // Saddle λ = (1, −1).
    let s = simple_singularity_test(&cpoly(&[([1, 0], 1, 1)]), &cpoly(&[([0, 1], -1, 1)]), true);
    assert_eq!(s.status, SimpleStatus::Simple);
    assert_eq!(s.lambda, Some([Scalar::one(), Scalar::int(-1)]));
    // Regular crossing of {z = 0} along the invariant ρ-axis.
    let s = simple_singularity_test(&cpoly(&[([0, 0], 1, 1)]), &cpoly(&[([0, 1], 1, 1)]), true);
    assert_eq!(s.status, SimpleStatus::RegularAdapted);
    // Saddle-node λ = (0, 2).
    let s = simple_singularity_test(&cpoly(&[([2, 0], 1, 1)]), &cpoly(&[([0, 1], 2, 1)]), true);
    assert_eq!(s.status, SimpleStatus::Simple);
    // Node with ratio 1/2 is not simple.
    let s = simple_singularity_test(&cpoly(&[([1, 0], 1, 1)]), &cpoly(&[([0, 1], 2, 1)]), true);
    assert_eq!(s.status, SimpleStatus::NonSimple);
    // Dicritical {z = 0}: not adapted at the corner.
    let s = simple_singularity_test(&cpoly(&[([0, 1], 1, 1)]), &cpoly(&[([1, 0], 1, 1)]), true);
    assert_eq!(s.status, SimpleStatus::NonSimple);
}

#[test]
fn regular_points_off_corners() {
    let s = simple_singularity_test(&cpoly(&[([0, 0], 1, 1)]), &cpoly(&[([0, 1], 1, 1)]), false);
    assert_eq!(s.status, SimpleStatus::RegularAdapted);
    let s = simple_singularity_test(&cpoly(&[([0, 0], 1, 1)]), &cpoly(&[([0, 0], 1, 1)]), false);
    assert_eq!(s.status, SimpleStatus::RegularTransverse);
    let s = simple_singularity_test(&cpoly(&[([0, 0], 1, 1)]), &cpoly(&[([1, 0], 1, 1)]), false);
    assert_eq!(s.status, SimpleStatus::NonSimple);
}

#[test]
fn cone_resolution_is_immediate() {
    let out = resolve(&fixtures::cone());
    assert!(out.resolved());
    assert!(out.steps.is_empty());
    let cycles: Vec<_> = out.leaves.iter().filter(|l| l.kind == ElementKind::NonCornerCycle).collect();
    assert_eq!(cycles.len(), 3);
    for c in &cycles {
        let h = c.separatrix.as_ref().unwrap();
        assert!(h.h.is_zero() && h.exact, "{}", c.label);
    }
    let statuses: Vec<_> = cycles.iter().map(|c| c.status).collect();
    assert_eq!(
        statuses,
        vec![LeafStatus::NonSaturatedAdaptedSimple, LeafStatus::AdaptedSimple, LeafStatus::NonSaturatedAdaptedSimple]
    );
    for l in out.leaves.iter().filter(|l| l.kind == ElementKind::CharacteristicSingularity) {
        assert_eq!(l.status, LeafStatus::AxisPoleResolved);
        assert_eq!(l.t, Some(3));
        assert_eq!(l.g0, Some(Scalar::one()));
    }
}

#[test]
fn plane_resolution_is_immediate() {
    let out = resolve(&fixtures::plane());
    assert!(out.resolved());
    assert!(out.steps.is_empty());
    let cycles: Vec<_> = out.leaves.iter().filter(|l| l.kind == ElementKind::NonCornerCycle).collect();
    assert_eq!(cycles.len(), 1);
    assert_eq!(cycles[0].status, LeafStatus::NonSaturatedAdaptedSimple);
    assert_eq!(cycles[0].singularity.as_ref().unwrap().locus.as_ref().unwrap().r, 2);
    assert!(cycles[0].separatrix.as_ref().unwrap().h.is_zero());
}

#[test]
fn nilpotent_fixture_terminates_with_final_statuses() {
    let out = resolve(&fixtures::nilpotent());
    assert!(out.resolved(), "{:?}", out.unresolved);
    assert!(!out.steps.is_empty());
    assert_eq!(out.leaves.len(), out.tree.active_elements().len());
    // Non-corner cycles never lie on dicritical components.
    for l in out.leaves.iter().filter(|l| l.kind == ElementKind::NonCornerCycle) {
        let ch = &out.tree.charts[out.tree.elements[l.element].chart];
        assert!(!ch.planar.as_ref().unwrap().dicritical);
    }
}

#[test]
fn zero_budget_reports_unresolved() {
    let tree = BlowupTree::blow_up_origin(&fixtures::nilpotent(), None).unwrap();
    let out = adapted_resolution(tree, ResolutionOptions { budget: 0, separatrix_order: 4 }).unwrap();
    assert!(!out.resolved());
}

#[test]
fn axis_poles() {
    let mut t = BlowupTree::blow_up_origin(&fixtures::cone(), None).unwrap();
    let poles = resolve_axis_poles(&mut t, 20).unwrap();
    assert_eq!(poles.len(), 2);
    assert!(poles.iter().all(|p| p.iterations == 0 && p.t_trace == vec![3]));
    let mut t = BlowupTree::blow_up_origin(&fixtures::plane(), None).unwrap();
    let poles = resolve_axis_poles(&mut t, 20).unwrap();
    assert!(poles.iter().all(|p| p.iterations == 0 && p.t_trace == vec![2]));
    // Z = z³ + x² + y²: ż = z²(z + x² + y²) in the point chart, then z³(1 + (x² + y²)z).
    let f = rotation_with_z(&[([0, 0, 3], 1, 1), ([2, 0, 0], 1, 1), ([0, 2, 0], 1, 1)]);
    let mut t = BlowupTree::blow_up_origin(&f, None).unwrap();
    let poles = resolve_axis_poles(&mut t, 20).unwrap();
    assert!(poles.iter().all(|p| p.iterations == 1 && p.t_trace == vec![2, 3]), "{poles:?}");
}

fn residual_jet(p: &Series<Scalar>, q: &Series<Scalar>, h: &UPoly<Scalar>, n: u32) -> Vec<Scalar> {
    // Independent evaluation with truncated series arithmetic in a single variable.
    let r = hopf3_algebra::var_list(&[("rho", hopf3_algebra::Domain::Real)]);
    let hs = Series::from_terms(&r, h.coeffs().iter().enumerate().map(|(i, c)| (Mono::from_slice(&[i as u32]), c.clone())), Trunc::Exact);
    let subs = [hs.clone(), Series::var(&r, 0)];
    let pz = p.substitute(&r, &subs, None).unwrap();
    let qz = q.substitute(&r, &subs, None).unwrap();
    let res = pz.sub(&hs.deriv(0).mul(&qz).unwrap()).unwrap();
    (0..=n).map(|i| res.coeff(&[i])).collect()
}

#[test]
fn separatrix_invariance_identity() {
    // −z + ρ + z² ∂z + ρ(1 + z)∂ρ: λ = (−1, 1).
    let p = cpoly(&[([1, 0], -1, 1), ([0, 1], 1, 1), ([2, 0], 1, 1)]);
    let q = cpoly(&[([0, 1], 1, 1), ([1, 1], 1, 1)]);
    let s = simple_singularity_test(&p, &q, false);
    assert_eq!(s.status, SimpleStatus::Simple);
    let sep = separatrix(&s, 7).unwrap();
    assert_eq!(sep.h.coeff(1), Scalar::frac(1, 2));
    assert!(residual_jet(&p, &q, &sep.h, 7).iter().all(|c| c.is_zero()));
}

#[test]
fn singular_curve_separatrix_round_trip() {
    // (z − ρ − ρ²)·(∂z) with ρ∂ρ-free cofactor: Γ = {z = ρ + ρ²}.
    let p = cpoly(&[([1, 0], 1, 1), ([0, 1], -1, 1), ([0, 2], -1, 1)]);
    let s = simple_singularity_test(&p, &cpoly(&[]), false);
    assert_eq!(s.status, SimpleStatus::NonSaturatedSimple);
    let sep = separatrix(&s, 6).unwrap();
    assert!(sep.exact);
    assert_eq!(sep.h, UPoly::new(vec![Scalar::zero(), Scalar::one(), Scalar::one()]));
}

#[test]
fn algebraic_eigenvalue_ratio_is_not_rational() {
    let q = |n: i64| hopf3_algebra::Q::from_integer(n.into());
    let roots = hopf3_algebra::roots::isolate_real_roots(&[q(-2), q(0), q(1)]).unwrap();
    let r2 = roots.into_iter().find(|r| r.signum() > 0).unwrap();
    assert!(!ratio_is_positive_rational(&r2, &Scalar::one()));
    assert!(ratio_is_positive_rational(&r2, &(&r2 * &Scalar::int(3))));
}

proptest! {
    #[test]
    fn ratio_test_matches_brute_force(a in -50i64..=50, b in -50i64..=50) {
        let fast = ratio_is_positive_rational(&Scalar::int(a), &Scalar::int(b));
        let brute = (1..=50i64).any(|d| (1..=2500i64).any(|n| a * d == b * n && b != 0));
        prop_assert_eq!(fast, brute);
    }
}
