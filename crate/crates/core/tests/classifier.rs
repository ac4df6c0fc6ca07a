use hopf3_algebra::qpoly::{q, qi};
use hopf3_algebra::{Mono, Scalar, Series, Trunc};
use hopf3_core::blowup::*;
use hopf3_core::classifier::*;
use hopf3_core::poincare::MonotoneCoord;
use hopf3_core::{fixtures, CoreError, FieldSpec};

fn run(f: &hopf3_core::PolyField3) -> Classification {
    classify(f, &ClassifyOptions::default()).unwrap()
}

fn cpoly(terms: &[([u32; 2], i64)]) -> Series<Scalar> {
    Series::from_terms(&cyl(), terms.iter().map(|(e, n)| (Mono::from_slice(e), Scalar::int(*n))), Trunc::Exact)
}

fn cycle_cert(r: &ClassificationReport, label: &str) -> CycleCertificate {
    let c = r.certificates.iter().find(|c| c.element.to_string() == label).unwrap();
    match &c.certificate {
        CertificatePayload::Cycle(c) => (**c).clone(),
        other => panic!("{other:?}"),
    }
}

#[test]
fn cone_has_two_surfaces_and_one_nonfix_cycle() {
    let c = run(&fixtures::cone());
    let r = &c.report;
    assert_eq!(r.case, Case::Surfaces);
    assert_eq!(r.surfaces.len(), 2);
    for (label, alpha) in [("(1)", "4*π"), ("(3)", "-4*π")] {
        let cc = cycle_cert(r, label);
        assert_eq!(cc.verdict.tag, "FIX-exact");
        assert_eq!(cc.verdict.alpha.as_deref(), Some(alpha));
    }
    let mid = cycle_cert(r, "(2)");
    assert_eq!(mid.verdict.tag, "NONFIX");
    assert_eq!(mid.verdict.m, Some(2));
    assert_eq!(mid.verdict.alpha.as_deref(), Some("2*π"));
    assert_eq!(mid.cone.as_ref().unwrap().n, 3);
    // The two half-cones x² + y² = z².
    for s in &r.surfaces {
        assert!(s.confirmed && s.exact);
        assert!(!s.samples.is_empty());
        for [x, y, z] in &s.samples {
            assert!((x * x + y * y - z * z).abs() < 1e-8);
        }
    }
    let signs: Vec<f64> = r.surfaces.iter().map(|s| s.samples[0][2].signum()).collect();
    assert_eq!(signs, vec![-1.0, 1.0]);
}

#[test]
fn cone_openings_lower_the_cone_order_to_zero() {
    let r = run(&fixtures::cone()).report;
    assert_eq!(r.cone_openings.len(), 3);
    for o in &r.cone_openings {
        assert!(o.stopped.is_none());
        let orders: Vec<u32> = o.steps.iter().map(|s| s.cone_order).collect();
        let expect: Vec<u32> = (1..=o.cone_order).rev().collect();
        assert_eq!(orders, expect);
    }
    let o = r.orders.unwrap();
    assert_eq!(o.length_opened, 5);
    assert!(o.ell_prime > o.ell_m_opened);
}

#[test]
fn plane_has_one_surface() {
    let r = run(&fixtures::plane()).report;
    assert_eq!(r.case, Case::Surfaces);
    assert_eq!(r.surfaces.len(), 1);
    assert!(r.surfaces[0].samples.iter().all(|p| p[2] == 0.0));
    let cc = cycle_cert(&r, "(1)");
    assert_eq!(cc.verdict.alpha.as_deref(), Some("2*π"));
}

#[test]
fn no_cycles_fixture_is_case_one() {
    let r = run(&fixtures::no_cycles()).report;
    assert_eq!(r.case, Case::NoCycles);
    assert!(r.surfaces.is_empty());
    assert!(r.region.unwrap().radius > 0.0);
}

#[test]
fn resolved_fixtures_without_cycles() {
    for f in [fixtures::nilpotent(), fixtures::cubic_focus(), fixtures::dicritical()] {
        let r = run(&f).report;
        assert_eq!(r.case, Case::NoCycles, "{}", r.summary);
    }
}

#[test]
fn inexact_fix_is_only_a_candidate() {
    let r = run(&fixtures::perturbed_plane()).report;
    assert_eq!(r.case, Case::Candidate);
    assert_eq!(r.surfaces.len(), 1);
    assert!(!r.surfaces[0].confirmed);
    assert!(r.warnings.iter().any(|w| w.contains("FIX-up-to")));
}

#[test]
fn semi_hyperbolic_input_is_reported_only() {
    let spec: FieldSpec = serde_json::from_str(r#"{"x": {"0,1,0": "-1"}, "y": {"1,0,0": "1"}, "z": {"0,0,1": "1", "2,0,0": "1"}}"#).unwrap();
    let r = run(&spec.to_field().unwrap()).report;
    assert_eq!(r.case, Case::Undetermined);
    assert!(r.summary.contains("semi-hyperbolic"));
    assert!(r.trace.is_none());
}

#[test]
fn small_budget_is_undetermined() {
    let opts = ClassifyOptions { budget: 1, ..ClassifyOptions::default() };
    let r = classify(&fixtures::nilpotent(), &opts).unwrap().report;
    assert_eq!(r.case, Case::Undetermined);
    assert!(r.trace.unwrap().unresolved.unwrap().contains("budget"));
}

#[test]
fn reports_are_deterministic() {
    for f in [fixtures::cone(), fixtures::plane(), fixtures::no_cycles()] {
        assert_eq!(run(&f).report.to_json(), run(&f).report.to_json());
    }
}

#[test]
fn cone_boxes_follow_the_sign_table() {
    let c = run(&fixtures::cone());
    let fam = c.report.boxes.iter().find(|b| b.chart.to_string() == "(0)").unwrap();
    assert_eq!(fam.points, vec!["-1", "0", "1"]);
    assert_eq!(fam.epsilon, "1/4");
    assert_eq!(fam.boxes.len(), 4);
    for b in &fam.boxes {
        let z = 0.5 * (b.z_lo_approx + b.z_hi_approx);
        assert_eq!(b.coord, MonotoneCoord::Z);
        assert_eq!(b.sign as f64, (2.0 * z * z * z - 2.0 * z).signum());
    }
    let signs: Vec<i32> = fam.boxes.iter().map(|b| b.sign).collect();
    assert_eq!(signs, vec![-1, 1, -1, 1]);
}

#[test]
fn plane_boxes_are_increasing_on_both_sides() {
    let r = run(&fixtures::plane()).report;
    let fam = &r.boxes[0];
    assert_eq!(fam.points, vec!["0"]);
    assert_eq!(fam.boxes.len(), 2);
    assert!(fam.boxes.iter().all(|b| b.sign == 1 && b.coord == MonotoneCoord::Z));
}

#[test]
fn dicritical_boxes_use_rho() {
    let tree = BlowupTree::blow_up_origin(&fixtures::dicritical(), None).unwrap();
    let c0 = tree.find_chart(&Label(vec![Idx::Zero])).unwrap();
    let fam = build_boxes(&tree, c0, None, None, &qi(2)).unwrap();
    assert!(fam.dicritical);
    assert_eq!(fam.points, vec!["-1", "1"]);
    assert_eq!(fam.boxes.len(), 3);
    for b in &fam.boxes {
        let z = 0.5 * (b.z_lo_approx + b.z_hi_approx);
        assert_eq!(b.coord, MonotoneCoord::Rho);
        assert_eq!(b.sign as f64, (1.0 - z * z).signum());
    }
    // A_z = z⁴ vanishes inside (−1, 1) only.
    let cases: Vec<Option<u8>> = fam.boxes.iter().map(|b| b.dicritical_case).collect();
    assert_eq!(cases, vec![Some(2), Some(3), Some(2)]);
    let mid = &fam.boxes[1];
    let cbound: f64 = {
        let (n, d) = mid.drift_bound.as_ref().unwrap().split_once('/').unwrap();
        n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
    };
    assert!(cbound * mid.delta_approx * mid.delta_approx < 0.25);
}

#[test]
fn oversized_epsilon_is_rejected() {
    let tree = BlowupTree::blow_up_origin(&fixtures::cone(), None).unwrap();
    let c0 = tree.find_chart(&Label(vec![Idx::Zero])).unwrap();
    assert!(matches!(build_boxes(&tree, c0, Some(&q(1, 2)), None, &qi(2)), Err(CoreError::Input(_))));
    assert!(build_boxes(&tree, c0, Some(&q(1, 8)), None, &qi(2)).is_ok());
}

#[test]
fn axis_certificates() {
    // Cone: ż = z³(1 − x² − y²) in the point chart.
    let tree = BlowupTree::blow_up_origin(&fixtures::cone(), None).unwrap();
    let e = tree.find(&Label(vec![Idx::Inf])).unwrap();
    let c = certify_characteristic_singularity(&tree, e).unwrap();
    let CertificatePayload::Axis(a) = c.certificate else { panic!() };
    assert_eq!((a.t, a.g0.as_str(), a.sign), (3, "1", 1));
    // 1 − x² − y² > 0 on [−r, r]² needs r < 1/√2.
    assert!(a.radius_approx < std::f64::consts::FRAC_1_SQRT_2);
    assert!(a.margin > 0.0);
    // Z = v²: G ≡ 1, any radius.
    let tree = BlowupTree::blow_up_origin(&fixtures::plane(), None).unwrap();
    let e = tree.find(&Label(vec![Idx::Inf])).unwrap();
    let CertificatePayload::Axis(a) = certify_characteristic_singularity(&tree, e).unwrap().certificate else { panic!() };
    assert_eq!((a.t, a.g0.as_str(), a.radius.as_str()), (2, "1", "1"));
    // Z = u + v²: t = 2, G(0) = 1; at the other end G(0) = −1.
    let tree = BlowupTree::blow_up_origin(&fixtures::no_cycles(), None).unwrap();
    for (idx, g0) in [(Idx::Inf, "1"), (Idx::NegInf, "-1")] {
        let e = tree.find(&Label(vec![idx])).unwrap();
        let CertificatePayload::Axis(a) = certify_characteristic_singularity(&tree, e).unwrap().certificate else { panic!() };
        assert_eq!((a.t, a.g0.as_str()), (2, g0));
    }
}

#[test]
fn corner_certificate_after_an_axis_blow_up() {
    // ż = z²(1 + ρ²) in C_∞; blowing up its origin gives A_z = 2z(1 + ρ²),
    // A_ρ = −ρ(1 + ρ²) at the corner: a saddle with λ = (2, −1).
    let mut tree = BlowupTree::blow_up_origin(&fixtures::no_cycles(), None).unwrap();
    let e = tree.find(&Label(vec![Idx::Inf])).unwrap();
    tree.blow_up_characteristic_singularity(e).unwrap();
    let corner = tree.find(&Label(vec![Idx::Inf, Idx::NegInf])).unwrap();
    let c = certify_corner_cycle(&tree, corner).unwrap();
    let CertificatePayload::Monotone(m) = c.certificate else { panic!() };
    assert_eq!(m.coord, MonotoneCoord::Z);
    assert_eq!(m.lambda, Some(["2".to_string(), "-1".to_string()]));
    assert_eq!((m.exponent, m.sign), (1, 1));
    assert!(m.margin > 0.0);
}

#[test]
fn synthetic_corner_certificates() {
    // Saddle λ = (1, −1): z.
    let m = monotone_coordinate(&cpoly(&[([1, 0], 1), ([2, 1], 1)]), &cpoly(&[([0, 1], -1)]), true).unwrap();
    assert_eq!((m.coord, m.exponent, m.sign), (MonotoneCoord::Z, 1, 1));
    // Regular field crossing the divisor {ρ = 0}: ρ.
    let m = monotone_coordinate(&cpoly(&[([1, 0], 1)]), &cpoly(&[([0, 0], 1), ([1, 0], 1)]), true).unwrap();
    assert_eq!((m.coord, m.exponent, m.sign), (MonotoneCoord::Rho, 0, 1));
    // λ = (0, 2): ρ.
    let m = monotone_coordinate(&cpoly(&[([2, 0], 1), ([1, 1], 1)]), &cpoly(&[([0, 1], 2), ([1, 1], -1)]), true).unwrap();
    assert_eq!((m.coord, m.exponent, m.sign), (MonotoneCoord::Rho, 1, 1));
    assert_eq!(m.lambda, Some(["0".to_string(), "2".to_string()]));
    // 2 − z keeps its sign on [0, r] only for r < 2.
    assert!(m.radius_approx < 2.0);
    // Both eigenvalues zero: rejected.
    assert!(monotone_coordinate(&cpoly(&[([2, 0], 1)]), &cpoly(&[([0, 2], 1)]), true).is_err());
}

#[test]
fn certified_signs_match_sampling() {
    use hopf3_algebra::Interval;
    // z² − 1/4 on [1, 3] × [0, 1] is positive; on [0, 1] × [0, 1] it changes sign.
    let p = cpoly(&[([2, 0], 4), ([0, 0], -1)]);
    let (s, mig, _) = certify_sign(&p, &[Interval::from_ints(1, 3), Interval::from_ints(0, 1)], Z, 10).unwrap();
    assert_eq!(s, 1);
    assert!(mig > qi(0) && mig <= qi(3));
    assert!(certify_sign(&p, &[Interval::from_ints(0, 1), Interval::from_ints(0, 1)], Z, 10).is_none());
}
