//! Root isolation, number-field arithmetic, π-polynomials and trigonometric integration.

use hopf3_algebra::qpoly::{self, q, qi, IsolatedRoot};
use hopf3_algebra::roots::{isolate_real_roots, real_roots};
use hopf3_algebra::{PiPoly, Ring, Scalar, ThetaTrig, TrigPoly, UPoly};

#[test]
fn roots_of_cubic_are_rational() {
    let r = isolate_real_roots(&[qi(0), qi(-2), qi(0), qi(2)]).unwrap();
    let vals: Vec<_> = r.iter().map(|s| s.as_rational().unwrap()).collect();
    assert_eq!(vals, vec![qi(-1), qi(0), qi(1)]);
}

#[test]
fn sum_of_squares_has_no_real_roots() {
    assert!(isolate_real_roots(&[qi(1), qi(0), qi(1)]).unwrap().is_empty());
}

#[test]
fn square_roots_of_two_live_in_number_fields() {
    let r = isolate_real_roots(&[qi(-2), qi(0), qi(1)]).unwrap();
    assert_eq!(r.len(), 2);
    assert!(r[0].signum() < 0 && r[1].signum() > 0);
    let sq = &r[1] * &r[1];
    assert_eq!(sq.as_rational(), Some(qi(2)));
    assert!((r[1].to_f64() - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn isolation_handles_roots_at_dyadic_midpoints() {
    let p = qpoly::mul(&qpoly::mul(&[qi(0), qi(1)], &[qi(-1), qi(1)]), &[q(-1, 2), qi(1)]);
    let iso = qpoly::isolate(&p).unwrap();
    assert_eq!(iso.len(), 3);
    let exact = iso.iter().filter(|r| matches!(r, IsolatedRoot::Exact(_))).count();
    assert!(exact >= 1);
}

#[test]
fn roots_over_extension_field() {
    let s2 = isolate_real_roots(&[qi(-2), qi(0), qi(1)]).unwrap()[1].clone();
    // z² − 2√2 z + 1 has roots √2 ± 1.
    let p = UPoly::new(vec![Scalar::one(), -&(&s2 * &Scalar::int(2)), Scalar::one()]);
    let r = real_roots(&p).unwrap();
    assert_eq!(r.len(), 2);
    assert!((r[0].to_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    assert!((r[1].to_f64() - (2f64.sqrt() + 1.0)).abs() < 1e-12);
}

#[test]
fn two_pi_squared() {
    let a = PiPoly::two_pi_pow(1).rmul(&PiPoly::two_pi_pow(1));
    assert_eq!(a, PiPoly::new(vec![Scalar::zero(), Scalar::zero(), Scalar::int(4)]));
    assert_eq!(a.render(), "4*π^2");
    let e = hopf3_algebra::pi::pi_enclosure(80);
    assert!(e.lo > q(31415926535897932, 10_000_000_000_000_000));
    assert!(e.hi < q(31415926535897933, 10_000_000_000_000_000));
    assert!((PiPoly::pi().to_f64() - std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn trig_product_to_sum() {
    let c = TrigPoly::cos_theta();
    let s = TrigPoly::sin_theta();
    let one = c.rmul(&c).radd(&s.rmul(&s));
    assert_eq!(one, TrigPoly::one());
    assert_eq!(c.rmul(&c).mean(), Scalar::frac(1, 2));
}

#[test]
fn integrals_of_trig_monomials_at_two_pi() {
    // ∫₀^{2π} cos²θ dθ = π.
    let c = TrigPoly::cos_theta();
    let i = ThetaTrig::from_trig(c.rmul(&c)).integrate().at_two_pi();
    assert_eq!(i, PiPoly::pi());
    // ∫₀^{2π} θ sin θ dθ = −2π.
    let ts = ThetaTrig::new(vec![TrigPoly::zero(), TrigPoly::sin_theta()]);
    assert_eq!(ts.integrate().at_two_pi(), PiPoly::new(vec![Scalar::zero(), Scalar::int(-2)]));
    // ∫₀^{θ} 1 = θ, and the integral vanishes at zero.
    let one = ThetaTrig::from_trig(TrigPoly::one()).integrate();
    assert_eq!(one.at_zero(), Scalar::zero());
    assert_eq!(one.at_two_pi(), PiPoly::two_pi_pow(1));
}

#[test]
fn integration_matches_quadrature() {
    let f = ThetaTrig::new(vec![
        TrigPoly::new(vec![Scalar::int(1), Scalar::frac(1, 3)], vec![Scalar::zero(), Scalar::int(2)]),
        TrigPoly::new(vec![Scalar::zero(), Scalar::zero(), Scalar::int(-1)], vec![]),
    ]);
    let fi = f.integrate();
    let theta = 1.7f64;
    let n = 20000;
    let h = theta / n as f64;
    let mut acc = 0.0;
    for k in 0..n {
        let x0 = k as f64 * h;
        acc += h / 6.0 * (f.eval_f64(x0) + 4.0 * f.eval_f64(x0 + h / 2.0) + f.eval_f64(x0 + h));
    }
    assert!((fi.eval_f64(theta) - acc).abs() < 1e-10);
    let d = fi.derivative();
    assert_eq!(d, f);
}
