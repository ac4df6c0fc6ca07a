use hopf3_algebra::{Mono, Ring, Scalar, Series, Trunc};
use hopf3_core::field::{uv, xyz, PolyField3};
use hopf3_core::fixtures;
use hopf3_core::normal_form::*;

fn poly_uv(terms: &[([u32; 2], i64, i64)]) -> Series<Scalar> {
    Series::from_terms(&uv(), terms.iter().map(|(e, n, d)| (Mono::from_slice(e), Scalar::frac(*n, *d))), Trunc::Exact)
}

#[test]
fn rotation_plus_z_squared_is_trivial_hopf() {
    let h = detect_hopf(&fixtures::plane()).unwrap();
    assert_eq!(h.b, Scalar::one());
    assert!(h.c.is_zero());
    assert_eq!(h.case, HopfCase::ZeroHopf);
    for i in 0..3 {
        for j in 0..3 {
            let e = if i == j { Scalar::one() } else { Scalar::zero() };
            assert_eq!(h.change[i][j], e);
        }
    }
}

#[test]
fn semi_hyperbolic_spectrum() {
    let v = xyz();
    let x = Series::<Scalar>::var(&v, 0);
    let y = Series::<Scalar>::var(&v, 1);
    let z = Series::<Scalar>::var(&v, 2);
    let f = PolyField3::new([y.scale(&Scalar::int(-2)), x.scale(&Scalar::int(2)), z.neg()]).unwrap();
    let h = detect_hopf(&f).unwrap();
    assert_eq!(h.b, Scalar::int(2));
    assert_eq!(h.c, Scalar::int(-1));
    assert_eq!(h.case, HopfCase::SemiHyperbolic);
    assert!(takens_normal_form(&f, &h, 3).is_err());
}

#[test]
fn non_hopf_rejected() {
    let v = xyz();
    let x = Series::<Scalar>::var(&v, 0);
    let y = Series::<Scalar>::var(&v, 1);
    let z = Series::<Scalar>::var(&v, 2);
    // Saddle in the (x, y) plane: eigenvalues ±1.
    let f = PolyField3::new([y.clone(), x.clone(), z.mul(&z).unwrap()]).unwrap();
    assert!(detect_hopf(&f).is_err());
}

#[test]
fn cone_field_is_its_own_normal_form() {
    let xi = fixtures::cone();
    let h = detect_hopf(&xi).unwrap();
    let nf = takens_normal_form(&xi, &h, 6).unwrap();
    assert!(nf.exact);
    assert_eq!(nf.t, poly_uv(&[([0, 0], 1, 1)]));
    assert_eq!(nf.r, poly_uv(&[([1, 0], 1, 1), ([0, 2], -1, 1)]));
    assert_eq!(nf.z, poly_uv(&[([0, 3], 1, 1), ([1, 1], -1, 1)]));
    // Independent substitution oracle: rebuilding the field from (T, R, Z) gives ξ back.
    assert_eq!(nf.symmetric_field().unwrap(), xi);
    assert_eq!(truncated_normal_form(&nf, 6).unwrap(), xi);
    assert_eq!(isolated_singularity_check(&nf, 5), Isolation::Isolated { order: 3 });
}

#[test]
fn plane_field_normal_form() {
    let xi = fixtures::plane();
    let h = detect_hopf(&xi).unwrap();
    let nf = takens_normal_form(&xi, &h, 2).unwrap();
    assert_eq!(nf.r, poly_uv(&[]));
    assert_eq!(nf.z, poly_uv(&[([0, 2], 1, 1)]));
    assert_eq!(truncated_normal_form(&nf, 2).unwrap(), xi);
    assert_eq!(isolated_singularity_check(&nf, 4), Isolation::Isolated { order: 2 });
}

#[test]
fn cubic_radial_term_averages_to_three_eighths() {
    let xi = fixtures::cubic_focus();
    let h = detect_hopf(&xi).unwrap();
    let nf = takens_normal_form(&xi, &h, 3).unwrap();
    assert!(!nf.exact);
    // Averaging oracle: mean of x·x³/ρ² ... = mean of cos⁴θ = 3/8.
    assert_eq!(nf.r.coeff(&[1, 0]), Scalar::frac(3, 8));
    assert_eq!(nf.t.coeff(&[0, 0]), Scalar::one());
    assert_eq!(nf.z, poly_uv(&[([0, 2], 1, 1)]));
    // Every retained monomial is rotation invariant: the realified field is symmetric.
    assert!(nf.symmetric_field().unwrap().is_rotationally_symmetric().unwrap());
    // j_ℓ(ξ_ℓ) agrees with the symmetric normal form.
    let xl = truncated_normal_form(&nf, 3).unwrap();
    assert_eq!(xl.jet(3).unwrap(), nf.symmetric_field().unwrap().jet(3).unwrap());
}

#[test]
fn normal_form_of_truncated_field_reproduces_jet() {
    let xi = fixtures::cubic_focus();
    let h = detect_hopf(&xi).unwrap();
    let nf = takens_normal_form(&xi, &h, 5).unwrap();
    let xl = truncated_normal_form(&nf, 5).unwrap();
    let h2 = detect_hopf(&xl).unwrap();
    let nf2 = takens_normal_form(&xl, &h2, 5).unwrap();
    assert_eq!(nf2.symmetric_field().unwrap(), nf.symmetric_field().unwrap());
}

#[test]
fn homological_solution_matches_lie_bracket() {
    // The change removes the non-resonant cubic terms: the cubic part of
    // ξ − ξ_ℓ equals the bracket of the linear rotation with the cubic part of φ.
    let xi = fixtures::cubic_focus();
    let h = detect_hopf(&xi).unwrap();
    let nf = takens_normal_form(&xi, &h, 3).unwrap();
    let v = xyz();
    let x = Series::<Scalar>::var(&v, 0);
    let y = Series::<Scalar>::var(&v, 1);
    let lin = PolyField3::new([y.neg(), x.clone(), Series::zero(&v)]).unwrap();
    let cubic = |s: &Series<Scalar>| s.part_of_degree(&[0, 1, 2], 3);
    let hfield = PolyField3::new([cubic(&nf.phi[0]), cubic(&nf.phi[1]), cubic(&nf.phi[2])]).unwrap();
    let br = lin.lie_bracket(&hfield).unwrap();
    let removed = xi.sub(&nf.xi_l).unwrap();
    for i in 0..3 {
        assert_eq!(cubic(br.comp(i)), cubic(removed.comp(i)), "component {i}");
    }
}

#[test]
fn algebraic_rotation_speed() {
    // Linear part −2y∂x + x∂y: b = √2.
    let v = xyz();
    let x = Series::<Scalar>::var(&v, 0);
    let y = Series::<Scalar>::var(&v, 1);
    let z = Series::<Scalar>::var(&v, 2);
    let f = PolyField3::new([y.scale(&Scalar::int(-2)), x.clone(), z.mul(&z).unwrap()]).unwrap();
    let h = detect_hopf(&f).unwrap();
    assert!(!h.b.is_rational());
    assert_eq!(&h.b * &h.b, Scalar::int(2));
    let nf = takens_normal_form(&f, &h, 3).unwrap();
    assert_eq!(nf.t.coeff(&[0, 0]), Scalar::one());
}

#[test]
fn non_isolated_axis() {
    let v = xyz();
    let x = Series::<Scalar>::var(&v, 0);
    let y = Series::<Scalar>::var(&v, 1);
    let z = Series::<Scalar>::var(&v, 2);
    let u = x.mul(&x).unwrap().add(&y.mul(&y).unwrap()).unwrap();
    let f = PolyField3::new([y.neg(), x.clone(), u.mul(&z).unwrap()]).unwrap();
    let h = detect_hopf(&f).unwrap();
    let nf = takens_normal_form(&f, &h, 4).unwrap();
    assert_eq!(isolated_singularity_check(&nf, 4), Isolation::AxisOfSingularities);
    let _ = Mono::new();
}
