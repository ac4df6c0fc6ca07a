//! Truncated-series arithmetic against hand-computed expansions.

use hopf3_algebra::{var_list, Domain, JetOrder, Ring, Scalar, Series, Trunc, VarList};

fn rz() -> VarList {
    var_list(&[("rho", Domain::NonNegative), ("z", Domain::Real)])
}

fn poly(vars: &VarList, terms: &[(&[u32], i64)]) -> Series<Scalar> {
    let mut s = Series::zero(vars);
    for (e, c) in terms {
        s = s.add(&Series::monomial(vars, e, Scalar::int(*c))).unwrap();
    }
    s
}

#[test]
fn product_of_conjugates_truncated_at_two() {
    let v = rz();
    let a = poly(&v, &[(&[0, 0], 1), (&[1, 0], 1)]);
    let b = poly(&v, &[(&[0, 0], 1), (&[1, 0], -1)]);
    let p = a.mul_jet(&b, JetOrder::total(2)).unwrap();
    assert!(p.same_terms(&poly(&v, &[(&[0, 0], 1), (&[2, 0], -1)])));
    assert_eq!(p.trunc(), &Trunc::total(2, 2));
}

#[test]
fn jet_of_cubic_times_z() {
    let v = var_list(&[("z", Domain::Real)]);
    let f = poly(&v, &[(&[4], 2), (&[2], -2)]);
    let j = f.jet(3).unwrap();
    assert!(j.same_terms(&poly(&v, &[(&[2], -2)])));
}

#[test]
fn inverse_of_one_plus_rho_z() {
    let v = rz();
    let f = poly(&v, &[(&[0, 0], 1), (&[1, 1], 1)]);
    let g = f.invert(JetOrder::total(3)).unwrap();
    assert!(g.same_terms(&poly(&v, &[(&[0, 0], 1), (&[1, 1], -1)])));
    let g5 = f.invert(JetOrder::total(5)).unwrap();
    assert!(g5.same_terms(&poly(&v, &[(&[0, 0], 1), (&[1, 1], -1), (&[2, 2], 1)])));
    let one = f.mul_jet(&g5, JetOrder::total(5)).unwrap();
    assert!(one.same_terms(&Series::constant(&v, Scalar::one())));
}

#[test]
fn partial_jet_in_rho() {
    let v = rz();
    let f = poly(&v, &[(&[3, 1], 1), (&[2, 5], 1)]);
    let j = f.jet_partial(0, 2).unwrap();
    assert!(j.same_terms(&poly(&v, &[(&[2, 5], 1)])));
}

#[test]
fn partial_jet_of_total_truncation_is_rejected() {
    let v = rz();
    let f = poly(&v, &[(&[1, 1], 1)]).assume_trunc(Trunc::total(2, 4));
    assert!(f.jet_partial(0, 2).is_err());
    assert!(f.jet(5).is_err());
    assert!(f.jet(3).is_ok());
}

#[test]
fn translation_of_cubic() {
    let v = var_list(&[("z", Domain::Real)]);
    let f = poly(&v, &[(&[3], 2), (&[1], -2)]);
    let t = f.translate(0, &Scalar::int(1)).unwrap();
    assert!(t.same_terms(&poly(&v, &[(&[3], 2), (&[2], 6), (&[1], 4)])));
    let g = poly(&v, &[(&[2], 1), (&[0], -1)]);
    let t = g.translate(0, &Scalar::int(-1)).unwrap();
    assert!(t.same_terms(&poly(&v, &[(&[2], 1), (&[1], -2)])));
}

#[test]
fn translation_in_truncated_variable_is_rejected() {
    let v = rz();
    let f = poly(&v, &[(&[1, 1], 1)]).assume_trunc(Trunc::partial(0, 3));
    assert!(f.translate(0, &Scalar::int(1)).is_err());
    assert!(f.translate(1, &Scalar::int(1)).is_ok());
}

#[test]
fn product_trust_uses_orders_of_factors() {
    let v = rz();
    // ρ² + O(ρ⁴) times ρ + O(ρ⁶) is trustworthy through ρ^{min(3+1, 5+2)} = ρ⁴.
    let f = poly(&v, &[(&[2, 0], 1)]).assume_trunc(Trunc::partial(0, 3));
    let g = poly(&v, &[(&[1, 0], 1)]).assume_trunc(Trunc::partial(0, 5));
    let p = f.mul(&g).unwrap();
    assert_eq!(p.trunc(), &Trunc::partial(0, 4));
}

#[test]
fn substitution_into_blowup_chart() {
    let v = rz();
    // (ρ, z) ↦ (ρ, 1 + ρ z) applied to z² − 1 gives 2ρz + ρ²z².
    let f = poly(&v, &[(&[0, 2], 1), (&[0, 0], -1)]);
    let subs = vec![Series::var(&v, 0), poly(&v, &[(&[0, 0], 1), (&[1, 1], 1)])];
    let g = f.substitute(&v, &subs, None).unwrap();
    assert!(g.same_terms(&poly(&v, &[(&[1, 1], 2), (&[2, 2], 1)])));
}

#[test]
fn derivative_and_division() {
    let v = rz();
    let f = poly(&v, &[(&[2, 3], 3), (&[2, 1], 1)]);
    let d = f.deriv(1);
    assert!(d.same_terms(&poly(&v, &[(&[2, 2], 9), (&[2, 0], 1)])));
    let q = f.div_var_pow(0, 2).unwrap();
    assert!(q.same_terms(&poly(&v, &[(&[0, 3], 3), (&[0, 1], 1)])));
    assert!(f.div_var_pow(1, 2).is_err());
}

#[test]
fn non_unit_inverse_is_rejected() {
    let v = rz();
    let f = poly(&v, &[(&[1, 0], 1)]);
    assert!(f.invert(JetOrder::total(3)).is_err());
}
