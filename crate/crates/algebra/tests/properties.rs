//! Property tests: ring axioms, jet idempotence, inverse round trips.

use hopf3_algebra::{var_list, Domain, JetOrder, Ring, Scalar, Series, VarList};
use proptest::prelude::*;

fn vars() -> VarList {
    var_list(&[("x", Domain::Real), ("y", Domain::Real)])
}

fn arb_series(max_terms: usize) -> impl Strategy<Value = Series<Scalar>> {
    prop::collection::vec(((0u32..4, 0u32..4), -5i64..6, 1i64..4), 0..max_terms).prop_map(|ts| {
        let v = vars();
        let mut s = Series::zero(&v);
        for ((a, b), n, d) in ts {
            s = s.add(&Series::monomial(&v, &[a, b], Scalar::frac(n, d))).unwrap();
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_commutes_and_distributes(a in arb_series(5), b in arb_series(5), c in arb_series(5)) {
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.same_terms(&b.mul(&a).unwrap()));
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = ab.add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.same_terms(&rhs));
    }

    #[test]
    fn jet_is_idempotent(a in arb_series(8), k in 0u32..6) {
        let j = a.jet(k).unwrap();
        prop_assert!(j.jet(k).unwrap().same_terms(&j));
        prop_assert!(j.jet(k.saturating_sub(1)).unwrap().same_terms(&a.jet(k.saturating_sub(1)).unwrap()));
    }

    #[test]
    fn jet_of_product_depends_only_on_jets(a in arb_series(6), b in arb_series(6), k in 0u32..6) {
        let full = a.mul(&b).unwrap().jet(k).unwrap();
        let trunc = a.jet(k).unwrap().mul(&b.jet(k).unwrap()).unwrap().jet(k).unwrap();
        prop_assert!(full.same_terms(&trunc));
    }

    #[test]
    fn inverse_round_trip(a in arb_series(6), c0 in 1i64..5, k in 0u32..6) {
        let v = vars();
        let a = a.at_zero_constant_free(&v).add(&Series::constant(&v, Scalar::int(c0))).unwrap();
        let inv = a.invert(JetOrder::total(k)).unwrap();
        let one = a.mul_jet(&inv, JetOrder::total(k)).unwrap();
        prop_assert!(one.same_terms(&Series::constant(&v, Scalar::one())));
    }

    #[test]
    fn translation_round_trip(a in arb_series(6), t in -3i64..4) {
        let s = a.translate(1, &Scalar::int(t)).unwrap().translate(1, &Scalar::int(-t)).unwrap();
        prop_assert!(s.same_terms(&a));
    }

    #[test]
    fn scalar_field_axioms(n1 in -20i64..20, d1 in 1i64..9, n2 in -20i64..20, d2 in 1i64..9) {
        let s2 = hopf3_algebra::roots::isolate_real_roots(&[
            hopf3_algebra::qpoly::qi(-2), hopf3_algebra::qpoly::qi(0), hopf3_algebra::qpoly::qi(1)
        ]).unwrap()[1].clone();
        let a = &Scalar::frac(n1, d1) + &(&s2 * &Scalar::frac(n2, d2));
        if !a.is_zero() {
            let inv = a.try_inv().unwrap();
            prop_assert_eq!(&a * &inv, Scalar::one());
        }
        let sq = &a * &a;
        prop_assert!(sq.signum() >= 0);
    }
}

trait ConstantFree {
    fn at_zero_constant_free(&self, v: &VarList) -> Series<Scalar>;
}

impl ConstantFree for Series<Scalar> {
    fn at_zero_constant_free(&self, v: &VarList) -> Series<Scalar> {
        self.sub(&Series::constant(v, self.coeff(&[0, 0]))).unwrap()
    }
}
