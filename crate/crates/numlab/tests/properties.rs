use hopf3_core::blowup::BlowupTree;
use hopf3_core::fixtures;
use hopf3_numlab::F64Field;
use proptest::prelude::*;

fn close(a: [f64; 3], b: [f64; 3]) -> bool {
    a.iter().zip(&b).all(|(u, v)| (u - v).abs() <= 1e-12 * (1.0 + v.abs()))
}

proptest! {
    #[test]
    fn compiled_ambient_fields_match_exact_evaluation(k in 0usize..7, x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
        let f = fixtures::by_name(fixtures::NAMES[k % fixtures::NAMES.len()]).unwrap();
        prop_assert!(close(F64Field::ambient(&f).eval(&[x, y, z]), f.eval_f64([x, y, z])));
    }

    #[test]
    fn compiled_chart_fields_match_exact_evaluation(th in 0.0f64..6.3, z in -2.0f64..2.0, rho in 0.0f64..0.5) {
        let tree = BlowupTree::blow_up_origin(&fixtures::cone(), None).unwrap();
        for chart in &tree.charts {
            let p = if F64Field::chart(&chart.field).is_cylinder() { [th, z, rho] } else { [z / 4.0, rho, rho] };
            prop_assert!(close(F64Field::chart(&chart.field).eval(&p), chart.field.eval_f64(p)));
        }
    }
}
