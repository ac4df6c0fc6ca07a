use hopf3_core::classifier::{classify, ClassifyOptions};
use hopf3_core::fixtures;
use hopf3_numlab::agreement::{geometric_mesh, poincare_order_fit};
use hopf3_numlab::csv_out;
use hopf3_numlab::ode::OdeOptions;
use hopf3_numlab::surfaces::{match_cycles, SurfaceMap};
use hopf3_numlab::*;

fn classified(name: &str) -> hopf3_core::classifier::Classification {
    classify(&fixtures::by_name(name).unwrap(), &ClassifyOptions::default()).unwrap()
}

fn detect(name: &str, radius: f64, seeds: usize) -> Detection {
    let cls = classified(name);
    let field = F64Field::ambient(&fixtures::by_name(name).unwrap());
    let section = Section::from_change(cls.ambient.change).unwrap();
    detect_cycles(&field, &section, &Region::ball(radius), &DetectOptions { seeds, ..DetectOptions::default() })
}

#[test]
fn no_cycles_fixture_has_no_numeric_cycles() {
    let cls = classified("no-cycles");
    let r = cls.report.region.as_ref().unwrap().radius.min(0.5);
    let d = detect("no-cycles", r, 200);
    assert_eq!(d.seeds, 200);
    assert!(d.cycles.is_empty());
}

#[test]
fn plane_cycles_lie_in_the_plane() {
    let d = detect("plane", 0.5, 60);
    assert!(!d.cycles.is_empty());
    for c in &d.cycles {
        assert!(c.section_point[2].abs() < 1e-6, "{c:?}");
        assert!((c.period - std::f64::consts::TAU).abs() < 1e-6);
        assert!(c.residual < 1e-9);
    }
}

#[test]
fn cone_cycles_lie_on_both_nappes_and_on_the_surfaces() {
    let cls = classified("cone");
    let d = detect("cone", 0.25, 80);
    let (mut up, mut down) = (0, 0);
    for c in &d.cycles {
        let [x, y, z] = c.section_point;
        assert!(y.abs() < 1e-12);
        assert!((z.abs() - x).abs() < 1e-9, "{c:?}");
        if z > 0.0 {
            up += 1
        } else {
            down += 1
        }
    }
    assert!(up > 0 && down > 0);
    let surfaces = SurfaceMap::all(&cls, 0.3);
    assert_eq!(surfaces.len(), 2);
    for m in match_cycles(&surfaces, &d.cycles) {
        assert!(m.surface.is_some() && m.distance < 1e-8, "{m:?}");
    }
}

#[test]
fn detection_is_deterministic() {
    let a = detect("plane", 0.5, 30);
    let b = detect("plane", 0.5, 30);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn certificates_validate_on_every_fixture() {
    for name in ["cone", "plane", "no-cycles", "dicritical"] {
        let cls = classified(name);
        let vals = validate_classification(&cls, &ValidateOptions::default()).unwrap();
        assert!(!vals.is_empty());
        for v in &vals {
            assert!(v.passed && v.increments > 0 && v.margin > 0.0, "{name}: {v:?}");
        }
    }
}

#[test]
fn poincare_jets_agree_with_numerical_returns() {
    let ode = OdeOptions { rtol: 1e-14, atol: 1e-16, ..OdeOptions::default() };
    for name in ["cone", "plane"] {
        let cls = classified(name);
        let tree = cls.tree.as_ref().unwrap();
        assert!(!cls.cycles.is_empty());
        for (e, d) in &cls.cycles {
            let fit = poincare_order_fit(tree, *e, &d.jet, &geometric_mesh(0.02, 0.1, 8), &[-0.5, 0.0, 0.5], ode).unwrap();
            assert!(fit.slope >= fit.n_max as f64 + 0.8, "{name} {}: {fit:?}", fit.element);
        }
    }
}

#[test]
fn chart_returns_preserve_the_plane_cycles() {
    // In the plane fixture's cycle chart, {z = 0} is a continuum of cycles.
    let cls = classified("plane");
    let tree = cls.tree.as_ref().unwrap();
    let (e, _) = &cls.cycles[0];
    let field = F64Field::chart(&tree.charts[tree.elements[*e].chart].field);
    for rho in [0.05, 0.1, 0.2] {
        let p = chart_return(&field, [0.0, rho], OdeOptions::with_tol(1e-13)).unwrap();
        assert!(p[0].abs() < 1e-14 && (p[1] - rho).abs() < 1e-12);
    }
}

#[test]
fn csv_outputs_have_headers_and_rows() {
    let d = detect("plane", 0.5, 10);
    let mut buf = Vec::new();
    csv_out::write_cycles(&mut buf, &d.cycles).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().len(), 13);
    assert_eq!(rows.records().count(), d.cycles.len());

    let field = F64Field::ambient(&fixtures::plane());
    let seq = numeric_poincare(&field, &Section::standard(), [0.1, 0.0, 0.01], 3, OdeOptions::default());
    let tr = integrate(|_, y| Some(field.eval(y)), [0.1, 0.0, 0.0], (0.0, 1.0), OdeOptions::default(), "ambient");
    let (mut a, mut b) = (Vec::new(), Vec::new());
    csv_out::write_sections(&mut a, std::slice::from_ref(&seq.points)).unwrap();
    csv_out::write_trajectories(&mut b, std::slice::from_ref(&tr)).unwrap();
    assert_eq!(csv::Reader::from_reader(&a[..]).records().count(), seq.points.len());
    assert_eq!(csv::Reader::from_reader(&b[..]).records().count(), tr.times.len());
}
