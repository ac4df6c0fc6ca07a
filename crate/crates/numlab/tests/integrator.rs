use hopf3_core::fixtures;
use hopf3_numlab::ode::*;
use hopf3_numlab::*;
use std::f64::consts::{PI, TAU};

fn rotation(_: f64, y: &[f64; 3]) -> Option<[f64; 3]> {
    Some([-y[1], y[0], 0.0])
}

#[test]
fn plane_field_circle_has_period_two_pi() {
    // −y∂x + x∂y + z²∂z from (1, 0, 0): the unit circle.
    let f = F64Field::ambient(&fixtures::plane());
    let tr = integrate(|_, y| Some(f.eval(y)), [1.0, 0.0, 0.0], (0.0, TAU), OdeOptions::with_tol(1e-12), "ambient");
    assert_eq!(tr.meta.termination, Termination::Completed);
    assert!(tr.meta.stats.max_error <= 1.0);
    let end = tr.states.last().unwrap();
    assert!((end[0] - 1.0).abs() < 1e-10 && end[1].abs() < 1e-10 && end[2] == 0.0);
    for (t, y) in tr.times.iter().zip(&tr.states) {
        assert!((y[0] - t.cos()).abs() < 1e-10 && (y[1] - t.sin()).abs() < 1e-10);
    }
    let p = first_return_time(&f, [1.0, 0.0, 0.0]);
    assert!((p - TAU).abs() < 1e-10);
}

fn first_return_time(f: &F64Field, x: [f64; 3]) -> f64 {
    hopf3_numlab::section::first_return(f, &Section::standard(), x, OdeOptions::with_tol(1e-12), 100.0).unwrap().t
}

#[test]
fn fixed_step_global_error_is_fifth_order() {
    // With tolerances that accept every step, h_max fixes the step.
    let mut errs = Vec::new();
    let ns = [8usize, 16, 32, 64];
    for n in ns {
        let opts = OdeOptions { rtol: 1e3, atol: 1e3, h_max: TAU / n as f64, h_init: Some(TAU / n as f64), ..OdeOptions::default() };
        let tr = integrate(rotation, [1.0, 0.0, 0.0], (0.0, TAU), opts, "ambient");
        assert_eq!(tr.times.len(), n + 1);
        let y = tr.states.last().unwrap();
        errs.push(((y[0] - 1.0).powi(2) + y[1].powi(2)).sqrt());
    }
    for w in errs.windows(2) {
        let slope = (w[0] / w[1]).log2();
        assert!((slope - 5.0).abs() < 0.35, "{errs:?}");
    }
}

#[test]
fn dense_output_is_accurate_inside_steps() {
    let mut st = Stepper::new(rotation, 0.0, [1.0, 0.0, 0.0], 10.0, OdeOptions::with_tol(1e-10)).unwrap();
    for _ in 0..5 {
        let s = st.step(10.0).unwrap();
        for k in 1..10 {
            let t = s.t0 + s.h * k as f64 / 10.0;
            let y = s.eval(t);
            assert!((y[0] - t.cos()).abs() < 1e-8 && (y[1] - t.sin()).abs() < 1e-8);
        }
    }
}

#[test]
fn events_are_polished() {
    // First upward crossing of y = 0 after t = 0 on the unit circle is t = 2π;
    // either direction catches t = π first.
    let (ev, _) = integrate_to_event(rotation, [1.0, 0.0, 0.0], 0.0, 20.0, 0.1, |y| y[1], 1, OdeOptions::with_tol(1e-12)).unwrap();
    assert!((ev.unwrap().t - TAU).abs() < 1e-11);
    let (ev, _) = integrate_to_event(rotation, [1.0, 0.0, 0.0], 0.0, 20.0, 0.1, |y| y[1], 0, OdeOptions::with_tol(1e-12)).unwrap();
    assert!((ev.unwrap().t - PI).abs() < 1e-11);
    let (ev, _) = integrate_to_event(rotation, [1.0, 0.0, 0.0], 0.0, 3.0, 0.1, |y| y[1], 0, OdeOptions::with_tol(1e-12)).unwrap();
    assert!(ev.is_none());
}

#[test]
fn blow_up_in_finite_time_is_reported_not_fatal() {
    // ẏ = y² from y = 1 blows up at t = 1.
    let tr = integrate(|_, y: &[f64; 1]| Some([y[0] * y[0]]), [1.0], (0.0, 2.0), OdeOptions::default(), "test");
    assert!(matches!(tr.meta.termination, Termination::StepUnderflow { .. } | Termination::LeftDomain { .. }));
    assert!(tr.times.last().unwrap() < &1.0 && tr.times.last().unwrap() > &0.99);
}

#[test]
fn section_of_a_linear_change() {
    let change = [[2.0, 1.0, 0.0], [0.0, 1.0, 3.0], [1.0, 0.0, 1.0]];
    let s = Section::from_change(change).unwrap();
    for p in [[1.0, 2.0, 3.0], [-0.5, 0.25, 4.0]] {
        let a = s.adapted(&p);
        let back: Vec<f64> = (0..3).map(|i| (0..3).map(|j| change[i][j] * a[j]).sum()).collect();
        for i in 0..3 {
            assert!((back[i] - p[i]).abs() < 1e-12);
        }
    }
    let q = s.point([0.7, -0.2]);
    assert!(s.adapted(&q)[1].abs() < 1e-15);
    assert!(Section::from_change([[1.0, 2.0, 0.0], [2.0, 4.0, 0.0], [0.0, 0.0, 1.0]]).is_err());
}

#[test]
fn cone_orbits_stay_on_the_cone() {
    // R = x² + y² − z² satisfies Ṙ = 2(x² + y² + z²)R, so {R = 0} is invariant
    // (and transversally repelling: errors grow like e^{2(ρ² + z²)t}).
    let f = F64Field::ambient(&fixtures::cone());
    for p in [[0.3, 0.0, 0.3], [0.0, 0.2, -0.2], [0.1, 0.1, 2f64.sqrt() * 0.1]] {
        let tr = integrate(|_, y| Some(f.eval(y)), p, (0.0, 2.0 * TAU), OdeOptions::with_tol(1e-13), "ambient");
        assert_eq!(tr.meta.termination, Termination::Completed);
        for y in &tr.states {
            assert!((y[0] * y[0] + y[1] * y[1] - y[2] * y[2]).abs() < 1e-10);
        }
    }
}

#[test]
fn cone_off_cone_drift() {
    // ρ·z is a first integral of the cone field (ρ̇ = ρR, ż = −zR). Off the cone
    // with |z| > ρ we have R < 0, so ρ decreases on every return while z grows
    // along ρz = const (and escapes in finite time from (0.1, 0, 0.5)).
    let f = F64Field::ambient(&fixtures::cone());
    let seq = numeric_poincare(&f, &Section::standard(), [0.1, 0.0, 0.5], 8, OdeOptions::with_tol(1e-12));
    assert!(seq.stopped.is_some());
    let seq = numeric_poincare(&f, &Section::standard(), [0.1, 0.0, 0.11], 6, OdeOptions::with_tol(1e-12));
    assert!(seq.stopped.is_none());
    let mut prev = 0.1;
    for p in &seq.points {
        let [x, z] = p.coords;
        assert!(x < prev);
        assert!((x * z - 0.011).abs() < 1e-11);
        prev = x;
    }
    // Inside the cone around z = 0 (R > 0), ρ increases, the sign of ρ∘P − ρ = 2πρ³ + ….
    let seq = numeric_poincare(&f, &Section::standard(), [0.05, 0.0, 0.001], 8, OdeOptions::with_tol(1e-12));
    let xs: Vec<f64> = seq.points.iter().map(|p| p.coords[0]).collect();
    assert!(xs.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn cone_cycle_points_are_fixed_and_curve_restriction_matches() {
    let f = F64Field::ambient(&fixtures::cone());
    let opts = OdeOptions { rtol: 1e-13, atol: 1e-15, ..OdeOptions::default() };
    for p in [[0.2, 0.0, 0.2], [0.15, 0.0, -0.15]] {
        let seq = numeric_poincare(&f, &Section::standard(), p, 3, opts);
        for q in &seq.points {
            assert!((q.coords[0] - p[0]).abs() < 1e-10 && (q.coords[1] - p[2]).abs() < 1e-10);
        }
    }
    // On the invariant plane z = 0: Θ(ρ) − (ρ + 2πρ³) = 6π²ρ⁵ + … .
    let mut pts = Vec::new();
    for rho in [0.01, 0.015, 0.02, 0.03, 0.04] {
        let seq = numeric_poincare(&f, &Section::standard(), [rho, 0.0, 0.0], 1, opts);
        let theta = seq.points[0].coords[0];
        assert_eq!(seq.points[0].coords[1], 0.0);
        pts.push((rho, theta - rho - 2.0 * PI * rho.powi(3)));
    }
    for (rho, d) in &pts {
        let lead = 6.0 * PI * PI * rho.powi(5);
        assert!((d - lead).abs() < 0.05 * lead, "{rho}: {d} vs {lead}");
    }
}
