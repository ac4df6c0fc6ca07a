use hopf3_algebra::qpoly::{q, qi};
use hopf3_algebra::{Mono, PiPoly, Ring, Scalar, Series, Trunc, UPoly};
use hopf3_core::blowup::*;
use hopf3_core::fixtures;
use hopf3_core::planar::*;
use hopf3_core::poincare::*;

fn cpoly(terms: &[([u32; 2], i64, i64)]) -> Series<Scalar> {
    Series::from_terms(&cyl(), terms.iter().map(|(e, n, d)| (Mono::from_slice(e), Scalar::frac(*n, *d))), Trunc::Exact)
}

/// `c₀ + c₁π + …` with integer coefficients.
fn pi(c: &[i64]) -> PiPoly {
    PiPoly::new(c.iter().map(|&x| Scalar::int(x)).collect())
}

struct Cycle {
    cf: CycleField,
    leaf: LeafRecord,
}

fn cycles(f: &hopf3_core::PolyField3) -> Vec<Cycle> {
    let tree = BlowupTree::blow_up_origin(f, None).unwrap();
    let out = adapted_resolution(tree, ResolutionOptions::default()).unwrap();
    out.leaves
        .iter()
        .filter(|l| l.kind == ElementKind::NonCornerCycle)
        .map(|l| Cycle { cf: cycle_field(&out.tree, l.element).unwrap(), leaf: l.clone() })
        .collect()
}

#[test]
fn cone_cycle_at_one_first_order_terms() {
    let cs = cycles(&fixtures::cone());
    let c = &cs[2];
    assert_eq!(c.cf.omega, Scalar::one());
    let p = poincare_jet(&c.cf, 4).unwrap();
    // Autonomous flow oracle: dẑ/dθ = 2ρ²ẑ(ẑ+1)(ẑ+2), dρ/dθ = −ρ³ẑ(ẑ+2).
    assert_eq!(p.z.coeff(&[1, 2]), pi(&[0, 8]));
    assert_eq!(p.rho.coeff(&[1, 3]), pi(&[0, -4]));
    assert!(p.is_tangent_to_identity().unwrap());
    assert!(p.fixes_divisor().unwrap());
}

#[test]
fn cone_cycle_at_zero_restriction() {
    let cs = cycles(&fixtures::cone());
    let c = &cs[1];
    let p = poincare_jet(&c.cf, 5).unwrap();
    let g = invariant_surface_jet(&c.cf, &c.leaf, 5).unwrap();
    assert!(g.h.is_zero());
    let r = restriction_to_curve(&p, &g).unwrap();
    // Θ(ρ) = ρ(1 − 4πρ²)^{-1/2} = ρ + 2πρ³ + 6π²ρ⁵ + …
    assert_eq!(r.theta.coeff(&[1]), pi(&[1]));
    assert_eq!(r.theta.coeff(&[3]), pi(&[0, 2]));
    assert_eq!(r.theta.coeff(&[5]), pi(&[0, 0, 6]));
    assert_eq!(r.m, Some(2));
    let v = fix_verdict(&p, &g, &c.cf, 5).unwrap();
    assert_eq!(v, Verdict::NonFix { m: 2, k: 3, s: 0, alpha: pi(&[0, 2]) });
    let cp = cone_parameters(&p, &g, &v).unwrap();
    assert_eq!(cp.n, 3);
    assert_eq!(cp.sign, 1);
    assert!(cp.delta > qi(0));
}

#[test]
fn cone_cycles_at_plus_minus_one_are_fixed() {
    let cs = cycles(&fixtures::cone());
    // ω = −1: dρ/dθ = ρ³ẑ(2 − ẑ); ω = 1: dρ/dθ = −ρ³ẑ(ẑ + 2).
    for (c, a) in [(&cs[0], 4), (&cs[2], -4)] {
        let p = poincare_jet(&c.cf, 5).unwrap();
        let g = invariant_surface_jet(&c.cf, &c.leaf, 5).unwrap();
        assert!(g.h.is_zero() && g.exact);
        let r = restriction_to_curve(&p, &g).unwrap();
        assert_eq!(r.m, None);
        let v = fix_verdict(&p, &g, &c.cf, 5).unwrap();
        match &v {
            Verdict::FixExact { coord, k1, k2, s, alpha } => {
                assert_eq!((*coord, *k1, *k2, *s), (MonotoneCoord::Rho, 3, 1, 0));
                assert_eq!(*alpha, pi(&[0, a]));
            }
            other => panic!("{other:?}"),
        }
        let cp = cone_parameters(&p, &g, &v).unwrap();
        assert_eq!(cp.n, 1);
    }
}

#[test]
fn plane_cycle() {
    let cs = cycles(&fixtures::plane());
    assert_eq!(cs.len(), 1);
    let c = &cs[0];
    let p = poincare_jet(&c.cf, 4).unwrap();
    // ρ∘P = ρ and z∘P − z = 2πρz² + (order 4).
    assert!(p.rho.same_terms(&Series::var(&cyl(), RHO)));
    let [dz, _] = p.displacement().unwrap();
    let cubic: Vec<_> = dz.terms().filter(|(m, _)| m[0] + m[1] <= 3).map(|(m, c)| (m.to_vec(), c.clone())).collect();
    assert_eq!(cubic, vec![(vec![2, 1], pi(&[0, 2]))]);
    let g = invariant_surface_jet(&c.cf, &c.leaf, 4).unwrap();
    let r = restriction_to_curve(&p, &g).unwrap();
    assert_eq!(r.m, None);
    let v = fix_verdict(&p, &g, &c.cf, 4).unwrap();
    assert_eq!(v, Verdict::FixExact { coord: MonotoneCoord::Z, k1: 1, k2: 2, s: 0, alpha: pi(&[0, 2]) });
    let cp = cone_parameters(&p, &g, &v).unwrap();
    assert_eq!(cp.n, 1);
}

#[test]
fn exponential_identity_on_fixtures() {
    for f in [fixtures::cone(), fixtures::plane(), fixtures::nilpotent()] {
        for c in cycles(&f) {
            assert!(exp_identity_holds(&c.cf, 3).unwrap(), "{}", c.cf.label);
        }
    }
}

#[test]
fn synthetic_separatrix_is_recovered() {
    // Model ż = −zρ, ρ̇ = ρ² pushed through w = z + ρ + ρ²: its separatrix z = 0 becomes w = ρ + ρ².
    let bz = cpoly(&[([1, 1], -1, 1), ([0, 2], 2, 1), ([0, 3], 3, 1)]);
    let br = cpoly(&[([0, 2], 1, 1)]);
    let cf = CycleField::symmetric(Label(vec![Idx::N(1)]), &cpoly(&[([0, 0], 1, 1)]), &bz, &br).unwrap();
    let (pp, qq) = cf.planar.clone().unwrap();
    let sing = simple_singularity_test(&pp.to_series(), &qq.to_series(), false);
    assert_eq!(sing.status, SimpleStatus::Simple);
    let sep = separatrix(&sing, 6).unwrap();
    assert_eq!(sep.h, UPoly::new(vec![Scalar::zero(), Scalar::one(), Scalar::one()]));
    assert!(sep.exact);
    assert!(invariance_residual(&cf, &sep.h).unwrap().is_empty());
}

#[test]
fn cone_transport_identity_and_perturbation() {
    let c = cyl();
    let id = [Series::var(&c, Z), Series::var(&c, RHO)];
    let zero = UPoly::zero();
    let (c2, d2) = cone_transport_check(&id, &zero, &zero, 2, &qi(1), &q(1, 4)).unwrap();
    assert_eq!((c2, d2), (qi(1), q(1, 4)));
    // φ = (z + ρ²·z, ρ) maps {z = 0} to itself.
    let phi = [cpoly(&[([1, 0], 1, 1), ([1, 2], 1, 1)]), Series::var(&c, RHO)];
    let (c2, d2) = cone_transport_check(&phi, &zero, &zero, 2, &qi(1), &q(1, 4)).unwrap();
    assert!(c2 < qi(1) && d2 > qi(0));
    // Sampled inclusion: points outside Σ₁ never land in Σ₂.
    let (c2f, d2f) = (c2.to_string().parse::<f64>().unwrap_or(0.5), approx(&d2));
    for i in 1..200 {
        let rho = 0.25 * i as f64 / 200.0;
        for s in [-1.0, 1.0] {
            for k in 0..20 {
                let z = s * rho * rho * (1.0 + k as f64 * 0.5);
                let (zi, ri) = (z + rho * rho * z, rho);
                if ri < d2f {
                    assert!(zi.abs() >= c2f * ri.powi(2) * (1.0 - 1e-12));
                }
            }
        }
    }
    // N = 1 degenerate cone.
    let (c2, _) = cone_transport_check(&phi, &zero, &zero, 1, &qi(1), &q(1, 4)).unwrap();
    assert!(c2 < qi(1));
}

fn approx(x: &hopf3_algebra::Q) -> f64 {
    Scalar::rational(x.clone()).to_f64()
}
