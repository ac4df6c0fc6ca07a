//! Acceptance criteria: one PASS/FAIL line per criterion, non-zero exit if any fails.

use hopf3_algebra::{Mono, PiPoly, Scalar, Series, Trunc};
use hopf3_core::blowup::{BlowupTree, Idx, Label};
use hopf3_core::classifier::{certify_corner_cycle, classify, Case, CertificatePayload, Classification, ClassifyOptions};
use hopf3_core::field::{uv, PolyField3};
use hopf3_core::fixtures;
use hopf3_core::poincare::{cycle_field, exp_identity_holds, Verdict};
use hopf3_numlab::agreement::{geometric_mesh, poincare_order_fit};
use hopf3_numlab::validate::validate_box;
use hopf3_numlab::{detect_cycles, validate_certificate, DetectOptions, F64Field, OdeOptions, Region, Section, ValidateOptions};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::time::Instant;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn classified(name: &str) -> Classification {
    classify(&fixtures::by_name(name).unwrap(), &ClassifyOptions::default()).unwrap()
}

/// `Σ c_k π^k` with rational coefficients.
fn pi(coeffs: &[i64]) -> PiPoly {
    PiPoly::new(coeffs.iter().map(|&c| Scalar::frac(c, 1)).collect())
}

fn criterion_1_cone() -> Check {
    let start = Instant::now();
    let cls = classified("cone");
    let secs = start.elapsed().as_secs_f64();
    let r = &cls.report;
    ensure(r.case == Case::Surfaces, format!("case {:?}", r.case))?;
    ensure(r.surfaces.len() == 2, format!("{} surfaces", r.surfaces.len()))?;
    let tree = cls.tree.as_ref().unwrap();
    let mut seen = Vec::new();
    for (e, d) in &cls.cycles {
        let el = &tree.elements[*e];
        if el.label.0.len() != 1 {
            continue;
        }
        let w = el.omega.render();
        match &d.verdict {
            Verdict::FixExact { .. } if w == "1" || w == "-1" => seen.push(format!("{w}:FIX-exact")),
            Verdict::NonFix { m, alpha, .. } if w == "0" => {
                let n = d.cone.as_ref().map(|c| c.n);
                ensure(*m == 2 && n == Some(3) && *alpha == pi(&[0, 2]), format!("ω = 0: m = {m}, N = {n:?}, α = {alpha}"))?;
                seen.push(format!("0:NONFIX m=2 N=3 α={alpha}"));
            }
            v => return Err(format!("ω = {w}: unexpected verdict {}", v.tag())),
        }
    }
    ensure(seen.len() == 3, format!("characteristic cycles: {seen:?}"))?;
    let worst = r.surfaces.iter().flat_map(|s| &s.samples).map(|p| (p[0] * p[0] + p[1] * p[1] - p[2] * p[2]).abs()).fold(0.0, f64::max);
    let n = r.surfaces.iter().map(|s| s.samples.len()).sum::<usize>();
    ensure(n > 0 && worst < 1e-8, format!("max |x²+y²−z²| = {worst:e} over {n} samples"))?;
    ensure(secs < 60.0, format!("runtime {secs:.2} s"))?;
    Ok(format!("case ii, 2 surfaces, {}; max |x²+y²−z²| = {worst:.1e} over {n} samples; {secs:.2} s", seen.join(", ")))
}

fn criterion_2_plane() -> Check {
    let start = Instant::now();
    let cls = classified("plane");
    let secs = start.elapsed().as_secs_f64();
    let r = &cls.report;
    ensure(r.case == Case::Surfaces && r.surfaces.len() == 1, format!("case {:?}, r = {}", r.case, r.surfaces.len()))?;
    let worst = r.surfaces[0].samples.iter().map(|p| p[2].abs()).fold(0.0, f64::max);
    ensure(worst == 0.0, format!("surface samples off z = 0 by {worst:e}"))?;
    ensure(cls.cycles.len() == 1, "one cycle expected")?;
    let jet = &cls.cycles[0].1.jet;
    let rho = Series::<PiPoly>::var(jet.rho.vars(), 1);
    ensure(jet.rho.same_terms(&rho), format!("ρ∘P = {}", jet.rho.render_with(|c| c.render())))?;
    let [dz, _] = jet.displacement().map_err(|e| e.to_string())?;
    let low: Vec<(Vec<u32>, PiPoly)> = dz.terms().filter(|(m, _)| m.iter().sum::<u32>() <= 3).map(|(m, c)| (m.to_vec(), c.clone())).collect();
    ensure(low == vec![(vec![2, 1], pi(&[0, 2]))], format!("z∘P − z through order 3: {low:?}"))?;
    ensure(secs < 10.0, format!("runtime {secs:.2} s"))?;
    Ok(format!("case ii, r = 1, surface z = 0; ρ∘P = ρ; z∘P − z = 2*π·ρz² + O(4); {secs:.2} s"))
}

fn criterion_3_no_cycles() -> Check {
    let cls = classified("no-cycles");
    ensure(cls.report.case == Case::NoCycles, format!("case {:?}", cls.report.case))?;
    let radius = cls.report.region.as_ref().ok_or("no certified region")?.radius;
    let field = F64Field::ambient(&fixtures::no_cycles());
    let section = Section::from_change(cls.ambient.change).map_err(|e| e.to_string())?;
    let d = detect_cycles(&field, &section, &Region::ball(radius), &DetectOptions { seeds: 1000, ..DetectOptions::default() });
    ensure(d.seeds >= 1000 && d.cycles.is_empty(), format!("{} cycles over {} seeds", d.cycles.len(), d.seeds))?;
    Ok(format!("case i; 0 cycles over {} seeds in the ball of radius {radius} ({} with a section return)", d.seeds, d.admitted))
}

fn random_normal_form(rng: &mut ChaCha8Rng) -> PolyField3 {
    let v = uv();
    let lead = if rng.random_bool(0.5) { 2 } else { 3 };
    let mut poly = |lo: u32, hi: u32, fixed: &[((u32, u32), i64)]| {
        let mut terms: Vec<(Mono, Scalar)> = fixed.iter().map(|((i, j), c)| (Mono::from_slice(&[*i, *j]), Scalar::frac(*c, 1))).collect();
        for i in 0..=hi / 2 {
            for j in 0..=hi {
                let w = 2 * i + j;
                if (lo..=hi).contains(&w) && !fixed.iter().any(|(m, _)| *m == (i, j)) {
                    terms.push((Mono::from_slice(&[i, j]), Scalar::frac(rng.random_range(-2i64..=2), 1)));
                }
            }
        }
        Series::from_terms(&v, terms, Trunc::Exact)
    };
    let t = poly(1, 2, &[((0, 0), 1)]);
    let r = poly(1, 4, &[]);
    let z = poly(2, 5, &[((0, lead), 1)]);
    PolyField3::from_invariants(&t, &r, &z).unwrap()
}

fn coherent(tree: &BlowupTree, f: &PolyField3) -> Result<usize, String> {
    let mut checks = 0;
    for chart in 0..tree.charts.len() {
        for k in 1..=4 {
            let d = tree.jet_coherence_defects(chart, f, k).map_err(|e| e.to_string())?;
            ensure(d.is_empty(), format!("chart {} k = {k}: divisor coordinates {d:?} differ", tree.charts[chart].label))?;
            checks += tree.divisor_coordinates(chart).len();
        }
    }
    Ok(checks)
}

fn criterion_4_jet_coherence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut checks, mut lengths) = (0, [0usize; 3]);
    for _ in 0..20 {
        let f = random_normal_form(&mut rng);
        let mut tree = BlowupTree::blow_up_origin(&f, None).map_err(|e| e.to_string())?;
        checks += coherent(&tree, &f)?;
        lengths[0] += 1;
        for l in 1..=2 {
            let active = tree.active_elements();
            if active.is_empty() {
                break;
            }
            let mut next = tree.clone();
            if next.blow_up(active[rng.random_range(0..active.len())]).is_err() {
                break;
            }
            tree = next;
            checks += coherent(&tree, &f)?;
            lengths[l] += 1;
        }
    }
    ensure(lengths[2] > 0, "no tree of length 2 was produced")?;
    Ok(format!("20 random normal forms; trees of length 0/1/2: {}/{}/{}; {checks} chart jet identities (k ≤ 4) exact", lengths[0], lengths[1], lengths[2]))
}

fn criterion_5_exp_identity() -> Check {
    let mut checked = Vec::new();
    for name in fixtures::NAMES {
        let cls = classified(name);
        let Some(tree) = cls.tree.as_ref() else { continue };
        for (e, _) in &cls.cycles {
            let cf = cycle_field(tree, *e).map_err(|err| err.to_string())?;
            let ok = exp_identity_holds(&cf, 3).map_err(|err| format!("{name} {}: {err}", cf.label))?;
            ensure(ok, format!("{name} {}: jets differ", cf.label))?;
            checked.push(format!("{name}{}", cf.label));
        }
    }
    Ok(format!("{} cycle fields through order 3: {}", checked.len(), checked.join(" ")))
}

fn criterion_6_order_fit() -> Check {
    let ode = OdeOptions { rtol: 1e-14, atol: 1e-16, ..OdeOptions::default() };
    let mut fits = Vec::new();
    for name in ["cone", "plane"] {
        let cls = classified(name);
        let tree = cls.tree.as_ref().unwrap();
        for (e, d) in &cls.cycles {
            let fit = poincare_order_fit(tree, *e, &d.jet, &geometric_mesh(0.02, 0.1, 8), &[-0.5, 0.0, 0.5], ode).map_err(|err| err.to_string())?;
            let need = fit.n_max as f64 + 0.8;
            ensure(fit.slope >= need, format!("{name} {}: slope {:.3} < {need}", fit.element, fit.slope))?;
            fits.push(format!("{name}{} slope {:.2} (N_max {})", fit.element, fit.slope, fit.n_max));
        }
    }
    Ok(fits.join(", "))
}

fn criterion_7_boxes() -> Check {
    let opts = ValidateOptions::default();
    let (mut boxes, mut trajectories, mut margin) = (0, 0, f64::INFINITY);
    for name in fixtures::NAMES {
        let cls = classified(name);
        let Some(tree) = cls.tree.as_ref() else { continue };
        for fam in &cls.report.boxes {
            for b in &fam.boxes {
                let v = validate_box(tree, fam, b, &opts).map_err(|e| e.to_string())?;
                ensure(v.passed, format!("{name} {}: {:?}", v.subject, v.failures))?;
                boxes += 1;
                trajectories += v.trajectories;
                margin = margin.min(v.margin);
            }
        }
    }
    Ok(format!("{boxes} boxes on {} fixtures, {trajectories} trajectories, 100% monotone; min margin {margin:.2e}", fixtures::NAMES.len()))
}

fn criterion_8_corner_and_axes() -> Check {
    let opts = ValidateOptions::default();
    let mut tree = BlowupTree::blow_up_origin(&fixtures::no_cycles(), None).map_err(|e| e.to_string())?;
    let e = tree.find(&Label(vec![Idx::Inf])).ok_or("no (inf)")?;
    tree.blow_up_characteristic_singularity(e).map_err(|e| e.to_string())?;
    let corner = tree.find(&Label(vec![Idx::Inf, Idx::NegInf])).ok_or("no (inf,-inf)")?;
    let cert = certify_corner_cycle(&tree, corner).map_err(|e| e.to_string())?;
    ensure(matches!(cert.certificate, CertificatePayload::Monotone(_)), "corner: no monotone certificate")?;
    let v = validate_certificate(&tree, &cert, &[], &opts).map_err(|e| e.to_string())?;
    ensure(v.passed && v.margin > 0.0, format!("corner: passed {} margin {:e}", v.passed, v.margin))?;
    let mut lines = vec![format!("corner {} margin {:.2e}", cert.element, v.margin)];
    for name in ["cone", "plane"] {
        let cls = classified(name);
        let tree = cls.tree.as_ref().unwrap();
        let axes: Vec<_> = cls.report.certificates.iter().filter(|c| matches!(c.certificate, CertificatePayload::Axis(_))).collect();
        ensure(axes.len() == 2, format!("{name}: {} axis certificates", axes.len()))?;
        for c in axes {
            let v = validate_certificate(tree, c, &cls.cycles, &opts).map_err(|e| e.to_string())?;
            ensure(v.passed && v.margin > 0.0, format!("{name} {}: passed {} margin {:e}", c.element, v.passed, v.margin))?;
            lines.push(format!("{name}{} margin {:.2e}", c.element, v.margin));
        }
    }
    Ok(lines.join(", "))
}

fn criterion_9_determinism() -> Check {
    for name in fixtures::NAMES {
        let run = || Command::new(env!("CARGO_BIN_EXE_hopf3")).args(["classify", name]).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        ensure(!a.stdout.is_empty() && a.stdout == b.stdout, format!("{name}: reports differ"))?;
    }
    Ok(format!("byte-identical classify reports on {} fixtures", fixtures::NAMES.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("1 cone fixture", criterion_1_cone),
        ("2 plane fixture", criterion_2_plane),
        ("3 case (i) fixture", criterion_3_no_cycles),
        ("4 jet coherence", criterion_4_jet_coherence),
        ("5 exponential identity", criterion_5_exp_identity),
        ("6 symbolic vs numeric Poincaré", criterion_6_order_fit),
        ("7 box certificates", criterion_7_boxes),
        ("8 corner and axis certificates", criterion_8_corner_and_axes),
        ("9 determinism", criterion_9_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({secs:.1} s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{name}] {detail} ({secs:.1} s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
