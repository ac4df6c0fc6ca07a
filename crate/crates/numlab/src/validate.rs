//! Numerical validation of monotonicity certificates.
//!
//! Every certificate claims that some coordinate is strictly monotone along
//! trajectories inside a neighborhood. Validation samples trajectories inside
//! the neighborhood, follows them while they stay inside, and checks the sign of
//! every increment of the certified coordinate. The margin is the smallest
//! signed increment observed; it must be strictly positive.

use crate::compiled::F64Field;
use crate::error::{NumlabError, Result};
use crate::ode::{integrate, OdeOptions};
use crate::section::{chart_return, chart_returns_within};
use hopf3_core::blowup::{BlowupTree, ChartKind};
use hopf3_core::classifier::{BoxCertificate, BoxFamily, CertificatePayload, Classification, CycleData, ElementCertificate};
use hopf3_core::poincare::{MonotoneCoord, Verdict};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

/// Sampling settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidateOptions {
    /// Starting points per neighborhood along its two (chart) directions.
    pub grid: (usize, usize),
    /// Returns followed per trajectory.
    pub returns: usize,
    /// Integration time for point-chart neighborhoods.
    pub time: f64,
    /// Residual accepted for points of a FIX curve.
    pub fixed_tol: f64,
    /// Integrator settings.
    pub ode: OdeOptions,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            grid: (7, 5),
            returns: 6,
            time: 4.0 * TAU,
            fixed_tol: 1e-9,
            ode: OdeOptions { rtol: 1e-12, atol: 1e-14, ..OdeOptions::default() },
        }
    }
}

/// Result of validating one certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validation {
    /// What was validated (`box (0)[a, b]`, an element label, …).
    pub subject: String,
    /// `box`, `axis`, `monotone` or `cone`.
    pub kind: &'static str,
    /// Certified coordinate.
    pub coord: MonotoneCoord,
    /// Trajectories sampled.
    pub trajectories: usize,
    /// Increments checked.
    pub increments: usize,
    /// Smallest signed increment (`+∞` when nothing was checked).
    pub margin: f64,
    /// True when every increment had the certified sign and nothing failed.
    pub passed: bool,
    /// Problems encountered.
    pub failures: Vec<String>,
}

struct Tally {
    trajectories: usize,
    increments: usize,
    margin: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { trajectories: 0, increments: 0, margin: f64::INFINITY, failures: Vec::new() }
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.trajectories += o.trajectories;
        self.increments += o.increments;
        self.margin = self.margin.min(o.margin);
        self.failures.extend(o.failures);
        self
    }

    fn finish(self, subject: String, kind: &'static str, coord: MonotoneCoord) -> Validation {
        let passed = self.failures.is_empty() && self.increments > 0 && self.margin > 0.0;
        Validation {
            subject,
            kind,
            coord,
            trajectories: self.trajectories,
            increments: self.increments,
            margin: self.margin,
            passed,
            failures: self.failures,
        }
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect()
}

/// Follows chart returns from each start while the orbit stays in
/// `{excess ≤ 0}` and checks `sign·Δc > 0` between consecutive samples (the
/// exit point, if any, is the last sample).
fn check_returns(
    field: &F64Field,
    starts: Vec<[f64; 2]>,
    expected: impl Fn(&[f64; 2]) -> i32 + Sync,
    coord: impl Fn(&[f64; 2]) -> f64 + Sync,
    excess: impl Fn(&[f64; 2]) -> f64 + Sync,
    opts: &ValidateOptions,
) -> Tally {
    let tallies: Vec<Tally> = starts
        .par_iter()
        .map(|y0| {
            let mut t = Tally::new();
            t.trajectories = 1;
            match chart_returns_within(field, *y0, opts.returns, opts.ode, &excess) {
                Ok(seq) => {
                    for w in seq.windows(2) {
                        let d = expected(&w[0]) as f64 * (coord(&w[1]) - coord(&w[0]));
                        t.increments += 1;
                        t.margin = t.margin.min(d);
                        if d <= 0.0 {
                            t.failures.push(format!("non-monotone return from ({:.6e}, {:.6e})", w[0][0], w[0][1]));
                        }
                    }
                }
                Err(e) => t.failures.push(format!("start ({:.6e}, {:.6e}): {e}", y0[0], y0[1])),
            }
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::new(), Tally::merge)
}

/// Signed excess over the box `[zl, zh] × (0, d]` (`≤ 0` inside).
fn box_excess(y: &[f64; 2], zl: f64, zh: f64, d: f64) -> f64 {
    (zl - y[0]).max(y[0] - zh).max(-y[1]).max(y[1] - d)
}

fn coord_index(c: MonotoneCoord) -> usize {
    match c {
        MonotoneCoord::Z => 0,
        MonotoneCoord::Rho => 1,
    }
}

fn chart_field(tree: &BlowupTree, chart: usize) -> F64Field {
    F64Field::chart(&tree.charts[chart].field)
}

/// Validates one box `[z_lo, z_hi] × (0, δ]` of a box family.
pub fn validate_box(tree: &BlowupTree, fam: &BoxFamily, b: &BoxCertificate, opts: &ValidateOptions) -> Result<Validation> {
    let chart = tree.find_chart(&fam.chart).ok_or_else(|| NumlabError::Input(format!("no chart {}", fam.chart)))?;
    let field = chart_field(tree, chart);
    let (zl, zh, d) = (b.z_lo_approx, b.z_hi_approx, b.delta_approx);
    let starts: Vec<[f64; 2]> =
        grid(zl, zh, opts.grid.0).into_iter().flat_map(|z| grid(0.0, d, opts.grid.1).into_iter().map(move |r| [z, r])).collect();
    let i = coord_index(b.coord);
    let t = check_returns(&field, starts, |_| b.sign, |y| y[i], |y| box_excess(y, zl, zh, d), opts);
    Ok(t.finish(format!("box {}[{}, {}]", fam.chart, b.z_lo, b.z_hi), "box", b.coord))
}

/// Validates the axis certificate of a characteristic singularity: `z` is
/// strictly monotone along trajectories in `[−r, r]² × (0, r]`.
fn validate_axis(tree: &BlowupTree, chart: usize, r: f64, sign: i32, opts: &ValidateOptions) -> Tally {
    let field = chart_field(tree, chart);
    let r = r * (1.0 - 1e-9);
    let inside = |p: &[f64; 3]| p[0].abs() <= r && p[1].abs() <= r && p[2] > 0.0 && p[2] <= r;
    let xs = grid(-r, r, opts.grid.0);
    let starts: Vec<[f64; 3]> = xs
        .iter()
        .flat_map(|&x| xs.iter().flat_map(move |&y| grid(0.0, r, opts.grid.1).into_iter().map(move |z| [x, y, z])))
        .collect();
    let tallies: Vec<Tally> = starts
        .par_iter()
        .map(|p| {
            let mut t = Tally::new();
            t.trajectories = 1;
            let tr = integrate(|_, y: &[f64; 3]| Some(field.eval(y)), *p, (0.0, opts.time), opts.ode, "point");
            for w in tr.states.windows(2) {
                if !inside(&w[0]) {
                    break;
                }
                let d = sign as f64 * (w[1][2] - w[0][2]);
                t.increments += 1;
                t.margin = t.margin.min(d);
                if d <= 0.0 {
                    t.failures.push(format!("z not monotone from ({:.4e}, {:.4e}, {:.4e})", w[0][0], w[0][1], w[0][2]));
                }
            }
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::new(), Tally::merge)
}

/// Validates a non-corner cycle's cone: the certified coordinate of
/// `P − id` has the certified sign off the curve, and points of FIX curves
/// return to themselves.
fn validate_cone(tree: &BlowupTree, e: usize, d: &CycleData, opts: &ValidateOptions) -> Result<Tally> {
    let Some(cone) = &d.cone else { return Ok(Tally::new()) };
    let el = &tree.elements[e];
    let field = chart_field(tree, el.chart);
    let w = el.omega.to_f64();
    let q = |x: &hopf3_algebra::Q| hopf3_algebra::Scalar::rational(x.clone()).to_f64();
    let (c, delta, n) = (q(&cone.c), q(&cone.delta), cone.n as i32);
    let gamma = &d.gamma;
    let off = |y: &[f64; 2]| y[0] - w - gamma.eval_f64(y[1]);
    let excess = |y: &[f64; 2]| (off(y).abs() - c * y[1].powi(n)).max(-y[1]).max(y[1] - delta);
    let k2 = match &d.verdict {
        Verdict::FixExact { k2, .. } => *k2 as i32,
        _ => 0,
    };
    let expected = |y: &[f64; 2]| cone.sign * off(y).signum().powi(k2) as i32;
    let mut starts = Vec::new();
    for rho in grid(0.0, delta, opts.grid.1) {
        for u in grid(-1.0, 1.0, opts.grid.0) {
            let y = [w + gamma.eval_f64(rho) + u * c * rho.powi(n), rho];
            if off(&y) != 0.0 {
                starts.push(y);
            }
        }
    }
    let i = coord_index(cone.coord);
    let coord = |y: &[f64; 2]| if i == 0 { off(y) } else { y[1] };
    let mut t = check_returns(&field, starts, expected, coord, excess, opts);
    if d.verdict.is_fix() {
        for rho in grid(0.0, delta, opts.grid.1) {
            let y = [w + gamma.eval_f64(rho), rho];
            match chart_return(&field, y, opts.ode) {
                Ok(p) => {
                    let res = (p[0] - y[0]).hypot(p[1] - y[1]);
                    if res > opts.fixed_tol {
                        t.failures.push(format!("curve point at ρ = {rho:.4e} moved by {res:.3e}"));
                    }
                }
                Err(err) => t.failures.push(err.to_string()),
            }
        }
    }
    Ok(t)
}

/// Validates one element certificate against the tree it was computed on.
pub fn validate_certificate(
    tree: &BlowupTree,
    cert: &ElementCertificate,
    cycles: &[(usize, CycleData)],
    opts: &ValidateOptions,
) -> Result<Validation> {
    let e = tree.find(&cert.element).ok_or_else(|| NumlabError::Input(format!("no element {}", cert.element)))?;
    let el = &tree.elements[e];
    let subject = cert.element.to_string();
    match &cert.certificate {
        CertificatePayload::Axis(a) => {
            if tree.charts[el.chart].kind != ChartKind::Point {
                return Err(NumlabError::Input(format!("{subject} is not in a point chart")));
            }
            Ok(validate_axis(tree, el.chart, a.radius_approx, a.sign, opts).finish(subject, "axis", MonotoneCoord::Z))
        }
        CertificatePayload::Monotone(m) => {
            let field = chart_field(tree, el.chart);
            let corner = tree.charts[el.chart].is_corner();
            let w = el.omega.to_f64();
            let r = m.radius_approx * (1.0 - 1e-9);
            let (zl, zh) = if corner { (0.0, r) } else { (w - r, w + r) };
            let starts: Vec<[f64; 2]> = grid(zl, zh, opts.grid.0)
                .into_iter()
                .flat_map(|z| grid(0.0, r, opts.grid.1).into_iter().map(move |rho| [z, rho]))
                .collect();
            let i = coord_index(m.coord);
            Ok(check_returns(&field, starts, |_| m.sign, |y| y[i], |y| box_excess(y, zl, zh, r), opts).finish(subject, "monotone", m.coord))
        }
        CertificatePayload::Cycle(c) => {
            let d = cycles
                .iter()
                .find(|(i, _)| *i == e)
                .map(|(_, d)| d)
                .ok_or_else(|| NumlabError::Input(format!("no Poincaré data for {subject}")))?;
            let coord = c.cone.as_ref().map(|k| k.coord).unwrap_or(MonotoneCoord::Rho);
            Ok(validate_cone(tree, e, d, opts)?.finish(subject, "cone", coord))
        }
        CertificatePayload::Failed { reason } => Err(NumlabError::Input(format!("{subject}: failed certificate ({reason})"))),
    }
}

/// Validates every box and every element certificate of a classification.
pub fn validate_classification(cls: &Classification, opts: &ValidateOptions) -> Result<Vec<Validation>> {
    let Some(tree) = &cls.tree else { return Ok(Vec::new()) };
    let mut out = Vec::new();
    for fam in &cls.report.boxes {
        for b in &fam.boxes {
            out.push(validate_box(tree, fam, b, opts)?);
        }
    }
    for c in &cls.report.certificates {
        if matches!(c.certificate, CertificatePayload::Failed { .. }) {
            continue;
        }
        if let CertificatePayload::Cycle(cc) = &c.certificate {
            if cc.cone.is_none() {
                continue;
            }
        }
        out.push(validate_certificate(tree, c, &cls.cycles, opts)?);
    }
    Ok(out)
}
