//! Numerical cycle detection by Newton-type refinement on the return map.

use crate::compiled::F64Field;
use crate::ode::OdeOptions;
use crate::section::{first_return, Section};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

/// Sampling region: the ball `|p| ≤ radius` minus the tube of section
/// amplitude below `min_amplitude` around the rotation axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    /// Radius of the ball.
    pub radius: f64,
    /// Smallest section amplitude `X` accepted for a cycle.
    pub min_amplitude: f64,
}

impl Region {
    /// The ball of radius `r` with amplitude floor `r/10`. Closer to the
    /// singular point the drift of non-periodic orbits per turn falls below
    /// the residual tolerance, so detection is meaningless there.
    pub fn ball(r: f64) -> Region {
        Region { radius: r, min_amplitude: r * 0.1 }
    }

    fn admits(&self, s: &[f64; 2]) -> bool {
        s[0] >= self.min_amplitude && s[0].hypot(s[1]) <= self.radius
    }
}

/// Detection settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectOptions {
    /// Number of seeds.
    pub seeds: usize,
    /// RNG seed.
    pub seed: u64,
    /// Return-map residual below which a point is a cycle.
    pub residual_tol: f64,
    /// Cycles closer than this (in section coordinates) are merged.
    pub cluster_radius: f64,
    /// Refinement iterations per seed.
    pub max_iter: usize,
    /// Integrator settings.
    pub ode: OdeOptions,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            seeds: 1000,
            seed: 0,
            residual_tol: 1e-9,
            cluster_radius: 1e-6,
            max_iter: 30,
            ode: OdeOptions { rtol: 1e-12, atol: 1e-14, ..OdeOptions::default() },
        }
    }
}

/// A numerically detected cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericCycle {
    /// Return time.
    pub period: f64,
    /// Ambient point on the section.
    pub section_point: [f64; 3],
    /// Section coordinates `(X, Z)`.
    pub section_coords: [f64; 2],
    /// `|P(s) − s|`.
    pub residual: f64,
    /// Eigenvalues of the return-map Jacobian as `(re, im)` pairs.
    pub floquet: [[f64; 2]; 2],
    /// Index of the first seed that converged to it.
    pub seed: usize,
    /// Number of seeds that converged to it.
    pub hits: usize,
}

/// Outcome of a detection run.
#[derive(Debug, Clone, Serialize)]
pub struct Detection {
    /// Seeds tried.
    pub seeds: usize,
    /// Seeds whose first return lay in the region.
    pub admitted: usize,
    /// Seeds that converged to a cycle.
    pub converged: usize,
    /// Distinct cycles, sorted by section coordinates.
    pub cycles: Vec<NumericCycle>,
}

struct ReturnMap<'a> {
    field: &'a F64Field,
    section: &'a Section,
    ode: OdeOptions,
}

impl ReturnMap<'_> {
    fn eval(&self, s: [f64; 2]) -> Option<([f64; 2], f64)> {
        let p = first_return(self.field, self.section, self.section.point(s), self.ode, 20.0 * TAU).ok()?;
        Some((p.coords, p.t))
    }

    fn jacobian(&self, s: [f64; 2]) -> Option<[[f64; 2]; 2]> {
        let mut j = [[0.0; 2]; 2];
        for k in 0..2 {
            let h = 1e-6 * s[k].abs().max(1e-2);
            let (mut a, mut b) = (s, s);
            a[k] += h;
            b[k] -= h;
            let (pa, _) = self.eval(a)?;
            let (pb, _) = self.eval(b)?;
            for i in 0..2 {
                j[i][k] = (pa[i] - pb[i]) / (2.0 * h);
            }
        }
        Some(j)
    }
}

fn eig2(j: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr / 4.0 - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        [[tr / 2.0 + r, 0.0], [tr / 2.0 - r, 0.0]]
    } else {
        let r = (-disc).sqrt();
        [[tr / 2.0, r], [tr / 2.0, -r]]
    }
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Levenberg–Marquardt on `F(s) = P(s) − s` (robust when the cycles form a
/// continuum and `DF` is singular).
fn refine(map: &ReturnMap, s0: [f64; 2], region: &Region, opts: &DetectOptions, seed: usize) -> Option<NumericCycle> {
    let mut s = s0;
    let (p0, mut period) = map.eval(s)?;
    let mut f = [p0[0] - s[0], p0[1] - s[1]];
    let mut mu = 1e-3;
    // Once below tolerance, a few more iterations polish the point.
    let mut polish = 0;
    for _ in 0..opts.max_iter {
        if norm(f) < opts.residual_tol {
            polish += 1;
            if polish > 4 {
                break;
            }
        }
        let dp = map.jacobian(s)?;
        let j = [[dp[0][0] - 1.0, dp[0][1]], [dp[1][0], dp[1][1] - 1.0]];
        let jtj = [
            [j[0][0] * j[0][0] + j[1][0] * j[1][0], j[0][0] * j[0][1] + j[1][0] * j[1][1]],
            [j[0][1] * j[0][0] + j[1][1] * j[1][0], j[0][1] * j[0][1] + j[1][1] * j[1][1]],
        ];
        let g = [j[0][0] * f[0] + j[1][0] * f[1], j[0][1] * f[0] + j[1][1] * f[1]];
        let scale = jtj[0][0].max(jtj[1][1]).max(1e-300);
        let mut improved = false;
        for _ in 0..12 {
            let a = [[jtj[0][0] + mu * scale, jtj[0][1]], [jtj[1][0], jtj[1][1] + mu * scale]];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            let step = [-(a[1][1] * g[0] - a[0][1] * g[1]) / det, -(a[0][0] * g[1] - a[1][0] * g[0]) / det];
            let t = [s[0] + step[0], s[1] + step[1]];
            if !region.admits(&t) {
                mu *= 4.0;
                continue;
            }
            if let Some((pt, per)) = map.eval(t) {
                let ft = [pt[0] - t[0], pt[1] - t[1]];
                if norm(ft) < norm(f) {
                    (s, period, f) = (t, per, ft);
                    mu = (mu / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
            }
            mu *= 4.0;
        }
        if !improved {
            if norm(f) < opts.residual_tol {
                break;
            }
            return None;
        }
    }
    if norm(f) >= opts.residual_tol || !region.admits(&s) || period <= 0.0 {
        return None;
    }
    let floquet = eig2(&map.jacobian(s)?);
    Some(NumericCycle {
        period,
        section_point: map.section.point(s),
        section_coords: s,
        residual: norm(f),
        floquet,
        seed,
        hits: 1,
    })
}

/// Seed points: uniform in the ball of the region.
pub fn seed_points(region: &Region, n: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p: [f64; 3] = [0, 1, 2].map(|_| rng.random_range(-1.0..1.0));
        let r2: f64 = p.iter().map(|x| x * x).sum();
        if r2 <= 1.0 && r2 > 0.0 {
            out.push(p.map(|x| x * region.radius));
        }
    }
    out
}

/// Seeds the region, flows each seed to the section, refines on the return
/// map and clusters the converged points. Deterministic for fixed options.
pub fn detect_cycles(field: &F64Field, section: &Section, region: &Region, opts: &DetectOptions) -> Detection {
    let seeds = seed_points(region, opts.seeds, opts.seed);
    let map = ReturnMap { field, section, ode: opts.ode };
    let results: Vec<(bool, Option<NumericCycle>)> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let Ok(p0) = first_return(field, section, *x, opts.ode, 20.0 * TAU) else { return (false, None) };
            if !region.admits(&p0.coords) {
                return (false, None);
            }
            (true, refine(&map, p0.coords, region, opts, i))
        })
        .collect();
    let admitted = results.iter().filter(|r| r.0).count();
    let found: Vec<NumericCycle> = results.into_iter().filter_map(|r| r.1).collect();
    let converged = found.len();
    let mut cycles: Vec<NumericCycle> = Vec::new();
    for c in found {
        match cycles.iter_mut().find(|d| {
            norm([d.section_coords[0] - c.section_coords[0], d.section_coords[1] - c.section_coords[1]]) < opts.cluster_radius
        }) {
            Some(d) => d.hits += 1,
            None => cycles.push(c),
        }
    }
    cycles.sort_by(|a, b| a.section_coords.partial_cmp(&b.section_coords).unwrap_or(std::cmp::Ordering::Equal));
    Detection { seeds: opts.seeds, admitted, converged, cycles }
}
