//! Distances from numerically detected cycles to the reported surfaces.

use crate::cycles::NumericCycle;
use hopf3_core::classifier::Classification;
use hopf3_core::poincare::Verdict;
use serde::Serialize;
use std::f64::consts::TAU;

/// A reported FIX surface as a parametrized map `(θ, ρ) ↦ ambient point`.
pub struct SurfaceMap<'a> {
    cls: &'a Classification,
    element: usize,
    /// Largest chart `ρ` searched.
    pub rho_max: f64,
}

impl<'a> SurfaceMap<'a> {
    /// Surfaces of every FIX cycle of a classification.
    pub fn all(cls: &'a Classification, rho_max: f64) -> Vec<SurfaceMap<'a>> {
        cls.cycles
            .iter()
            .filter(|(_, d)| !matches!(d.verdict, Verdict::NonFix { .. }))
            .map(|(e, _)| SurfaceMap { cls, element: *e, rho_max })
            .collect()
    }

    /// Label of the generating cycle.
    pub fn label(&self) -> String {
        self.cls.tree.as_ref().map(|t| t.elements[self.element].label.to_string()).unwrap_or_default()
    }

    /// Ambient point with parameters `(θ, ρ)`.
    pub fn point(&self, theta: f64, rho: f64) -> [f64; 3] {
        let tree = self.cls.tree.as_ref().expect("surfaces come from a resolved tree");
        let el = &tree.elements[self.element];
        let gamma = &self.cls.cycles.iter().find(|(e, _)| *e == self.element).expect("cycle data").1.gamma;
        let z = el.omega.to_f64() + gamma.eval_f64(rho);
        self.cls.ambient.apply(tree.chart_to_ambient(el.chart, [theta, z, rho]))
    }

    /// Euclidean distance from `p` to the sampled parameter range.
    pub fn distance(&self, p: [f64; 3]) -> f64 {
        let d = |th: f64, r: f64| {
            let q = self.point(th, r);
            ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2) + (q[2] - p[2]).powi(2)).sqrt()
        };
        let (nt, nr) = (72, 200);
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..nt {
            let th = TAU * i as f64 / nt as f64;
            for j in 1..=nr {
                let r = self.rho_max * j as f64 / nr as f64;
                let v = d(th, r);
                if v < best.0 {
                    best = (v, th, r);
                }
            }
        }
        // Compass search around the best grid point.
        let (mut v, mut th, mut r) = best;
        let (mut st, mut sr) = (TAU / nt as f64, self.rho_max / nr as f64);
        for _ in 0..200 {
            let mut moved = false;
            for (a, b) in [(st, 0.0), (-st, 0.0), (0.0, sr), (0.0, -sr)] {
                let (t2, r2) = (th + a, (r + b).max(0.0));
                let w = d(t2, r2);
                if w < v {
                    (v, th, r, moved) = (w, t2, r2, true);
                }
            }
            if !moved {
                st /= 2.0;
                sr /= 2.0;
                if st < 1e-14 && sr < 1e-14 {
                    break;
                }
            }
        }
        v
    }
}

/// Distance of a detected cycle to the nearest reported surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleMatch {
    /// Section point of the cycle.
    pub point: [f64; 3],
    /// Nearest surface (generating cycle label), if any surface exists.
    pub surface: Option<String>,
    /// Distance to it (`+∞` without surfaces).
    pub distance: f64,
}

/// Matches every detected cycle to its nearest reported surface.
pub fn match_cycles(surfaces: &[SurfaceMap], cycles: &[NumericCycle]) -> Vec<CycleMatch> {
    cycles
        .iter()
        .map(|c| {
            let mut m = CycleMatch { point: c.section_point, surface: None, distance: f64::INFINITY };
            for s in surfaces {
                let d = s.distance(c.section_point);
                if d < m.distance {
                    m = CycleMatch { point: c.section_point, surface: Some(s.label()), distance: d };
                }
            }
            m
        })
        .collect()
}
