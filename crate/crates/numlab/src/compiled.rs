//! Floating-point compilations of exact polynomial fields.
//!
//! Exact scalars are converted once; evaluation is then plain `f64`
//! arithmetic, which is what the integrator needs in its inner loop.

use hopf3_algebra::{Scalar, Series, TrigPoly};
use hopf3_core::blowup::{ChartField, ChartKind};
use hopf3_core::PolyField3;

/// A polynomial with `f64` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<u32>)>,
}

impl CompiledPoly {
    /// Compiles an exact series (all stored terms are kept).
    pub fn from_series(s: &Series<Scalar>) -> CompiledPoly {
        CompiledPoly { terms: s.terms().map(|(m, c)| (c.to_f64(), m.to_vec())).collect() }
    }

    /// Value at `x`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, e)| c * e.iter().zip(x).map(|(&k, &v)| pow(v, k)).product::<f64>()).sum()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when the polynomial has no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn pow(v: f64, k: u32) -> f64 {
    match k {
        0 => 1.0,
        1 => v,
        2 => v * v,
        _ => v.powi(k as i32),
    }
}

/// A series in `(z, ρ)` whose coefficients are trigonometric polynomials in `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledTrigSeries {
    /// `(cos coefficients, sin coefficients, [i, j])` for `(Σ a_k cos kθ + b_k sin kθ) z^i ρ^j`.
    terms: Vec<(Vec<f64>, Vec<f64>, [u32; 2])>,
    freq: usize,
}

impl CompiledTrigSeries {
    /// Compiles an exact trigonometric series.
    pub fn from_series(s: &Series<TrigPoly>) -> CompiledTrigSeries {
        let mut freq = 0;
        let terms = s
            .terms()
            .map(|(m, c)| {
                let n = c.len();
                freq = freq.max(n);
                let a = (0..n).map(|k| c.a(k).to_f64()).collect();
                let b = (0..n).map(|k| c.b(k).to_f64()).collect();
                (a, b, [m[0], m[1]])
            })
            .collect();
        CompiledTrigSeries { terms, freq }
    }

    fn eval_with(&self, cs: &[(f64, f64)], z: f64, rho: f64) -> f64 {
        let mut s = 0.0;
        for (a, b, [i, j]) in &self.terms {
            let mut c = 0.0;
            for (k, (ak, bk)) in a.iter().zip(b).enumerate() {
                c += ak * cs[k].0 + bk * cs[k].1;
            }
            s += c * pow(z, *i) * pow(rho, *j);
        }
        s
    }

    /// True when no coefficient depends on `θ`.
    pub fn is_autonomous(&self) -> bool {
        self.freq <= 1
    }
}

fn harmonics(theta: f64, n: usize) -> Vec<(f64, f64)> {
    (0..n.max(1)).map(|k| ((k as f64 * theta).cos(), (k as f64 * theta).sin())).collect()
}

/// A compiled vector field in one of the coordinate systems of the toolkit.
#[derive(Debug, Clone, PartialEq)]
pub enum F64Field {
    /// `(ẋ, ẏ, ż)` in Cartesian coordinates: the ambient space or a point chart.
    Cartesian([CompiledPoly; 3]),
    /// `(θ̇, ż, ρ̇)` in a cylinder chart.
    Cylinder([CompiledTrigSeries; 3]),
}

impl F64Field {
    /// Compiles an ambient field.
    pub fn ambient(f: &PolyField3) -> F64Field {
        F64Field::Cartesian(f.comps().clone().map(|s| CompiledPoly::from_series(&s)))
    }

    /// Compiles a chart field.
    pub fn chart(f: &ChartField) -> F64Field {
        match f {
            ChartField::Point(c) => F64Field::Cartesian(c.clone().map(|s| CompiledPoly::from_series(&s))),
            ChartField::Cylinder(c) => F64Field::Cylinder([
                CompiledTrigSeries::from_series(&c.b_theta),
                CompiledTrigSeries::from_series(&c.b_z),
                CompiledTrigSeries::from_series(&c.b_rho),
            ]),
        }
    }

    /// True for cylinder fields.
    pub fn is_cylinder(&self) -> bool {
        matches!(self, F64Field::Cylinder(_))
    }

    /// Field value at a point (`(x, y, z)` or `(θ, z, ρ)`).
    pub fn eval(&self, p: &[f64; 3]) -> [f64; 3] {
        match self {
            F64Field::Cartesian(c) => [c[0].eval(p), c[1].eval(p), c[2].eval(p)],
            F64Field::Cylinder(c) => {
                let n = c.iter().map(|s| s.freq).max().unwrap_or(1);
                let cs = harmonics(p[0], n);
                [0, 1, 2].map(|i| c[i].eval_with(&cs, p[1], p[2]))
            }
        }
    }

    /// `(dz/dθ, dρ/dθ)` of a cylinder field, i.e. the field with `θ` as time.
    /// `None` when `θ̇` vanishes or the field is Cartesian.
    pub fn angular(&self, theta: f64, y: &[f64; 2]) -> Option<[f64; 2]> {
        let F64Field::Cylinder(c) = self else { return None };
        let n = c.iter().map(|s| s.freq).max().unwrap_or(1);
        let cs = harmonics(theta, n);
        let bt = c[0].eval_with(&cs, y[0], y[1]);
        if bt <= 0.0 || !bt.is_finite() {
            return None;
        }
        Some([c[1].eval_with(&cs, y[0], y[1]) / bt, c[2].eval_with(&cs, y[0], y[1]) / bt])
    }
}

/// Short description of a chart kind, used as the trajectory chart tag.
pub fn chart_tag(label: &str, kind: &ChartKind) -> String {
    match kind {
        ChartKind::Point => format!("point {label}"),
        ChartKind::Cylinder { .. } => format!("cylinder {label}"),
    }
}
