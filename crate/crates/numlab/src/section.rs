//! Poincaré sections: returns to `{θ = 0}` in the ambient space and in cylinder charts.

use crate::compiled::F64Field;
use crate::error::{NumlabError, Result};
use crate::ode::{integrate_to_event, OdeOptions, Stepper};
use serde::Serialize;
use std::f64::consts::TAU;

/// The half-plane `{Y = 0, X > 0}` in linear coordinates `(X, Y, Z)` adapted to
/// the rotation of the linear part (`p = change · (X, Y, Z)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section {
    change: [[f64; 3]; 3],
    inverse: [[f64; 3]; 3],
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl Section {
    /// The half-plane `{y = 0, x > 0}`.
    pub fn standard() -> Section {
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        Section { change: id, inverse: id }
    }

    /// The section adapted to a linear change of coordinates (columns = basis vectors).
    pub fn from_change(change: [[f64; 3]; 3]) -> Result<Section> {
        let d = det3(&change);
        if d.abs() < 1e-300 {
            return Err(NumlabError::Input("singular linear change".into()));
        }
        let mut inverse = [[0.0; 3]; 3];
        for (i, row) in inverse.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                *v = (change[r0][c0] * change[r1][c1] - change[r0][c1] * change[r1][c0]) / d;
            }
        }
        Ok(Section { change, inverse })
    }

    fn lin(&self, p: &[f64; 3], row: usize) -> f64 {
        (0..3).map(|j| self.inverse[row][j] * p[j]).sum()
    }

    /// Adapted coordinates `(X, Y, Z)` of an ambient point.
    pub fn adapted(&self, p: &[f64; 3]) -> [f64; 3] {
        [self.lin(p, 0), self.lin(p, 1), self.lin(p, 2)]
    }

    /// Section coordinates `(X, Z)`.
    pub fn coords(&self, p: &[f64; 3]) -> [f64; 2] {
        [self.lin(p, 0), self.lin(p, 2)]
    }

    /// Ambient point with section coordinates `s`.
    pub fn point(&self, s: [f64; 2]) -> [f64; 3] {
        [0, 1, 2].map(|i| self.change[i][0] * s[0] + self.change[i][2] * s[1])
    }
}

/// A crossing of the section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionPoint {
    /// Time since the start of the orbit.
    pub t: f64,
    /// Ambient point.
    pub point: [f64; 3],
    /// Section coordinates `(X, Z)`.
    pub coords: [f64; 2],
}

/// Next crossing of `{Y = 0, X > 0}` (in either direction of rotation) after
/// leaving `x0`, within `t_max`.
pub fn first_return(field: &F64Field, section: &Section, x0: [f64; 3], opts: OdeOptions, t_max: f64) -> Result<SectionPoint> {
    let F64Field::Cartesian(_) = field else {
        return Err(NumlabError::Input("ambient sections need a Cartesian field".into()));
    };
    let rhs = |_: f64, y: &[f64; 3]| Some(field.eval(y));
    let (mut t, mut y) = (0.0, x0);
    for _ in 0..8 {
        let (ev, _) = integrate_to_event(rhs, y, t, t_max, 1e-3, |p| section.lin(p, 1), 0, opts)?;
        let ev = ev.ok_or(NumlabError::NoReturn(t_max))?;
        if section.lin(&ev.y, 0) > 0.0 {
            return Ok(SectionPoint { t: ev.t, point: ev.y, coords: section.coords(&ev.y) });
        }
        t = ev.t;
        y = ev.y;
    }
    Err(NumlabError::NoReturn(t_max))
}

/// Successive section points of the orbit of `x0`.
#[derive(Debug, Clone, Serialize)]
pub struct PoincareSequence {
    /// Crossings, in order.
    pub points: Vec<SectionPoint>,
    /// Why the sequence stopped early, if it did.
    pub stopped: Option<String>,
}

/// Iterates the ambient return map `n_iter` times starting from `x0`.
pub fn numeric_poincare(field: &F64Field, section: &Section, x0: [f64; 3], n_iter: usize, opts: OdeOptions) -> PoincareSequence {
    let mut points = Vec::new();
    let (mut x, mut t0) = (x0, 0.0);
    for _ in 0..n_iter {
        match first_return(field, section, x, opts, 20.0 * TAU) {
            Ok(p) => {
                let p = SectionPoint { t: t0 + p.t, ..p };
                t0 = p.t;
                x = p.point;
                points.push(p);
            }
            Err(e) => return PoincareSequence { points, stopped: Some(e.to_string()) },
        }
    }
    PoincareSequence { points, stopped: None }
}

/// One full turn `θ: 0 → 2π` of a cylinder chart field, using `θ` as time:
/// the chart Poincaré map `(z, ρ) ↦ P(z, ρ)`.
pub fn chart_return(field: &F64Field, y: [f64; 2], opts: OdeOptions) -> Result<[f64; 2]> {
    if !field.is_cylinder() {
        return Err(NumlabError::Input("chart returns need a cylinder field".into()));
    }
    let rhs = |th: f64, y: &[f64; 2]| field.angular(th, y);
    if rhs(0.0, &y).is_none() {
        return Err(NumlabError::NotTransverse(format!("θ̇ ≤ 0 at (z, ρ) = ({}, {})", y[0], y[1])));
    }
    let mut st = Stepper::new(rhs, 0.0, y, TAU, opts)?;
    while st.t() != TAU {
        st.step(TAU)?;
    }
    Ok(st.y())
}

/// Result of following a chart orbit for one turn inside a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TurnOutcome {
    /// The orbit stayed inside and returned to `{θ = 0}`.
    Returned([f64; 2]),
    /// The orbit reached the boundary at angle `theta`, at the point `y`.
    Exited {
        /// Exit angle.
        theta: f64,
        /// Exit point.
        y: [f64; 2],
    },
}

/// One turn of a cylinder chart field inside the region `{excess ≤ 0}`. The
/// first boundary crossing is located by Brent's method on the dense output.
pub fn chart_turn_within(
    field: &F64Field,
    y: [f64; 2],
    opts: OdeOptions,
    excess: &dyn Fn(&[f64; 2]) -> f64,
) -> Result<TurnOutcome> {
    let rhs = |th: f64, y: &[f64; 2]| field.angular(th, y);
    if rhs(0.0, &y).is_none() {
        return Err(NumlabError::NotTransverse(format!("θ̇ ≤ 0 at (z, ρ) = ({}, {})", y[0], y[1])));
    }
    let mut st = Stepper::new(rhs, 0.0, y, TAU, opts)?;
    while st.t() != TAU {
        let s = st.step(TAU)?;
        if excess(&s.y1) > 0.0 {
            let mut conv = roots::SimpleConvergency { eps: 1e-14, max_iter: 200 };
            let th = roots::find_root_brent(s.t0, s.t1(), |t| excess(&s.eval(t)), &mut conv).unwrap_or(s.t1());
            return Ok(TurnOutcome::Exited { theta: th, y: s.eval(th) });
        }
    }
    Ok(TurnOutcome::Returned(st.y()))
}

/// Returns of the orbit of `y0` while it stays in `{excess ≤ 0}`, at most
/// `n` of them; if the orbit leaves, the exit point ends the sequence.
pub fn chart_returns_within(
    field: &F64Field,
    y0: [f64; 2],
    n: usize,
    opts: OdeOptions,
    excess: &dyn Fn(&[f64; 2]) -> f64,
) -> Result<Vec<[f64; 2]>> {
    let mut seq = vec![y0];
    let mut y = y0;
    for _ in 0..n {
        match chart_turn_within(field, y, opts, excess)? {
            TurnOutcome::Returned(p) => {
                seq.push(p);
                y = p;
            }
            TurnOutcome::Exited { y: p, .. } => {
                seq.push(p);
                break;
            }
        }
    }
    Ok(seq)
}
