//! Agreement between symbolic Poincaré jets and numerically computed returns.

use crate::compiled::F64Field;
use crate::error::{NumlabError, Result};
use crate::ode::OdeOptions;
use crate::section::chart_return;
use hopf3_algebra::{PiPoly, Series};
use hopf3_core::blowup::BlowupTree;
use hopf3_core::poincare::PoincareJet;
use serde::Serialize;

/// Floating-point form of a jet component.
fn compile(s: &Series<PiPoly>) -> Vec<(f64, [i32; 2])> {
    s.terms().map(|(m, c)| (c.to_f64(), [m[0] as i32, m[1] as i32])).collect()
}

fn eval(t: &[(f64, [i32; 2])], z: f64, rho: f64) -> f64 {
    t.iter().map(|(c, [i, j])| c * z.powi(*i) * rho.powi(*j)).sum()
}

/// One mesh point of an order fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitSample {
    /// `ρ`.
    pub rho: f64,
    /// `max |P_num − P_sym|` over the mesh directions at this `ρ`.
    pub error: f64,
}

/// Log-log fit of the symbolic/numeric discrepancy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderFit {
    /// Cycle label.
    pub element: String,
    /// Order of the symbolic jet.
    pub n_max: u32,
    /// Fitted slope of `log error` against `log ρ`.
    pub slope: f64,
    /// Fitted intercept.
    pub intercept: f64,
    /// Mesh data.
    pub samples: Vec<FitSample>,
}

/// Compares the jet `jet` of the chart Poincaré map at the element `e` (in
/// coordinates translated to the cycle) with numerical returns at the mesh
/// points `(ω + cρ, ρ)`, `c ∈ directions`, and fits the slope.
pub fn poincare_order_fit(
    tree: &BlowupTree,
    e: usize,
    jet: &PoincareJet,
    rhos: &[f64],
    directions: &[f64],
    ode: OdeOptions,
) -> Result<OrderFit> {
    let el = tree.elements.get(e).ok_or_else(|| NumlabError::Input(format!("no element {e}")))?;
    let field = F64Field::chart(&tree.charts[el.chart].field);
    let w = el.omega.to_f64();
    let (pz, pr) = (compile(&jet.z), compile(&jet.rho));
    let mut samples = Vec::new();
    for &rho in rhos {
        let mut err: f64 = 0.0;
        for &c in directions {
            let z = c * rho;
            let p = chart_return(&field, [w + z, rho], ode)?;
            err = err.max((p[0] - w - eval(&pz, z, rho)).abs()).max((p[1] - eval(&pr, z, rho)).abs());
        }
        samples.push(FitSample { rho, error: err });
    }
    let pts: Vec<(f64, f64)> = samples.iter().filter(|s| s.error > 0.0).map(|s| (s.rho.ln(), s.error.ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return Err(NumlabError::Input("too few nonzero discrepancies for a fit".into()));
    }
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(OrderFit { element: el.label.to_string(), n_max: jet.order, slope, intercept: my - slope * mx, samples })
}

/// Geometric mesh of `n` radii between `lo` and `hi`.
pub fn geometric_mesh(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n.max(2) - 1) as f64)).collect()
}
