//! Adaptive Dormand–Prince 5(4) integration with dense output and event location.

use crate::error::{NumlabError, Result};
use roots::{find_root_brent, SimpleConvergency};
use serde::Serialize;

/// Integrator tolerances and step policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeOptions {
    /// Relative tolerance.
    pub rtol: f64,
    /// Absolute tolerance.
    pub atol: f64,
    /// Largest allowed step.
    pub h_max: f64,
    /// Steps below `h_min_rel · max(1, |t|)` count as step-size underflow.
    pub h_min_rel: f64,
    /// Cap on accepted plus rejected steps.
    pub max_steps: usize,
    /// First trial step; chosen from the scaled sizes of `y` and `f` when absent.
    pub h_init: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-10, atol: 1e-12, h_max: 0.5, h_min_rel: 1e-14, max_steps: 200_000, h_init: None }
    }
}

impl OdeOptions {
    /// Same policy with both tolerances set to `tol`.
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions { rtol: tol, atol: tol, ..OdeOptions::default() }
    }
}

/// Step statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct OdeStats {
    /// Accepted steps.
    pub accepted: usize,
    /// Rejected steps.
    pub rejected: usize,
    /// Right-hand side evaluations.
    pub evaluations: usize,
    /// Largest scaled local error estimate over accepted steps (≤ 1 by construction).
    pub max_error: f64,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
/// Dense-output weights.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// One accepted step with its continuous extension.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep<const N: usize> {
    /// Start time.
    pub t0: f64,
    /// Signed step length.
    pub h: f64,
    /// State at `t0`.
    pub y0: [f64; N],
    /// State at `t0 + h`.
    pub y1: [f64; N],
    r: [[f64; N]; 3],
}

impl<const N: usize> DenseStep<N> {
    /// End time.
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Fourth-order interpolant at `t ∈ [t0, t0 + h]`.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut y = [0.0; N];
        for i in 0..N {
            let d = self.y1[i] - self.y0[i];
            y[i] = self.y0[i] + s * (d + s1 * (self.r[0][i] + s * (self.r[1][i] + s1 * self.r[2][i])));
        }
        y
    }
}

/// Stepper state for `ẏ = f(t, y)`.
pub struct Stepper<const N: usize, F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>> {
    f: F,
    t: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    dir: f64,
    opts: OdeOptions,
    /// Statistics so far.
    pub stats: OdeStats,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[[f64; N]; 7], a: &[f64], n: usize) -> [f64; N] {
    let mut out = *y;
    for (j, kj) in k.iter().enumerate().take(n) {
        if a[j] != 0.0 {
            for i in 0..N {
                out[i] += h * a[j] * kj[i];
            }
        }
    }
    out
}

impl<const N: usize, F: FnMut(f64, &[f64; N]) -> Option<[f64; N]>> Stepper<N, F> {
    /// Starts at `(t0, y0)` heading towards `t_dir` (only its sign relative to `t0` matters).
    pub fn new(mut f: F, t0: f64, y0: [f64; N], t_dir: f64, opts: OdeOptions) -> Result<Self> {
        let k1 = f(t0, &y0).ok_or(NumlabError::LeftDomain { t: t0 })?;
        let dir = if t_dir >= t0 { 1.0 } else { -1.0 };
        // Initial step from the scaled sizes of y and f.
        let sc = |i: usize| opts.atol + opts.rtol * y0[i].abs();
        let d0 = (0..N).map(|i| (y0[i] / sc(i)).powi(2)).sum::<f64>().sqrt() / (N as f64).sqrt();
        let d1 = (0..N).map(|i| (k1[i] / sc(i)).powi(2)).sum::<f64>().sqrt() / (N as f64).sqrt();
        let h0 = if let Some(h) = opts.h_init {
            h
        } else if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h = h0.min(opts.h_max).min((t_dir - t0).abs().max(1e-12));
        Ok(Stepper { f, t: t0, y: y0, k1, h, dir, opts, stats: OdeStats { evaluations: 1, ..OdeStats::default() } })
    }

    /// Current time.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// Current state.
    pub fn y(&self) -> [f64; N] {
        self.y
    }

    /// Takes one accepted step, never passing `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<DenseStep<N>> {
        loop {
            if self.stats.accepted + self.stats.rejected >= self.opts.max_steps {
                return Err(NumlabError::TooManySteps { t: self.t });
            }
            let remaining = (t_end - self.t).abs();
            let mut h = self.h.min(self.opts.h_max).min(remaining);
            if h <= self.opts.h_min_rel * self.t.abs().max(1.0) && remaining > h {
                return Err(NumlabError::StepUnderflow { t: self.t });
            }
            if remaining - h < 1e-12 * remaining.max(1.0) {
                h = remaining;
            }
            let hs = self.dir * h;
            let mut k = [[0.0; N]; 7];
            k[0] = self.k1;
            let mut ok = true;
            for s in 1..7 {
                let ys = axpy(&self.y, hs, &k, &A[s], s);
                match (self.f)(self.t + C[s] * hs, &ys) {
                    Some(v) if v.iter().all(|x| x.is_finite()) => k[s] = v,
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            self.stats.evaluations += 6;
            if !ok {
                self.stats.rejected += 1;
                self.h = h * 0.25;
                if self.h <= self.opts.h_min_rel * self.t.abs().max(1.0) {
                    return Err(NumlabError::LeftDomain { t: self.t });
                }
                continue;
            }
            let y1 = axpy(&self.y, hs, &k, &A[6], 6);
            let mut err = 0.0;
            for i in 0..N {
                let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * hs;
                let sc = self.opts.atol + self.opts.rtol * self.y[i].abs().max(y1[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                let mut r = [[0.0; N]; 3];
                for i in 0..N {
                    let d = y1[i] - self.y[i];
                    let b = hs * k[0][i] - d;
                    r[0][i] = b;
                    r[1][i] = d - hs * k[6][i] - b;
                    r[2][i] = hs * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>();
                }
                let step = DenseStep { t0: self.t, h: hs, y0: self.y, y1, r };
                self.t += hs;
                if h == remaining {
                    self.t = t_end;
                }
                self.y = y1;
                self.k1 = k[6];
                self.h = h * fac;
                self.stats.accepted += 1;
                self.stats.max_error = self.stats.max_error.max(err);
                return Ok(step);
            }
            self.stats.rejected += 1;
            self.h = h * fac.min(1.0);
        }
    }
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Termination {
    /// Reached the final time.
    Completed,
    /// Step size fell below the floor at time `t`.
    StepUnderflow {
        /// Time of failure.
        t: f64,
    },
    /// Left the evaluation domain at time `t`.
    LeftDomain {
        /// Time of failure.
        t: f64,
    },
}

/// Integrator metadata stored with a trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct IntegratorMeta {
    /// Method name.
    pub method: &'static str,
    /// Tolerances and step policy.
    pub options: OdeOptions,
    /// Step statistics.
    pub stats: OdeStats,
    /// How the run ended.
    pub termination: Termination,
}

/// A sampled trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory<const N: usize> {
    /// Time grid (accepted step ends, plus the initial time).
    pub times: Vec<f64>,
    /// States on the time grid.
    #[serde(skip)]
    pub states: Vec<[f64; N]>,
    /// Integrator metadata.
    pub meta: IntegratorMeta,
    /// Coordinate system of the states.
    pub chart: String,
}

/// Integrates from `t0` to `t1`, recording accepted steps. Failures near
/// singular loci end the trajectory early and are recorded, not raised.
pub fn integrate<const N: usize>(
    f: impl FnMut(f64, &[f64; N]) -> Option<[f64; N]>,
    y0: [f64; N],
    (t0, t1): (f64, f64),
    opts: OdeOptions,
    chart: &str,
) -> Trajectory<N> {
    let mut times = vec![t0];
    let mut states = vec![y0];
    let meta = |stats, termination| IntegratorMeta { method: "dormand-prince 5(4)", options: opts, stats, termination };
    let mut st = match Stepper::new(f, t0, y0, t1, opts) {
        Ok(s) => s,
        Err(_) => {
            return Trajectory { times, states, meta: meta(OdeStats::default(), Termination::LeftDomain { t: t0 }), chart: chart.into() };
        }
    };
    let termination = loop {
        if st.t() == t1 {
            break Termination::Completed;
        }
        match st.step(t1) {
            Ok(s) => {
                times.push(s.t1());
                states.push(s.y1);
            }
            Err(NumlabError::StepUnderflow { t }) | Err(NumlabError::TooManySteps { t }) => {
                break Termination::StepUnderflow { t }
            }
            Err(_) => break Termination::LeftDomain { t: st.t() },
        }
    };
    Trajectory { times, states, meta: meta(st.stats, termination), chart: chart.into() }
}

/// A located event.
#[derive(Debug, Clone, Copy)]
pub struct Event<const N: usize> {
    /// Event time.
    pub t: f64,
    /// State at the event.
    pub y: [f64; N],
}

/// Integrates until `g` crosses zero in direction `dir` (`+1` upward, `−1`
/// downward, `0` either) after time `t0 + t_ignore`, or until `t_max`.
/// Crossings are bracketed on accepted steps and polished by Brent's method on
/// the dense output.
pub fn integrate_to_event<const N: usize>(
    f: impl FnMut(f64, &[f64; N]) -> Option<[f64; N]>,
    y0: [f64; N],
    t0: f64,
    t_max: f64,
    t_ignore: f64,
    g: impl Fn(&[f64; N]) -> f64,
    dir: i32,
    opts: OdeOptions,
) -> Result<(Option<Event<N>>, OdeStats)> {
    let mut st = Stepper::new(f, t0, y0, t_max, opts)?;
    while st.t() != t_max {
        let s = st.step(t_max)?;
        if (s.t1() - t0).abs() <= t_ignore {
            continue;
        }
        let (ga, gb) = (g(&s.y0), g(&s.y1));
        let crosses = match dir {
            d if d > 0 => ga < 0.0 && gb >= 0.0,
            d if d < 0 => ga > 0.0 && gb <= 0.0,
            _ => ga * gb < 0.0 || (gb == 0.0 && ga != 0.0),
        };
        if !crosses {
            continue;
        }
        let lo = if (s.t0 - t0).abs() < t_ignore { t0 + t_ignore * s.h.signum() } else { s.t0 };
        if g(&s.eval(lo)) * gb > 0.0 {
            continue;
        }
        let mut conv = SimpleConvergency { eps: 1e-15 * s.t1().abs().max(1.0), max_iter: 200 };
        let t = find_root_brent(lo, s.t1(), |t| g(&s.eval(t)), &mut conv).unwrap_or(s.t1());
        return Ok((Some(Event { t, y: s.eval(t) }), st.stats));
    }
    Ok((None, st.stats))
}
