//! Floating-point laboratory for the Hopf-zero toolkit.
//!
//! The symbolic pipeline certifies statements about trajectories near the
//! singularity; this crate checks them numerically. It provides
//!
//! * [`compiled`]: `f64` compilations of ambient and chart fields,
//! * [`ode`]: an adaptive Dormand–Prince 5(4) integrator with dense output and
//!   Brent event location,
//! * [`section`]: ambient and chart Poincaré sections,
//! * [`cycles`]: seeded cycle detection on the return map,
//! * [`validate`]: sampling checks of monotonicity certificates,
//! * [`agreement`]: order fits of symbolic against numeric Poincaré maps,
//! * [`surfaces`]: distances from detected cycles to reported surfaces,
//! * [`csv_out`]: CSV emission for plotting.

pub mod agreement;
pub mod compiled;
pub mod csv_out;
pub mod cycles;
pub mod error;
pub mod ode;
pub mod section;
pub mod surfaces;
pub mod validate;

pub use compiled::F64Field;
pub use cycles::{detect_cycles, DetectOptions, Detection, NumericCycle, Region};
pub use error::{NumlabError, Result};
pub use ode::{integrate, OdeOptions, Trajectory};
pub use section::{chart_return, numeric_poincare, Section, SectionPoint};
pub use validate::{validate_certificate, validate_classification, ValidateOptions, Validation};
