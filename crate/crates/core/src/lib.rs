//! Symbolic analysis of Hopf-zero singularities in R³: rotational normal
//! forms, admissible blow-ups in explicit charts, planar reduction,
//! Poincaré-map jets along invariant circles and the final classification
//! of local cycles.

#![warn(missing_docs)]

pub mod bipoly;
pub mod classifier;
pub mod blowup;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod normal_form;
pub mod planar;
pub mod poincare;

pub use error::{CoreError, Result};
pub use field::{FieldSpec, PolyField3};
