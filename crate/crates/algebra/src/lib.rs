//! Exact algebra for the Hopf-zero toolkit: rational and number-field
//! scalars, interval enclosures, univariate polynomials with certified real
//! root isolation, polynomials in π, trigonometric polynomials in an angle
//! and sparse truncated multivariate series with trust-order bookkeeping.

#![warn(missing_docs)]

pub mod complex;
pub mod error;
pub mod interval;
pub mod pi;
pub mod qpoly;
pub mod ring;
pub mod roots;
pub mod scalar;
pub mod series;
pub mod trig;
pub mod upoly;

pub use complex::Cx;
pub use error::{AlgebraError, Result};
pub use interval::Interval;
pub use pi::PiPoly;
pub use qpoly::Q;
pub use ring::{Field, Ring};
pub use scalar::{NumberField, Scalar};
pub use series::{var_list, Domain, JetOrder, Mono, Series, Trunc, Var, VarList};
pub use trig::{ThetaTrig, TrigPoly};
pub use upoly::UPoly;
