//! Magnitude of finite metric spaces and numerical verification of the
//! Hadamard-product and Löwner-order inequalities that bound it.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Dense kernels index several arrays per loop.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod gen;
pub mod lab;
pub mod magnitude;
pub mod metric;
mod par;
pub mod rng;
pub mod symmat;

pub use error::{Error, Result};
pub use magnitude::{magnitude, MagnitudeCurve, MagnitudeResult, SpaceClassification};
pub use metric::{FiniteMetricSpace, Norm, PointCloud, ValidationReport};
pub use symmat::{LoewnerVerdict, SymMatrix};
