//! Numerical laboratory for Dunkl harmonic analysis on the weighted real line
//! and the upper half-plane, centred on the Cesàro operator acting on
//! weighted Hardy spaces.

// `!(x > 0.0)` is used on purpose so that NaN fails the test
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cesaro;
pub mod classical;
pub mod dunkl;
pub mod error;
pub mod harness;
pub mod hardy;
pub mod poisson;
pub mod profile;
pub mod quadrature;
pub mod translation;

pub use dunkl::{NormSpec, WeightedLine};
pub use num_complex::Complex64;
pub use error::{Error, Result};
pub use profile::{Decay, Feature, Parity, Profile};
pub use quadrature::{
    build_jacobi_rule, integrate_halfline, integrate_weighted_line, JacobiRule, QuadratureSpec,
};
