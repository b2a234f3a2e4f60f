//! Shared numerical machinery: adaptive quadrature and monotone cubic
//! interpolation. Matrix exponentials come from nalgebra's
//! scaling-and-squaring implementation.

pub mod interp;
pub mod quad;

pub use interp::MonotoneCubic;
pub use quad::{integrate, Quadrature};
