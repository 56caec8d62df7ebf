//! Fractional Laplacian of radial functions by several equivalent routes,
//! with the supporting special functions, quadrature and Mellin machinery,
//! one-sided fractional calculus and the stable-density diffusion check.

pub mod error;
pub mod fraclap;
pub mod func;
pub mod mellin;
pub mod onesided;
pub mod quadrature;
pub mod sfde;
pub mod specfun;

pub use error::{Error, Result};
