//! Axisymmetric Helfrich-Canham membranes: profile geometry, shape-equation
//! residuals, energy quadrature, exact algebra for Cassini ovals, and
//! piecewise constant-mean-curvature red blood cell profiles.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

/// Float methods come from `num_traits::Float` (libm) under `no_std`; when
/// `std` is linked into the build its inherent methods take over.
macro_rules! use_float {
    () => {
        #[allow(unused_imports)]
        use num_traits::Float;
    };
}

pub mod cmc;
pub mod functional;
pub mod geometry;
pub mod quadrature;
pub mod radical_algebra;
pub mod shape_residual;

pub use geometry::{Branch, CassiniOval, CurvaturePoint, Interval, Jet, ProfileCurve, SignConvention, SphereProfile};
pub use shape_residual::{MembraneParams, ResidualForm, ResidualReport, SphereOrientation};
