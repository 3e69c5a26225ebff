//! Shared numerical kernels: composite quadrature, periodic quadrature on the
//! circle, spline fitting and differentiation, bracketed root refinement and a
//! fixed-step Runge-Kutta propagator for second-order linear problems.
//!
//! Everything here is a pure function of its inputs and safe to call
//! concurrently.

mod grid;
mod ode;
mod quad;
mod roots;
mod spline;

pub use grid::UniformGrid;
pub use ode::{integrate_second_order, SweepFrom};
pub use quad::{
    cumulative_integral, interior_theta_grid, newton_cotes_6, periodic_trapezoid, Direction,
};
pub use roots::bracketed_roots;
pub use spline::{fit_spline, SplineModel, SplineOrder};

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Scalar type usable in the quadrature and ODE kernels (real or complex).
pub trait GridScalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Mul<Self, Output = Self>
{
    const ZERO: Self;
    fn finite(&self) -> bool;
}

impl GridScalar for f64 {
    const ZERO: f64 = 0.0;
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl GridScalar for Complex64 {
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}
