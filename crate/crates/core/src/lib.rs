//! Inverse scattering transform solver for the Korteweg-de Vries equation on
//! the whole line.
//!
//! The Cauchy problem `u_t - 6 u u_x + u_xxx = 0`, `u(x, 0) = q(x)` is solved
//! without time stepping:
//!
//! 1. **direct scattering** ([`jost`], [`scatter`]): a recurrent integration
//!    procedure turns two Cauchy solves at spectral parameter `i/2` into the
//!    Fourier-Laguerre coefficient tables of the transformation-operator
//!    kernels, from which eigenvalues, norming constants and reflection
//!    coefficients are read off as truncated power series on the unit disk;
//! 2. **evolution** ([`scatter::ScatteringData::evolve`]): scattering data at
//!    time `t` is the `t = 0` data multiplied by explicit exponential factors;
//! 3. **inverse scattering** ([`glm`]): a small dense linear system per grid
//!    point yields the first series coefficient, whose two derivatives
//!    reproduce the potential — that recovered potential is `u(x, t)`.
//!
//! [`pipeline`] wires the three steps together, [`acceptance`] bundles the
//! self-checks used by the `validate` subcommand of the CLI.

pub mod acceptance;
pub mod error;
pub mod glm;
pub mod jost;
pub mod numerics;
pub mod pipeline;
pub mod potential;
pub mod scatter;

pub use error::{Error, Result};
