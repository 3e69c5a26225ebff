//! The initial datum `q(x)`: sampled representation on a symmetric grid,
//! integrability check, and the tail integrals used throughout the direct
//! problem.

use crate::error::{Error, Result};
use crate::numerics::{
    cumulative_integral, fit_spline, newton_cotes_6, Direction, SplineOrder, UniformGrid,
};
use std::sync::Arc;

/// Real-valued potential truncated to `[-b, b]`; outside the box it is treated
/// as exactly zero, and the endpoint magnitude makes the truncation error
/// visible.
#[derive(Clone)]
pub struct Potential {
    grid: UniformGrid,
    half_width: f64,
    samples: Vec<f64>,
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    tail_magnitude: f64,
}

impl std::fmt::Debug for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Potential")
            .field("half_width", &self.half_width)
            .field("count", &self.grid.count())
            .field("tail_magnitude", &self.tail_magnitude)
            .finish()
    }
}

impl Potential {
    /// Sample `evaluator` on a symmetric grid of `node_count` nodes over
    /// `[-b, b]`. The count must be odd (so that the origin is a node) and at
    /// least 101.
    pub fn build(
        evaluator: impl Fn(f64) -> f64 + Send + Sync + 'static,
        b: f64,
        node_count: usize,
    ) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidInput(format!("half-width b = {b} must be positive")));
        }
        if b > 300.0 {
            return Err(Error::InvalidInput(format!(
                "half-width b = {b} too large: exp(b) products leave f64 range"
            )));
        }
        if node_count < 101 {
            return Err(Error::InvalidInput(format!(
                "need at least 101 nodes, got {node_count}"
            )));
        }
        if node_count % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "node count {node_count} must be odd so that x = 0 is a grid node"
            )));
        }
        let grid = UniformGrid::new(-b, b, node_count)?;
        let mut samples = Vec::with_capacity(node_count);
        for i in 0..node_count {
            let x = grid.node(i);
            let v = evaluator(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample {
                    x,
                    context: "potential sample".into(),
                });
            }
            samples.push(v);
        }
        let tail_magnitude = samples[0].abs().max(samples[node_count - 1].abs());
        Ok(Potential {
            grid,
            half_width: b,
            samples,
            evaluator: Arc::new(evaluator),
            tail_magnitude,
        })
    }

    /// The zero potential.
    pub fn zero(b: f64, node_count: usize) -> Result<Self> {
        Self::build(|_| 0.0, b, node_count)
    }

    /// `q(x) = x exp(-x^2)`.
    pub fn gaussian_odd(b: f64, node_count: usize) -> Result<Self> {
        Self::build(|x| x * (-x * x).exp(), b, node_count)
    }

    /// The reflectionless one-soliton initial datum
    /// `q(x) = -(c/2) sech^2(sqrt(c) x / 2)`.
    pub fn soliton(c: f64, b: f64, node_count: usize) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidInput(format!("soliton speed c = {c} must be positive")));
        }
        Self::build(
            move |x| {
                let s = 1.0 / (c.sqrt() * x / 2.0).cosh();
                -c / 2.0 * s * s
            },
            b,
            node_count,
        )
    }

    /// Piecewise datum `exp(x) cos(4x)` for `x < 0`, `exp(-x) J0(2x)` for
    /// `x > 0`; continuous with a jump in the first derivative at the origin.
    pub fn piecewise_bessel(b: f64, node_count: usize) -> Result<Self> {
        Self::build(
            |x| {
                if x < 0.0 {
                    x.exp() * (4.0 * x).cos()
                } else {
                    (-x).exp() * bessel_j0(2.0 * x)
                }
            },
            b,
            node_count,
        )
    }

    /// Potential read from tabulated `(x, q)` pairs, interpolated by a
    /// quintic spline inside the table span and zero outside it.
    pub fn from_table(xs: &[f64], ys: &[f64], b: f64, node_count: usize) -> Result<Self> {
        let spline = fit_spline(xs, ys, SplineOrder::Quintic)?;
        let (lo, hi) = spline.domain();
        Self::build(
            move |x| {
                if x < lo || x > hi {
                    0.0
                } else {
                    spline.eval(x)
                }
            },
            b,
            node_count,
        )
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Largest sampled magnitude at the truncation endpoints.
    pub fn tail_magnitude(&self) -> f64 {
        self.tail_magnitude
    }

    /// Value of the truncated potential (exactly zero outside `[-b, b]`).
    pub fn eval(&self, x: f64) -> f64 {
        if x.abs() > self.half_width {
            0.0
        } else {
            (self.evaluator)(x)
        }
    }

    /// Estimate of `integral (1 + |x|)^alpha |q|` with a geometric tail
    /// extrapolation beyond the truncation box; flags divergence when the
    /// tail estimate is not dominated by the interior part.
    pub fn check_faddeev(&self, alpha: f64) -> FaddeevReport {
        let weighted: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .zip(&self.samples)
            .map(|(&x, &q)| (1.0 + x.abs()).powf(alpha) * q.abs())
            .collect();
        let integral = newton_cotes_6(&weighted, &self.grid).expect("finite by construction");

        // model the tail as |q(x)| ~ |q(b)| exp(-r (x - b)) with the rate read
        // off the last decade of samples
        let n = self.grid.count();
        let lag = (n / 20).max(2);
        let h = self.grid.step();
        let mut tail = 0.0f64;
        for (edge, inner) in [(n - 1, n - 1 - lag), (0, lag)] {
            let qe = self.samples[edge].abs();
            let qi = self.samples[inner].abs();
            if qe == 0.0 {
                continue;
            }
            let b = self.half_width;
            let rate = if qi > qe {
                (qi / qe).ln() / (lag as f64 * h)
            } else {
                0.0
            };
            if rate <= alpha.max(1.0) / (1.0 + b) {
                // decay no faster than the weight grows: treat as divergent
                tail = f64::INFINITY;
            } else {
                tail += qe * (1.0 + b).powf(alpha) / (rate - alpha / (1.0 + b));
            }
        }

        FaddeevReport {
            alpha,
            integral,
            tail_estimate: tail,
            converged: tail.is_finite() && tail <= 0.5 * integral.max(1e-12),
        }
    }
}

/// Result of the integrability check.
#[derive(Debug, Clone)]
pub struct FaddeevReport {
    pub alpha: f64,
    pub integral: f64,
    pub tail_estimate: f64,
    pub converged: bool,
}

/// The running integrals `right(x) = integral_x^b q` and
/// `left(x) = integral_{-b}^x q`, tabulated on the potential grid.
#[derive(Debug, Clone)]
pub struct TailIntegrals {
    grid: UniformGrid,
    right: Vec<f64>,
    left: Vec<f64>,
}

impl TailIntegrals {
    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn right(&self) -> &[f64] {
        &self.right
    }

    pub fn left(&self) -> &[f64] {
        &self.left
    }

    /// `integral_0^infinity q` (the origin must be a grid node).
    pub fn right_at_origin(&self) -> f64 {
        self.right[(self.grid.count() - 1) / 2]
    }

    /// `integral_{-infinity}^0 q`.
    pub fn left_at_origin(&self) -> f64 {
        self.left[(self.grid.count() - 1) / 2]
    }

    pub fn total(&self) -> f64 {
        self.left[self.grid.count() - 1]
    }
}

/// Tabulate both tail integrals of the potential.
pub fn tail_integrals(q: &Potential) -> Result<TailIntegrals> {
    let left = cumulative_integral(q.samples(), q.grid(), Direction::FromLeft)?;
    let from_right = cumulative_integral(q.samples(), q.grid(), Direction::FromRight)?;
    // cumulative FromRight is anchored at b and runs leftward; the tail
    // integral wants the opposite sign
    let right = from_right.iter().map(|v| -v).collect();
    Ok(TailIntegrals {
        grid: q.grid().clone(),
        right,
        left,
    })
}

/// Bessel function of the first kind of order zero, via the spectrally
/// convergent trapezoid form of its cosine integral representation. Accurate
/// to machine precision for the argument range used here (|x| < 40).
pub fn bessel_j0(x: f64) -> f64 {
    const M: usize = 64;
    let h = std::f64::consts::PI / M as f64;
    // endpoint values are both cos(0) = 1
    let mut acc = 1.0;
    for j in 1..M {
        acc += (x * (h * j as f64).sin()).cos();
    }
    acc * h / std::f64::consts::PI
}
