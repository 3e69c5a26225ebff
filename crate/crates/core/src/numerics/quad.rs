use super::{GridScalar, UniformGrid};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Closed 6-point Newton-Cotes weights over one panel of five intervals,
/// scaled by 5/288 outside.
const NC6: [f64; 6] = [19.0, 75.0, 50.0, 50.0, 75.0, 19.0];

/// Weights integrating the degree-5 interpolant on a 6-node unit-spaced
/// stencil over the single interval `[d, d+1]`, `d = 0..5`. Used to handle
/// leftover intervals when the node count misses a multiple of five, and for
/// the running antiderivative.
fn interval_weights() -> &'static [[f64; 6]; 6] {
    static W: OnceLock<[[f64; 6]; 6]> = OnceLock::new();
    W.get_or_init(|| {
        let mut table = [[0.0; 6]; 6];
        for (d, row) in table.iter_mut().enumerate() {
            for (j, w) in row.iter_mut().enumerate() {
                // Lagrange basis l_j on nodes 0..5, expanded then integrated
                // over [d, d+1]. Small integer arithmetic, exact in f64.
                let mut poly = [0.0f64; 6];
                poly[0] = 1.0;
                let mut deg = 0usize;
                let mut denom = 1.0f64;
                for k in 0..6 {
                    if k == j {
                        continue;
                    }
                    denom *= (j as f64) - (k as f64);
                    // multiply poly by (u - k)
                    let mut next = [0.0f64; 6];
                    for (p, &coef) in poly.iter().enumerate().take(deg + 1) {
                        next[p + 1] += coef;
                        next[p] -= coef * k as f64;
                    }
                    poly = next;
                    deg += 1;
                }
                let a = d as f64;
                let b = a + 1.0;
                let mut integral = 0.0;
                for (p, &coef) in poly.iter().enumerate().take(deg + 1) {
                    let e = (p + 1) as f64;
                    integral += coef * (b.powf(e) - a.powf(e)) / e;
                }
                *w = integral / denom;
            }
        }
        table
    })
}

fn check_finite<T: GridScalar>(values: &[T], grid: &UniformGrid) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if !v.finite() {
            return Err(Error::NonFiniteSample {
                x: grid.node(i),
                context: "quadrature input".into(),
            });
        }
    }
    Ok(())
}

/// Integral of one interval `[x_i, x_{i+1}]` from the 6-node stencil around it.
fn interval_integral<T: GridScalar>(values: &[T], i: usize, h: f64) -> T {
    let n = values.len();
    let s = i.saturating_sub(2).min(n - 6);
    let w = &interval_weights()[i - s];
    let mut acc = T::ZERO;
    for j in 0..6 {
        acc = acc + values[s + j] * (w[j] * h);
    }
    acc
}

/// Composite closed 6-point Newton-Cotes rule on a uniform grid.
///
/// Exact for polynomials of degree <= 5 on each panel. When the interval
/// count is not a multiple of five, the leftover intervals are handled by a
/// local degree-5 interpolation of the same order.
pub fn newton_cotes_6<T: GridScalar>(values: &[T], grid: &UniformGrid) -> Result<T> {
    if values.len() != grid.count() {
        return Err(Error::DegenerateGrid(format!(
            "value count {} does not match grid count {}",
            values.len(),
            grid.count()
        )));
    }
    check_finite(values, grid)?;
    let h = grid.step();
    let intervals = values.len() - 1;
    let panels = intervals / 5;
    let mut acc = T::ZERO;
    for p in 0..panels {
        let base = 5 * p;
        for j in 0..6 {
            acc = acc + values[base + j] * (NC6[j] * 5.0 / 288.0 * h);
        }
    }
    for i in 5 * panels..intervals {
        acc = acc + interval_integral(values, i, h);
    }
    Ok(acc)
}

/// Anchor endpoint of a running antiderivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    FromLeft,
    FromRight,
}

/// Running antiderivative on the grid, zero at the anchored endpoint.
///
/// `FromLeft` returns `F(x) = integral from start to x`; `FromRight` returns
/// `F(x) = integral from stop to x` (so interior values are negative for a
/// positive integrand). Interval contributions come from local degree-5
/// interpolation, consistent with [`newton_cotes_6`] within the composite
/// rule's order.
pub fn cumulative_integral<T: GridScalar>(
    values: &[T],
    grid: &UniformGrid,
    direction: Direction,
) -> Result<Vec<T>> {
    if values.len() != grid.count() {
        return Err(Error::DegenerateGrid(format!(
            "value count {} does not match grid count {}",
            values.len(),
            grid.count()
        )));
    }
    check_finite(values, grid)?;
    let h = grid.step();
    let n = values.len();
    let mut out = vec![T::ZERO; n];
    match direction {
        Direction::FromLeft => {
            for i in 0..n - 1 {
                out[i + 1] = out[i] + interval_integral(values, i, h);
            }
        }
        Direction::FromRight => {
            for i in (0..n - 1).rev() {
                out[i] = out[i + 1] - interval_integral(values, i, h);
            }
        }
    }
    Ok(out)
}

/// Trapezoidal rule for a 2pi-periodic integrand over `(-pi, pi)`.
///
/// The integrand is evaluated at `n_nodes` uniformly spaced interior points;
/// the endpoint contribution is the caller-supplied one-sided limit (the mean
/// of the two limits when they differ, zero is allowed and is the common case
/// here since the reflection data vanishes at the ends).
pub fn periodic_trapezoid<F>(f: F, n_nodes: usize, endpoint_limit: Complex64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if n_nodes < 16 {
        return Err(Error::DegenerateGrid(format!(
            "periodic rule needs at least 16 nodes, got {n_nodes}"
        )));
    }
    let h = 2.0 * PI / (n_nodes + 1) as f64;
    let mut acc = endpoint_limit;
    for j in 1..=n_nodes {
        let theta = -PI + h * j as f64;
        let v = f(theta);
        if !v.finite() {
            return Err(Error::QuadratureSample { theta });
        }
        acc += v;
    }
    Ok(acc * h)
}

/// Interior quadrature nodes used by [`periodic_trapezoid`], symmetric about 0.
pub fn interior_theta_grid(n_nodes: usize) -> Vec<f64> {
    let h = 2.0 * PI / (n_nodes + 1) as f64;
    (1..=n_nodes).map(|j| -PI + h * j as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample(grid: &UniformGrid, f: impl Fn(f64) -> f64) -> Vec<f64> {
        grid.nodes().iter().map(|&x| f(x)).collect()
    }

    #[test]
    fn quintic_is_exact() {
        let grid = UniformGrid::new(0.0, 1.0, 101).unwrap();
        let v = sample(&grid, |x| x.powi(5));
        let q = newton_cotes_6(&v, &grid).unwrap();
        assert_abs_diff_eq!(q, 1.0 / 6.0, epsilon = 1e-14);
    }

    #[test]
    fn quintic_exact_with_leftover_intervals() {
        // 103 intervals: 20 full panels plus 3 leftover intervals.
        let grid = UniformGrid::new(0.0, 1.0, 104).unwrap();
        let v = sample(&grid, |x| 3.0 * x.powi(5) - x.powi(3) + 2.0);
        let q = newton_cotes_6(&v, &grid).unwrap();
        assert_abs_diff_eq!(q, 0.5 - 0.25 + 2.0, epsilon = 1e-13);
    }

    #[test]
    fn zero_integrand() {
        let grid = UniformGrid::new(-3.0, 4.0, 57).unwrap();
        let v = vec![0.0; 57];
        assert_eq!(newton_cotes_6(&v, &grid).unwrap(), 0.0);
    }

    #[test]
    fn sine_on_half_period() {
        let grid = UniformGrid::new(0.0, std::f64::consts::PI, 501).unwrap();
        let v = sample(&grid, f64::sin);
        let q = newton_cotes_6(&v, &grid).unwrap();
        assert_abs_diff_eq!(q, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn too_few_nodes() {
        assert!(UniformGrid::new(0.0, 1.0, 5).is_err());
    }

    #[test]
    fn non_finite_reported_with_location() {
        let grid = UniformGrid::new(0.0, 1.0, 11).unwrap();
        let mut v = vec![0.0; 11];
        v[7] = f64::NAN;
        match newton_cotes_6(&v, &grid) {
            Err(Error::NonFiniteSample { x, .. }) => assert_abs_diff_eq!(x, 0.7, epsilon = 1e-12),
            other => panic!("expected non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn cumulative_of_constant_is_linear() {
        let grid = UniformGrid::new(0.0, 1.0, 51).unwrap();
        let v = vec![1.0; 51];
        let c = cumulative_integral(&v, &grid, Direction::FromLeft).unwrap();
        for (i, x) in grid.nodes().iter().enumerate() {
            assert_abs_diff_eq!(c[i], *x, epsilon = 1e-13);
        }
    }

    #[test]
    fn cumulative_of_zero_is_zero() {
        let grid = UniformGrid::new(0.0, 1.0, 51).unwrap();
        let c = cumulative_integral(&vec![0.0; 51], &grid, Direction::FromRight).unwrap();
        assert!(c.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cumulative_exp_from_right() {
        let grid = UniformGrid::new(0.0, 1.0, 101).unwrap();
        let v = sample(&grid, f64::exp);
        let c = cumulative_integral(&v, &grid, Direction::FromRight).unwrap();
        for (i, x) in grid.nodes().iter().enumerate() {
            assert_abs_diff_eq!(c[i], x.exp() - 1.0f64.exp(), epsilon = 1e-10);
        }
    }

    #[test]
    fn cumulative_matches_global_rule_on_subranges() {
        let grid = UniformGrid::new(-2.0, 3.0, 301).unwrap();
        let v = sample(&grid, |x| (0.7 * x).sin() * (-0.3 * x * x).exp());
        let c = cumulative_integral(&v, &grid, Direction::FromLeft).unwrap();
        let q = newton_cotes_6(&v, &grid).unwrap();
        assert_abs_diff_eq!(c[300], q, epsilon = 1e-12);
    }

    #[test]
    fn periodic_rule_annihilates_harmonics() {
        let n = 64;
        for k in 1..=(n / 4) {
            let limit = Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
            let q = periodic_trapezoid(
                |th| Complex64::new(0.0, k as f64 * th).exp(),
                n,
                limit,
            )
            .unwrap();
            assert!(q.norm() < 1e-10, "k = {k}: |q| = {}", q.norm());
        }
    }

    #[test]
    fn periodic_rule_constant_and_shifted_harmonic() {
        let one = periodic_trapezoid(|_| Complex64::new(1.0, 0.0), 1000, Complex64::new(1.0, 0.0))
            .unwrap();
        assert_abs_diff_eq!(one.re, 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(one.im, 0.0, epsilon = 1e-14);

        let f = |th: f64| Complex64::new(0.0, 3.0 * th).exp() + 2.0;
        let q = periodic_trapezoid(f, 1000, Complex64::new(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(q.re, 4.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(q.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn periodic_rule_flags_bad_sample() {
        let res = periodic_trapezoid(
            |th| {
                if th > 1.0 && th < 1.01 {
                    Complex64::new(f64::INFINITY, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            },
            10_000,
            Complex64::new(0.0, 0.0),
        );
        assert!(matches!(res, Err(Error::QuadratureSample { .. })));
    }
}
