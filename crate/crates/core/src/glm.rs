//! Inverse scattering: kernel and right-hand-side coefficients assembled from
//! scattering data (discrete sums in closed form, continuous parts as circle
//! quadratures), truncated dense systems solved per grid point for the first
//! series coefficient, and potential recovery by spline differentiation.

use crate::error::{Error, Result};
use crate::numerics::{fit_spline, SplineOrder, UniformGrid};
use crate::scatter::{ReflectionSamples, ScatteringData};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::Write;

/// Sign of the oscillatory factor `exp(+-2 i rho x)` in the circle integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSign {
    Plus,
    Minus,
}

/// Which half of the scattering data drives the system: `Plus` pairs
/// `alpha+`, `s+`, decaying exponentials to the right; `Minus` the mirror.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataSide {
    Plus,
    Minus,
}

impl DataSide {
    fn phase(self) -> PhaseSign {
        match self {
            DataSide::Plus => PhaseSign::Plus,
            DataSide::Minus => PhaseSign::Minus,
        }
    }
}

/// Fourier-type integral of a reflection coefficient against the rational
/// kernel, transformed to the unit circle:
/// `integral s(rho) exp(sign 2 i rho x) (1/2 + i rho)^m / (1/2 - i rho)^{n_power} d rho`.
///
/// `samples` must live on the canonical interior circle grid of
/// [`crate::numerics::interior_theta_grid`]; endpoint limits are zero for
/// this data class.
pub fn circle_kernel_integral(
    reflection: &ReflectionSamples,
    which: DataSide,
    x: f64,
    m: usize,
    n_power: usize,
    sign: PhaseSign,
) -> Result<Complex64> {
    if n_power < m + 1 {
        return Err(Error::InvalidInput(format!(
            "circle kernel needs n_power - m >= 1, got m = {m}, n_power = {n_power}"
        )));
    }
    let tables = CircleTables::new(reflection, which)?;
    let sgn = match sign {
        PhaseSign::Plus => 1.0,
        PhaseSign::Minus => -1.0,
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..tables.samples.len() {
        let z = tables.z[j];
        let phase = Complex64::from_polar(1.0, sgn * tables.tan_half[j] * x);
        let v = tables.samples[j]
            * phase
            * z.powi(m as i32 + 1)
            * (z + 1.0).powi(n_power as i32 - m as i32 - 2);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::QuadratureSample {
                theta: tables.thetas[j],
            });
        }
        acc += v;
    }
    Ok(acc * tables.weight)
}

/// Precomputed circle-grid quantities shared by every grid point of a
/// recovery sweep.
struct CircleTables {
    thetas: Vec<f64>,
    weight: f64,
    samples: Vec<Complex64>,
    z: Vec<Complex64>,
    inv_zp1: Vec<Complex64>,
    tan_half: Vec<f64>,
}

impl CircleTables {
    fn new(reflection: &ReflectionSamples, which: DataSide) -> Result<CircleTables> {
        let n = reflection.len();
        if n < 16 {
            return Err(Error::DegenerateGrid(format!(
                "reflection grid too small ({n} samples)"
            )));
        }
        let h = 2.0 * PI / (n + 1) as f64;
        for (j, &theta) in reflection.thetas.iter().enumerate() {
            let expected = -PI + h * (j + 1) as f64;
            if (theta - expected).abs() > 1e-9 {
                return Err(Error::FileFormat(format!(
                    "reflection grid is not the canonical interior circle grid at sample {j}"
                )));
            }
        }
        let samples = match which {
            DataSide::Plus => reflection.s_plus.clone(),
            DataSide::Minus => reflection.s_minus.clone(),
        };
        let z: Vec<Complex64> = reflection
            .thetas
            .iter()
            .map(|&t| Complex64::new(0.0, t).exp())
            .collect();
        let inv_zp1 = z.iter().map(|&z| 1.0 / (z + 1.0)).collect();
        let tan_half = reflection.thetas.iter().map(|&t| (t / 2.0).tan()).collect();
        Ok(CircleTables {
            thetas: reflection.thetas.clone(),
            weight: h,
            samples,
            z,
            inv_zp1,
            tan_half,
        })
    }

    /// Circle parts of the Hankel coefficients `p = 0..=p_max` (kernel) and
    /// of the right-hand-side coefficients `m = 0..=m_max`, at one `x`.
    fn sweep(
        &self,
        x: f64,
        sign: PhaseSign,
        p_max: usize,
        m_max: usize,
    ) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let sgn = match sign {
            PhaseSign::Plus => 1.0,
            PhaseSign::Minus => -1.0,
        };
        let mut hankel = vec![Complex64::new(0.0, 0.0); p_max + 1];
        let mut rhs = vec![Complex64::new(0.0, 0.0); m_max + 1];
        for j in 0..self.samples.len() {
            let phase = Complex64::from_polar(1.0, sgn * self.tan_half[j] * x);
            let w = self.samples[j] * phase;
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(Error::QuadratureSample {
                    theta: self.thetas[j],
                });
            }
            // kernel entries carry z^{p+1}; rhs entries z^{m+1}/(z+1)
            let mut acc = w * self.z[j];
            for p in 0..=p_max {
                hankel[p] += acc;
                if p <= m_max {
                    rhs[p] += acc * self.inv_zp1[j];
                }
                acc *= self.z[j];
            }
        }
        for v in hankel.iter_mut().chain(rhs.iter_mut()) {
            *v *= self.weight;
        }
        Ok((hankel, rhs))
    }
}

/// Discrete (bound-state) part of the Hankel coefficient `p` at `x`.
pub fn discrete_kernel_part(data: &ScatteringData, side: DataSide, x: f64, p: usize) -> Result<f64> {
    let mut acc = 0.0;
    for d in &data.discrete {
        let exponent = match side {
            DataSide::Plus => -2.0 * d.tau * x,
            DataSide::Minus => 2.0 * d.tau * x,
        };
        if exponent > 700.0 {
            return Err(Error::Range {
                x,
                context: format!("bound-state exponential exp({exponent:.1}) overflows"),
            });
        }
        let alpha = match side {
            DataSide::Plus => d.alpha_plus,
            DataSide::Minus => d.alpha_minus,
        };
        acc += alpha * exponent.exp() * (0.5 - d.tau).powi(p as i32)
            / (0.5 + d.tau).powi(p as i32 + 2);
    }
    Ok(acc)
}

fn discrete_rhs_part(data: &ScatteringData, side: DataSide, x: f64, m: usize) -> Result<f64> {
    let mut acc = 0.0;
    for d in &data.discrete {
        let exponent = match side {
            DataSide::Plus => -2.0 * d.tau * x,
            DataSide::Minus => 2.0 * d.tau * x,
        };
        if exponent > 700.0 {
            return Err(Error::Range {
                x,
                context: format!("bound-state exponential exp({exponent:.1}) overflows"),
            });
        }
        let alpha = match side {
            DataSide::Plus => d.alpha_plus,
            DataSide::Minus => d.alpha_minus,
        };
        acc += alpha * exponent.exp() * (0.5 - d.tau).powi(m as i32)
            / (0.5 + d.tau).powi(m as i32 + 1);
    }
    Ok(acc)
}

/// The `(n_trunc+1) x (n_trunc+1)` finite section of one inverse-scattering
/// system at a single spatial point.
#[derive(Debug, Clone)]
pub struct TruncatedSystem {
    pub x: f64,
    pub side: DataSide,
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub condition: f64,
    pub max_im_residue: f64,
}

/// Assemble the truncated system at `x`. Kernel entries depend on `m + n`
/// only (Hankel structure), so `2 n_trunc + 1` coefficients suffice.
pub fn assemble_system(
    data: &ScatteringData,
    x: f64,
    n_trunc: usize,
    side: DataSide,
) -> Result<TruncatedSystem> {
    let tables = CircleTables::new(&data.reflection, side)?;
    assemble_with(&tables, data, x, n_trunc, side)
}

fn assemble_with(
    tables: &CircleTables,
    data: &ScatteringData,
    x: f64,
    n_trunc: usize,
    side: DataSide,
) -> Result<TruncatedSystem> {
    let size = n_trunc + 1;
    let (hankel_circ, rhs_circ) = tables.sweep(x, side.phase(), 2 * n_trunc, n_trunc)?;

    let mut max_im = 0.0f64;
    let mut hankel = Vec::with_capacity(2 * n_trunc + 1);
    for (p, circ) in hankel_circ.iter().enumerate() {
        let v = discrete_kernel_part(data, side, x, p)? + circ.re / (2.0 * PI);
        max_im = max_im.max(circ.im.abs() / (2.0 * PI));
        hankel.push(v);
    }
    let mut rhs_coeff = Vec::with_capacity(size);
    for (m, circ) in rhs_circ.iter().enumerate() {
        let v = discrete_rhs_part(data, side, x, m)? + circ.re / (2.0 * PI);
        max_im = max_im.max(circ.im.abs() / (2.0 * PI));
        rhs_coeff.push(v);
    }
    if max_im > 1e-9 {
        return Err(Error::AssemblyResidue { x, im: max_im });
    }

    let mut matrix = DMatrix::zeros(size, size);
    for m in 0..size {
        for n in 0..size {
            let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
            matrix[(m, n)] = sign * hankel[m + n];
            if m == n {
                matrix[(m, n)] += 1.0;
            }
        }
    }
    let mut rhs = DVector::zeros(size);
    for m in 0..size {
        let sign = if (m + 1) % 2 == 0 { 1.0 } else { -1.0 };
        rhs[m] = sign * rhs_coeff[m];
    }

    let sv = matrix.clone().svd(false, false).singular_values;
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };

    Ok(TruncatedSystem {
        x,
        side,
        matrix,
        rhs,
        condition,
        max_im_residue: max_im,
    })
}

/// First solution component of a truncated system with its solve residual.
#[derive(Debug, Clone, Copy)]
pub struct FirstComponent {
    pub value: f64,
    pub residual: f64,
    pub condition: f64,
}

pub fn solve_first_component(system: &TruncatedSystem) -> Result<FirstComponent> {
    if !system.condition.is_finite() || system.condition > 1e12 {
        return Err(Error::IllConditioned {
            x: system.x,
            cond: system.condition,
        });
    }
    let lu = system.matrix.clone().lu();
    let sol = lu.solve(&system.rhs).ok_or(Error::IllConditioned {
        x: system.x,
        cond: system.condition,
    })?;
    let residual = (&system.matrix * &sol - &system.rhs)
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok(FirstComponent {
        value: sol[0],
        residual,
        condition: system.condition,
    })
}

/// Recovery controls; `margin` extra nodes are solved past each window end
/// and past the side split so the spline differentiation never sees its own
/// boundary effects inside the window.
#[derive(Debug, Clone)]
pub struct RecoverParams {
    pub n_trunc: usize,
    pub spline_order: SplineOrder,
    pub margin: usize,
}

impl Default for RecoverParams {
    fn default() -> Self {
        RecoverParams {
            n_trunc: 5,
            spline_order: SplineOrder::Quintic,
            margin: 6,
        }
    }
}

/// Potential recovered on a window grid.
///
/// The minus-side system feeds `x < 0` and the plus-side system `x > 0`:
/// each family is solved where its kernel data decays and its coefficient
/// sequence is short, so a handful of equations suffices.
#[derive(Debug, Clone)]
pub struct RecoveredPotential {
    pub grid: UniformGrid,
    /// First coefficient of the minus-side system on window nodes `x <= 0`.
    pub left_coeff: Vec<f64>,
    /// First coefficient of the plus-side system on window nodes `x >= 0`.
    pub right_coeff: Vec<f64>,
    /// Recovered potential values on the full window grid.
    pub values: Vec<f64>,
    /// `|q_plus(0) - q_minus(0)|` where both sides are evaluated.
    pub stitch_residual: f64,
    pub max_condition: f64,
    pub max_solve_residual: f64,
}

impl RecoveredPotential {
    /// Four-column dump: x, first coefficient, recovered value, side flag
    /// (+1 plus-side, -1 minus-side, 0 at the stitch point).
    pub fn write_table(&self, out: &mut impl Write) -> Result<()> {
        let count = self.grid.count();
        let right_start = count - self.right_coeff.len();
        for i in 0..count {
            let in_left = i < self.left_coeff.len();
            let in_right = i >= right_start;
            let (coeff, flag) = match (in_left, in_right) {
                (true, true) => (self.left_coeff[i], 0i32),
                (true, false) => (self.left_coeff[i], -1),
                (false, true) => (self.right_coeff[i - right_start], 1),
                (false, false) => unreachable!("every node belongs to a side"),
            };
            writeln!(
                out,
                "{:.16e} {:.16e} {:.16e} {}",
                self.grid.node(i),
                coeff,
                self.values[i],
                flag
            )?;
        }
        Ok(())
    }
}

struct SideSweep {
    xs: Vec<f64>,
    coeff: Vec<f64>,
    max_condition: f64,
    max_residual: f64,
}

fn sweep_side(
    tables: &CircleTables,
    data: &ScatteringData,
    xs: Vec<f64>,
    n_trunc: usize,
    side: DataSide,
) -> Result<SideSweep> {
    let solved: Result<Vec<FirstComponent>> = xs
        .par_iter()
        .map(|&x| solve_first_component(&assemble_with(tables, data, x, n_trunc, side)?))
        .collect();
    let solved = solved?;
    let max_condition = solved.iter().fold(0.0f64, |a, s| a.max(s.condition));
    let max_residual = solved.iter().fold(0.0f64, |a, s| a.max(s.residual));
    Ok(SideSweep {
        xs,
        coeff: solved.iter().map(|s| s.value).collect(),
        max_condition,
        max_residual,
    })
}

/// Solve the truncated systems across the window and recover the potential
/// from the first coefficient of each side.
pub fn recover_potential(
    data: &ScatteringData,
    window: &UniformGrid,
    params: &RecoverParams,
) -> Result<RecoveredPotential> {
    let count = window.count();
    let h = window.step();
    let lo = window.start();
    let hi = window.stop();
    let margin = params.margin as isize;

    // side split: the node at x = 0, or an end of the window when it lies
    // entirely on one side of the origin
    let (split, use_left, use_right) = if hi <= 0.0 {
        (count - 1, true, false)
    } else if lo >= 0.0 {
        (0, false, true)
    } else {
        let s = window.index_of(0.0).ok_or_else(|| {
            Error::InvalidInput("recovery window must place a grid node at x = 0".into())
        })?;
        (s, true, true)
    };

    let node_at = |i: isize| lo + h * i as f64;

    // The minus-side family handles the left block and the plus-side family
    // the right block: each is used where its data exponentials decay and
    // its coefficient sequence is short, which is what keeps a handful of
    // equations sufficient.
    let left = if use_left {
        let xs: Vec<f64> = (-margin..=split as isize + margin).map(node_at).collect();
        let tables = CircleTables::new(&data.reflection, DataSide::Minus)?;
        Some(sweep_side(&tables, data, xs, params.n_trunc, DataSide::Minus)?)
    } else {
        None
    };
    let right = if use_right {
        let xs: Vec<f64> = (split as isize - margin..=(count as isize - 1) + margin)
            .map(node_at)
            .collect();
        let tables = CircleTables::new(&data.reflection, DataSide::Plus)?;
        Some(sweep_side(&tables, data, xs, params.n_trunc, DataSide::Plus)?)
    } else {
        None
    };

    let left_vals = left
        .as_ref()
        .map(|s| side_values(s, DataSide::Minus, params.spline_order))
        .transpose()?;
    let right_vals = right
        .as_ref()
        .map(|s| side_values(s, DataSide::Plus, params.spline_order))
        .transpose()?;

    let left_at = |i: usize| left_vals.as_ref().unwrap()[(i as isize + margin) as usize];
    let right_at =
        |i: usize| right_vals.as_ref().unwrap()[(i as isize - split as isize + margin) as usize];

    let mut values = vec![0.0f64; count];
    for (i, v) in values.iter_mut().enumerate() {
        *v = if i < split {
            left_at(i)
        } else if i > split {
            right_at(i)
        } else {
            0.0 // stitch node, filled below
        };
    }
    let (stitch_residual, stitched) = match (&left_vals, &right_vals) {
        (Some(_), Some(_)) => {
            let ql = left_at(split);
            let qr = right_at(split);
            ((ql - qr).abs(), 0.5 * (ql + qr))
        }
        (Some(_), None) => (0.0, left_at(split)),
        (None, Some(_)) => (0.0, right_at(split)),
        (None, None) => unreachable!("at least one side is always active"),
    };
    values[split] = stitched;

    let left_coeff: Vec<f64> = match &left {
        Some(s) => (0..=split)
            .map(|i| s.coeff[(i as isize + margin) as usize])
            .collect(),
        None => Vec::new(),
    };
    let right_coeff: Vec<f64> = match &right {
        Some(s) => (split..count)
            .map(|i| s.coeff[(i as isize - split as isize + margin) as usize])
            .collect(),
        None => Vec::new(),
    };

    let max_condition = left
        .iter()
        .chain(right.iter())
        .fold(0.0f64, |a, s| a.max(s.max_condition));
    let max_solve_residual = left
        .iter()
        .chain(right.iter())
        .fold(0.0f64, |a, s| a.max(s.max_residual));

    Ok(RecoveredPotential {
        grid: window.clone(),
        left_coeff,
        right_coeff,
        values,
        stitch_residual,
        max_condition,
        max_solve_residual,
    })
}

/// Where `|1 + coefficient|` falls below this bound the recovery ratio is a
/// 0/0 form (the numerator vanishes with the denominator) and division would
/// amplify data noise; the smooth result is interpolated across such zones
/// instead.
const DENOMINATOR_GUARD: f64 = 0.05;

/// Recovered-potential values over one side's extended node range: the
/// differentiation ratio at nodes with a safe denominator, polynomial
/// interpolation from the nearest safe nodes across removable-singularity
/// zones.
fn side_values(sweep: &SideSweep, side: DataSide, order: SplineOrder) -> Result<Vec<f64>> {
    let spline = fit_spline(&sweep.xs, &sweep.coeff, order)?;
    let d1 = spline.derivative_spline(1)?;
    let d2 = spline.derivative_spline(2)?;
    let n = sweep.xs.len();
    let mut vals = vec![0.0f64; n];
    let mut safe = vec![false; n];
    for i in 0..n {
        let den = sweep.coeff[i] + 1.0;
        if den.abs() >= DENOMINATOR_GUARD {
            let x = sweep.xs[i];
            let numer = match side {
                DataSide::Plus => d2.eval(x) - d1.eval(x),
                DataSide::Minus => d2.eval(x) + d1.eval(x),
            };
            vals[i] = numer / den;
            safe[i] = true;
        }
    }

    const SEARCH_RADIUS: usize = 30;
    const STENCIL: usize = 6;
    for i in 0..n {
        if safe[i] {
            continue;
        }
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(STENCIL);
        let mut down = i as isize - 1;
        let mut up = i + 1;
        while pts.len() < STENCIL {
            let down_ok = down >= 0 && (i as isize - down) as usize <= SEARCH_RADIUS;
            let up_ok = up < n && up - i <= SEARCH_RADIUS;
            if !down_ok && !up_ok {
                break;
            }
            let take_down = match (down_ok, up_ok) {
                (true, true) => (i as isize - down) as usize <= up - i,
                (true, false) => true,
                (false, true) => false,
                (false, false) => unreachable!(),
            };
            if take_down {
                let j = down as usize;
                if safe[j] {
                    pts.push((sweep.xs[j], vals[j]));
                }
                down -= 1;
            } else {
                if safe[up] {
                    pts.push((sweep.xs[up], vals[up]));
                }
                up += 1;
            }
        }
        if pts.len() < 4 {
            return Err(Error::RecoverySingularity {
                x: sweep.xs[i],
                magnitude: (sweep.coeff[i] + 1.0).abs(),
            });
        }
        vals[i] = neville(&pts, sweep.xs[i]);
    }
    Ok(vals)
}

// Neville's algorithm on a small point set.
fn neville(pts: &[(f64, f64)], x: f64) -> f64 {
    let mut p: Vec<f64> = pts.iter().map(|&(_, y)| y).collect();
    let n = p.len();
    for level in 1..n {
        for j in 0..n - level {
            let (xj, _) = pts[j];
            let (xk, _) = pts[j + level];
            p[j] = ((x - xk) * p[j] + (xj - x) * p[j + 1]) / (xj - xk);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{interior_theta_grid, newton_cotes_6};
    use crate::scatter::{mobius, DiscreteDatum};
    use approx::assert_abs_diff_eq;

    fn synthetic_data(
        states: Vec<DiscreteDatum>,
        theta_count: usize,
        s: impl Fn(f64) -> Complex64,
    ) -> ScatteringData {
        let thetas = interior_theta_grid(theta_count);
        let samples: Vec<Complex64> = thetas
            .iter()
            .map(|&t| s(mobius::rho_on_circle(t)))
            .collect();
        ScatteringData {
            time: 0.0,
            discrete: states,
            reflection: ReflectionSamples {
                thetas,
                s_plus: samples.clone(),
                s_minus: samples,
            },
            warnings: Vec::new(),
        }
    }

    fn soliton_state() -> DiscreteDatum {
        let k = PI.sqrt() / 2.0;
        DiscreteDatum {
            z: (0.5 - k) / (0.5 + k),
            tau: k,
            lambda: -k * k,
            alpha_plus: PI.sqrt(),
            alpha_minus: PI.sqrt(),
            ratio: Some(1.0),
        }
    }

    #[test]
    fn zero_samples_integrate_to_zero() {
        let data = synthetic_data(vec![], 256, |_| Complex64::new(0.0, 0.0));
        let v = circle_kernel_integral(&data.reflection, DataSide::Plus, 1.3, 0, 2, PhaseSign::Plus)
            .unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn analytic_integrand_closes_to_zero() {
        // s(rho) = 1/(1/2 - i rho) extends analytically to the upper half
        // plane; for x > 0 the contour closes there and the integral
        // vanishes. The 1/rho decay of this synthetic datum leaves an
        // endpoint-resolution error of order 1e-5 at 10^4 samples.
        let data = synthetic_data(vec![], 10_000, |rho| 1.0 / Complex64::new(0.5, -rho));
        let v = circle_kernel_integral(&data.reflection, DataSide::Plus, 1.0, 0, 2, PhaseSign::Plus)
            .unwrap();
        assert!(v.norm() < 1e-4, "residue check |I| = {}", v.norm());
    }

    #[test]
    fn circle_form_matches_real_line_quadrature() {
        let s = |rho: f64| Complex64::new((-rho * rho).exp(), 0.0);
        let data = synthetic_data(vec![], 20000, s);
        let circle =
            circle_kernel_integral(&data.reflection, DataSide::Plus, 0.0, 1, 3, PhaseSign::Plus)
                .unwrap();

        let grid = UniformGrid::new(-40.0, 40.0, 16001).unwrap();
        let vals: Vec<Complex64> = grid
            .nodes()
            .iter()
            .map(|&rho| {
                let num = Complex64::new(0.5, rho);
                let den = Complex64::new(0.5, -rho);
                s(rho) * num / (den * den * den)
            })
            .collect();
        let line = newton_cotes_6(&vals, &grid).unwrap();
        assert!(
            (circle - line).norm() < 1e-8,
            "circle {circle} vs line {line}"
        );
    }

    #[test]
    fn empty_data_gives_identity_system() {
        let data = synthetic_data(vec![], 128, |_| Complex64::new(0.0, 0.0));
        let sys = assemble_system(&data, 0.7, 4, DataSide::Plus).unwrap();
        assert_eq!(sys.matrix, DMatrix::identity(5, 5));
        assert!(sys.rhs.iter().all(|&v| v == 0.0));
        assert_abs_diff_eq!(sys.condition, 1.0, epsilon = 1e-12);
        let sol = solve_first_component(&sys).unwrap();
        assert_eq!(sol.value, 0.0);
    }

    #[test]
    fn rank_one_closed_forms() {
        let k = PI.sqrt() / 2.0;
        let data = synthetic_data(vec![soliton_state()], 128, |_| Complex64::new(0.0, 0.0));

        let a00 = discrete_kernel_part(&data, DataSide::Plus, 0.0, 0).unwrap();
        assert_abs_diff_eq!(a00, PI.sqrt() / (0.5 + k).powi(2), epsilon = 1e-12);

        for &x in &[-2.0, -0.5, 0.0, 1.0] {
            let w = (0.5 - k) / (0.5 + k);
            let g0 = PI.sqrt() * (-2.0 * k * x).exp() / (0.5 + k);
            let ghat = PI.sqrt() * (-2.0 * k * x).exp() / (0.5 + k).powi(2);

            // pure rank-one shortcut at truncation order zero
            let sys0 = assemble_system(&data, x, 0, DataSide::Plus).unwrap();
            let sol0 = solve_first_component(&sys0).unwrap();
            assert_abs_diff_eq!(sol0.value, -g0 / (1.0 + ghat), epsilon = 1e-12);

            // general truncation order against the geometric-sum closed form
            for n_trunc in [1usize, 3, 5, 8] {
                let sys = assemble_system(&data, x, n_trunc, DataSide::Plus).unwrap();
                let sol = solve_first_component(&sys).unwrap();
                let series: f64 = (0..=n_trunc).map(|n| w.powi(2 * n as i32)).sum();
                let expect = -g0 / (1.0 + ghat * series);
                assert_abs_diff_eq!(sol.value, expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn discrete_kernel_is_hankel() {
        let data = synthetic_data(vec![soliton_state()], 128, |_| Complex64::new(0.0, 0.0));
        let x = -0.8;
        for p in 0..=6usize {
            let reference = discrete_kernel_part(&data, DataSide::Plus, x, p).unwrap();
            for m in 0..=p {
                let n = p - m;
                let sys = assemble_system(&data, x, 6, DataSide::Plus).unwrap();
                let entry = sys.matrix[(m, n)] - if m == n { 1.0 } else { 0.0 };
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                assert_abs_diff_eq!(entry, sign * reference, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn zero_data_recovers_zero_potential() {
        let data = synthetic_data(vec![], 512, |_| Complex64::new(0.0, 0.0));
        let window = UniformGrid::new(-2.0, 2.0, 81).unwrap();
        let rec = recover_potential(&data, &window, &RecoverParams::default()).unwrap();
        assert!(rec.values.iter().all(|&v| v.abs() < 1e-12));
        assert_eq!(rec.left_coeff.len(), 41);
        assert_eq!(rec.right_coeff.len(), 41);
        assert_abs_diff_eq!(rec.stitch_residual, 0.0, epsilon = 1e-14);

        let mut buf = Vec::new();
        rec.write_table(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 81);
        assert!(text.lines().next().unwrap().ends_with(" -1"));
        assert!(text.lines().last().unwrap().ends_with(" 1"));
    }

    #[test]
    fn one_sided_windows_use_one_system() {
        let data = synthetic_data(vec![soliton_state()], 256, |_| Complex64::new(0.0, 0.0));
        let left = UniformGrid::new(-3.0, -1.0, 41).unwrap();
        let rec = recover_potential(&data, &left, &RecoverParams::default()).unwrap();
        assert_eq!(rec.left_coeff.len(), 41);
        assert!(rec.right_coeff.is_empty());

        let right = UniformGrid::new(1.0, 3.0, 41).unwrap();
        let rec = recover_potential(&data, &right, &RecoverParams::default()).unwrap();
        assert!(rec.left_coeff.is_empty());
        assert_eq!(rec.right_coeff.len(), 41);
    }
}
