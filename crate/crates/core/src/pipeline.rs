//! Orchestration of the three transform steps into a Cauchy-problem solver:
//! one direct-scattering pass, explicit evolution of the data per output
//! time, and one inverse recovery per output time.

use crate::error::{Error, Result};
use crate::glm::{recover_potential, RecoverParams, RecoveredPotential};
use crate::jost::{build_jost_base_with, recurse_coefficients};
use crate::numerics::{interior_theta_grid, newton_cotes_6, SplineOrder, UniformGrid};
use crate::potential::{tail_integrals, Potential};
use crate::scatter::{
    find_eigenvalues, norming_constants, reflection_coefficients, DiscreteDatum, ScatteringData,
    SeriesAtOrigin,
};
use std::io::Write;
use std::time::Instant;

/// Numeric controls for a full run; the defaults reproduce the reference
/// settings (truncation box 12, 64 series levels, 6-equation systems, 10^4
/// circle samples, recovery step 0.02).
#[derive(Debug, Clone)]
pub struct NumericParams {
    pub half_width: f64,
    pub grid_count: usize,
    pub coeff_levels: usize,
    pub truncation: usize,
    pub theta_count: usize,
    pub recovery_step: f64,
    pub scan_count: usize,
    pub root_tol: f64,
    pub substeps: usize,
    pub margin: usize,
    pub spline_order: SplineOrder,
}

impl Default for NumericParams {
    fn default() -> Self {
        NumericParams {
            half_width: 12.0,
            grid_count: 2401,
            coeff_levels: 64,
            truncation: 5,
            theta_count: 10_000,
            recovery_step: 0.02,
            scan_count: 2048,
            root_tol: 1e-13,
            substeps: 2,
            margin: 6,
            spline_order: SplineOrder::Quintic,
        }
    }
}

impl NumericParams {
    pub fn recover_params(&self) -> RecoverParams {
        RecoverParams {
            n_trunc: self.truncation,
            spline_order: self.spline_order,
            margin: self.margin,
        }
    }
}

/// Full direct-scattering pass: coefficient tables, bound states with norming
/// constants, reflection samples on the canonical circle grid, at `t = 0`.
pub fn direct_scattering(q: &Potential, params: &NumericParams) -> Result<ScatteringData> {
    direct_scattering_inner(q, params).map_err(|e| e.in_stage("direct scattering", None))
}

fn direct_scattering_inner(q: &Potential, params: &NumericParams) -> Result<ScatteringData> {
    let base = build_jost_base_with(q, params.substeps)?;
    let tails = tail_integrals(q)?;
    let tables = recurse_coefficients(&base, &tails, params.coeff_levels)?;
    let series = SeriesAtOrigin::from_tables(&tables, &tails);

    let mut warnings = Vec::new();
    if let Some(w) = &tables.decay_warning {
        warnings.push(w.clone());
    }

    let (states, eigen_warnings) = find_eigenvalues(&series, params.scan_count, params.root_tol)?;
    warnings.extend(eigen_warnings);
    let norming = norming_constants(&series, &states)?;

    let thetas = interior_theta_grid(params.theta_count);
    let (reflection, refl_warnings) = reflection_coefficients(&series, &thetas)?;
    warnings.extend(refl_warnings);

    Ok(ScatteringData {
        time: 0.0,
        discrete: states
            .iter()
            .zip(&norming)
            .map(|(s, n)| DiscreteDatum {
                z: s.z,
                tau: s.tau,
                lambda: s.lambda,
                alpha_plus: n.alpha_plus,
                alpha_minus: n.alpha_minus,
                ratio: Some(n.ratio),
            })
            .collect(),
        reflection,
        warnings,
    })
}

/// The Cauchy problem: initial datum, output times, recovery window.
#[derive(Debug, Clone)]
pub struct CauchyProblem {
    pub potential: Potential,
    pub times: Vec<f64>,
    pub window: (f64, f64),
    pub params: NumericParams,
}

impl CauchyProblem {
    fn validate(&self) -> Result<UniformGrid> {
        if self.times.is_empty() {
            return Err(Error::InvalidInput("no output times requested".into()));
        }
        if self.times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::InvalidInput("output times must be >= 0".into()));
        }
        if self.times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput("output times must be sorted".into()));
        }
        let (lo, hi) = self.window;
        let b = self.potential.half_width();
        if !lo.is_finite() || !hi.is_finite() || lo >= hi || lo <= -b || hi >= b {
            return Err(Error::InvalidInput(format!(
                "window ({lo}, {hi}) must sit strictly inside (-{b}, {b})"
            )));
        }
        let count = ((hi - lo) / self.params.recovery_step).round() as usize + 1;
        UniformGrid::new(lo, hi, count)
    }
}

/// Solution values at one output time with per-stage diagnostics.
#[derive(Debug, Clone)]
pub struct TimeSlice {
    pub time: f64,
    pub values: Vec<f64>,
    pub stitch_residual: f64,
    pub max_condition: f64,
    pub mass: f64,
    pub momentum: f64,
    pub seconds: f64,
}

/// The field `u(x, t)` on the window grid for all requested times.
#[derive(Debug, Clone)]
pub struct SolutionField {
    pub grid: UniformGrid,
    pub slices: Vec<TimeSlice>,
    pub direct_seconds: f64,
    pub warnings: Vec<String>,
}

/// Run the three transform steps. Direct scattering is computed once; each
/// output time evolves the cached data and solves its own inverse problem.
pub fn solve_cauchy(problem: &CauchyProblem) -> Result<SolutionField> {
    let grid = problem.validate()?;

    let faddeev = problem.potential.check_faddeev(1.0);
    if !faddeev.converged {
        return Err(Error::InvalidInput(format!(
            "potential fails the weighted integrability check (interior {:.3e}, tail estimate {:.3e})",
            faddeev.integral, faddeev.tail_estimate
        )));
    }

    let started = Instant::now();
    let data0 = direct_scattering(&problem.potential, &problem.params)?;
    let direct_seconds = started.elapsed().as_secs_f64();

    let mut slices = Vec::with_capacity(problem.times.len());
    for &t in &problem.times {
        let started = Instant::now();
        let data = data0
            .evolve(t)
            .map_err(|e| e.in_stage("evolution", Some(t)))?;
        let rec: RecoveredPotential =
            recover_potential(&data, &grid, &problem.params.recover_params())
                .map_err(|e| e.in_stage("inverse scattering", Some(t)))?;
        let mass = newton_cotes_6(&rec.values, &grid)?;
        let squared: Vec<f64> = rec.values.iter().map(|v| v * v).collect();
        let momentum = newton_cotes_6(&squared, &grid)?;
        slices.push(TimeSlice {
            time: t,
            values: rec.values,
            stitch_residual: rec.stitch_residual,
            max_condition: rec.max_condition,
            mass,
            momentum,
            seconds: started.elapsed().as_secs_f64(),
        });
    }

    Ok(SolutionField {
        grid,
        slices,
        direct_seconds,
        warnings: data0.warnings.clone(),
    })
}

/// The solitary-wave solution `u(x, t) = -(c/2) sech^2(sqrt(c)(x - c t)/2)`.
pub fn analytic_soliton(c: f64, x: f64, t: f64) -> f64 {
    let arg = c.sqrt() * (x - c * t) / 2.0;
    let s = 1.0 / arg.cosh();
    -c / 2.0 * s * s
}

/// Conservation and conditioning summary of a solved field.
#[derive(Debug, Clone)]
pub struct FieldReport {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub momentum: Vec<f64>,
    pub stitch_residuals: Vec<f64>,
    pub max_conditions: Vec<f64>,
    pub seconds: Vec<f64>,
    pub direct_seconds: f64,
    /// Largest deviation of the mass over the output times.
    pub mass_drift: f64,
    pub momentum_drift: f64,
}

pub fn diagnostics(field: &SolutionField) -> FieldReport {
    let spread = |vals: &[f64]| -> f64 {
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if vals.is_empty() {
            0.0
        } else {
            hi - lo
        }
    };
    let mass: Vec<f64> = field.slices.iter().map(|s| s.mass).collect();
    let momentum: Vec<f64> = field.slices.iter().map(|s| s.momentum).collect();
    FieldReport {
        times: field.slices.iter().map(|s| s.time).collect(),
        mass_drift: spread(&mass),
        momentum_drift: spread(&momentum),
        mass,
        momentum,
        stitch_residuals: field.slices.iter().map(|s| s.stitch_residual).collect(),
        max_conditions: field.slices.iter().map(|s| s.max_condition).collect(),
        seconds: field.slices.iter().map(|s| s.seconds).collect(),
        direct_seconds: field.direct_seconds,
    }
}

impl SolutionField {
    /// Wide matrix dump: first row is the x grid, each following row is a
    /// time followed by the solution values.
    pub fn write_matrix(&self, out: &mut impl Write) -> Result<()> {
        let mut first = String::from("x");
        for i in 0..self.grid.count() {
            first.push_str(&format!(" {:.16e}", self.grid.node(i)));
        }
        writeln!(out, "{first}")?;
        for slice in &self.slices {
            write!(out, "{:.16e}", slice.time)?;
            for v in &slice.values {
                write!(out, " {:.16e}", v)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// One two-column `(x, u)` file per output time in `dir`; returns the
    /// paths written.
    pub fn write_slices(&self, dir: &std::path::Path) -> Result<Vec<std::path::PathBuf>> {
        let mut paths = Vec::new();
        for slice in &self.slices {
            let path = dir.join(format!("u_t{:.4}.txt", slice.time));
            let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            for (i, v) in slice.values.iter().enumerate() {
                writeln!(file, "{:.16e} {:.16e}", self.grid.node(i), v)?;
            }
            paths.push(path);
        }
        Ok(paths)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn soliton_closed_form_values() {
        assert_abs_diff_eq!(analytic_soliton(PI, 0.0, 0.0), -PI / 2.0);
        // the peak travels with speed c
        for &t in &[0.3, 1.0, 2.5] {
            assert_abs_diff_eq!(analytic_soliton(PI, PI * t, t), -PI / 2.0, epsilon = 1e-14);
        }
        let direct = -(PI / 2.0) / (PI.sqrt() * 3.0 / 2.0).cosh().powi(2);
        assert_abs_diff_eq!(analytic_soliton(PI, 3.0, 0.0), direct, epsilon = 1e-14);
        let q = Potential::soliton(PI, 12.0, 201).unwrap();
        assert_abs_diff_eq!(q.eval(3.0), direct, epsilon = 1e-14);
    }

    #[test]
    fn zero_potential_solves_to_zero_field() {
        let problem = CauchyProblem {
            potential: Potential::zero(8.0, 401).unwrap(),
            times: vec![0.0, 0.5],
            window: (-2.0, 2.0),
            params: NumericParams {
                grid_count: 401,
                half_width: 8.0,
                coeff_levels: 12,
                theta_count: 512,
                recovery_step: 0.1,
                ..NumericParams::default()
            },
        };
        let field = solve_cauchy(&problem).unwrap();
        assert_eq!(field.slices.len(), 2);
        for slice in &field.slices {
            assert!(slice.values.iter().all(|&v| v.abs() < 1e-12));
            assert!(slice.mass.abs() < 1e-12);
        }
        let report = diagnostics(&field);
        assert!(report.mass_drift < 1e-12);
        assert!(report.momentum_drift < 1e-12);
    }

    #[test]
    fn problem_validation_catches_bad_inputs() {
        let base = CauchyProblem {
            potential: Potential::zero(8.0, 401).unwrap(),
            times: vec![0.0],
            window: (-2.0, 2.0),
            params: NumericParams::default(),
        };
        let mut unsorted = base.clone();
        unsorted.times = vec![1.0, 0.5];
        assert!(solve_cauchy(&unsorted).is_err());
        let mut negative = base.clone();
        negative.times = vec![-1.0];
        assert!(solve_cauchy(&negative).is_err());
        let mut wide = base;
        wide.window = (-9.0, 2.0);
        assert!(solve_cauchy(&wide).is_err());
    }

    #[test]
    fn field_serialization_shapes() {
        let grid = UniformGrid::new(-1.0, 1.0, 11).unwrap();
        let field = SolutionField {
            grid,
            slices: vec![TimeSlice {
                time: 0.5,
                values: vec![0.25; 11],
                stitch_residual: 0.0,
                max_condition: 1.0,
                mass: 0.5,
                momentum: 0.125,
                seconds: 0.0,
            }],
            direct_seconds: 0.0,
            warnings: Vec::new(),
        };
        let mut buf = Vec::new();
        field.write_matrix(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("x "));
        assert_eq!(lines[1].split_whitespace().count(), 12);
    }
}
