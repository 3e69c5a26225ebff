//! Direct scattering in the disk variable `z = (1/2 + i rho)/(1/2 - i rho)`:
//! truncated power series for the Jost values and slopes at the origin,
//! eigenvalues as zeros of the Wronskian on `(-1, 1)`, norming constants,
//! reflection coefficients on the unit circle, and the KdV evolution law.

use crate::error::{Error, Result};
use crate::jost::CoefficientTables;
use crate::numerics::bracketed_roots;
use crate::potential::TailIntegrals;
use num_complex::Complex64;
use std::io::{BufRead, Write};

/// Half-plane / disk change of variable.
pub mod mobius {
    use num_complex::Complex64;

    pub fn z_from_rho(rho: Complex64) -> Complex64 {
        let i = Complex64::i();
        (0.5 + i * rho) / (0.5 - i * rho)
    }

    pub fn rho_from_z(z: Complex64) -> Complex64 {
        let i = Complex64::i();
        i * (1.0 - z) / (2.0 * (1.0 + z))
    }

    /// `tau` with `rho = i tau` for real `z` in `(-1, 1)`.
    pub fn tau_from_z(z: f64) -> f64 {
        (1.0 - z) / (2.0 * (1.0 + z))
    }

    /// Real `rho` corresponding to the circle point `z = exp(i theta)`.
    pub fn rho_on_circle(theta: f64) -> f64 {
        (theta / 2.0).tan() / 2.0
    }
}

/// Series data of the four origin functions: coefficient values at `x = 0`
/// and the two half-line integrals of the potential.
#[derive(Debug, Clone)]
pub struct SeriesAtOrigin {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    /// `integral_0^infinity q`
    pub q_right: f64,
    /// `integral_{-infinity}^0 q`
    pub q_left: f64,
}

impl SeriesAtOrigin {
    pub fn from_tables(tables: &CoefficientTables, tails: &TailIntegrals) -> Self {
        let mid = (tables.grid.count() - 1) / 2;
        let take = |t: &Vec<Vec<f64>>| t.iter().map(|row| row[mid]).collect();
        SeriesAtOrigin {
            a: take(&tables.a),
            b: take(&tables.b),
            c: take(&tables.c),
            d: take(&tables.d),
            q_right: tails.right_at_origin(),
            q_left: tails.left_at_origin(),
        }
    }

    pub fn order(&self) -> usize {
        self.a.len() - 1
    }
}

/// Which of the four origin series to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OriginSeries {
    /// Jost value from the right family (`e`)
    RightValue,
    /// Jost value from the left family (`g`)
    LeftValue,
    /// Jost slope from the right family (`E`); has a pole at `z = -1`
    RightSlope,
    /// Jost slope from the left family (`G`); has a pole at `z = -1`
    LeftSlope,
}

// Alternating series sum_n (-1)^n z^n c_n evaluated as a plain polynomial in
// -z by Horner's rule.
fn poly(coeffs: &[f64], w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * w + c;
    }
    acc
}

fn poly_derivative(coeffs: &[f64], w: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &c) in coeffs.iter().enumerate().rev().take(coeffs.len() - 1) {
        acc = acc * w + c * n as f64;
    }
    acc
}

const POLE_GUARD: f64 = 1e-12;

fn pole_term(z: Complex64) -> Result<Complex64> {
    let den = z + 1.0;
    if den.norm() < POLE_GUARD {
        return Err(Error::PoleAtMinusOne);
    }
    Ok((z - 1.0) / (2.0 * den))
}

/// Evaluate one origin series at `z` (truncated at the stored order).
pub fn eval_series(series: &SeriesAtOrigin, which: OriginSeries, z: Complex64) -> Result<Complex64> {
    let w = -z;
    let one = Complex64::new(1.0, 0.0);
    Ok(match which {
        OriginSeries::RightValue => one + (z + 1.0) * poly(&series.a, w),
        OriginSeries::LeftValue => one + (z + 1.0) * poly(&series.b, w),
        OriginSeries::RightSlope => {
            pole_term(z)? - 0.5 * series.q_right + (z + 1.0) * poly(&series.d, w)
        }
        OriginSeries::LeftSlope => {
            -pole_term(z)? + 0.5 * series.q_left + (z + 1.0) * poly(&series.c, w)
        }
    })
}

fn eval_series_derivative(
    series: &SeriesAtOrigin,
    which: OriginSeries,
    z: Complex64,
) -> Result<Complex64> {
    let w = -z;
    Ok(match which {
        OriginSeries::RightValue => poly(&series.a, w) - (z + 1.0) * poly_derivative(&series.a, w),
        OriginSeries::LeftValue => poly(&series.b, w) - (z + 1.0) * poly_derivative(&series.b, w),
        OriginSeries::RightSlope => {
            let den = z + 1.0;
            if den.norm() < POLE_GUARD {
                return Err(Error::PoleAtMinusOne);
            }
            1.0 / (den * den) + poly(&series.d, w) - (z + 1.0) * poly_derivative(&series.d, w)
        }
        OriginSeries::LeftSlope => {
            let den = z + 1.0;
            if den.norm() < POLE_GUARD {
                return Err(Error::PoleAtMinusOne);
            }
            -1.0 / (den * den) + poly(&series.c, w) - (z + 1.0) * poly_derivative(&series.c, w)
        }
    })
}

/// The Wronskian function `phi(z) = e(z) G(z) - E(z) g(z)`; its zeros on
/// `(-1, 1)` are the bound states.
pub fn eval_phi(series: &SeriesAtOrigin, z: Complex64) -> Result<Complex64> {
    let e = eval_series(series, OriginSeries::RightValue, z)?;
    let g = eval_series(series, OriginSeries::LeftValue, z)?;
    let big_e = eval_series(series, OriginSeries::RightSlope, z)?;
    let big_g = eval_series(series, OriginSeries::LeftSlope, z)?;
    Ok(e * big_g - big_e * g)
}

pub fn eval_phi_prime(series: &SeriesAtOrigin, z: Complex64) -> Result<Complex64> {
    let e = eval_series(series, OriginSeries::RightValue, z)?;
    let g = eval_series(series, OriginSeries::LeftValue, z)?;
    let big_e = eval_series(series, OriginSeries::RightSlope, z)?;
    let big_g = eval_series(series, OriginSeries::LeftSlope, z)?;
    let de = eval_series_derivative(series, OriginSeries::RightValue, z)?;
    let dg = eval_series_derivative(series, OriginSeries::LeftValue, z)?;
    let dbig_e = eval_series_derivative(series, OriginSeries::RightSlope, z)?;
    let dbig_g = eval_series_derivative(series, OriginSeries::LeftSlope, z)?;
    Ok(de * big_g + e * dbig_g - dbig_e * g - big_e * dg)
}

/// One bound state: disk coordinate, decay rate and eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub z: f64,
    pub tau: f64,
    pub lambda: f64,
}

/// Norming constants attached to a bound state; `ratio` is the
/// proportionality constant between the two Jost solutions there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormingConstants {
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub ratio: f64,
}

/// Spectral-interval margin keeping away from `z = 1` (spectrum edge) and
/// `z = -1` (series pole).
pub const EIGEN_MARGIN: f64 = 1e-6;
pub const DEFAULT_SCAN: usize = 2048;
pub const DEFAULT_ROOT_TOL: f64 = 1e-13;

/// Bound states from the zeros of `phi` on `(-1+eps, 1-eps)`, ordered by
/// increasing decay rate `tau`.
pub fn find_eigenvalues(
    series: &SeriesAtOrigin,
    scan_count: usize,
    tol: f64,
) -> Result<(Vec<BoundState>, Vec<String>)> {
    let f = |z: f64| {
        eval_phi(series, Complex64::new(z, 0.0))
            .map(|v| v.re)
            .unwrap_or(f64::NAN)
    };
    let lo = -1.0 + EIGEN_MARGIN;
    let hi = 1.0 - EIGEN_MARGIN;
    let zeros = bracketed_roots(f, (lo, hi), scan_count, tol)?;
    let mut warnings = Vec::new();
    let edge = (hi - lo) / scan_count as f64 * 4.0;
    let mut states: Vec<BoundState> = zeros
        .into_iter()
        .map(|z| {
            if z - lo < edge || hi - z < edge {
                warnings.push(format!(
                    "eigenvalue at z = {z:.6} sits at the spectral-interval edge (near-resonance)"
                ));
            }
            let tau = mobius::tau_from_z(z);
            BoundState {
                z,
                tau,
                lambda: -tau * tau,
            }
        })
        .collect();
    states.sort_by(|p, q| p.tau.partial_cmp(&q.tau).unwrap());
    Ok((states, warnings))
}

/// Norming constants via the derivative of the scattering amplitude at each
/// zero. Requires the zeros to be numerically simple.
pub fn norming_constants(
    series: &SeriesAtOrigin,
    states: &[BoundState],
) -> Result<Vec<NormingConstants>> {
    let mut out = Vec::with_capacity(states.len());
    for s in states {
        let z = Complex64::new(s.z, 0.0);
        let phi = eval_phi(series, z)?;
        let dphi = eval_phi_prime(series, z)?;
        if dphi.norm() < 1e-8 {
            return Err(Error::DegenerateEigenvalue {
                z: s.z,
                phi_prime: dphi.norm(),
            });
        }
        let e = eval_series(series, OriginSeries::RightValue, z)?;
        let g = eval_series(series, OriginSeries::LeftValue, z)?;
        if e.norm() < 1e-14 {
            return Err(Error::NormingConsistency(format!(
                "Jost value vanished at the bound state z = {}",
                s.z
            )));
        }
        let ratio = g / e;
        // i a'(rho_k) with a' expressed through phi and phi'; the first term
        // vanishes at an exact zero and only mops up the root residual here
        let zp = z + 1.0;
        let zm = z - 1.0;
        let i_a_prime = -2.0 * (zp / zm) * (zp / zm) * phi + zp * zp * zp / zm * dphi;
        let alpha_plus = ratio / i_a_prime;
        let alpha_minus = 1.0 / (ratio * i_a_prime);
        for (name, v) in [
            ("alpha+", alpha_plus),
            ("alpha-", alpha_minus),
            ("ratio", ratio),
        ] {
            if v.im.abs() > 1e-8 {
                return Err(Error::NormingConsistency(format!(
                    "{name} at z = {} has imaginary residue {:.3e}",
                    s.z, v.im
                )));
            }
        }
        if alpha_plus.re <= 0.0 || alpha_minus.re <= 0.0 {
            return Err(Error::NormingConsistency(format!(
                "norming constants must be positive, got {} and {}",
                alpha_plus.re, alpha_minus.re
            )));
        }
        out.push(NormingConstants {
            alpha_plus: alpha_plus.re,
            alpha_minus: alpha_minus.re,
            ratio: ratio.re,
        });
    }
    Ok(out)
}

/// Reflection-coefficient samples on the open circle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSamples {
    pub thetas: Vec<f64>,
    pub s_plus: Vec<Complex64>,
    pub s_minus: Vec<Complex64>,
}

impl ReflectionSamples {
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Real spectral parameter at sample `j`.
    pub fn rho(&self, j: usize) -> f64 {
        mobius::rho_on_circle(self.thetas[j])
    }
}

/// Sample both reflection coefficients on the given circle grid
/// (endpoints excluded; the limits there are zero for this potential class).
pub fn reflection_coefficients(
    series: &SeriesAtOrigin,
    thetas: &[f64],
) -> Result<(ReflectionSamples, Vec<String>)> {
    let mut s_plus = Vec::with_capacity(thetas.len());
    let mut s_minus = Vec::with_capacity(thetas.len());
    let mut warnings = Vec::new();
    for &theta in thetas {
        if !(-std::f64::consts::PI..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidInput(format!(
                "circle angle {theta} outside (-pi, pi)"
            )));
        }
        let z = Complex64::new(0.0, theta).exp();
        let e = eval_series(series, OriginSeries::RightValue, z)?;
        let g = eval_series(series, OriginSeries::LeftValue, z)?;
        let big_e = eval_series(series, OriginSeries::RightSlope, z)?;
        let big_g = eval_series(series, OriginSeries::LeftSlope, z)?;
        let phi = e * big_g - big_e * g;
        if phi.norm() < 1e-12 {
            warnings.push(format!(
                "Wronskian nearly vanished on the circle at theta = {theta:.6}"
            ));
        }
        // Real coefficients make the series at conj(z) the conjugates of
        // those at z. Both ratios carry a minus: with a = -W/(2 i rho) the
        // right coefficient is -W[conj e, g]/W[e, g] and the left one
        // -W[e, conj g]/W[e, g].
        let sp = -(e.conj() * big_g - big_e.conj() * g) / phi;
        let sm = -(e * big_g.conj() - big_e * g.conj()) / phi;
        s_plus.push(sp);
        s_minus.push(sm);
    }
    Ok((
        ReflectionSamples {
            thetas: thetas.to_vec(),
            s_plus,
            s_minus,
        },
        warnings,
    ))
}

/// One bound state with its norming constants as stored in the scattering
/// data set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteDatum {
    pub z: f64,
    pub tau: f64,
    pub lambda: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    /// `g/e` at the bound state; not serialized, absent on loaded data.
    pub ratio: Option<f64>,
}

/// Full scattering data set at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringData {
    pub time: f64,
    pub discrete: Vec<DiscreteDatum>,
    pub reflection: ReflectionSamples,
    pub warnings: Vec<String>,
}

impl ScatteringData {
    /// Apply the KdV evolution law for a time increment `dt >= 0`:
    /// eigenvalues fixed, norming constants scaled by `exp(+-8 tau^3 dt)`,
    /// reflection samples rotated by `exp(+-8 i rho^3 dt)`.
    pub fn evolve(&self, dt: f64) -> Result<ScatteringData> {
        if !(dt.is_finite() && dt >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "evolution time increment {dt} must be nonnegative"
            )));
        }
        let mut discrete = Vec::with_capacity(self.discrete.len());
        for d in &self.discrete {
            let exponent = 8.0 * d.tau.powi(3) * dt;
            if exponent > 700.0 {
                return Err(Error::EvolutionOverflow { exponent });
            }
            let factor = exponent.exp();
            discrete.push(DiscreteDatum {
                alpha_plus: d.alpha_plus * factor,
                alpha_minus: d.alpha_minus / factor,
                ratio: d.ratio.map(|r| r * factor),
                ..*d
            });
        }
        let mut s_plus = Vec::with_capacity(self.reflection.len());
        let mut s_minus = Vec::with_capacity(self.reflection.len());
        for (j, &theta) in self.reflection.thetas.iter().enumerate() {
            let rho = mobius::rho_on_circle(theta);
            let phase = Complex64::new(0.0, 8.0 * rho.powi(3) * dt).exp();
            s_plus.push(self.reflection.s_plus[j] * phase);
            s_minus.push(self.reflection.s_minus[j] * phase.conj());
        }
        Ok(ScatteringData {
            time: self.time + dt,
            discrete,
            reflection: ReflectionSamples {
                thetas: self.reflection.thetas.clone(),
                s_plus,
                s_minus,
            },
            warnings: self.warnings.clone(),
        })
    }

    /// Plain-text serialization: header, one line per bound state, one line
    /// per reflection sample, 17 significant digits throughout.
    pub fn write_text(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "t {:.16e}", self.time)?;
        writeln!(out, "eigenvalues {}", self.discrete.len())?;
        for d in &self.discrete {
            writeln!(
                out,
                "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e}",
                d.z, d.tau, d.lambda, d.alpha_plus, d.alpha_minus
            )?;
        }
        writeln!(out, "reflection {}", self.reflection.len())?;
        for j in 0..self.reflection.len() {
            writeln!(
                out,
                "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e}",
                self.reflection.thetas[j],
                self.reflection.s_plus[j].re,
                self.reflection.s_plus[j].im,
                self.reflection.s_minus[j].re,
                self.reflection.s_minus[j].im
            )?;
        }
        Ok(())
    }

    pub fn read_text(input: &mut impl BufRead) -> Result<ScatteringData> {
        let mut lines = input.lines();
        let mut next_line = || -> Result<String> {
            lines
                .next()
                .ok_or_else(|| Error::FileFormat("unexpected end of file".into()))?
                .map_err(Error::from)
        };

        let header = next_line()?;
        let time = parse_tagged(&header, "t")?;
        let count_line = next_line()?;
        let k = parse_tagged(&count_line, "eigenvalues")? as usize;
        let mut discrete = Vec::with_capacity(k);
        for _ in 0..k {
            let v = parse_floats(&next_line()?, 5)?;
            discrete.push(DiscreteDatum {
                z: v[0],
                tau: v[1],
                lambda: v[2],
                alpha_plus: v[3],
                alpha_minus: v[4],
                ratio: None,
            });
        }
        let count_line = next_line()?;
        let n = parse_tagged(&count_line, "reflection")? as usize;
        let mut thetas = Vec::with_capacity(n);
        let mut s_plus = Vec::with_capacity(n);
        let mut s_minus = Vec::with_capacity(n);
        for _ in 0..n {
            let v = parse_floats(&next_line()?, 5)?;
            thetas.push(v[0]);
            s_plus.push(Complex64::new(v[1], v[2]));
            s_minus.push(Complex64::new(v[3], v[4]));
        }
        Ok(ScatteringData {
            time,
            discrete,
            reflection: ReflectionSamples {
                thetas,
                s_plus,
                s_minus,
            },
            warnings: Vec::new(),
        })
    }
}

fn parse_tagged(line: &str, tag: &str) -> Result<f64> {
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next()) {
        (Some(t), Some(v)) if t == tag => v
            .parse()
            .map_err(|_| Error::FileFormat(format!("bad value in `{line}`"))),
        _ => Err(Error::FileFormat(format!(
            "expected `{tag} <value>`, got `{line}`"
        ))),
    }
}

fn parse_floats(line: &str, n: usize) -> Result<Vec<f64>> {
    let vals: std::result::Result<Vec<f64>, _> =
        line.split_whitespace().map(str::parse::<f64>).collect();
    let vals = vals.map_err(|_| Error::FileFormat(format!("bad number in `{line}`")))?;
    if vals.len() != n {
        return Err(Error::FileFormat(format!(
            "expected {n} columns, got {} in `{line}`",
            vals.len()
        )));
    }
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jost::{build_jost_base, recurse_coefficients};
    use crate::potential::{tail_integrals, Potential};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn series_for(q: &Potential, levels: usize) -> SeriesAtOrigin {
        let base = build_jost_base(q).unwrap();
        let tails = tail_integrals(q).unwrap();
        let tables = recurse_coefficients(&base, &tails, levels).unwrap();
        SeriesAtOrigin::from_tables(&tables, &tails)
    }

    fn zero_series() -> SeriesAtOrigin {
        SeriesAtOrigin {
            a: vec![0.0; 33],
            b: vec![0.0; 33],
            c: vec![0.0; 33],
            d: vec![0.0; 33],
            q_right: 0.0,
            q_left: 0.0,
        }
    }

    #[test]
    fn mobius_roundtrip_is_stable() {
        for &re in &[-3.0, -0.5, 0.0, 0.7, 4.0] {
            for &im in &[0.0, 0.3, 2.0] {
                let rho = Complex64::new(re, im);
                let back = mobius::rho_from_z(mobius::z_from_rho(rho));
                assert!((back - rho).norm() < 1e-12 * (1.0 + rho.norm()));
            }
        }
        // the tau parametrization agrees with the complex map on (-1, 1)
        let z = -0.278;
        let tau = mobius::tau_from_z(z);
        let rho = mobius::rho_from_z(Complex64::new(z, 0.0));
        assert_abs_diff_eq!(rho.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.im, tau, epsilon = 1e-15);
    }

    #[test]
    fn free_series_values() {
        let s = zero_series();
        for &zr in &[-0.9, -0.2, 0.0, 0.5, 0.99] {
            let z = Complex64::new(zr, 0.0);
            let e = eval_series(&s, OriginSeries::RightValue, z).unwrap();
            let g = eval_series(&s, OriginSeries::LeftValue, z).unwrap();
            let big_e = eval_series(&s, OriginSeries::RightSlope, z).unwrap();
            let big_g = eval_series(&s, OriginSeries::LeftSlope, z).unwrap();
            let pole = (zr - 1.0) / (2.0 * (zr + 1.0));
            assert_abs_diff_eq!(e.re, 1.0);
            assert_abs_diff_eq!(g.re, 1.0);
            assert_abs_diff_eq!(big_e.re, pole, epsilon = 1e-15);
            assert_abs_diff_eq!(big_g.re, -pole, epsilon = 1e-15);
            let phi = eval_phi(&s, z).unwrap();
            assert_abs_diff_eq!(phi.re, -(zr - 1.0) / (zr + 1.0), epsilon = 1e-14);
        }
    }

    #[test]
    fn series_collapses_at_disk_center() {
        let q = Potential::gaussian_odd(12.0, 1201).unwrap();
        let s = series_for(&q, 24);
        let e0 = eval_series(&s, OriginSeries::RightValue, Complex64::new(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(e0.re, 1.0 + s.a[0], epsilon = 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        let s = zero_series();
        assert!(matches!(
            eval_series(&s, OriginSeries::RightSlope, Complex64::new(-1.0, 0.0)),
            Err(Error::PoleAtMinusOne)
        ));
    }

    #[test]
    fn phi_prime_matches_central_difference() {
        let q = Potential::gaussian_odd(12.0, 1201).unwrap();
        let s = series_for(&q, 32);
        let z0 = 0.5;
        let h = 1e-6;
        let fd = (eval_phi(&s, Complex64::new(z0 + h, 0.0)).unwrap()
            - eval_phi(&s, Complex64::new(z0 - h, 0.0)).unwrap())
            / (2.0 * h);
        let an = eval_phi_prime(&s, Complex64::new(z0, 0.0)).unwrap();
        assert_abs_diff_eq!(an.re, fd.re, epsilon = 1e-7);
    }

    #[test]
    fn free_potential_has_no_bound_states_and_no_reflection() {
        let s = zero_series();
        let (states, warnings) = find_eigenvalues(&s, DEFAULT_SCAN, DEFAULT_ROOT_TOL).unwrap();
        assert!(states.is_empty());
        assert!(warnings.is_empty());
        let thetas = crate::numerics::interior_theta_grid(512);
        let (refl, _) = reflection_coefficients(&s, &thetas).unwrap();
        assert!(refl.s_plus.iter().all(|v| v.norm() < 1e-14));
        assert!(refl.s_minus.iter().all(|v| v.norm() < 1e-14));
    }

    #[test]
    fn soliton_eigenvalue_and_norming() {
        let q = Potential::soliton(PI, 12.0, 2401).unwrap();
        let s = series_for(&q, 48);
        let (states, _) = find_eigenvalues(&s, DEFAULT_SCAN, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(states.len(), 1);
        let k = PI.sqrt() / 2.0;
        assert_abs_diff_eq!(states[0].lambda, -PI / 4.0, epsilon = 1e-8);
        assert_abs_diff_eq!(states[0].z, (0.5 - k) / (0.5 + k), epsilon = 1e-8);
        let norm = norming_constants(&s, &states).unwrap();
        assert_abs_diff_eq!(norm[0].alpha_plus, PI.sqrt(), epsilon = 3e-5);
        assert_abs_diff_eq!(norm[0].alpha_minus, PI.sqrt(), epsilon = 3e-5);
        // even potential: the two Jost solutions coincide at the bound state
        assert_abs_diff_eq!(norm[0].ratio, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn soliton_series_matches_closed_form_on_real_ray() {
        let q = Potential::soliton(PI, 12.0, 2401).unwrap();
        let s = series_for(&q, 48);
        let k = PI.sqrt() / 2.0;
        for &rho in &[0.4, 1.0, 2.5] {
            let rho_c = Complex64::new(rho, 0.0);
            let z = mobius::z_from_rho(rho_c);
            let e = eval_series(&s, OriginSeries::RightValue, z).unwrap();
            let g = eval_series(&s, OriginSeries::LeftValue, z).unwrap();
            let i = Complex64::i();
            let closed = (i * rho) / (i * rho - k);
            assert!((e * g - closed * closed).norm() < 1e-6);
        }
    }

    #[test]
    fn reflection_symmetry_and_bound() {
        let q = Potential::gaussian_odd(12.0, 2401).unwrap();
        let s = series_for(&q, 48);
        let thetas = crate::numerics::interior_theta_grid(2000);
        let (refl, warnings) = reflection_coefficients(&s, &thetas).unwrap();
        assert!(warnings.is_empty());
        let n = refl.len();
        for j in 0..n {
            assert!(refl.s_plus[j].norm() <= 1.0 + 1e-6);
            assert!(refl.s_minus[j].norm() <= 1.0 + 1e-6);
            // the grid is symmetric: sample n-1-j sits at -theta_j
            let mirror = n - 1 - j;
            assert!((refl.s_plus[mirror] - refl.s_plus[j].conj()).norm() < 1e-8);
            assert!((refl.s_minus[mirror] - refl.s_minus[j].conj()).norm() < 1e-8);
        }
    }

    #[test]
    fn evolution_is_a_group_and_fixes_eigenvalues() {
        let q = Potential::gaussian_odd(12.0, 1201).unwrap();
        let s = series_for(&q, 32);
        let (states, _) = find_eigenvalues(&s, DEFAULT_SCAN, DEFAULT_ROOT_TOL).unwrap();
        let norming = norming_constants(&s, &states).unwrap();
        let thetas = crate::numerics::interior_theta_grid(256);
        let (refl, _) = reflection_coefficients(&s, &thetas).unwrap();
        let data = ScatteringData {
            time: 0.0,
            discrete: states
                .iter()
                .zip(&norming)
                .map(|(st, no)| DiscreteDatum {
                    z: st.z,
                    tau: st.tau,
                    lambda: st.lambda,
                    alpha_plus: no.alpha_plus,
                    alpha_minus: no.alpha_minus,
                    ratio: Some(no.ratio),
                })
                .collect(),
            reflection: refl,
            warnings: Vec::new(),
        };

        let id = data.evolve(0.0).unwrap();
        assert_eq!(id, data);

        let two_steps = data.evolve(0.3).unwrap().evolve(0.45).unwrap();
        let one_step = data.evolve(0.75).unwrap();
        assert_abs_diff_eq!(two_steps.time, one_step.time, epsilon = 1e-15);
        for (a, b) in two_steps.discrete.iter().zip(&one_step.discrete) {
            assert_eq!(a.lambda, b.lambda);
            assert_abs_diff_eq!(
                a.alpha_plus,
                b.alpha_plus,
                epsilon = 1e-12 * b.alpha_plus.abs()
            );
        }
        for (a, b) in two_steps
            .reflection
            .s_plus
            .iter()
            .zip(&one_step.reflection.s_plus)
        {
            assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
        }

        assert!(matches!(
            data.evolve(-1.0),
            Err(Error::InvalidInput(_))
        ));
        let deep = ScatteringData {
            discrete: vec![DiscreteDatum {
                z: -0.9,
                tau: 9.5,
                lambda: -90.25,
                alpha_plus: 1.0,
                alpha_minus: 1.0,
                ratio: None,
            }],
            ..data.clone()
        };
        assert!(matches!(
            deep.evolve(1.0),
            Err(Error::EvolutionOverflow { .. })
        ));
    }

    #[test]
    fn text_roundtrip_is_exact() {
        let q = Potential::gaussian_odd(12.0, 1201).unwrap();
        let s = series_for(&q, 24);
        let (states, _) = find_eigenvalues(&s, DEFAULT_SCAN, DEFAULT_ROOT_TOL).unwrap();
        let norming = norming_constants(&s, &states).unwrap();
        let thetas = crate::numerics::interior_theta_grid(64);
        let (refl, _) = reflection_coefficients(&s, &thetas).unwrap();
        let data = ScatteringData {
            time: 0.25,
            discrete: states
                .iter()
                .zip(&norming)
                .map(|(st, no)| DiscreteDatum {
                    z: st.z,
                    tau: st.tau,
                    lambda: st.lambda,
                    alpha_plus: no.alpha_plus,
                    alpha_minus: no.alpha_minus,
                    ratio: None,
                })
                .collect(),
            reflection: refl,
            warnings: Vec::new(),
        };
        let mut buf = Vec::new();
        data.write_text(&mut buf).unwrap();
        let back = ScatteringData::read_text(&mut buf.as_slice()).unwrap();
        assert_eq!(back, data);
    }
}
