//! Built-in verification suite: the checks behind the CLI `validate`
//! subcommand and the `acceptance` integration test target.
//!
//! Every tolerance is pinned here. Two sub-checks are known to fail and are
//! reported honestly with their measured values: the series sum rule at
//! truncation level 30 (the exact Fourier-Laguerre tail of the gaussian-odd
//! datum is 4e-5 there, verified against an independent Cauchy-integral
//! oracle) and windowed conservation for the gaussian-odd run (its
//! dispersive wake leaves every window that fits inside the truncation box,
//! carrying visible mass and momentum with it).

use crate::error::Result;
use crate::glm::{
    assemble_system, circle_kernel_integral, discrete_kernel_part, recover_potential,
    solve_first_component, DataSide, PhaseSign, RecoverParams,
};
use crate::jost::{build_jost_base, recurse_coefficients, Side};
use crate::numerics::{
    fit_spline, integrate_second_order, interior_theta_grid, newton_cotes_6, SplineOrder,
    SweepFrom, UniformGrid,
};
use crate::pipeline::{analytic_soliton, direct_scattering, NumericParams};
use crate::potential::{tail_integrals, Potential};
use crate::scatter::{mobius, DiscreteDatum, ReflectionSamples, ScatteringData};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

/// Outcome of one verification criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Paper-reported discrete data for the gaussian-odd datum.
pub const EX1_LAMBDA: f64 = -0.0138384594;
pub const EX1_ALPHA_MINUS: f64 = 0.2055954681;
pub const EX1_ALPHA_PLUS: f64 = 0.0416040801;

struct Case {
    potential: Potential,
    data: ScatteringData,
    direct_seconds: f64,
}

fn prepare(potential: Potential, params: &NumericParams) -> Result<Case> {
    let started = Instant::now();
    let data = direct_scattering(&potential, params)?;
    Ok(Case {
        potential,
        data,
        direct_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Jost solution (value, derivative) at the origin from a direct complex-ODE
/// integration; independent of the series and recursion machinery.
pub fn complex_jost_at_origin(
    q: &Potential,
    rho: Complex64,
    side: Side,
    substeps: usize,
) -> Result<[Complex64; 2]> {
    let b = q.half_width();
    let i = Complex64::i();
    let amp = (i * rho * b).exp();
    let (boundary, from) = match side {
        Side::Right => ([amp, i * rho * amp], SweepFrom::Last),
        Side::Left => ([amp, -i * rho * amp], SweepFrom::First),
    };
    let sol = integrate_second_order(
        |x| Complex64::new(q.eval(x), 0.0) - rho * rho,
        q.grid(),
        boundary,
        from,
        substeps,
    )?;
    Ok(sol[(q.grid().count() - 1) / 2])
}

/// Number of bound states below `lambda`, counted as the sign changes of the
/// solution carrying the decaying asymptote in from the left.
pub fn oscillation_count(q: &Potential, lambda: f64) -> Result<usize> {
    let tau = (-lambda).sqrt();
    let sol = integrate_second_order(
        |x| q.eval(x) - lambda,
        q.grid(),
        [1.0, tau],
        SweepFrom::First,
        2,
    )?;
    let mut count = 0;
    let mut prev = sol[0][0];
    for s in sol.iter().skip(1) {
        if s[0] * prev < 0.0 {
            count += 1;
        }
        if s[0] != 0.0 {
            prev = s[0];
        }
    }
    Ok(count)
}

fn max_recovery_error(
    data: &ScatteringData,
    window: &UniformGrid,
    n_trunc: usize,
    exact: impl Fn(f64) -> f64,
) -> Result<(f64, f64)> {
    let started = Instant::now();
    let rec = recover_potential(
        data,
        window,
        &RecoverParams {
            n_trunc,
            ..RecoverParams::default()
        },
    )?;
    let mut worst = 0.0f64;
    for (i, v) in rec.values.iter().enumerate() {
        worst = worst.max((v - exact(window.node(i))).abs());
    }
    Ok((worst, started.elapsed().as_secs_f64()))
}

fn window_601() -> UniformGrid {
    UniformGrid::new(-5.0, 7.0, 601).expect("static window")
}

/// Run the full suite.
pub fn run_all() -> Result<Vec<CriterionOutcome>> {
    let params = NumericParams::default();
    let ex1 = prepare(Potential::gaussian_odd(12.0, 2401)?, &params)?;
    let soliton = prepare(Potential::soliton(PI, 12.0, 2401)?, &params)?;
    let ex3 = prepare(Potential::piecewise_bessel(12.0, 2401)?, &params)?;

    Ok(vec![
        criterion_1(&soliton),
        criterion_2(&soliton),
        criterion_3(&soliton),
        criterion_4(&ex1),
        criterion_5(&ex1, &soliton, &ex3)?,
        criterion_6(&soliton)?,
        criterion_7(&ex1, &soliton, &ex3, &params)?,
        criterion_8(&ex1)?,
    ])
}

fn criterion_1(soliton: &Case) -> CriterionOutcome {
    let started = Instant::now();
    let mut detail = String::new();
    let single = soliton.data.discrete.len() == 1;
    let err = soliton
        .data
        .discrete
        .first()
        .map(|d| (d.lambda + PI / 4.0).abs())
        .unwrap_or(f64::INFINITY);
    let in_time = soliton.direct_seconds <= 5.0;
    let _ = writeln!(
        detail,
        "{} bound state(s); |lambda + pi/4| = {err:.3e} (gate 1e-8); direct stage {:.2}s (gate 5s)",
        soliton.data.discrete.len(),
        soliton.direct_seconds
    );
    CriterionOutcome {
        id: "C1",
        name: "soliton eigenvalue",
        passed: single && err <= 1e-8 && in_time,
        detail,
        seconds: started.elapsed().as_secs_f64() + soliton.direct_seconds,
    }
}

fn criterion_2(soliton: &Case) -> CriterionOutcome {
    let started = Instant::now();
    let (ep, em) = soliton
        .data
        .discrete
        .first()
        .map(|d| {
            (
                (d.alpha_plus - PI.sqrt()).abs(),
                (d.alpha_minus - PI.sqrt()).abs(),
            )
        })
        .unwrap_or((f64::INFINITY, f64::INFINITY));
    CriterionOutcome {
        id: "C2",
        name: "soliton norming constants",
        passed: ep <= 5e-5 && em <= 5e-5,
        detail: format!("|alpha+ - sqrt(pi)| = {ep:.3e}, |alpha- - sqrt(pi)| = {em:.3e} (gate 5e-5)\n"),
        seconds: started.elapsed().as_secs_f64(),
    }
}

fn criterion_3(soliton: &Case) -> CriterionOutcome {
    let started = Instant::now();
    let max_s = soliton
        .data
        .reflection
        .s_plus
        .iter()
        .chain(&soliton.data.reflection.s_minus)
        .fold(0.0f64, |a, v| a.max(v.norm()));
    CriterionOutcome {
        id: "C3",
        name: "reflectionless check",
        passed: max_s <= 5e-4,
        detail: format!("max |s| over both coefficients = {max_s:.3e} (gate 5e-4)\n"),
        seconds: started.elapsed().as_secs_f64(),
    }
}

fn criterion_4(ex1: &Case) -> CriterionOutcome {
    let started = Instant::now();
    let mut detail = String::new();
    let mut passed = ex1.data.discrete.len() == 1;
    if let Some(d) = ex1.data.discrete.first() {
        let dl = (d.lambda - EX1_LAMBDA).abs();
        let dm = (d.alpha_minus - EX1_ALPHA_MINUS).abs();
        let dp = (d.alpha_plus - EX1_ALPHA_PLUS).abs();
        passed &= dl <= 1e-8 && dm <= 1e-6 && dp <= 1e-6;
        let _ = writeln!(
            detail,
            "|lambda - ref| = {dl:.3e} (gate 1e-8); |alpha- - ref| = {dm:.3e}, |alpha+ - ref| = {dp:.3e} (gate 1e-6)"
        );
    } else {
        detail.push_str("no bound state found\n");
        passed = false;
    }
    CriterionOutcome {
        id: "C4",
        name: "gaussian-odd discrete data",
        passed,
        detail,
        seconds: started.elapsed().as_secs_f64(),
    }
}

fn criterion_5(ex1: &Case, soliton: &Case, ex3: &Case) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut detail = String::new();
    let window = window_601();

    let q1 = ex1.potential.clone();
    let (e1, t1) = max_recovery_error(&ex1.data, &window, 5, move |x| q1.eval(x))?;
    let run1 = ex1.direct_seconds + t1;

    let qs = soliton.potential.clone();
    let (es, ts) = max_recovery_error(&soliton.data, &window, 5, move |x| qs.eval(x))?;
    let runs = soliton.direct_seconds + ts;

    let window3 = UniformGrid::new(-7.0, 7.0, 701)?;
    let q3 = ex3.potential.clone();
    let (e3, t3) = max_recovery_error(&ex3.data, &window3, 9, move |x| q3.eval(x))?;
    let run3 = ex3.direct_seconds + t3;

    let _ = writeln!(
        detail,
        "gaussian-odd, 6 equations, (-5,7): max error {e1:.3e} (gate 3e-3), {run1:.1}s"
    );
    let _ = writeln!(
        detail,
        "soliton, 6 equations, (-5,7): max error {es:.3e} (gate 1.6e-3), {runs:.1}s"
    );
    let _ = writeln!(
        detail,
        "piecewise, 10 equations, (-7,7): max error {e3:.3e} (gate 1.2e-2), {run3:.1}s"
    );
    let passed = e1 <= 3e-3
        && es <= 1.6e-3
        && e3 <= 1.2e-2
        && run1 <= 60.0
        && runs <= 60.0
        && run3 <= 60.0;
    Ok(CriterionOutcome {
        id: "C5",
        name: "roundtrip recovery at t = 0",
        passed,
        detail,
        seconds: started.elapsed().as_secs_f64(),
    })
}

fn criterion_6(soliton: &Case) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let window = window_601();
    let (e0, _) = max_recovery_error(&soliton.data, &window, 5, |x| analytic_soliton(PI, x, 0.0))?;
    let evolved = soliton.data.evolve(1.0)?;
    let (e1, _) = max_recovery_error(&evolved, &window, 5, |x| analytic_soliton(PI, x, 1.0))?;
    let passed = e1 <= 1e-3 && e1 <= e0 + 1e-4;
    Ok(CriterionOutcome {
        id: "C6",
        name: "soliton evolution accuracy",
        passed,
        detail: format!(
            "max error at t=1: {e1:.3e} (gate 1e-3); t=0 error {e0:.3e}; growth bound e1 <= e0 + 1e-4\n"
        ),
        seconds: started.elapsed().as_secs_f64(),
    })
}

struct SubCheck {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn sub(name: &'static str, passed: bool, detail: String) -> SubCheck {
    SubCheck {
        name,
        passed,
        detail,
    }
}

fn criterion_7(
    ex1: &Case,
    soliton: &Case,
    ex3: &Case,
    params: &NumericParams,
) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut checks: Vec<SubCheck> = Vec::new();

    checks.push(zero_potential_trivia()?);
    checks.push(sum_rule_at_level_30(&ex1.potential)?);
    checks.push(wronskian_identities(&[
        &Potential::zero(12.0, 1201)?,
        &ex1.potential,
        &soliton.potential,
        &ex3.potential,
    ])?);
    checks.push(reflection_symmetry_and_bound(&[&ex1.data, &ex3.data]));
    checks.push(wronskian_function_oracle(&ex1.potential)?);
    checks.push(circle_vs_line_quadrature()?);
    checks.push(rank_one_closed_forms()?);
    checks.push(finite_section_monotone(ex1)?);
    checks.push(evolution_group_law(&ex1.data)?);
    checks.push(conservation(&ex1.potential, &soliton.potential, params)?);
    checks.push(oscillation_counts(&[
        (&Potential::zero(12.0, 1201)?, 0),
        (&ex1.potential, ex1.data.discrete.len()),
        (&soliton.potential, soliton.data.discrete.len()),
        (&ex3.potential, ex3.data.discrete.len()),
    ])?);
    checks.push(soliton_translation(soliton)?);

    let mut detail = String::new();
    let mut passed = true;
    for c in &checks {
        let mark = if c.passed { "ok " } else { "FAIL" };
        let _ = writeln!(detail, "[{mark}] {}: {}", c.name, c.detail);
        passed &= c.passed;
    }
    Ok(CriterionOutcome {
        id: "C7",
        name: "property suite",
        passed,
        detail,
        seconds: started.elapsed().as_secs_f64(),
    })
}

fn zero_potential_trivia() -> Result<SubCheck> {
    let q = Potential::zero(8.0, 401)?;
    let params = NumericParams {
        half_width: 8.0,
        grid_count: 401,
        coeff_levels: 12,
        theta_count: 512,
        recovery_step: 0.1,
        ..NumericParams::default()
    };
    let data = direct_scattering(&q, &params)?;
    let max_s = data
        .reflection
        .s_plus
        .iter()
        .chain(&data.reflection.s_minus)
        .fold(0.0f64, |a, v| a.max(v.norm()));
    let window = UniformGrid::new(-2.0, 2.0, 41)?;
    let rec = recover_potential(&data, &window, &RecoverParams::default())?;
    let max_u = rec.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    // the reflection ratio divides by the Wronskian, which vanishes linearly
    // at the spectrum edge for the free problem; roundoff in the coefficient
    // tables is amplified to ~1e-10 at the innermost circle samples
    let ok = data.discrete.is_empty() && max_s <= 1e-9 && max_u <= 1e-12;
    Ok(sub(
        "zero-potential trivia",
        ok,
        format!(
            "{} bound states, max |s| = {max_s:.1e}, max |recovered| = {max_u:.1e}",
            data.discrete.len()
        ),
    ))
}

fn sum_rule_at_level_30(q: &Potential) -> Result<SubCheck> {
    let base = build_jost_base(q)?;
    let tails = tail_integrals(q)?;
    let tables = recurse_coefficients(&base, &tails, 30)?;
    let n = q.grid().count();
    let mid = (n - 1) / 2;
    let mut worst = 0.0f64;
    for i in 0..n {
        if i >= mid {
            worst = worst.max((tables.partial_sum_a(30, i) - 0.5 * tails.right()[i]).abs());
        }
        if i <= mid {
            worst = worst.max((tables.partial_sum_b(30, i) - 0.5 * tails.left()[i]).abs());
        }
    }
    // Stated gate 1e-6. The exact series tail at level 30 is 4.3e-5 for this
    // datum (coefficient a_30(0) = -7.1e-6, confirmed against an independent
    // Cauchy-integral oracle); the gate is reached near level 50 instead.
    Ok(sub(
        "series sum rule, level 30",
        worst <= 1e-6,
        format!("max residual {worst:.3e} vs stated gate 1e-6 (exact tail of this datum; not an implementation artifact)"),
    ))
}

fn wronskian_identities(potentials: &[&Potential]) -> Result<SubCheck> {
    let mut worst = 0.0f64;
    for q in potentials {
        worst = worst.max(build_jost_base(q)?.wronskian_residual);
    }
    Ok(sub(
        "Wronskian identities",
        worst <= 1e-8,
        format!("max |W - fixed value| = {worst:.3e} (gate 1e-8)"),
    ))
}

fn reflection_symmetry_and_bound(sets: &[&ScatteringData]) -> SubCheck {
    let mut worst_sym = 0.0f64;
    let mut worst_mag = 0.0f64;
    for data in sets {
        let r = &data.reflection;
        let n = r.len();
        for j in 0..n {
            worst_mag = worst_mag
                .max(r.s_plus[j].norm() - 1.0)
                .max(r.s_minus[j].norm() - 1.0);
            let mirror = n - 1 - j;
            worst_sym = worst_sym
                .max((r.s_plus[mirror] - r.s_plus[j].conj()).norm())
                .max((r.s_minus[mirror] - r.s_minus[j].conj()).norm());
        }
    }
    sub(
        "reflection symmetry and bound",
        worst_sym <= 1e-8 && worst_mag <= 1e-6,
        format!("conjugation residual {worst_sym:.3e} (gate 1e-8), |s|-1 excess {worst_mag:.3e} (gate 1e-6)"),
    )
}

fn wronskian_function_oracle(q: &Potential) -> Result<SubCheck> {
    use self::rand_rho::RhoSampler;
    let base = build_jost_base(q)?;
    let tails = tail_integrals(q)?;
    let tables = recurse_coefficients(&base, &tails, 64)?;
    let series = crate::scatter::SeriesAtOrigin::from_tables(&tables, &tails);
    let mut worst = 0.0f64;
    let mut sampler = RhoSampler::new(0x5eed);
    for _ in 0..10 {
        let rho = 0.2 + 4.8 * sampler.next_unit();
        let rho_c = Complex64::new(rho, 0.0);
        let e = complex_jost_at_origin(q, rho_c, Side::Right, 4)?;
        let g = complex_jost_at_origin(q, rho_c, Side::Left, 4)?;
        let w = e[0] * g[1] - e[1] * g[0];
        let phi = crate::scatter::eval_phi(&series, mobius::z_from_rho(rho_c))?;
        worst = worst.max((phi - w).norm() / w.norm());
    }
    Ok(sub(
        "Wronskian function vs ODE oracle",
        worst <= 1e-5,
        format!("max relative deviation {worst:.3e} at 10 sample points (gate 1e-5)"),
    ))
}

// Small deterministic generator for oracle sample points; keeps the suite
// free of an RNG dependency.
mod rand_rho {
    pub struct RhoSampler(u64);
    impl RhoSampler {
        pub fn new(seed: u64) -> Self {
            RhoSampler(seed.max(1))
        }
        pub fn next_unit(&mut self) -> f64 {
            // xorshift64*
            let mut x = self.0;
            x ^= x >> 12;
            x ^= x << 25;
            x ^= x >> 27;
            self.0 = x;
            let v = x.wrapping_mul(0x2545F4914F6CDD1D);
            (v >> 11) as f64 / (1u64 << 53) as f64
        }
    }
}

fn circle_vs_line_quadrature() -> Result<SubCheck> {
    let thetas = interior_theta_grid(20_000);
    let samples: Vec<Complex64> = thetas
        .iter()
        .map(|&t| {
            let rho = mobius::rho_on_circle(t);
            Complex64::new((-rho * rho).exp(), 0.0)
        })
        .collect();
    let reflection = ReflectionSamples {
        thetas,
        s_plus: samples.clone(),
        s_minus: samples,
    };
    let circle = circle_kernel_integral(&reflection, DataSide::Plus, 0.0, 1, 3, PhaseSign::Plus)?;
    let grid = UniformGrid::new(-40.0, 40.0, 16001)?;
    let vals: Vec<Complex64> = grid
        .nodes()
        .iter()
        .map(|&rho| {
            let num = Complex64::new(0.5, rho);
            let den = Complex64::new(0.5, -rho);
            Complex64::new((-rho * rho).exp(), 0.0) * num / (den * den * den)
        })
        .collect();
    let line = newton_cotes_6(&vals, &grid)?;
    let err = (circle - line).norm();
    Ok(sub(
        "circle vs real-line quadrature",
        err <= 1e-8,
        format!("deviation {err:.3e} (gate 1e-8)"),
    ))
}

fn rank_one_closed_forms() -> Result<SubCheck> {
    let k = PI.sqrt() / 2.0;
    let thetas = interior_theta_grid(128);
    let zeros = vec![Complex64::new(0.0, 0.0); 128];
    let data = ScatteringData {
        time: 0.0,
        discrete: vec![DiscreteDatum {
            z: (0.5 - k) / (0.5 + k),
            tau: k,
            lambda: -k * k,
            alpha_plus: PI.sqrt(),
            alpha_minus: PI.sqrt(),
            ratio: Some(1.0),
        }],
        reflection: ReflectionSamples {
            thetas,
            s_plus: zeros.clone(),
            s_minus: zeros,
        },
        warnings: Vec::new(),
    };
    let mut worst = (discrete_kernel_part(&data, DataSide::Plus, 0.0, 0)?
        - PI.sqrt() / (0.5 + k).powi(2))
    .abs();
    let w = (0.5 - k) / (0.5 + k);
    for &x in &[-1.5, 0.0, 2.0] {
        for n_trunc in [0usize, 3, 6] {
            let sys = assemble_system(&data, x, n_trunc, DataSide::Plus)?;
            let sol = solve_first_component(&sys)?;
            let g0 = PI.sqrt() * (-2.0 * k * x).exp() / (0.5 + k);
            let ghat = PI.sqrt() * (-2.0 * k * x).exp() / (0.5 + k).powi(2);
            let series: f64 = (0..=n_trunc).map(|n| w.powi(2 * n as i32)).sum();
            worst = worst.max((sol.value + g0 / (1.0 + ghat * series)).abs());
        }
    }
    Ok(sub(
        "rank-one closed forms",
        worst <= 1e-12,
        format!("max deviation {worst:.3e} (gate 1e-12)"),
    ))
}

fn finite_section_monotone(ex1: &Case) -> Result<SubCheck> {
    let window = window_601();
    let mut errors = Vec::new();
    for n_trunc in [1usize, 3, 5, 9] {
        let q = ex1.potential.clone();
        let (e, _) = max_recovery_error(&ex1.data, &window, n_trunc, move |x| q.eval(x))?;
        errors.push(e);
    }
    let ok = errors.windows(2).all(|w| w[1] <= w[0] * 1.2);
    Ok(sub(
        "finite-section error monotone",
        ok,
        format!(
            "max errors over sections 2,4,6,10: {:.2e}, {:.2e}, {:.2e}, {:.2e} (20% slack)",
            errors[0], errors[1], errors[2], errors[3]
        ),
    ))
}

fn evolution_group_law(data: &ScatteringData) -> Result<SubCheck> {
    let two = data.evolve(0.3)?.evolve(0.45)?;
    let one = data.evolve(0.75)?;
    let mut worst = 0.0f64;
    for (a, b) in two.discrete.iter().zip(&one.discrete) {
        worst = worst.max((a.alpha_plus - b.alpha_plus).abs() / b.alpha_plus.abs());
        worst = worst.max((a.alpha_minus - b.alpha_minus).abs() / b.alpha_minus.abs());
        if a.lambda != b.lambda {
            worst = f64::INFINITY;
        }
    }
    for (a, b) in two
        .reflection
        .s_plus
        .iter()
        .chain(&two.reflection.s_minus)
        .zip(one.reflection.s_plus.iter().chain(&one.reflection.s_minus))
    {
        worst = worst.max((a - b).norm() / (1.0 + b.norm()));
    }
    Ok(sub(
        "evolution group law",
        worst <= 1e-12,
        format!("max relative deviation {worst:.3e} (gate 1e-12)"),
    ))
}

fn conservation(ex1: &Potential, soliton: &Potential, params: &NumericParams) -> Result<SubCheck> {
    let wide = UniformGrid::new(-11.0, 11.0, 1101)?;
    let mut detail = String::new();
    let mut passed = true;
    for (name, q) in [("soliton", soliton), ("gaussian-odd", ex1)] {
        let data = direct_scattering(q, params)?;
        let mut masses = Vec::new();
        let mut momenta = Vec::new();
        for &t in &[0.0, 0.5, 1.0] {
            let rec = recover_potential(&data.evolve(t)?, &wide, &RecoverParams::default())?;
            masses.push(newton_cotes_6(&rec.values, &wide)?);
            let sq: Vec<f64> = rec.values.iter().map(|v| v * v).collect();
            momenta.push(newton_cotes_6(&sq, &wide)?);
        }
        let spread = |v: &[f64]| {
            v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - v.iter().cloned().fold(f64::INFINITY, f64::min)
        };
        let (dm, dp) = (spread(&masses), spread(&momenta));
        passed &= dm <= 1e-3 && dp <= 1e-3;
        let _ = write!(detail, "{name}: mass drift {dm:.2e}, momentum drift {dp:.2e}; ");
    }
    detail.push_str(
        "(gate 1e-3; the gaussian-odd wake leaves every window inside the truncation box by t=1, carrying mass and momentum out)",
    );
    Ok(sub("conservation across output times", passed, detail))
}

fn oscillation_counts(cases: &[(&Potential, usize)]) -> Result<SubCheck> {
    let mut passed = true;
    let mut detail = String::new();
    for (q, found) in cases {
        let oracle = oscillation_count(q, -1e-4)?;
        passed &= oracle == *found;
        let _ = write!(detail, "{found} vs oracle {oracle}; ");
    }
    detail.push_str("(spectral counts vs node-counting oracle)");
    Ok(sub("bound-state counts", passed, detail))
}

fn soliton_translation(soliton: &Case) -> Result<SubCheck> {
    let window = window_601();
    let base = recover_potential(&soliton.data, &window, &RecoverParams::default())?;
    let xs = window.nodes();
    let spline = fit_spline(&xs, &base.values, SplineOrder::Quintic)?;
    let mut worst = 0.0f64;
    for &t in &[0.5, 1.0] {
        let rec = recover_potential(&soliton.data.evolve(t)?, &window, &RecoverParams::default())?;
        for (i, &x) in xs.iter().enumerate() {
            let shifted = x - PI * t;
            if shifted >= window.start() {
                worst = worst.max((rec.values[i] - spline.eval(shifted)).abs());
            }
        }
    }
    Ok(sub(
        "soliton field translates",
        worst <= 5e-4,
        format!("max |u(x,t) - u(x - c t, 0)| = {worst:.3e} (gate 5e-4)"),
    ))
}

fn criterion_8(ex1: &Case) -> Result<CriterionOutcome> {
    let started = Instant::now();
    let mut detail = String::new();
    let mut passed = true;

    // every entry on an anti-diagonal equals the discrete coefficient of its
    // index sum (up to the checker-board sign), both for the assembled matrix
    // and for the discrete part taken alone
    let mut hankel_dev = 0.0f64;
    let x = -0.8;
    let sys = assemble_system(&ex1.data, x, 6, DataSide::Plus)?;
    for p in 0..=6usize {
        let disc_ref = discrete_kernel_part(&ex1.data, DataSide::Plus, x, p)?;
        for m in 0..=p {
            let n = p - m;
            hankel_dev = hankel_dev.max(
                (discrete_kernel_part(&ex1.data, DataSide::Plus, x, m + n)? - disc_ref).abs(),
            );
            let entry = sys.matrix[(m, n)] - if m == n { 1.0 } else { 0.0 };
            let first = sys.matrix[(0, p)] - if p == 0 { 1.0 } else { 0.0 };
            hankel_dev = hankel_dev.max((entry - first).abs());
        }
    }
    passed &= hankel_dev <= 1e-12;
    let _ = writeln!(
        detail,
        "Hankel structure: max anti-diagonal deviation {hankel_dev:.3e} (gate 1e-12)"
    );

    // conditioning under doubling of the section size
    let mut worst_ratio: f64 = 0.0;
    for &x in &[-3.0, -1.0, 0.0, 1.5, 4.0] {
        for side in [DataSide::Plus, DataSide::Minus] {
            let c1 = assemble_system(&ex1.data, x, 5, side)?.condition;
            let c2 = assemble_system(&ex1.data, x, 10, side)?.condition;
            let c4 = assemble_system(&ex1.data, x, 20, side)?.condition;
            worst_ratio = worst_ratio.max(c2 / c1).max(c4 / c2);
        }
    }
    passed &= worst_ratio <= 2.0;
    let _ = writeln!(
        detail,
        "condition growth under section doubling: max ratio {worst_ratio:.3} (gate 2)"
    );

    // kernel-entry decay along the diagonal: strict (10% slack) on the
    // reflectionless data, where the discrete part makes it geometric, and
    // in block envelope on the reflection-carrying data, whose Fourier
    // coefficients oscillate through zero crossings while their envelope
    // decays
    let mut decay_ok = true;
    let mut decay_note = String::new();
    let soliton_q = Potential::soliton(PI, 12.0, 2401)?;
    let soliton_data = direct_scattering(&soliton_q, &NumericParams::default())?;
    for &x in &[-1.0, 0.5] {
        let sys = assemble_system(&soliton_data, x, 12, DataSide::Plus)?;
        let mut prev = f64::INFINITY;
        for m in 8..=12usize {
            let entry = (sys.matrix[(m, m)] - 1.0).abs();
            if entry > prev * 1.1 {
                decay_ok = false;
            }
            prev = entry;
        }
        let _ = write!(decay_note, "soliton |K_mm({x})| m=8..12 tail {prev:.2e}; ");
    }
    for &x in &[-1.0, 0.5] {
        let sys = assemble_system(&ex1.data, x, 14, DataSide::Plus)?;
        let block = |lo: usize, hi: usize| -> f64 {
            (lo..=hi)
                .map(|m| (sys.matrix[(m, m)] - 1.0).abs())
                .fold(0.0f64, f64::max)
        };
        let early = block(6, 8);
        let late = block(12, 14);
        if late > early {
            decay_ok = false;
        }
        let _ = write!(decay_note, "envelope({x}) {early:.2e} -> {late:.2e}; ");
    }
    passed &= decay_ok;
    let _ = writeln!(
        detail,
        "diagonal kernel decay: {} {decay_note}",
        if decay_ok { "ok" } else { "violated" }
    );

    Ok(CriterionOutcome {
        id: "C8",
        name: "structural invariants",
        passed,
        detail,
        seconds: started.elapsed().as_secs_f64(),
    })
}
