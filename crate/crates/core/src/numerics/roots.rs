use crate::error::{Error, Result};

/// All roots of a continuous function detected by sign changes on a uniform
/// scan of `interval`, each refined by a secant/bisection hybrid until the
/// residual satisfies `|f(r)| <= tol` (or the bracket collapses to machine
/// width). Roots are returned sorted ascending.
pub fn bracketed_roots<F>(
    f: F,
    interval: (f64, f64),
    scan_count: usize,
    tol: f64,
) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(Error::InvalidInput(format!(
            "root scan interval [{lo}, {hi}] is degenerate"
        )));
    }
    if scan_count < 64 {
        return Err(Error::InvalidInput(format!(
            "root scan needs at least 64 points, got {scan_count}"
        )));
    }

    let h = (hi - lo) / (scan_count - 1) as f64;
    let mut values = Vec::with_capacity(scan_count);
    for i in 0..scan_count {
        let x = lo + h * i as f64;
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::RootScan { x });
        }
        values.push((x, v));
    }

    let mut roots = Vec::new();
    let mut skip_next_bracket = false;
    for w in values.windows(2) {
        let (a, fa) = w[0];
        let (b, fb) = w[1];
        if fa == 0.0 {
            if !skip_next_bracket {
                roots.push(a);
            }
            skip_next_bracket = true;
            continue;
        }
        if fb == 0.0 {
            // handled as the left endpoint of the next window
            skip_next_bracket = false;
            continue;
        }
        if fa * fb < 0.0 && !skip_next_bracket {
            roots.push(refine(&f, a, fa, b, fb, tol));
        }
        skip_next_bracket = false;
    }
    Ok(roots)
}

/// Secant step with bisection fallback inside a sign-changing bracket.
fn refine<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64, tol: f64) -> f64 {
    let mut best = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..200 {
        if best.1.abs() <= tol {
            return best.0;
        }
        let secant = b - fb * (b - a) / (fb - fa);
        let mid = 0.5 * (a + b);
        let c = if secant.is_finite() && secant > a && secant < b {
            secant
        } else {
            mid
        };
        // bail out once the bracket cannot shrink further
        if c <= a || c >= b {
            break;
        }
        let fc = f(c);
        if !fc.is_finite() {
            break;
        }
        if fc.abs() < best.1.abs() {
            best = (c, fc);
        }
        if fc == 0.0 {
            return c;
        }
        if fa * fc < 0.0 {
            b = c;
            fb = fc;
        } else {
            a = c;
            fa = fc;
        }
    }
    best.0
}
