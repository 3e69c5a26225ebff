use crate::error::{Error, Result};

/// Interpolating spline order: the polynomial degree is `order - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplineOrder {
    Cubic = 4,
    Quintic = 6,
}

/// B-spline interpolant with averaged interior knots.
///
/// Knots follow the classical "optimal" placement for interpolation: `order`
/// copies of each boundary site and interior knots at running means of
/// `order - 1` consecutive data sites, which keeps the collocation matrix
/// totally positive and banded.
#[derive(Debug, Clone)]
pub struct SplineModel {
    order: usize,
    knots: Vec<f64>,
    coeffs: Vec<f64>,
}

pub fn fit_spline(xs: &[f64], ys: &[f64], order: SplineOrder) -> Result<SplineModel> {
    let k = order as usize;
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::SplineFit(format!(
            "{} abscissae but {} ordinates",
            n,
            ys.len()
        )));
    }
    if n < k {
        return Err(Error::SplineFit(format!(
            "need at least {k} points for order {k}, got {n}"
        )));
    }
    if !xs.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::SplineFit(
            "abscissae must be strictly increasing (duplicates not allowed)".into(),
        ));
    }
    if ys.iter().any(|v| !v.is_finite()) || xs.iter().any(|v| !v.is_finite()) {
        return Err(Error::SplineFit("non-finite data".into()));
    }

    let mut knots = vec![0.0; n + k];
    for j in 0..k {
        knots[j] = xs[0];
        knots[n + j] = xs[n - 1];
    }
    for j in 0..n - k {
        let seg = &xs[j + 1..j + k];
        knots[k + j] = seg.iter().sum::<f64>() / (k - 1) as f64;
    }

    // Banded collocation system, bandwidth k-1 on both sides. The matrix is
    // totally positive for this knot choice, so LU without pivoting is safe.
    let band = k - 1;
    let width = 2 * band + 1;
    let mut ab = vec![0.0f64; width * n];
    let mut basis = vec![0.0f64; k];
    for (row, &x) in xs.iter().enumerate() {
        let span = find_span(&knots, k, n, x);
        basis_nonzero(&knots, k, span, x, &mut basis);
        for (r, &bval) in basis.iter().enumerate() {
            let col = span + 1 - k + r;
            let off = band as isize + (row as isize - col as isize);
            debug_assert!((0..width as isize).contains(&off));
            ab[col * width + off as usize] = bval;
        }
    }

    let mut coeffs = ys.to_vec();
    banded_lu_solve(&mut ab, n, band, &mut coeffs)?;

    Ok(SplineModel { order: k, knots, coeffs })
}

impl SplineModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[self.order - 1], self.knots[self.coeffs.len()])
    }

    /// Spline value at `x` (clamped to the fitted domain).
    pub fn eval(&self, x: f64) -> f64 {
        deboor(&self.knots, &self.coeffs, self.order, x)
    }

    /// `k`-th derivative at `x`; `k` must not exceed `order - 2`.
    pub fn derivative(&self, k: usize, x: f64) -> Result<f64> {
        Ok(self.derivative_spline(k)?.eval(x))
    }

    /// The spline whose values are the `k`-th derivative of this one.
    pub fn derivative_spline(&self, k: usize) -> Result<SplineModel> {
        if k > self.order - 2 {
            return Err(Error::InvalidInput(format!(
                "derivative order {k} exceeds order-2 = {}",
                self.order - 2
            )));
        }
        let mut cur = self.clone();
        for _ in 0..k {
            cur = cur.differentiate_once();
        }
        Ok(cur)
    }

    fn differentiate_once(&self) -> SplineModel {
        let k = self.order;
        let n = self.coeffs.len();
        let mut coeffs = Vec::with_capacity(n - 1);
        for j in 0..n - 1 {
            let den = self.knots[j + k] - self.knots[j + 1];
            let d = if den > 0.0 {
                (k - 1) as f64 * (self.coeffs[j + 1] - self.coeffs[j]) / den
            } else {
                0.0
            };
            coeffs.push(d);
        }
        SplineModel {
            order: k - 1,
            knots: self.knots[1..self.knots.len() - 1].to_vec(),
            coeffs,
        }
    }
}

/// Index `mu` with `knots[mu] <= x < knots[mu+1]`, clamped to the valid range.
fn find_span(knots: &[f64], k: usize, n: usize, x: f64) -> usize {
    if x >= knots[n] {
        return n - 1;
    }
    if x <= knots[k - 1] {
        return k - 1;
    }
    let mut lo = k - 1;
    let mut hi = n;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if x < knots[mid] {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// The k nonzero B-splines of order `k` at `x` in span `mu` (Cox-de Boor).
fn basis_nonzero(knots: &[f64], k: usize, mu: usize, x: f64, out: &mut [f64]) {
    out[0] = 1.0;
    let mut left = vec![0.0; k];
    let mut right = vec![0.0; k];
    for j in 1..k {
        left[j] = x - knots[mu + 1 - j];
        right[j] = knots[mu + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            let den = right[r + 1] + left[j - r];
            let temp = if den != 0.0 { out[r] / den } else { 0.0 };
            out[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        out[j] = saved;
    }
}

fn deboor(knots: &[f64], coeffs: &[f64], k: usize, x: f64) -> f64 {
    let n = coeffs.len();
    let p = k - 1;
    let (lo, hi) = (knots[p], knots[n]);
    let x = x.clamp(lo, hi);
    let mu = find_span(knots, k, n, x);
    let mut d: Vec<f64> = (0..=p).map(|j| coeffs[j + mu - p]).collect();
    for r in 1..=p {
        for j in (r..=p).rev() {
            let i = j + mu - p;
            let den = knots[i + p - r + 1] - knots[i];
            let alpha = if den != 0.0 { (x - knots[i]) / den } else { 0.0 };
            d[j] = d[j - 1] * (1.0 - alpha) + d[j] * alpha;
        }
    }
    d[p]
}

/// In-place LU (no pivoting) and solve for a banded matrix with `band`
/// sub/super-diagonals, stored column-major with row offset `band + i - j`.
fn banded_lu_solve(ab: &mut [f64], n: usize, band: usize, rhs: &mut [f64]) -> Result<()> {
    let width = 2 * band + 1;
    let at = |ab: &[f64], i: usize, j: usize| ab[j * width + band + i - j];
    for j in 0..n {
        let pivot = at(ab, j, j);
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SplineFit(format!(
                "singular collocation matrix at row {j}"
            )));
        }
        let imax = (j + band).min(n - 1);
        for i in j + 1..=imax {
            let m = at(ab, i, j) / pivot;
            ab[j * width + band + i - j] = m;
            let cmax = (j + band).min(n - 1);
            for c in j + 1..=cmax {
                if i + band >= c && c + band >= i {
                    let v = at(ab, j, c) * m;
                    ab[c * width + band + i - c] -= v;
                }
            }
        }
    }
    // forward substitution with stored multipliers
    for j in 0..n {
        let imax = (j + band).min(n - 1);
        for i in j + 1..=imax {
            let m = at(ab, i, j);
            rhs[i] -= m * rhs[j];
        }
    }
    // back substitution
    for i in (0..n).rev() {
        let cmax = (i + band).min(n - 1);
        let mut acc = rhs[i];
        for c in i + 1..=cmax {
            acc -= at(ab, i, c) * rhs[c];
        }
        rhs[i] = acc / at(ab, i, i);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sites(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn cubic_reproduces_square_second_derivative() {
        let xs = sites(-1.0, 3.0, 20);
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let s = fit_spline(&xs, &ys, SplineOrder::Cubic).unwrap();
        for &x in &xs {
            assert_abs_diff_eq!(s.derivative(2, x).unwrap(), 2.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn constant_has_zero_slope() {
        let xs = sites(0.0, 1.0, 12);
        let ys = vec![4.25; 12];
        let s = fit_spline(&xs, &ys, SplineOrder::Quintic).unwrap();
        assert_abs_diff_eq!(s.derivative(1, 0.37).unwrap(), 0.0, epsilon = 1e-11);
    }

    #[test]
    fn quintic_second_derivative_of_sine() {
        let xs = sites(0.0, 2.0 * std::f64::consts::PI, 200);
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let s = fit_spline(&xs, &ys, SplineOrder::Quintic).unwrap();
        let d2 = s.derivative(2, std::f64::consts::FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(d2, -1.0, epsilon = 1e-5);
    }

    #[test]
    fn duplicate_abscissae_rejected() {
        let xs = vec![0.0, 1.0, 1.0, 2.0, 3.0, 4.0];
        let ys = vec![0.0; 6];
        assert!(matches!(
            fit_spline(&xs, &ys, SplineOrder::Cubic),
            Err(Error::SplineFit(_))
        ));
    }

    #[test]
    fn derivative_order_capped() {
        let xs = sites(0.0, 1.0, 10);
        let ys = vec![1.0; 10];
        let s = fit_spline(&xs, &ys, SplineOrder::Cubic).unwrap();
        assert!(s.derivative(2, 0.5).is_ok());
        assert!(s.derivative(3, 0.5).is_err());
    }

    proptest! {
        // Interpolation reproduces any polynomial of degree < order together
        // with its derivatives.
        #[test]
        fn polynomial_reproduction(
            coeffs in proptest::collection::vec(-2.0f64..2.0, 6),
            span in 1.0f64..5.0,
            quintic in proptest::bool::ANY,
        ) {
            let (order, deg) = if quintic { (SplineOrder::Quintic, 5) } else { (SplineOrder::Cubic, 3) };
            let poly = |x: f64| (0..=deg).map(|p| coeffs[p] * x.powi(p as i32)).sum::<f64>();
            let dpoly = |x: f64| (1..=deg).map(|p| p as f64 * coeffs[p] * x.powi(p as i32 - 1)).sum::<f64>();
            let d2poly = |x: f64| (2..=deg).map(|p| (p * (p - 1)) as f64 * coeffs[p] * x.powi(p as i32 - 2)).sum::<f64>();

            let xs = sites(-span, span, 17);
            let ys: Vec<f64> = xs.iter().map(|&x| poly(x)).collect();
            let s = fit_spline(&xs, &ys, order).unwrap();
            for i in 0..33 {
                let x = -span + 2.0 * span * i as f64 / 32.0;
                prop_assert!((s.eval(x) - poly(x)).abs() < 1e-8);
                prop_assert!((s.derivative(1, x).unwrap() - dpoly(x)).abs() < 1e-7);
                prop_assert!((s.derivative(2, x).unwrap() - d2poly(x)).abs() < 1e-6);
            }
        }
    }
}
