use super::{GridScalar, UniformGrid};
use crate::error::{Error, Result};

/// Which grid endpoint carries the boundary data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFrom {
    First,
    Last,
}

/// Fixed-step fifth-order Runge-Kutta propagation of `y'' = w(x) y` across a
/// uniform grid, returning `[y, y']` at every node. `substeps` internal steps
/// are taken per grid interval.
///
/// The Dormand-Prince 5(4) tableau is used with its fifth-order weights; the
/// scheme is deliberately fixed-step so repeated runs land on the shared grid.
pub fn integrate_second_order<T, W>(
    w: W,
    grid: &UniformGrid,
    boundary: [T; 2],
    from: SweepFrom,
    substeps: usize,
) -> Result<Vec<[T; 2]>>
where
    T: GridScalar,
    W: Fn(f64) -> T,
{
    let n = grid.count();
    let substeps = substeps.max(1);
    let mut out = vec![[T::ZERO, T::ZERO]; n];
    let rhs = |x: f64, y: [T; 2]| [y[1], w(x) * y[0]];

    let (start_idx, step_dir): (usize, isize) = match from {
        SweepFrom::First => (0, 1),
        SweepFrom::Last => (n - 1, -1),
    };
    out[start_idx] = boundary;

    let mut idx = start_idx as isize;
    let mut state = boundary;
    for _ in 0..n - 1 {
        let x0 = grid.node(idx as usize);
        let x1 = grid.node((idx + step_dir) as usize);
        let h = (x1 - x0) / substeps as f64;
        let mut x = x0;
        for _ in 0..substeps {
            state = dopri5_step(&rhs, x, state, h);
            x += h;
        }
        if !(state[0].finite() && state[1].finite()) {
            return Err(Error::OdeFailure {
                x: x1,
                context: "state became non-finite".into(),
            });
        }
        idx += step_dir;
        out[idx as usize] = state;
    }
    Ok(out)
}

fn dopri5_step<T, F>(rhs: &F, x: f64, y: [T; 2], h: f64) -> [T; 2]
where
    T: GridScalar,
    F: Fn(f64, [T; 2]) -> [T; 2],
{
    let ax = |y: [T; 2], k: &[[T; 2]], a: &[f64]| {
        let mut out = y;
        for (ki, &ai) in k.iter().zip(a) {
            out = [out[0] + ki[0] * (ai * h), out[1] + ki[1] * (ai * h)];
        }
        out
    };

    let k1 = rhs(x, y);
    let k2 = rhs(x + h / 5.0, ax(y, &[k1], &[1.0 / 5.0]));
    let k3 = rhs(x + 3.0 * h / 10.0, ax(y, &[k1, k2], &[3.0 / 40.0, 9.0 / 40.0]));
    let k4 = rhs(
        x + 4.0 * h / 5.0,
        ax(y, &[k1, k2, k3], &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0]),
    );
    let k5 = rhs(
        x + 8.0 * h / 9.0,
        ax(
            y,
            &[k1, k2, k3, k4],
            &[
                19372.0 / 6561.0,
                -25360.0 / 2187.0,
                64448.0 / 6561.0,
                -212.0 / 729.0,
            ],
        ),
    );
    let k6 = rhs(
        x + h,
        ax(
            y,
            &[k1, k2, k3, k4, k5],
            &[
                9017.0 / 3168.0,
                -355.0 / 33.0,
                46732.0 / 5247.0,
                49.0 / 176.0,
                -5103.0 / 18656.0,
            ],
        ),
    );
    ax(
        y,
        &[k1, k2, k3, k4, k5, k6],
        &[
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    )
}
