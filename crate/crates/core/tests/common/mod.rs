//! Brute-force midpoint oracles, written in x = cos(theta) and independent of
//! the library's angular parametrisation.
//!
//! Every integrand is pushed into a variable where it is smooth, so the
//! midpoint rule converges at its nominal O(h^2) rate:
//! * finite beta, alpha > 1/2: x = x_min + u^2 removes the sqrt(D) edge;
//! * Neumann: x = x_min cosh s (alpha > 1/2) or x = c sinh s (alpha < 1/2),
//!   which turns alpha^3 (1 - alpha x^2)^2 / sqrt(D) dx into alpha^2 (1 - alpha x^2)^2 ds;
//! * outer alpha = 1/2 -+ v^2 softens the behaviour at alpha = 1/2.

#![allow(dead_code)]

use std::f64::consts::PI;

use robin_dce::quadrature::riemann_oracle;
use robin_dce::Execution;

/// `None` stands for Neumann.
pub type Beta = Option<f64>;

/// Independent constants from a separate double midpoint sum (10^4 panels per axis).
pub const F_DIRICHLET_RIEMANN: f64 = 0.034906584950894035;
pub const RATIO_STAR_RIEMANN: f64 = 0.018720732628404672;
pub const BETA_STAR: f64 = 1.7978421703357361;
pub const RATIO_1000_RIEMANN: f64 = 10.924802620048917;

/// F~ written with `x = cos(theta)`, given `sqrt(D)` computed by the caller.
pub fn f_tilde_x(alpha: f64, beta: f64, x: f64, sqrt_d: f64) -> f64 {
    let d = sqrt_d * sqrt_d;
    let ab2 = alpha * alpha * beta * beta;
    let bracket = 1.0 - ab2 * (1.0 - x * x) - alpha * beta * beta * (1.0 - alpha);
    alpha.powi(3) * x * x / (1.0 + ab2 * x * x) * sqrt_d * bracket * bracket / (1.0 + beta * beta * d)
}

/// `F(alpha, beta)` by an `n`-panel midpoint sum.
pub fn frequency_oracle(alpha: f64, beta: Beta, n: usize) -> f64 {
    if alpha <= 0.0 || alpha >= 1.0 {
        return 0.0;
    }
    let gap = 2.0 * alpha - 1.0;
    let inner = match beta {
        Some(beta) if gap < 0.0 => riemann_oracle(
            |x| f_tilde_x(alpha, beta, x, (alpha * alpha * x * x - gap).sqrt()),
            0.0,
            1.0,
            n,
        ),
        Some(beta) => {
            let xmin = gap.sqrt() / alpha;
            riemann_oracle(
                |u| {
                    let x = xmin + u * u;
                    2.0 * u * f_tilde_x(alpha, beta, x, alpha * u * (2.0 * xmin + u * u).sqrt())
                },
                0.0,
                (1.0 - xmin).sqrt(),
                n,
            )
        }
        None => {
            let body = |x: f64| {
                let k = 1.0 - alpha * x * x;
                alpha * alpha * k * k
            };
            if gap > 0.0 {
                let xmin = gap.sqrt() / alpha;
                riemann_oracle(|s| body(xmin * s.cosh()), 0.0, (1.0 / xmin).acosh(), n)
            } else {
                let c = (-gap).sqrt() / alpha;
                riemann_oracle(|s| body(c * s.sinh()), 0.0, (1.0 / c).asinh(), n)
            }
        }
    };
    2.0 * PI * inner
}

/// `int_0^1 F(alpha, beta) dalpha` as an `n_outer` x `n_inner` double sum.
pub fn total_oracle(beta: Beta, n_outer: usize, n_inner: usize) -> f64 {
    let vmax = 0.5_f64.sqrt();
    let exec = Execution::Parallel;
    let lower = exec.midpoint_sum(|v| 2.0 * v * frequency_oracle(0.5 - v * v, beta, n_inner), 0.0, vmax, n_outer);
    let upper = exec.midpoint_sum(|v| 2.0 * v * frequency_oracle(0.5 + v * v, beta, n_inner), 0.0, vmax, n_outer);
    lower + upper
}

/// Relative difference, safe for a zero reference.
pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a / b - 1.0).abs()
    }
}
