//! Angle-integrated spectra and total emission rates.
//!
//! Boundary conditions passed to [`frequency_spectrum`], [`total_rate`] and
//! [`rate_ratio`] are in reduced units: a `Finite` value is `beta = w0 * gamma`.
//! [`total_particles`] and the table builders take physical `gamma` and `w0`.

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::parallel::Execution;
use crate::quadrature::{integrate_breakpoints, integrate_sqrt_endpoint, Endpoint, QuadratureConfig};
use crate::spectrum::{f_tilde_reduced, normalized_angular_spectrum, theta_max, RobinCondition};
use crate::table::{FailedPoint, Product, SpectrumTable, TableMeta};

/// Default bracket for the inhibition minimum of the ratio curve.
pub const MINIMUM_SEARCH: (f64, f64) = (0.5, 5.0);

/// Width at which the golden-section search stops.
pub const BETA_TOLERANCE: f64 = 1e-6;

const COARSE_SCAN_POINTS: usize = 17;

/// `sin(theta) * alpha^3 (1 - alpha cos^2 theta)^2 / sqrt(D) * sqrt(theta_max - theta)`.
///
/// The `1/sqrt(D)` singularity at the cone edge is cancelled analytically:
/// `1 - alpha(1 + sin theta)` is rewritten as
/// `c0 + 2 alpha cos((theta_max + theta)/2) sin((theta_max - theta)/2)`
/// with `c0 = max(0, 1 - 2 alpha)`.
fn neumann_regular(alpha: f64, edge: f64, theta: f64) -> f64 {
    let s = theta.sin();
    let c = (FRAC_PI_2 - theta).sin();
    let h = edge - theta;
    let c0 = (1.0 - 2.0 * alpha).max(0.0);
    let chord = 2.0 * alpha * (0.5 * (edge + theta)).cos();
    let sqrt_h_over_margin = if c0 > 0.0 {
        (h / (c0 + chord * (0.5 * h).sin())).sqrt()
    } else {
        let sinc = if h > 0.0 { (0.5 * h).sin() / h } else { 0.5 };
        1.0 / (chord * sinc).sqrt()
    };
    let other = 1.0 - alpha + alpha * s;
    let k = 1.0 - alpha * c * c;
    s * alpha.powi(3) * k * k * sqrt_h_over_margin / other.sqrt()
}

/// `F(alpha, beta) = 2 pi int_0^theta_max sin(theta) F~(alpha, beta, theta) dtheta`.
///
/// Zero outside `0 < alpha < 1`. For Neumann the spectrum diverges
/// logarithmically at `alpha = 1/2` and a domain error is returned there.
pub fn frequency_spectrum(alpha: f64, bc: &RobinCondition, cfg: &QuadratureConfig) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(Error::Validation(format!("alpha must be finite, got {alpha}")));
    }
    if alpha <= 0.0 || alpha >= 1.0 {
        return Ok(0.0);
    }
    let edge = theta_max(alpha).expect("0 < alpha < 1");
    let ctx = || format!("F(alpha = {alpha}, {bc})");

    let result = match bc {
        RobinCondition::Neumann => {
            if alpha == 0.5 {
                return Err(Error::Domain(
                    "Neumann spectrum diverges logarithmically at alpha = 1/2".into(),
                ));
            }
            integrate_sqrt_endpoint(|t| neumann_regular(alpha, edge, t), 0.0, edge, Endpoint::Upper, cfg)?
        }
        _ => {
            // sqrt(D) vanishes at the cone edge; the substitution makes the integrand smooth.
            let regular = |t: f64| {
                let f = f_tilde_reduced(alpha, t, bc).unwrap_or(f64::NAN);
                t.sin() * f * (edge - t).max(0.0).sqrt()
            };
            integrate_sqrt_endpoint(regular, 0.0, edge, Endpoint::Upper, cfg)?
        }
    };
    Ok(2.0 * PI * result.converged_value(ctx())?)
}

/// Integrates a fallible integrand; the first inner error aborts the
/// integration and is returned with the abscissa that raised it.
fn integrate_fallible<F>(f: F, points: &[f64], cfg: &QuadratureConfig, what: &str) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let wrapped = |x: f64| {
        if failure.borrow().is_some() {
            return f64::NAN;
        }
        match f(x) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                f64::NAN
            }
        }
    };
    let result = integrate_breakpoints(wrapped, points, cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e.with_context(what));
    }
    result?.converged_value(what)
}

/// `F(beta) = int_0^1 F(alpha, beta) dalpha`.
///
/// The inner angular integrals run at one tenth of the outer tolerances.
pub fn total_rate(bc: &RobinCondition, cfg: &QuadratureConfig) -> Result<f64> {
    let inner = cfg.inner();
    integrate_fallible(
        |alpha| frequency_spectrum(alpha, bc, &inner),
        &[0.0, 0.5, 1.0],
        cfg,
        &format!("total rate ({bc})"),
    )
}

/// `N(w0, gamma) = w0^5 F(w0 gamma)` for a physical condition.
pub fn total_particles(omega0: f64, bc: &RobinCondition, cfg: &QuadratureConfig) -> Result<f64> {
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(Error::Validation(format!("omega0 must be > 0, got {omega0}")));
    }
    Ok(omega0.powi(5) * total_rate(&bc.reduced(omega0)?, cfg)?)
}

/// `F(beta) / F(0)`: total emission relative to Dirichlet.
pub fn rate_ratio(bc: &RobinCondition, cfg: &QuadratureConfig) -> Result<f64> {
    if *bc == RobinCondition::Dirichlet {
        return Ok(1.0);
    }
    Ok(total_rate(bc, cfg)? / total_rate(&RobinCondition::Dirichlet, cfg)?)
}

fn beta_condition(beta: f64) -> Result<RobinCondition> {
    RobinCondition::from_gamma(beta)
}

fn check_grid(grid: &[f64], name: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Validation(format!("{name} grid is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Validation(format!(
            "{name} grid must be finite and strictly increasing"
        )));
    }
    Ok(())
}

/// Folds per-point results into a table, flagging failures instead of
/// dropping them. Non-converged points keep their best estimate.
fn assemble(grid: &[f64], results: Vec<Result<f64>>, mut meta: TableMeta) -> Result<SpectrumTable> {
    let mut values = Vec::with_capacity(results.len());
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => values.push(v),
            Err(e) => {
                values.push(match e {
                    Error::NonConvergence { value, .. } => value,
                    _ => f64::NAN,
                });
                meta.failed.push(FailedPoint {
                    index,
                    message: e.to_string(),
                });
            }
        }
    }
    SpectrumTable::new(grid.to_vec(), values, meta)
}

/// Ratio curve over `beta_grid` (with `w0 = 1`), plus the Neumann ratio in
/// the metadata under `neumann_ratio`.
pub fn ratio_curve(beta_grid: &[f64], cfg: &QuadratureConfig, exec: Execution) -> Result<SpectrumTable> {
    check_grid(beta_grid, "beta")?;
    if beta_grid[0] < 0.0 {
        return Err(Error::Validation("beta must be >= 0".into()));
    }
    let dirichlet = total_rate(&RobinCondition::Dirichlet, cfg)?;
    let results = exec.map(beta_grid, |&beta| {
        if beta == 0.0 {
            return Ok(1.0);
        }
        Ok(total_rate(&beta_condition(beta)?, cfg)? / dirichlet)
    });
    let mut meta = TableMeta::new(Product::Ratio, 1.0, "sweep", *cfg);
    meta.extra.insert(
        "neumann_ratio".into(),
        total_rate(&RobinCondition::Neumann, cfg)? / dirichlet,
    );
    assemble(beta_grid, results, meta)
}

/// Location and depth of the inhibition minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioMinimum {
    pub beta: f64,
    pub ratio: f64,
}

/// Minimum of the ratio curve on `[lo, hi]`.
///
/// A coarse scan brackets the lowest interior point, then golden-section
/// search narrows the bracket to [`BETA_TOLERANCE`]. A monotonic curve (the
/// lowest scan point at either end) is reported as [`Error::NoMinimumFound`].
pub fn ratio_minimum(lo: f64, hi: f64, cfg: &QuadratureConfig, exec: Execution) -> Result<RatioMinimum> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Validation(format!(
            "search interval must satisfy 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let dirichlet = total_rate(&RobinCondition::Dirichlet, cfg)?;
    let ratio = |beta: f64| -> Result<f64> { Ok(total_rate(&beta_condition(beta)?, cfg)? / dirichlet) };

    let step = (hi - lo) / (COARSE_SCAN_POINTS - 1) as f64;
    let scan: Vec<f64> = (0..COARSE_SCAN_POINTS).map(|i| lo + i as f64 * step).collect();
    let values = exec
        .map(&scan, |&b| ratio(b))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let best = values
        .iter()
        .enumerate()
        .fold(0, |bi, (i, v)| if *v < values[bi] { i } else { bi });
    if best == 0 || best == COARSE_SCAN_POINTS - 1 {
        return Err(Error::NoMinimumFound { lo, hi });
    }

    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (scan[best - 1], scan[best + 1]);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = ratio(c)?;
    let mut fd = ratio(d)?;
    while b - a > BETA_TOLERANCE {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = ratio(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = ratio(d)?;
        }
    }
    let beta = 0.5 * (a + b);
    Ok(RatioMinimum {
        beta,
        ratio: ratio(beta)?,
    })
}

/// `F(alpha, w0 gamma)` over an `alpha` grid.
pub fn frequency_table(
    alpha_grid: &[f64],
    omega0: f64,
    bc: &RobinCondition,
    cfg: &QuadratureConfig,
    exec: Execution,
) -> Result<SpectrumTable> {
    check_grid(alpha_grid, "alpha")?;
    let reduced = bc.reduced(omega0)?;
    let results = exec.map(alpha_grid, |&alpha| frequency_spectrum(alpha, &reduced, cfg));
    assemble(
        alpha_grid,
        results,
        TableMeta::new(Product::Frequency, omega0, bc.to_string(), *cfg),
    )
}

/// `w0^4 F~(w / w0, w0 gamma, theta)` over a `theta` grid at fixed `omega`.
pub fn angular_table(
    theta_grid: &[f64],
    omega: f64,
    omega0: f64,
    bc: &RobinCondition,
    exec: Execution,
) -> Result<SpectrumTable> {
    check_grid(theta_grid, "theta")?;
    let results = exec.map(theta_grid, |&theta| normalized_angular_spectrum(omega, omega0, bc, theta));
    let mut meta = TableMeta::new(Product::Angular, omega0, bc.to_string(), QuadratureConfig::default());
    meta.extra.insert("omega".into(), omega);
    assemble(theta_grid, results, meta)
}

/// One-row table `(w0, N(w0, gamma))`.
pub fn total_table(omega0: f64, bc: &RobinCondition, cfg: &QuadratureConfig) -> Result<SpectrumTable> {
    let result = total_particles(omega0, bc, cfg);
    assemble(
        &[omega0],
        vec![result],
        TableMeta::new(Product::Total, omega0, bc.to_string(), *cfg),
    )
}
