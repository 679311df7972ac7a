//! Spectrum for an arbitrary small-amplitude trajectory.
//!
//! The emitted spectrum per unit area and solid angle is a single integral
//! over the partner frequency `w'` of `|dQ(w + w')|^2`, weighted by the
//! Robin vertex. Only Dirichlet and finite `gamma` are supported; `gamma` is
//! physical here, not reduced.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::kinematics::MotionSpectrum;
use crate::quadrature::{integrate_breakpoints, integrate_semi_infinite, IntegrationResult, QuadratureConfig};
use crate::spectrum::{f_tilde_reduced, RobinCondition};

/// Half-width of the refined window around a Lorentzian peak, in units of `1/tau`.
pub const PEAK_WINDOW: f64 = 40.0;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralSpectrumRequest {
    pub motion: MotionSpectrum,
    pub bc: RobinCondition,
    pub omega: f64,
    pub theta: f64,
    pub cfg: QuadratureConfig,
}

fn robin_gamma(bc: &RobinCondition) -> Result<f64> {
    bc.gamma().ok_or_else(|| {
        Error::Domain("general motion is only defined for Dirichlet or finite gamma, not Neumann".into())
    })
}

/// `int_a^upper g(w') dw'` for a vertex `g` that vanishes like `sqrt(w' - a)`.
///
/// The finite part is integrated in `u = sqrt(w' - a)`, which removes the
/// square-root endpoint, with breakpoints bracketing a spectral peak at
/// `centre` of half-width `window`. Without `upper` the remainder runs to
/// infinity.
fn partner_integral<G>(
    g: G,
    a: f64,
    centre: Option<(f64, f64)>,
    upper: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult>
where
    G: Fn(f64) -> f64,
{
    let mut knots = vec![a];
    if let Some((c, w)) = centre {
        knots.extend([c - w, c, c + w].into_iter().filter(|&x| x > a));
    }
    let finite_end = match upper {
        Some(u) => {
            if u <= a {
                return Ok(IntegrationResult::exact_zero());
            }
            knots.retain(|&x| x < u);
            u
        }
        None => {
            let last = *knots.last().expect("nonempty");
            if knots.len() == 1 {
                a + 1.0
            } else {
                last
            }
        }
    };
    if knots.last() != Some(&finite_end) {
        knots.push(finite_end);
    }
    let u_knots: Vec<f64> = knots.iter().map(|&x| (x - a).sqrt()).collect();
    let head = integrate_breakpoints(|u| 2.0 * u * g(a + u * u), &u_knots, cfg)?;
    if upper.is_some() {
        return Ok(head);
    }
    let tail = integrate_semi_infinite(&g, finite_end, cfg)?;
    Ok(IntegrationResult {
        value: head.value + tail.value,
        error_estimate: head.error_estimate + tail.error_estimate,
        subdivisions: head.subdivisions + tail.subdivisions,
        converged: head.converged && tail.converged,
    })
}

/// Peak location and the frequency ceiling imposed by the motion.
fn partner_layout(motion: &MotionSpectrum, omega: f64) -> (Option<(f64, f64)>, Option<f64>) {
    match motion {
        MotionSpectrum::ClosedFormLorentzian(m) => (Some((m.omega0() - omega, PEAK_WINDOW / m.tau())), None),
        MotionSpectrum::Sampled(s) => (None, Some(s.nyquist() - omega)),
        MotionSpectrum::MonochromaticLine(_) => unreachable!("lines are collapsed analytically"),
    }
}

/// Converts a motion-spectrum failure inside the integrand into NaN and
/// remembers it.
fn power_or_nan(motion: &MotionSpectrum, omega: f64) -> f64 {
    motion.power(omega).unwrap_or(f64::NAN)
}

/// `dN / (dw dOmega)` per unit mirror area.
///
/// A monochromatic line collapses the partner integral onto `w' = w0 - w`,
/// giving `epsilon0^2 tau / (8 pi^3) * w0^4 * F~(w / w0, w0 gamma, theta)`.
/// Sampled trajectories are integrated up to their Nyquist frequency.
pub fn spectrum_general(req: &GeneralSpectrumRequest) -> Result<f64> {
    let GeneralSpectrumRequest {
        motion,
        bc,
        omega,
        theta,
        cfg,
    } = req;
    let (omega, theta) = (*omega, *theta);
    let gamma = robin_gamma(bc)?;
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::Validation(format!("omega must be >= 0, got {omega}")));
    }
    if !(0.0..=FRAC_PI_2).contains(&theta) {
        return Err(Error::Validation(format!("theta must lie in [0, pi/2], got {theta}")));
    }
    motion.check_regime()?;
    if omega == 0.0 {
        return Ok(0.0);
    }

    if let MotionSpectrum::MonochromaticLine(line) = motion {
        let w0 = line.frequency();
        let prefactor = line.epsilon0().powi(2) * line.tau() / (8.0 * PI.powi(3));
        let reduced = bc.reduced(w0)?;
        return Ok(prefactor * w0.powi(4) * f_tilde_reduced(omega / w0, theta, &reduced)?);
    }

    let sin = theta.sin();
    let cos = (FRAC_PI_2 - theta).sin();
    let g2 = gamma * gamma;
    let a = omega * sin;
    let kpar2 = a * a;

    let vertex = |wp: f64| {
        let kz2 = (wp - a) * (wp + a);
        if kz2 <= 0.0 {
            return 0.0;
        }
        let power = power_or_nan(motion, omega + wp);
        let bracket = 1.0 - g2 * kpar2 - g2 * omega * wp;
        kz2.sqrt() * power / (1.0 + g2 * kz2) * bracket * bracket / (2.0 * PI)
    };
    let (centre, upper) = partner_layout(motion, omega);
    let integral = partner_integral(vertex, a, centre, upper, cfg)?
        .converged_value(format!("general spectrum at omega = {omega}, theta = {theta}"))?;

    let kz = omega * cos;
    let outer = 4.0 * omega * kz * kz / (1.0 + g2 * kz * kz);
    Ok(outer * integral / (8.0 * PI.powi(3)))
}

/// `dN / d^3k` for a mirror of area `area`, in Cartesian wavevector components.
pub fn spectral_density_k(
    kpar: f64,
    kz: f64,
    motion: &MotionSpectrum,
    bc: &RobinCondition,
    area: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let gamma = robin_gamma(bc)?;
    if !(kpar >= 0.0 && kpar.is_finite() && kz >= 0.0 && kz.is_finite()) {
        return Err(Error::Validation(format!(
            "wavevector components must be finite and >= 0, got ({kpar}, {kz})"
        )));
    }
    if !(area > 0.0 && area.is_finite()) {
        return Err(Error::Validation(format!("area must be > 0, got {area}")));
    }
    motion.check_regime()?;
    if kz == 0.0 {
        return Ok(0.0);
    }
    let omega = kpar.hypot(kz);
    let g2 = gamma * gamma;
    let lead = area / (8.0 * PI.powi(3)) * 4.0 * kz * kz / (omega * (1.0 + g2 * kz * kz));

    let vertex_at = |wp: f64, power: f64| {
        let kz2 = (wp - kpar) * (wp + kpar);
        if kz2 <= 0.0 {
            return 0.0;
        }
        let bracket = 1.0 - g2 * kpar * kpar - g2 * omega * wp;
        kz2.sqrt() * power / (1.0 + g2 * kz2) * bracket * bracket / (2.0 * PI)
    };

    let integral = match motion {
        MotionSpectrum::MonochromaticLine(line) => vertex_at(line.frequency() - omega, line.weight()),
        _ => {
            let (centre, upper) = partner_layout(motion, omega);
            partner_integral(
                |wp| vertex_at(wp, power_or_nan(motion, omega + wp)),
                kpar,
                centre,
                upper,
                cfg,
            )?
            .converged_value(format!("spectral density at k = ({kpar}, {kz})"))?
        }
    };
    Ok(lead * integral)
}
