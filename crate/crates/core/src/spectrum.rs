//! Closed-form angular spectrum of a monochromatically oscillating Robin mirror.
//!
//! Everything here is expressed in the reduced variables `alpha = w / w0`
//! (frequency of the created particle relative to the mechanical frequency)
//! and `beta = w0 * gamma` (Robin coupling), with `theta` measured from the
//! mirror normal. Particles are emitted only where `alpha * (1 + sin theta) < 1`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed when a caller hands in `theta` a hair outside `[0, pi/2]`.
const ANGLE_SLACK: f64 = 1e-12;

/// A strictly positive, finite Robin length `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Gamma(f64);

impl Gamma {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 0.0 && gamma.is_finite() {
            Ok(Gamma(gamma))
        } else {
            Err(Error::Validation(format!(
                "finite Robin parameter must be positive and finite, got {gamma}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Gamma {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Gamma::new(v)
    }
}

impl From<Gamma> for f64 {
    fn from(g: Gamma) -> f64 {
        g.0
    }
}

/// Boundary condition `phi = gamma * d_n phi` at the mirror.
///
/// Dirichlet (`gamma = 0`) and Neumann (`gamma -> inf`) are separate variants
/// and are never represented by extreme floating-point values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RobinCondition {
    Dirichlet,
    Finite(Gamma),
    Neumann,
}

impl RobinCondition {
    pub fn finite(gamma: f64) -> Result<Self> {
        Ok(RobinCondition::Finite(Gamma::new(gamma)?))
    }

    /// `0` maps to Dirichlet, positive values to a finite condition.
    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if gamma == 0.0 {
            Ok(RobinCondition::Dirichlet)
        } else {
            Self::finite(gamma)
        }
    }

    /// `gamma`, or `None` for Neumann.
    pub fn gamma(&self) -> Option<f64> {
        match self {
            RobinCondition::Dirichlet => Some(0.0),
            RobinCondition::Finite(g) => Some(g.get()),
            RobinCondition::Neumann => None,
        }
    }

    /// The same condition expressed through `beta = omega0 * gamma`.
    pub fn reduced(&self, omega0: f64) -> Result<Self> {
        match self {
            RobinCondition::Finite(g) => Self::finite(omega0 * g.get()),
            other => Ok(*other),
        }
    }
}

impl fmt::Display for RobinCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RobinCondition::Dirichlet => write!(f, "dirichlet"),
            RobinCondition::Finite(g) => write!(f, "gamma={}", g.get()),
            RobinCondition::Neumann => write!(f, "neumann"),
        }
    }
}

/// Evaluation point `(alpha, beta, theta)` for a finite coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessPoint {
    alpha: f64,
    beta: f64,
    theta: f64,
}

impl DimensionlessPoint {
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Validation(format!("alpha must be >= 0, got {alpha}")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::Validation(format!(
                "beta must be finite and >= 0, got {beta} (use the Neumann variant for beta -> inf)"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            theta: check_angle(theta)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

fn check_angle(theta: f64) -> Result<f64> {
    if (-ANGLE_SLACK..=FRAC_PI_2 + ANGLE_SLACK).contains(&theta) {
        Ok(theta.clamp(0.0, FRAC_PI_2))
    } else {
        Err(Error::Validation(format!(
            "theta must lie in [0, pi/2], got {theta}"
        )))
    }
}

/// `sin` and `cos` of an angle in `[0, pi/2]`; the cosine is taken as
/// `sin(pi/2 - theta)` so it is exactly zero at grazing incidence.
#[inline]
fn sin_cos(theta: f64) -> (f64, f64) {
    (theta.sin(), (FRAC_PI_2 - theta).sin())
}

/// `1 - alpha (1 + sin theta)`: emission happens only where this is positive.
#[inline]
pub fn support_margin(alpha: f64, sin_theta: f64) -> f64 {
    1.0 - alpha - alpha * sin_theta
}

/// `D = (1 - alpha)^2 - alpha^2 sin^2 theta`, in factored form.
#[inline]
fn discriminant(alpha: f64, sin_theta: f64, margin: f64) -> f64 {
    margin * (1.0 - alpha + alpha * sin_theta)
}

/// Edge of the emission cone, `arcsin((1 - alpha) / alpha)`, for `1/2 < alpha <= 1`.
pub fn theta_cutoff(alpha: f64) -> Result<f64> {
    if alpha > 0.5 && alpha <= 1.0 {
        Ok(((1.0 - alpha) / alpha).asin())
    } else {
        Err(Error::Domain(format!(
            "emission cone is defined for 1/2 < alpha <= 1, got {alpha}"
        )))
    }
}

/// Largest emission angle at `alpha`: `pi/2` up to `alpha = 1/2`, the cone edge
/// up to `alpha = 1`, and `None` beyond (no emission at all).
pub fn theta_max(alpha: f64) -> Option<f64> {
    if !(alpha >= 0.0) || alpha > 1.0 {
        None
    } else if alpha <= 0.5 {
        Some(FRAC_PI_2)
    } else {
        theta_cutoff(alpha).ok()
    }
}

/// Reduced angular spectrum for a finite coupling `beta`.
pub fn f_tilde(p: &DimensionlessPoint) -> f64 {
    f_tilde_finite(p.alpha, p.beta, p.theta)
}

#[inline]
fn f_tilde_finite(alpha: f64, beta: f64, theta: f64) -> f64 {
    let (s, c) = sin_cos(theta);
    let margin = support_margin(alpha, s);
    if !(margin > 0.0) {
        return 0.0;
    }
    let d = discriminant(alpha, s, margin);
    let ab2 = alpha * alpha * beta * beta;
    let bracket = 1.0 - ab2 * s * s - alpha * beta * beta * (1.0 - alpha);
    alpha.powi(3) * c * c / (1.0 + ab2 * c * c) * d.sqrt() * bracket * bracket
        / (1.0 + beta * beta * d)
}

/// The `beta -> 0` limit (TE-like).
pub fn f_tilde_dirichlet(alpha: f64, theta: f64) -> f64 {
    let (s, c) = sin_cos(theta);
    let margin = support_margin(alpha, s);
    if !(margin > 0.0) {
        return 0.0;
    }
    alpha.powi(3) * c * c * discriminant(alpha, s, margin).sqrt()
}

/// The pointwise `beta -> inf` limit (TM-like), `alpha^3 (1 - alpha cos^2 theta)^2 / sqrt(D)`.
///
/// Unlike the finite-`beta` spectrum this stays nonzero at grazing angles.
pub fn f_tilde_neumann(alpha: f64, theta: f64) -> Result<f64> {
    let (s, c) = sin_cos(theta);
    let margin = support_margin(alpha, s);
    if !(margin > 0.0) {
        return Ok(0.0);
    }
    let d = discriminant(alpha, s, margin);
    if !(d > 0.0) {
        return Err(Error::Singularity(format!(
            "D = {d:e} at alpha = {alpha}, theta = {theta}"
        )));
    }
    let k = 1.0 - alpha * c * c;
    Ok(alpha.powi(3) * k * k / d.sqrt())
}

/// Dispatches on a condition already expressed in reduced units (`Finite` holds `beta`).
pub fn f_tilde_reduced(alpha: f64, theta: f64, reduced: &RobinCondition) -> Result<f64> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Validation(format!("alpha must be >= 0, got {alpha}")));
    }
    let theta = check_angle(theta)?;
    match reduced {
        RobinCondition::Dirichlet => Ok(f_tilde_dirichlet(alpha, theta)),
        RobinCondition::Finite(beta) => Ok(f_tilde_finite(alpha, beta.get(), theta)),
        RobinCondition::Neumann => f_tilde_neumann(alpha, theta),
    }
}

/// `w0^4 * F~(w / w0, w0 * gamma, theta)`, the angular spectrum with the
/// motion-dependent prefactor `epsilon0^2 tau / (8 pi^3)` divided out.
pub fn normalized_angular_spectrum(
    omega: f64,
    omega0: f64,
    bc: &RobinCondition,
    theta: f64,
) -> Result<f64> {
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::Validation(format!("omega must be >= 0, got {omega}")));
    }
    if !(omega0 > 0.0 && omega0.is_finite()) {
        return Err(Error::Validation(format!("omega0 must be > 0, got {omega0}")));
    }
    let reduced = bc.reduced(omega0)?;
    Ok(omega0.powi(4) * f_tilde_reduced(omega / omega0, theta, &reduced)?)
}

/// Point at which the static mode function is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePoint {
    kz: f64,
    z: f64,
    bc: RobinCondition,
}

impl ModePoint {
    pub fn new(kz: f64, z: f64, bc: RobinCondition) -> Result<Self> {
        if !(kz >= 0.0 && kz.is_finite()) {
            return Err(Error::Validation(format!("k_z must be >= 0, got {kz}")));
        }
        if !(z >= 0.0 && z.is_finite()) {
            return Err(Error::Validation(format!("z must be >= 0, got {z}")));
        }
        Ok(Self { kz, z, bc })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProfile {
    pub value: f64,
    pub derivative: f64,
}

/// Static mode `sin(kz z) + gamma kz cos(kz z)` and its z-derivative.
///
/// The pair satisfies `f(0) = gamma f'(0)`. For Neumann the profile is the
/// normalised `gamma -> inf` limit `cos(kz z)`, with `f'(0) = 0`.
pub fn mode_profile(mp: &ModePoint) -> ModeProfile {
    let (kz, z) = (mp.kz, mp.z);
    let (s, c) = (kz * z).sin_cos();
    match mp.bc.gamma() {
        Some(gamma) => {
            let gk = gamma * kz;
            ModeProfile {
                value: s + gk * c,
                derivative: kz * c - gk * kz * s,
            }
        }
        None => ModeProfile {
            value: c,
            derivative: -kz * s,
        },
    }
}

/// Mode normalisation `sqrt(16 pi^3 |omega| / kz^2 / (1 + gamma^2 kz^2))`.
pub fn mode_normalization(omega: f64, kz: f64, gamma: f64) -> Result<f64> {
    if !(kz > 0.0 && kz.is_finite()) {
        return Err(Error::Domain(format!("k_z must be > 0, got {kz}")));
    }
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::Domain(format!("omega must be finite and nonzero, got {omega}")));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::Domain(format!("gamma must be finite and >= 0, got {gamma}")));
    }
    let gk = gamma * kz;
    Ok((16.0 * PI.powi(3) * omega.abs() / (kz * kz) / (1.0 + gk * gk)).sqrt())
}
