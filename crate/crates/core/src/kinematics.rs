//! Mirror trajectories and their Fourier transforms.
//!
//! The transform convention is `dQ(w) = int dt exp(i w t) dq(t)`. All
//! quantities are in natural units (c = 1).

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest `omega0 * tau` for which the damped cosine may be replaced by a
/// pair of spectral lines.
pub const MIN_LINE_QUALITY: f64 = 10.0;

/// Minimum number of samples in a [`SampledTrajectory`].
pub const MIN_SAMPLES: usize = 16;

/// Endpoint samples must be within this fraction of the peak excursion.
pub const REST_TOLERANCE: f64 = 1e-6;

const SPACING_TOLERANCE: f64 = 1e-9;

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Validation(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `dq(t) = epsilon0 * cos(omega0 t) * exp(-|t| / tau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedCosineMotion {
    epsilon0: f64,
    omega0: f64,
    tau: f64,
}

impl DampedCosineMotion {
    pub fn new(epsilon0: f64, omega0: f64, tau: f64) -> Result<Self> {
        Ok(Self {
            epsilon0: positive("epsilon0", epsilon0)?,
            omega0: positive("omega0", omega0)?,
            tau: positive("tau", tau)?,
        })
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Perturbative treatment needs `epsilon0 * omega0 < 1`.
    pub fn is_small_amplitude(&self) -> bool {
        self.epsilon0 * self.omega0 < 1.0
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.is_small_amplitude() {
            w.push(format!(
                "epsilon0 * omega0 = {} is not small; first-order results are unreliable",
                self.epsilon0 * self.omega0
            ));
        }
        w
    }

    pub fn position(&self, t: f64) -> f64 {
        self.epsilon0 * (self.omega0 * t).cos() * (-t.abs() / self.tau).exp()
    }

    /// Closed-form transform: a pair of Lorentzians centred on `+-omega0`.
    pub fn fourier(&self, omega: f64) -> f64 {
        let tau = self.tau;
        let plus = (omega + self.omega0) * tau;
        let minus = (omega - self.omega0) * tau;
        self.epsilon0 * tau * (1.0 / (1.0 + plus * plus) + 1.0 / (1.0 + minus * minus))
    }

    pub fn monochromatic_line(&self) -> Result<MonochromaticLine> {
        let q = self.omega0 * self.tau;
        if q < MIN_LINE_QUALITY {
            return Err(Error::Regime(format!(
                "monochromatic limit needs omega0 * tau >= {MIN_LINE_QUALITY}, got {q}"
            )));
        }
        Ok(MonochromaticLine {
            epsilon0: self.epsilon0,
            omega0: self.omega0,
            tau: self.tau,
        })
    }
}

/// The `omega0 * tau >> 1` limit of the damped cosine:
/// `|dQ(w)|^2 = weight * [delta(w - omega0) + delta(w + omega0)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonochromaticLine {
    epsilon0: f64,
    omega0: f64,
    tau: f64,
}

impl MonochromaticLine {
    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn frequency(&self) -> f64 {
        self.omega0
    }

    /// `(pi / 2) * epsilon0^2 * tau`
    pub fn weight(&self) -> f64 {
        0.5 * PI * self.epsilon0 * self.epsilon0 * self.tau
    }
}

/// Mirror positions on a uniform time grid `t_i = t0 + i * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTrajectory {
    t0: f64,
    dt: f64,
    samples: Vec<f64>,
}

impl SampledTrajectory {
    /// Validates the sample count, rest at both ends and non-relativistic speed.
    pub fn new(t0: f64, dt: f64, samples: Vec<f64>) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::Validation(format!("t0 must be finite, got {t0}")));
        }
        positive("dt", dt)?;
        if samples.len() < MIN_SAMPLES {
            return Err(Error::Validation(format!(
                "trajectory needs at least {MIN_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|q| !q.is_finite()) {
            return Err(Error::Validation(format!("sample {i} is not finite")));
        }
        let peak = samples.iter().fold(0.0_f64, |m, q| m.max(q.abs()));
        let first = samples[0].abs();
        let last = samples[samples.len() - 1].abs();
        if first > REST_TOLERANCE * peak || last > REST_TOLERANCE * peak {
            return Err(Error::Validation(format!(
                "trajectory must start and end at rest near z = 0 \
                 (|first| = {first:e}, |last| = {last:e}, peak = {peak:e})"
            )));
        }
        let speed = samples
            .windows(2)
            .fold(0.0_f64, |m, w| m.max((w[1] - w[0]).abs()))
            / dt;
        if speed >= 1.0 {
            return Err(Error::Validation(format!(
                "mirror speed {speed} is not small compared to c = 1"
            )));
        }
        Ok(Self { t0, dt, samples })
    }

    /// Samples a damped cosine on `n` points starting at `t0`.
    pub fn from_motion(m: &DampedCosineMotion, t0: f64, dt: f64, n: usize) -> Result<Self> {
        let samples = (0..n).map(|i| m.position(t0 + i as f64 * dt)).collect();
        Self::new(t0, dt, samples)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.dt
    }

    /// Trapezoid-weighted direct sum of `int dt exp(i w t) dq(t)`.
    pub fn fourier(&self, omega: f64) -> Result<Complex64> {
        let limit = self.nyquist();
        if !(omega.abs() <= limit) {
            return Err(Error::Nyquist { omega, limit });
        }
        let last = self.samples.len() - 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &q) in self.samples.iter().enumerate() {
            if q == 0.0 {
                continue;
            }
            let w = if i == 0 || i == last { 0.5 } else { 1.0 };
            let phase = omega * (self.t0 + i as f64 * self.dt);
            acc += Complex64::new(phase.cos(), phase.sin()) * (w * q);
        }
        Ok(acc * self.dt)
    }

    /// Parses the two-column `t q` text format.
    ///
    /// Lines starting with `#` are comments, except that a `# units: natural`
    /// line is required. Times must be strictly uniform to 1e-9 relative.
    pub fn parse(text: &str) -> Result<Self> {
        let mut units = None;
        let mut times = Vec::new();
        let mut positions = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once(':') {
                    if key.trim() == "units" {
                        units = Some(value.trim().to_string());
                    }
                }
                continue;
            }
            let mut cols = line.split_whitespace();
            let (Some(t), Some(q), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::Parse(format!(
                    "line {}: expected two columns \"t q\"",
                    lineno + 1
                )));
            };
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {s:?}: {e}", lineno + 1)))
            };
            times.push(parse(t)?);
            positions.push(parse(q)?);
        }
        match units.as_deref() {
            Some("natural") => {}
            Some(other) => {
                return Err(Error::Validation(format!(
                    "unsupported units {other:?}; expected \"natural\""
                )))
            }
            None => {
                return Err(Error::Validation(
                    "missing \"# units: natural\" header line".into(),
                ))
            }
        }
        if times.len() < 2 {
            return Err(Error::Validation(format!(
                "trajectory needs at least {MIN_SAMPLES} samples, got {}",
                times.len()
            )));
        }
        let n = times.len();
        let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
        for (i, w) in times.windows(2).enumerate() {
            let step = w[1] - w[0];
            if (step - dt).abs() > SPACING_TOLERANCE * dt.abs() {
                return Err(Error::Validation(format!(
                    "non-uniform time step between rows {} and {}: {step} vs {dt}",
                    i + 1,
                    i + 2
                )));
            }
        }
        Self::new(times[0], dt, positions)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# units: natural\n# t q\n");
        for (i, q) in self.samples.iter().enumerate() {
            let t = self.t0 + i as f64 * self.dt;
            let _ = writeln!(out, "{t:.17e} {q:.17e}");
        }
        out
    }
}

/// A representation of `|dQ(w)|^2`.
#[derive(Debug, Clone, PartialEq)]
pub enum MotionSpectrum {
    ClosedFormLorentzian(DampedCosineMotion),
    MonochromaticLine(MonochromaticLine),
    Sampled(SampledTrajectory),
}

impl MotionSpectrum {
    /// `|dQ(w)|^2`. The line variant is a distribution: it is zero away from
    /// `+-omega0` and infinite on the line itself.
    pub fn power(&self, omega: f64) -> Result<f64> {
        match self {
            MotionSpectrum::ClosedFormLorentzian(m) => {
                let q = m.fourier(omega);
                Ok(q * q)
            }
            MotionSpectrum::MonochromaticLine(l) => Ok(if omega.abs() == l.frequency() {
                f64::INFINITY
            } else {
                0.0
            }),
            MotionSpectrum::Sampled(s) => Ok(s.fourier(omega)?.norm_sqr()),
        }
    }

    /// Rejects motions outside the small-amplitude regime.
    pub fn check_regime(&self) -> Result<()> {
        let (eps, w0) = match self {
            MotionSpectrum::ClosedFormLorentzian(m) => (m.epsilon0(), m.omega0()),
            MotionSpectrum::MonochromaticLine(l) => (l.epsilon0(), l.frequency()),
            MotionSpectrum::Sampled(_) => return Ok(()),
        };
        if eps * w0 < 1.0 {
            Ok(())
        } else {
            Err(Error::Regime(format!(
                "epsilon0 * omega0 = {} violates the small-amplitude assumption",
                eps * w0
            )))
        }
    }
}

pub fn evaluate_motion(m: &DampedCosineMotion, t: f64) -> f64 {
    m.position(t)
}

pub fn motion_fourier_closed(m: &DampedCosineMotion, omega: f64) -> f64 {
    m.fourier(omega)
}

/// Line frequency and weight of the monochromatic limit.
pub fn monochromatic_line_weight(m: &DampedCosineMotion) -> Result<(f64, f64)> {
    let line = m.monochromatic_line()?;
    Ok((line.frequency(), line.weight()))
}

pub fn trajectory_fourier(s: &SampledTrajectory, omega: f64) -> Result<Complex64> {
    s.fourier(omega)
}
