//! Particle creation by a moving mirror with a Robin boundary condition.
//!
//! A planar mirror oscillating with small amplitude creates pairs of massless
//! scalar quanta. The field obeys `phi = gamma * d phi / dn` on the mirror,
//! interpolating between Dirichlet (`gamma = 0`) and Neumann (`gamma -> inf`).
//!
//! * [`kinematics`]: trajectories and their Fourier transforms.
//! * [`spectrum`]: the closed-form angular spectrum for a monochromatic mirror.
//! * [`rates`]: angle-integrated spectra, total rates and the Robin/Dirichlet ratio.
//! * [`general`]: the spectrum for arbitrary motion.
//! * [`quadrature`]: the adaptive Gauss-Kronrod integrator used throughout.
//! * [`table`]: CSV/JSON result tables.
//!
//! Units are natural (`c = hbar = 1`). Reduced variables are `alpha = w / w0`
//! and `beta = w0 * gamma`.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod general;
pub mod kinematics;
pub mod parallel;
pub mod quadrature;
pub mod rates;
pub mod spectrum;
pub mod table;

pub use error::{Error, Result};
pub use general::{spectral_density_k, spectrum_general, GeneralSpectrumRequest};
pub use kinematics::{DampedCosineMotion, MonochromaticLine, MotionSpectrum, SampledTrajectory};
pub use parallel::Execution;
pub use quadrature::{IntegrationResult, QuadratureConfig, Rule};
pub use rates::{frequency_spectrum, rate_ratio, ratio_curve, ratio_minimum, total_particles, total_rate, RatioMinimum};
pub use spectrum::{f_tilde, f_tilde_dirichlet, f_tilde_neumann, theta_cutoff, DimensionlessPoint, Gamma, RobinCondition};
pub use table::{Product, SpectrumTable, TableMeta};
