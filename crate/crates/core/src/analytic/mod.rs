//! Closed-form solution of the iteration for arbitrary complex initial amplitudes.
//!
//! The whole dynamics reduces to the two block means, which obey a linear
//! recursion diagonalized by the phasors `f±`. Individual amplitudes are the
//! means plus their conserved deviations.

mod dynamics;
mod ellipse;
mod probability;
mod spectral;

pub use dynamics::{
    mean_amplitudes, reconstruct_amplitude, reconstruct_into, recursion_step_exact, DiffusionKernel,
};
pub use ellipse::{ellipse_geometry, EllipseGeometry};
pub use probability::{
    p_av_from_normalization, probability_profile, success_probability,
    success_probability_from_means, ProbabilityProfile,
};
pub use spectral::{
    compute_spectral, compute_spectral_with, rotation_angle, Regime, SpectralParams,
};

pub(crate) use spectral::coupling;
