//! One-dimensional spectral solvers: geodesic-ball modes by shooting and
//! radially symmetric densities by separation of variables.

mod ball;
mod density;
pub(crate) mod ode;

pub use ball::{
    extend_profile, mu1_from_profile, solve_ball_mode, solve_ball_mode_with, ExtendedProfile, RadialMode,
    PROFILE_INTERVALS,
};
pub use density::{
    ball_spectrum, harmonic_multiplicity, solve_radial_density, solve_radial_density_with, two_cap_spectrum, DensityOptions,
    DensitySpectrum, RadialDensity, RadialFunction, SpectrumEntry,
};
