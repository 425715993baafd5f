//! Neumann eigenvalues of the Laplace-Beltrami operator on domains and
//! densities of the unit sphere, the fold-map test-function construction,
//! and a harness that checks the sharp upper bounds for mu_2 and mu_1.
//!
//! Module map:
//! - [`sphere`]: points, reflections, folds, caps and quadrature on S^n.
//! - [`radial`]: shooting solver for geodesic-ball modes and the separated
//!   eigenproblem for radial densities.
//! - [`fem`]: P1 finite elements on icospheres, masks, and a shift-invert
//!   block eigensolver.
//! - [`foldmap`]: folded potentials, the paired gradient field, critical
//!   pairs, zero census and basis selection.
//! - [`verify`]: the experiments behind the `neumann-sphere` binary.

pub mod config;
pub mod error;
pub mod fem;
pub mod foldmap;
pub mod radial;
pub mod sphere;
pub mod verify;

pub use config::Tolerances;
pub use error::{Error, Result};
