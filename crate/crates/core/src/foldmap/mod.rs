//! Folded potentials on S^2, common critical pairs of two densities, and the
//! test functions they produce.

mod basis;
mod density;
mod field;
mod finder;

pub use basis::{interpolate, rayleigh_of_family, rayleigh_of_test, rayleigh_parts, select_basis, SelectedBasis, TestFunction, BASIS_SAMPLES};
pub use density::{random_polynomial, random_smooth_pair, MassDensity, Provenance};
pub use field::{
    fold3, fold_axis, folded_potential, geodesic3, grad_folded, grad_potential, pair_field, potential, reflect3, FoldWeight, PairField, PolynomialWeight,
};
pub use finder::{fibonacci_lattice, find_fold_pair, zero_census, Census, CensusOptions, CensusZero, FinderMethod, FoldCritPair, FoldOptions};
