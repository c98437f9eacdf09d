//! Exact parameter calculus for geometric distance-regular graphs: intersection
//! arrays, classical and geometric parameters, spectra, and a battery of
//! feasibility checks with a branch classifier.

pub mod algebraic;
pub mod filters;
pub mod params;
pub mod poly;
pub mod primes;
pub mod rational;
pub mod spectrum;

pub use algebraic::{AlgError, AlgebraicValue, Eigenvalue};
pub use params::{
    array_to_geometric, classical_geometric, classical_to_array, derive_counts, gaussian_bracket,
    geometric_to_array, ClassicalParameterSet, Counts, GeometricArray, IntersectionArray, ParamError,
};
pub use rational::Rational;
pub use spectrum::{classical_eigenvalues, eigenvalues, SpectrumData};
