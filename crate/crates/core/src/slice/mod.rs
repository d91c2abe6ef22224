//! Slices, slice functions and their harmonic representation.

pub mod domain;
pub mod function;
pub mod harmonic;
pub(crate) mod linalg;
pub mod polynomial;

pub use domain::{SliceDomain, SlicePoint};
pub use function::SliceFunction;
pub use harmonic::{decompose, degree, harmonic_representation, HarmonicBasis, HarmonicDecomposition};
pub use polynomial::MultilinearPolynomial;
