//! Cube functions and the slice/cube transfer constructions.

pub mod convert;
pub mod cube;
pub mod expanded;
pub mod symmetrize;
pub mod univariate;

pub use convert::{cube_to_slice, explicit_cube_polynomial, slice_to_cube, ExplicitCubePolynomial};
pub use cube::CubeFunction;
pub use symmetrize::{minsky_papert_collapse, symmetrize_trailing};
pub use univariate::UnivariatePolynomial;
