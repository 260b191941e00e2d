//! Cotangent Laplacian, generalized eigensolver, Schroedinger counts.

mod assemble;
mod eigen;
mod schrodinger;
mod sparse;
mod weyl;

pub use assemble::{assemble_laplacian, OperatorPair};
pub use eigen::{eigen_spectrum, eigen_spectrum_with, EigenOptions, Spectrum};
pub use schrodinger::{
    fem_zero_band, negative_count, negative_count_with, stability_index, NegativeCount, NEAR_ZERO,
};
pub use sparse::{CsrMatrix, LdlFactor};
pub use weyl::{unit_ball_volume, weyl_fit, WeylFit};
