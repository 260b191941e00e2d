//! Numerical laboratory for eigenvalue bounds on triangulated surfaces:
//! cotangent Laplacians, Moebius maps of spheres, annulus decompositions of
//! measures, conformal volume and a verification harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN.

pub mod confvol;
pub mod error;
pub mod geomcore;
pub mod harness;
pub mod moebius;
pub mod packing;
pub mod spectral;
mod vector;

pub use error::{Error, Result};
