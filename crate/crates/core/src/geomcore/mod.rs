//! Triangle meshes, standard fixtures, OFF I/O and extrinsic curvature.

mod curvature;
mod distortion;
pub mod fixtures;
mod mesh;
mod off;

pub use curvature::{mean_curvature, total_volume, willmore_energy, MeanCurvature};
pub use distortion::{conformal_distortion, DistortionReport};
pub use fixtures::Fixture;
pub use mesh::{Ambient, TriangleMesh};
pub use off::{load_mesh, read_off, save_mesh, write_off, AmbientHint};
