//! Pull-back volumes of maps into spheres, conformal-volume estimates,
//! Hersch centering and the degree comparison for branched covers.

mod degree;
mod hersch;
mod immersion;
mod optimize;

pub use degree::{degree_composition_check, DegreeReport, DEGREE_REL_TOL};
pub use hersch::{center_of_mass, hersch_center, HerschCenter};
pub use immersion::{chordal_volume, inverse_chart, power_immersion, power_map, pullback_volume, SphereImmersion};
pub use optimize::{conformal_volume, dilation_from, ConfVolConfig, ConformalVolumeResult, TracePoint};
