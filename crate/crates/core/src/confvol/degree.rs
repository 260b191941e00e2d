use serde::Serialize;

use super::immersion::SphereImmersion;
use super::optimize::{conformal_volume, ConfVolConfig, ConformalVolumeResult};
use crate::error::Result;

/// Relative slack allowed in `V(composed) <= d V(outer)`.
pub const DEGREE_REL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct DegreeReport {
    pub degree: u32,
    pub outer: ConformalVolumeResult,
    pub composed: ConformalVolumeResult,
    /// `d * V(outer)`.
    pub bound: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Compares the conformal-volume estimate of a map that is at most
/// `degree`-to-one onto `outer` with `degree` times that of `outer`.
pub fn degree_composition_check(
    outer: &SphereImmersion,
    degree: u32,
    composed: &SphereImmersion,
    config: &ConfVolConfig,
) -> Result<DegreeReport> {
    let outer = conformal_volume(outer, config)?;
    let composed = conformal_volume(composed, config)?;
    let bound = degree as f64 * outer.value;
    let tolerance = DEGREE_REL_TOL * bound;
    let holds = composed.value <= bound + tolerance;
    Ok(DegreeReport { degree, outer, composed, bound, tolerance, holds })
}
