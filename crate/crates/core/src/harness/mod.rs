//! Explicit constants of the eigenvalue bounds and numerical checks of
//! every inequality on triangulated surfaces.

pub mod catalog;
pub mod constants;
pub mod esi;
pub mod firsteig;
pub mod higher;
pub mod report;
pub mod schro;
pub mod suite;

pub use catalog::{index_catalog, index_entry, known_vc, natural_immersion};
pub use constants::{constants, ConstantsTable};
pub use esi::{esi_refinement_study, esi_residual, EsiReport, EsiStudy};
pub use firsteig::{
    check_liyau, check_reilly_first, check_willmore_vc, mean_curvature_integral, LiYauReplay, LiYauReport,
    WillmoreVcReport,
};
pub use higher::{build_tcv_witnesses, check_higher_bounds, HigherMode, Witness, WitnessReport};
pub use report::{ErrorBars, InequalityReport, VcValue};
pub use schro::{
    check_genus_bound, check_index_bound, check_schro_bounds, genus_vc_bound, schro_witnesses, IndexEntry,
    IndexReport, SchroMode, SchroReplay, SchroReport, SchroWitness,
};
pub use suite::{verify, Bundle, MeshSource, Theorem, VerifyConfig, SCHEMA_VERSION};
