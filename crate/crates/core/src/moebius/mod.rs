//! Moebius group of S^m: stereographic projections, dilations, test
//! functions supported in caps and annuli, and the fold map.

mod covering;
mod map;
mod testfn;

pub use covering::{
    arc_cover, covering_count, covering_witness, greedy_cover, random_sphere_point, sample_ball,
    CoveringReport, CoveringTrial,
};
pub use map::{
    fold_map, geodesic_distance, inverse_stereographic, stereographic, xi_map, MoebiusMap,
    SpherePoint,
};
pub use testfn::{
    bar_parameter, bar_phi, cap_parameters, phi_cap, u_annulus, Annulus, AnnulusFunction,
    BarFunction, CapFunction,
};
