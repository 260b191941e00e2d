//! First-eigenvalue inequalities: conformal volume, mean curvature and the
//! Willmore energy.

use serde::Serialize;

use super::report::{ErrorBars, InequalityReport, VcValue};
use crate::confvol::{
    chordal_volume, conformal_volume, hersch_center, pullback_volume, ConfVolConfig, ConformalVolumeResult,
    SphereImmersion,
};
use crate::error::{Error, Result};
use crate::geomcore::{mean_curvature, Ambient, TriangleMesh};
use crate::moebius::MoebiusMap;
use crate::spectral::{assemble_laplacian, eigen_spectrum, OperatorPair};

/// `\int |H|^2`, with `H` the mean curvature in the ambient space form
/// (Euclidean space or the unit sphere).
pub fn mean_curvature_integral(mesh: &TriangleMesh) -> Result<f64> {
    let h = mean_curvature(mesh)?;
    let sq = match mesh.ambient() {
        Ambient::Euclidean(_) => h.squared_norms(),
        Ambient::UnitSphere(_) => h.tangential_norms().unwrap_or_default().iter().map(|x| x * x).collect(),
        Ambient::Abstract => return Err(Error::NoAmbientCoordinates),
    };
    Ok(sq.iter().zip(&h.vertex_areas).map(|(s, a)| s * a).sum())
}

/// Relative gap between spherical and chordal image area of `imm` under
/// `s`. Any integral over the same triangulation carries a quadrature error
/// of this relative order, which is how the discrete Willmore energy of an
/// inscribed mesh is given an error bar.
pub(crate) fn quadrature_defect(imm: &SphereImmersion, s: &MoebiusMap) -> Result<f64> {
    let spherical = pullback_volume(imm, s)?;
    let chordal = chordal_volume(imm, s);
    Ok(((spherical - chordal) / chordal).max(0.0))
}

/// `(lambda_1, residual)`.
fn first_eigenvalue(ops: &OperatorPair) -> Result<(f64, f64)> {
    let spec = eigen_spectrum(ops, 2)?;
    Ok((spec.eigenvalues[1], spec.residuals[1]))
}

#[derive(Debug, Clone, Serialize)]
pub struct LiYauReplay {
    /// Dilation that centres the push-forward measure.
    pub hersch_t: f64,
    pub hersch_residual: f64,
    /// Rayleigh quotients of the centred coordinate functions.
    pub coordinate_quotients: Vec<f64>,
    pub lambda1: f64,
    /// Every centred coordinate has quotient at least `lambda_1`.
    pub quotients_dominate: bool,
    /// Dirichlet energy of the centred map.
    pub energy: f64,
    /// `lambda_1 Vol <= energy`.
    pub energy_bound_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiYauReport {
    pub report: InequalityReport,
    pub replay: LiYauReplay,
}

/// `lambda_1 Vol <= n V_c` for a surface (`n = 2`), with a replay of the
/// centring argument: the coordinates of the Hersch-centred map are
/// admissible test functions for `lambda_1`.
pub fn check_liyau(imm: &SphereImmersion, vc: &VcValue, fixture: &str) -> Result<LiYauReport> {
    let ops = assemble_laplacian(&imm.mesh)?;
    let vol = ops.total_mass();
    let (lambda1, res) = first_eigenvalue(&ops)?;

    let mu = imm.pushforward(None)?;
    let centre = hersch_center(&mu, 1e-11)?;
    let images = imm.composed_images(&centre.map);
    let n = imm.n_vertices();
    let mut quotients = Vec::with_capacity(imm.dim);
    let mut energy = 0.0;
    for c in 0..imm.dim {
        let u: Vec<f64> = (0..n).map(|i| images[i * imm.dim + c]).collect();
        let e = ops.energy(&u);
        energy += e;
        quotients.push(e / ops.mass_norm_sq(&u));
    }
    let tol = 1e-8 * lambda1.max(1.0) + res;
    let replay = LiYauReplay {
        hersch_t: centre.map.t,
        hersch_residual: centre.residual,
        quotients_dominate: quotients.iter().all(|&q| q >= lambda1 - tol),
        coordinate_quotients: quotients,
        lambda1,
        energy_bound_holds: lambda1 * vol <= energy * (1.0 + 1e-9),
        energy,
    };

    let bars = ErrorBars { spectral: res * vol, singular: imm.singular_area() * lambda1, ..Default::default() };
    let mut report = InequalityReport::new(
        "liyau",
        fixture,
        (lambda1 * vol, "lambda_1 * Vol"),
        (2.0 * vc.value, &format!("2 * V_c, V_c from {}", vc.source)),
        bars,
    );
    if !vc.exact {
        report = report.inconclusive("V_c is an optimizer lower bound on the right of an upper bound");
    }
    Ok(LiYauReport { report, replay })
}

/// `lambda_1 <= (n / Vol) \int |H|^2` for a surface in Euclidean space.
pub fn check_reilly_first(mesh: &TriangleMesh, fixture: &str) -> Result<InequalityReport> {
    if !matches!(mesh.ambient(), Ambient::Euclidean(_)) {
        return Err(Error::InvalidParameter("Reilly check needs a Euclidean mesh".into()));
    }
    let ops = assemble_laplacian(mesh)?;
    let vol = ops.total_mass();
    let (lambda1, res) = first_eigenvalue(&ops)?;
    let w = mean_curvature_integral(mesh)?;
    Ok(InequalityReport::new(
        "reilly",
        fixture,
        (lambda1, "lambda_1"),
        (2.0 * w / vol, "(2 / Vol) * int |H|^2"),
        ErrorBars { spectral: res, ..Default::default() },
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct WillmoreVcReport {
    pub report: InequalityReport,
    pub conformal_volume: ConformalVolumeResult,
}

/// Conformal volume of the stereographic lift against the Willmore energy
/// of a surface in R^m. The optimizer value underestimates the conformal
/// volume, which is the conservative direction for this test.
pub fn check_willmore_vc(mesh: &TriangleMesh, config: &ConfVolConfig, fixture: &str) -> Result<WillmoreVcReport> {
    let imm = SphereImmersion::stereographic_lift(mesh)?;
    let cv = conformal_volume(&imm, config)?;
    let w = mean_curvature_integral(mesh)?;
    let defect = quadrature_defect(&imm, &cv.argmax)?;
    let bars = ErrorBars {
        quadrature: (cv.value - chordal_volume(&imm, &cv.argmax)).max(0.0) + defect * w,
        singular: cv.singular_area,
        ..Default::default()
    };
    let report = InequalityReport::new(
        "willmore_vc",
        fixture,
        (cv.value, "V_c lower bound of the lifted surface"),
        (w, "int |H|^2"),
        bars,
    )
    .note("left side is a lower bound for V_c: a failure beyond the error bars is a genuine violation");
    Ok(WillmoreVcReport { report, conformal_volume: cv })
}
