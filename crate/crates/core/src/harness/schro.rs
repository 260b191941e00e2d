//! Lower bounds for the number of negative Schroedinger eigenvalues, the
//! index bound for minimal hypersurfaces of spheres, and the genus bound
//! for the conformal volume.

use std::f64::consts::PI;

use serde::Serialize;

use super::constants::ConstantsTable;
use super::firsteig::mean_curvature_integral;
use super::higher::{disjoint_supports, pulled_back};
use super::report::{ErrorBars, InequalityReport, VcValue};
use crate::confvol::SphereImmersion;
use crate::error::{Error, Result};
use crate::geomcore::TriangleMesh;
use crate::packing::{gny_decompose, select_light_annuli, GnyConfig};
use crate::spectral::{assemble_laplacian, negative_count, stability_index, NegativeCount, OperatorPair};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SchroMode {
    /// `N >= C (\int V)^(n/2) / (V_c Vol^(n/2 - 1))`.
    TSchro,
    /// As `TSchro` with `V_c <= Vol` for a minimal immersion into a sphere.
    TMin,
    /// `N >= C \int V / \int |H|^2` in Euclidean space.
    TSchro2,
    /// `N >= C \int V / \int (|H|^2 + kappa)` in a space form.
    TSchro3 { kappa: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SchroWitness {
    pub support_size: usize,
    pub energy: f64,
    /// `\int V u^2`.
    pub potential_energy: f64,
    /// `energy < potential_energy`.
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchroReplay {
    /// Integer part of the left-hand side: the proof exhibits `k + 1`
    /// test functions.
    pub k: usize,
    /// `degenerate` (no admissible witness, `\int V = 0`), `constant` or
    /// `annuli`.
    pub kind: String,
    pub witnesses: Vec<SchroWitness>,
    pub supports_disjoint: bool,
    pub all_strict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchroReport {
    pub report: InequalityReport,
    pub count: NegativeCount,
    pub replay: SchroReplay,
}

fn witness(ops: &OperatorPair, v: &[f64], u: &[f64]) -> SchroWitness {
    let energy = ops.energy(u);
    let potential_energy = ops.potential_form(v, u);
    SchroWitness {
        support_size: u.iter().filter(|x| **x != 0.0).count(),
        energy,
        potential_energy,
        strict: energy < potential_energy,
    }
}

/// Replays the test-function construction for a given `k`. For `k = 0` one
/// function suffices and the constant does the job; otherwise the annuli
/// come from a decomposition of the potential-weighted measure, with the
/// `k + 1` lightest doubles (in volume) kept when `select` is set.
pub fn schro_witnesses(
    imm: Option<&SphereImmersion>,
    ops: &OperatorPair,
    v: &[f64],
    k: usize,
    select: bool,
    gny: &GnyConfig,
) -> Result<SchroReplay> {
    let total_v = ops.potential_form(v, &vec![1.0; ops.n()]);
    if total_v <= 0.0 {
        return Ok(SchroReplay {
            k,
            kind: "degenerate".into(),
            witnesses: Vec::new(),
            supports_disjoint: true,
            all_strict: k == 0,
        });
    }
    let functions = if k == 0 {
        vec![vec![1.0; ops.n()]]
    } else {
        let imm = imm.ok_or_else(|| Error::InvalidParameter("annulus witnesses need a sphere immersion".into()))?;
        let nu = imm.pushforward(Some(v))?;
        let (family, chosen) = if select {
            let family = gny_decompose(&nu, 2 * (k + 1), gny)?;
            let mu = imm.pushforward(None)?;
            let chosen = select_light_annuli(&mu, &family, k + 1).selected;
            (family, chosen)
        } else {
            let family = gny_decompose(&nu, k + 1, gny)?;
            let chosen = (0..family.annuli.len()).collect();
            (family, chosen)
        };
        chosen.iter().map(|&i| pulled_back(imm, &family.annuli[i])).collect::<Result<Vec<_>>>()?
    };
    let witnesses: Vec<SchroWitness> = functions.iter().map(|u| witness(ops, v, u)).collect();
    Ok(SchroReplay {
        k,
        kind: if k == 0 { "constant" } else { "annuli" }.into(),
        supports_disjoint: disjoint_supports(&functions),
        all_strict: witnesses.iter().all(|w| w.strict),
        witnesses,
    })
}

/// Checks one of the negative-count bounds for a surface (`n = 2`) and
/// replays the proof at the computed `k`.
#[allow(clippy::too_many_arguments)]
pub fn check_schro_bounds(
    mesh: &TriangleMesh,
    imm: Option<&SphereImmersion>,
    v: &[f64],
    mode: SchroMode,
    vc: Option<&VcValue>,
    consts: &ConstantsTable,
    allow_indefinite: bool,
    fixture: &str,
) -> Result<SchroReport> {
    if v.len() != mesh.n_vertices() {
        return Err(Error::DimensionMismatch { expected: mesh.n_vertices(), got: v.len() });
    }
    if !allow_indefinite {
        if let Some(i) = v.iter().position(|&x| x < 0.0) {
            return Err(Error::NegativePotential { vertex: i, value: v[i] });
        }
    }
    let ops = assemble_laplacian(mesh)?;
    let vol = ops.total_mass();
    let total_v = ops.potential_form(v, &vec![1.0; ops.n()]);
    let n = consts.n as f64;
    let (lhs, note, select) = match mode {
        SchroMode::TSchro => {
            let vc = vc.ok_or_else(|| Error::InvalidParameter("tschro needs a conformal volume".into()))?;
            let lhs = consts.c_schro * total_v.max(0.0).powf(n / 2.0) / (vc.value * vol.powf(n / 2.0 - 1.0));
            (lhs, format!("C_schro (int V)^(n/2) / (V_c Vol^(n/2-1)), V_c from {}", vc.source), true)
        }
        SchroMode::TMin => {
            let lhs = consts.c_schro * (total_v.max(0.0) / vol).powf(n / 2.0);
            (lhs, "C_schro (avg V)^(n/2)".to_string(), true)
        }
        SchroMode::TSchro2 | SchroMode::TSchro3 { .. } => {
            let kappa = if let SchroMode::TSchro3 { kappa } = mode { kappa } else { 0.0 };
            let w = mean_curvature_integral(mesh)? + kappa * vol;
            if w <= 0.0 {
                return Err(Error::ZeroDenominator);
            }
            (consts.c_schro2 * total_v / w, "C_schro2 int V / int (|H|^2 + kappa)".to_string(), false)
        }
    };
    let count = negative_count(&ops, v)?;
    let name = match mode {
        SchroMode::TSchro => "tschro",
        SchroMode::TMin => "tmin",
        SchroMode::TSchro2 => "tschro2",
        SchroMode::TSchro3 { .. } => "tschro3",
    };
    let mut report = InequalityReport::new(
        name,
        fixture,
        (lhs, &note),
        (count.count as f64, "number of negative eigenvalues"),
        ErrorBars::default(),
    );
    if allow_indefinite && v.iter().any(|&x| x < 0.0) {
        report = report.note("sign-indefinite bounded potential");
    }
    if mode == SchroMode::TSchro && !vc.is_some_and(|v| v.exact) {
        report = report.note("V_c is an optimizer lower bound, which strengthens the left side");
    }
    let k = lhs.max(0.0).floor() as usize;
    let replay = schro_witnesses(imm, &ops, v, k, select, &GnyConfig::default())?;
    if replay.kind == "degenerate" {
        report = report.note("zero potential: both sides vanish");
    }
    Ok(SchroReport { report, count, replay })
}

/// A minimal hypersurface of `S^{n+1}` with its squared shape operator.
#[derive(Debug, Clone)]
pub struct IndexEntry {
    pub name: String,
    pub mesh: TriangleMesh,
    pub shape_sq: Vec<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub report: InequalityReport,
    pub index: NegativeCount,
    /// `\int |S|^2`, the quantity in the linear comparison bound for surfaces.
    pub shape_integral: f64,
}

/// `Index >= C (n + avg |S|^2)^(n/2)`.
pub fn check_index_bound(entry: &IndexEntry, consts: &ConstantsTable) -> Result<IndexReport> {
    let index = stability_index(&entry.mesh, &entry.shape_sq, entry.n)?;
    let areas = entry.mesh.vertex_areas();
    let vol: f64 = areas.iter().sum();
    let shape_integral: f64 = entry.shape_sq.iter().zip(&areas).map(|(s, a)| s * a).sum();
    let n = entry.n as f64;
    let lhs = consts.c_index * (n + shape_integral / vol).powf(n / 2.0);
    let mut report = InequalityReport::new(
        "index",
        &entry.name,
        (lhs, "C_index (n + avg |S|^2)^(n/2)"),
        (index.count as f64, "Morse index of -Delta - n - |S|^2"),
        ErrorBars::default(),
    );
    if entry.n == 2 {
        report = report.note(format!(
            "for surfaces a linear bound Index >= C3 + C4 int |S|^2 is stronger; int |S|^2 = {shape_integral:.6}"
        ));
    }
    Ok(IndexReport { report, index, shape_integral })
}

/// `4 pi [(g + 3) / 2]` for orientable surfaces of genus `g`, and
/// `8 pi [(g + 3) / 2]` for non-orientable ones with `g` the genus of the
/// orienting double cover.
pub fn genus_vc_bound(genus: usize, orientable: bool) -> f64 {
    let d = ((genus + 3) / 2) as f64;
    if orientable {
        4.0 * PI * d
    } else {
        8.0 * PI * d
    }
}

/// Compares the smallest conformal-volume estimate among the immersions
/// tried with the genus bound on the conformal volume of the surface.
pub fn check_genus_bound(mesh: &TriangleMesh, estimates: &[f64], tol: f64, fixture: &str) -> Result<InequalityReport> {
    let best = estimates.iter().cloned().fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(Error::InvalidParameter("no conformal volume estimates".into()));
    }
    let (genus, orientable) = (mesh.genus(), mesh.orientable());
    let bound = genus_vc_bound(genus, orientable);
    let note = if orientable {
        format!("4 pi [(g + 3)/2], genus {genus}")
    } else {
        format!("8 pi [(g + 3)/2], orienting double cover of genus {genus}")
    };
    Ok(InequalityReport::new(
        "genus_vc",
        fixture,
        (best, "smallest V_c estimate over the immersions tried"),
        (bound, &note),
        ErrorBars { quadrature: tol * bound, ..Default::default() },
    ))
}
