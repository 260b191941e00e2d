//! Runs the checks that apply to a mesh and gathers them into one bundle.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::catalog::{index_entry, is_minimal_in_sphere, known_vc, natural_immersion, target_sphere_dim};
use super::constants::{constants, ConstantsTable};
use super::esi::{esi_residual, EsiReport};
use super::firsteig::{check_liyau, check_reilly_first, check_willmore_vc, LiYauReplay};
use super::higher::{build_tcv_witnesses, check_higher_bounds, HigherMode, WitnessReport};
use super::report::{InequalityReport, VcValue};
use super::schro::{check_genus_bound, check_index_bound, check_schro_bounds, genus_vc_bound, SchroMode, SchroReplay};
use crate::confvol::{
    conformal_volume, degree_composition_check, power_immersion, ConfVolConfig, ConformalVolumeResult, SphereImmersion,
};
use crate::error::{Error, Result};
use crate::geomcore::{Ambient, Fixture, TriangleMesh};
use crate::packing::GnyConfig;
use crate::spectral::{assemble_laplacian, eigen_spectrum_with, EigenOptions, NegativeCount};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Liyau,
    Reilly,
    Tcv,
    ReillyK,
    Grei,
    Witnesses,
    Willmore,
    Esi,
    Schro,
    Index,
    Genus,
}

impl Theorem {
    pub const ALL: [Theorem; 11] = [
        Theorem::Liyau,
        Theorem::Reilly,
        Theorem::Tcv,
        Theorem::ReillyK,
        Theorem::Grei,
        Theorem::Witnesses,
        Theorem::Willmore,
        Theorem::Esi,
        Theorem::Schro,
        Theorem::Index,
        Theorem::Genus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Liyau => "liyau",
            Theorem::Reilly => "reilly",
            Theorem::Tcv => "tcv",
            Theorem::ReillyK => "reilly_k",
            Theorem::Grei => "grei",
            Theorem::Witnesses => "witnesses",
            Theorem::Willmore => "willmore",
            Theorem::Esi => "esi",
            Theorem::Schro => "schro",
            Theorem::Index => "index",
            Theorem::Genus => "genus",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown theorem `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Largest `k` for the bounds on all eigenvalues.
    pub k_max: usize,
    /// Values of `k` for which the test functions are built.
    pub witness_k: Vec<usize>,
    pub confvol: ConfVolConfig,
    /// Translation applied to Euclidean meshes before the curvature
    /// identity, so that the surface is not symmetric about the origin.
    pub esi_offset: [f64; 3],
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            k_max: 30,
            witness_k: (1..=8).collect(),
            confvol: ConfVolConfig::default(),
            esi_offset: [0.3, -0.2, 0.5],
        }
    }
}

/// A mesh with its label and, when it is a built-in fixture, the fixture.
#[derive(Debug, Clone)]
pub struct MeshSource {
    pub label: String,
    pub mesh: TriangleMesh,
    pub fixture: Option<Fixture>,
}

impl MeshSource {
    pub fn fixture(f: Fixture) -> Result<Self> {
        Ok(MeshSource { label: f.to_string(), mesh: f.build()?, fixture: Some(f) })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfVolSummary {
    pub value: f64,
    pub identity_value: f64,
    pub argmax_t: f64,
    pub evaluations: usize,
    pub diverged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchroEntry {
    pub name: String,
    pub potential: String,
    pub count: NegativeCount,
    pub replay: SchroReplay,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeSummary {
    pub degree: u32,
    pub outer: f64,
    pub composed: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Bundle {
    pub schema_version: u32,
    pub fixture: String,
    pub seed: u64,
    pub theorems: Vec<Theorem>,
    pub constants: ConstantsTable,
    /// Sorted by name, then `k`.
    pub reports: Vec<InequalityReport>,
    pub liyau_replay: Option<LiYauReplay>,
    pub witnesses: Vec<WitnessReport>,
    pub schro: Vec<SchroEntry>,
    pub esi: Option<EsiReport>,
    pub conformal_volume: Option<ConfVolSummary>,
    pub willmore_conformal_volume: Option<ConfVolSummary>,
    pub degree: Option<DegreeSummary>,
    /// Names of the failed reports that carry no error bars.
    pub counterexamples: Vec<String>,
    pub skipped: Vec<String>,
    pub all_passed: bool,
}

impl Bundle {
    pub fn reports_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a InequalityReport> + 'a {
        self.reports.iter().filter(move |r| r.name == name)
    }
}

fn summary(cv: &ConformalVolumeResult) -> ConfVolSummary {
    ConfVolSummary {
        value: cv.value,
        identity_value: cv.identity_value,
        argmax_t: cv.argmax.t,
        evaluations: cv.evaluations,
        diverged: cv.diverged,
    }
}

/// The same surface as a submanifold of Euclidean space, if it has one.
fn euclidean_view(mesh: &TriangleMesh) -> Result<Option<TriangleMesh>> {
    match mesh.ambient() {
        Ambient::Euclidean(_) => Ok(Some(mesh.clone())),
        Ambient::UnitSphere(_) => Ok(Some(mesh.as_euclidean()?)),
        Ambient::Abstract => Ok(None),
    }
}

struct Context<'a> {
    src: &'a MeshSource,
    cfg: &'a VerifyConfig,
    consts: ConstantsTable,
    imm: Option<SphereImmersion>,
    vc: Option<VcValue>,
    cv: Option<ConformalVolumeResult>,
}

impl Context<'_> {
    fn label(&self) -> &str {
        &self.src.label
    }

    fn confvol_config(&self) -> ConfVolConfig {
        ConfVolConfig { seed: self.cfg.seed ^ self.cfg.confvol.seed, ..self.cfg.confvol.clone() }
    }

    fn gny_config(&self) -> GnyConfig {
        GnyConfig { seed: self.cfg.seed ^ GnyConfig::default().seed, ..GnyConfig::default() }
    }

    /// Closed-form value when known, else the optimizer estimate for the
    /// natural immersion, else the genus bound on the conformal volume of
    /// the conformal class.
    fn resolve_vc(&mut self) -> Result<()> {
        if let Some(v) = self.src.fixture.as_ref().and_then(known_vc) {
            self.vc = Some(v);
        } else if let Some(imm) = &self.imm {
            let cv = conformal_volume(imm, &self.confvol_config())?;
            self.vc = Some(VcValue::estimate(&cv));
            self.cv = Some(cv);
        } else if self.src.mesh.orientable() {
            let b = genus_vc_bound(self.src.mesh.genus(), true);
            self.vc = Some(VcValue::exact(b, "genus bound on the conformal class"));
        }
        Ok(())
    }
}

/// Runs `theorems` on one mesh. Checks that do not apply to the mesh are
/// listed in `skipped`.
pub fn verify(src: &MeshSource, theorems: &[Theorem], cfg: &VerifyConfig) -> Result<Bundle> {
    let mesh = &src.mesh;
    let mut theorems = theorems.to_vec();
    theorems.sort();
    theorems.dedup();
    let mut ctx = Context {
        src,
        cfg,
        consts: constants(2, target_sphere_dim(mesh))?,
        imm: natural_immersion(mesh)?,
        vc: None,
        cv: None,
    };
    ctx.resolve_vc()?;
    let euclid = euclidean_view(mesh)?;
    let minimal = src.fixture.as_ref().is_some_and(is_minimal_in_sphere);

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut liyau_replay = None;
    let mut witnesses = Vec::new();
    let mut schro = Vec::new();
    let mut esi = None;
    let mut willmore_cv = None;
    let mut degree = None;

    let needs_spectrum = theorems.iter().any(|t| matches!(t, Theorem::Tcv | Theorem::ReillyK | Theorem::Grei));
    let spectrum = if needs_spectrum {
        let ops = assemble_laplacian(mesh)?;
        let opts = EigenOptions { seed: cfg.seed ^ EigenOptions::default().seed, ..EigenOptions::default() };
        Some(eigen_spectrum_with(&ops, cfg.k_max + 1, &opts)?)
    } else {
        None
    };

    for &t in &theorems {
        let label = ctx.label().to_string();
        match t {
            Theorem::Liyau => match (&ctx.imm, &ctx.vc) {
                (Some(imm), Some(vc)) => {
                    let r = check_liyau(imm, vc, &label)?;
                    reports.push(r.report);
                    liyau_replay = Some(r.replay);
                }
                _ => skipped.push("liyau: no immersion into a sphere".to_string()),
            },
            Theorem::Reilly => match &euclid {
                Some(e) => reports.push(check_reilly_first(e, &label)?),
                None => skipped.push("reilly: no Euclidean coordinates".to_string()),
            },
            Theorem::Tcv => match &ctx.vc {
                Some(vc) => reports.extend(check_higher_bounds(
                    mesh,
                    spectrum.as_ref().expect("spectrum computed"),
                    Some(vc),
                    cfg.k_max,
                    HigherMode::Tcv,
                    &ctx.consts,
                    &label,
                )?),
                None => skipped.push("tcv: no conformal volume available".to_string()),
            },
            Theorem::ReillyK => match &euclid {
                Some(e) => {
                    let spec = spectrum.as_ref().expect("spectrum computed");
                    reports.extend(check_higher_bounds(e, spec, None, cfg.k_max, HigherMode::ReillyK, &ctx.consts, &label)?)
                }
                None => skipped.push("reilly_k: no Euclidean coordinates".to_string()),
            },
            Theorem::Grei => match mesh.ambient() {
                Ambient::UnitSphere(_) => reports.extend(check_higher_bounds(
                    mesh,
                    spectrum.as_ref().expect("spectrum computed"),
                    None,
                    cfg.k_max,
                    HigherMode::Grei { kappa: 1.0 },
                    &ctx.consts,
                    &label,
                )?),
                _ => skipped.push("grei: mesh is not in a unit sphere (the Euclidean case is reilly_k)".to_string()),
            },
            Theorem::Witnesses => match (&ctx.imm, &ctx.vc) {
                (Some(imm), Some(vc)) => {
                    for &k in &cfg.witness_k {
                        witnesses.push(build_tcv_witnesses(imm, k, vc, &ctx.consts, &ctx.gny_config(), &label)?);
                    }
                }
                _ => skipped.push("witnesses: no immersion into a sphere".to_string()),
            },
            Theorem::Willmore => match &euclid {
                Some(e) => {
                    let r = check_willmore_vc(e, &ctx.confvol_config(), &label)?;
                    willmore_cv = Some(summary(&r.conformal_volume));
                    reports.push(r.report);
                }
                None => skipped.push("willmore: no Euclidean coordinates".to_string()),
            },
            Theorem::Esi => match &euclid {
                Some(e) => {
                    let moved = if e.ambient() == Ambient::Euclidean(3) { e.translated(&cfg.esi_offset)? } else { e.clone() };
                    let r = esi_residual(&moved, &label)?;
                    reports.push(r.integrated.clone());
                    esi = Some(r);
                }
                None => skipped.push("esi: no Euclidean coordinates".to_string()),
            },
            Theorem::Schro => run_schro(&ctx, euclid.as_ref(), minimal, &mut reports, &mut schro, &mut skipped)?,
            Theorem::Index => match src.fixture.as_ref().and_then(|f| index_entry(f, mesh)) {
                Some(entry) => reports.push(check_index_bound(&entry, &ctx.consts)?.report),
                None => skipped.push("index: not a catalogued minimal hypersurface of S^3".to_string()),
            },
            Theorem::Genus => {
                // The fallback genus value is not an estimate of anything.
                let estimates: Vec<f64> = match (&ctx.imm, &ctx.vc) {
                    (Some(_), Some(vc)) => vec![vc.value],
                    _ => Vec::new(),
                };
                if matches!(src.fixture, Some(Fixture::Icosphere { .. })) {
                    let d = degree_composition_check(
                        ctx.imm.as_ref().expect("sphere immersion"),
                        2,
                        &power_immersion(mesh, 2)?,
                        &ctx.confvol_config(),
                    )?;
                    degree = Some(DegreeSummary {
                        degree: d.degree,
                        outer: d.outer.value,
                        composed: d.composed.value,
                        bound: d.bound,
                        holds: d.holds,
                    });
                }
                if estimates.is_empty() {
                    skipped.push("genus: no conformal volume estimate".to_string());
                } else {
                    reports.push(check_genus_bound(mesh, &estimates, 1e-3, &label)?);
                }
            }
        }
    }

    reports.sort_by(|a, b| (a.name.as_str(), a.k).cmp(&(b.name.as_str(), b.k)));
    let counterexamples: Vec<String> = reports
        .iter()
        .filter(|r| r.is_counterexample())
        .map(|r| match r.k {
            Some(k) => format!("{}[k={k}]", r.name),
            None => r.name.clone(),
        })
        .collect();
    let all_passed = reports.iter().all(|r| r.passed || !r.conclusive)
        && witnesses.iter().all(|w| w.all_passed)
        && schro.iter().all(|s| s.replay.all_strict && s.replay.supports_disjoint)
        && liyau_replay.as_ref().is_none_or(|r| r.quotients_dominate && r.energy_bound_holds)
        && degree.as_ref().is_none_or(|d| d.holds);

    Ok(Bundle {
        schema_version: SCHEMA_VERSION,
        fixture: src.label.clone(),
        seed: cfg.seed,
        theorems,
        constants: ctx.consts.clone(),
        reports,
        liyau_replay,
        witnesses,
        schro,
        esi,
        conformal_volume: ctx.cv.as_ref().map(summary),
        willmore_conformal_volume: willmore_cv,
        degree,
        counterexamples,
        skipped,
        all_passed,
    })
}

fn run_schro(
    ctx: &Context<'_>,
    euclid: Option<&TriangleMesh>,
    minimal: bool,
    reports: &mut Vec<InequalityReport>,
    out: &mut Vec<SchroEntry>,
    skipped: &mut Vec<String>,
) -> Result<()> {
    let mesh = &ctx.src.mesh;
    let label = ctx.label();
    let n = mesh.n_vertices();
    // Constant potentials plus one that varies over the surface.
    let mut potentials: Vec<(String, Vec<f64>)> =
        vec![("1".into(), vec![1.0; n]), ("2.5".into(), vec![2.5; n])];
    if mesh.ambient().has_coordinates() {
        potentials.push(("1 + 4 x_0^2".into(), (0..n).map(|i| 1.0 + 4.0 * mesh.vertex(i)[0].powi(2)).collect()));
    }
    let mut push = |name: &str,
                    pot: &str,
                    mesh: &TriangleMesh,
                    imm: Option<&SphereImmersion>,
                    v: &[f64],
                    mode: SchroMode,
                    vc: Option<&VcValue>|
     -> Result<()> {
        let r = check_schro_bounds(mesh, imm, v, mode, vc, &ctx.consts, false, label)?;
        reports.push(r.report.note(format!("potential V = {pot}")));
        out.push(SchroEntry { name: name.to_string(), potential: pot.to_string(), count: r.count, replay: r.replay });
        Ok(())
    };
    for (pot, v) in &potentials {
        match &ctx.vc {
            Some(vc) => push("tschro", pot, mesh, ctx.imm.as_ref(), v, SchroMode::TSchro, Some(vc))?,
            None => skipped.push(format!("tschro (V = {pot}): no conformal volume")),
        }
        if minimal {
            push("tmin", pot, mesh, ctx.imm.as_ref(), v, SchroMode::TMin, None)?;
        }
        if let Ambient::UnitSphere(_) = mesh.ambient() {
            push("tschro3", pot, mesh, ctx.imm.as_ref(), v, SchroMode::TSchro3 { kappa: 1.0 }, None)?;
        }
        if let Some(e) = euclid {
            let lift = SphereImmersion::stereographic_lift(e)?;
            push("tschro2", pot, e, Some(&lift), v, SchroMode::TSchro2, None)?;
        }
    }
    Ok(())
}
