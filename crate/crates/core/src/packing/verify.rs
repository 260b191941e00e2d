use serde::Serialize;

use super::gny::AnnulusFamily;
use super::measure::DiscreteMeasure;

#[derive(Debug, Clone, Serialize)]
pub struct LightSelection {
    /// Indices of the selected annuli.
    pub selected: Vec<usize>,
    /// `mu(2A_i)` for every annulus of the family.
    pub doubled_masses: Vec<f64>,
    /// Every selected annulus has `mu(2A_i) <= mu / count`.
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyCertificate {
    pub recomputed_masses: Vec<f64>,
    pub masses_match: bool,
    pub doubles_disjoint: bool,
    /// Pairs of annuli whose doubles share a support point.
    pub overlaps: Vec<(usize, usize)>,
    /// Every `mu(A_i) >= c_target * mu / k`.
    pub mass_bound: bool,
    pub c_target: f64,
    /// Selection of half of an even-sized family with light doubles.
    pub light_selection: Option<LightSelection>,
    pub passed: bool,
}

/// `count` annuli with `mu(2A_i) <= mu / count`, chosen by smallest doubled
/// mass (ties by index). Disjoint doubles guarantee that such a choice
/// exists whenever the family has at least `2 count - 1` members.
pub fn select_light_annuli(mu: &DiscreteMeasure, fam: &AnnulusFamily, count: usize) -> LightSelection {
    let doubled_masses: Vec<f64> =
        fam.annuli.iter().map(|a| mu.mass_where(|q| a.doubled_contains(q))).collect();
    let mut order: Vec<usize> = (0..fam.annuli.len()).collect();
    order.sort_by(|&a, &b| doubled_masses[a].partial_cmp(&doubled_masses[b]).unwrap().then(a.cmp(&b)));
    order.truncate(count);
    order.sort_unstable();
    let bound = mu.total / count as f64;
    let holds = order.len() == count && order.iter().all(|&i| doubled_masses[i] <= bound * (1.0 + 1e-12));
    LightSelection { selected: order, doubled_masses, holds }
}

/// Independent re-check of a decomposition: masses, disjointness of the
/// doubled annuli on the support, and the mass bound with `k` annuli.
pub fn verify_family(mu: &DiscreteMeasure, fam: &AnnulusFamily, k: usize, c_target: f64) -> FamilyCertificate {
    let recomputed_masses: Vec<f64> =
        fam.annuli.iter().map(|a| mu.mass_where(|q| a.contains(q))).collect();
    let masses_match = recomputed_masses.len() == fam.masses.len()
        && recomputed_masses
            .iter()
            .zip(&fam.masses)
            .all(|(a, b)| (a - b).abs() <= 1e-9 * mu.total);
    let membership: Vec<Vec<bool>> = fam
        .annuli
        .iter()
        .map(|a| (0..mu.len()).map(|i| a.doubled_contains(mu.point(i))).collect())
        .collect();
    let mut overlaps = Vec::new();
    for i in 0..membership.len() {
        for j in i + 1..membership.len() {
            if membership[i].iter().zip(&membership[j]).any(|(a, b)| *a && *b) {
                overlaps.push((i, j));
            }
        }
    }
    let bound = c_target * mu.total / k.max(1) as f64;
    let mass_bound = recomputed_masses.iter().all(|&m| m >= bound * (1.0 - 1e-12));
    let n = fam.annuli.len();
    let light_selection =
        (n >= 2 && n.is_multiple_of(2)).then(|| select_light_annuli(mu, fam, n / 2));
    let doubles_disjoint = overlaps.is_empty();
    let passed = masses_match
        && doubles_disjoint
        && mass_bound
        && light_selection.as_ref().is_none_or(|s| s.holds);
    FamilyCertificate {
        recomputed_masses,
        masses_match,
        doubles_disjoint,
        overlaps,
        mass_bound,
        c_target,
        light_selection,
        passed,
    }
}
