use std::f64::consts::PI;

use conflab::confvol::{
    center_of_mass, conformal_volume, degree_composition_check, hersch_center, power_immersion, pullback_volume,
    ConfVolConfig, SphereImmersion,
};
use conflab::geomcore::fixtures::{clifford_torus, icosphere, revolution_torus};
use conflab::moebius::{MoebiusMap, SpherePoint};
use proptest::prelude::*;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormalizes the rows of a square matrix; `None` if they are nearly
/// dependent.
fn orthonormal_rows(raw: &[f64], d: usize) -> Option<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(d);
    for i in 0..d {
        let mut v = raw[i * d..(i + 1) * d].to_vec();
        for r in &rows {
            let c = dot(&v, r);
            v.iter_mut().zip(r).for_each(|(x, y)| *x -= c * y);
        }
        let n = dot(&v, &v).sqrt();
        if n < 1e-3 {
            return None;
        }
        rows.push(v.iter().map(|x| x / n).collect());
    }
    Some(rows)
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = dot(v, v).sqrt();
    v.iter().map(|x| x / n).collect()
}

#[test]
fn icosphere_landscape_is_flat() {
    let imm = SphereImmersion::inclusion(&icosphere(3).unwrap()).unwrap();
    let base = pullback_volume(&imm, &MoebiusMap::identity(2)).unwrap();
    assert!((base - 4.0 * PI).abs() <= 1e-9 * 4.0 * PI);
    for (dir, t) in [([0.0, 0.0, 1.0], 5.0), ([0.6, 0.0, 0.8], 0.2), ([0.3, -0.4, 0.2], 12.0)] {
        let s = MoebiusMap::dilation(SpherePoint::from_direction(&dir).unwrap(), t).unwrap();
        let v = pullback_volume(&imm, &s).unwrap();
        assert!((v - base).abs() <= 1e-9 * base, "t = {t}: {v}");
    }
    let res = conformal_volume(&imm, &ConfVolConfig::default()).unwrap();
    assert!((res.value - 4.0 * PI).abs() <= 1e-9 * 4.0 * PI);
}

#[test]
fn clifford_value_converges_under_refinement() {
    let errs: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let imm = SphereImmersion::inclusion(&clifford_torus(n).unwrap()).unwrap();
            let res = conformal_volume(&imm, &ConfVolConfig::default()).unwrap();
            assert!(res.value >= res.identity_value);
            let at_argmax = pullback_volume(&imm, &res.argmax).unwrap();
            assert!((res.value - at_argmax).abs() <= 1e-10 * res.value);
            (res.value - 2.0 * PI * PI).abs()
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[2] < 0.01);
}

#[test]
fn optimizer_is_reproducible_and_dominates_identity() {
    let imm = SphereImmersion::stereographic_lift(&revolution_torus(2.0, 1.0, 24).unwrap()).unwrap();
    let cfg = ConfVolConfig::default();
    let a = conformal_volume(&imm, &cfg).unwrap();
    let b = conformal_volume(&imm, &cfg).unwrap();
    assert_eq!(a.value, b.value);
    assert_eq!(a.argmax, b.argmax);
    assert!(a.value >= a.identity_value);
    assert!(!a.diverged);
}

#[test]
fn hersch_centering_balances_a_skewed_measure() {
    let imm = SphereImmersion::inclusion(&icosphere(3).unwrap()).unwrap();
    let pole = SpherePoint::from_direction(&[0.2, 0.5, 1.0]).unwrap();
    let skew = MoebiusMap::dilation(pole, 4.0).unwrap();
    let skewed = SphereImmersion::new(imm.mesh.clone(), imm.composed_images(&skew), 3).unwrap();
    let mu = skewed.pushforward(None).unwrap();
    let before = center_of_mass(&mu, &MoebiusMap::identity(2));
    assert!(dot(&before, &before).sqrt() > 0.3);
    let h = hersch_center(&mu, 1e-10).unwrap();
    let after = center_of_mass(&mu, &h.map);
    assert!(dot(&after, &after).sqrt() <= 1e-10 * 1.01);
}

#[test]
fn branched_double_cover_stays_below_twice_the_sphere() {
    let mesh = icosphere(3).unwrap();
    let outer = SphereImmersion::inclusion(&mesh).unwrap();
    let composed = power_immersion(&mesh, 2).unwrap();
    assert!(!composed.singular_faces.is_empty());
    let rep = degree_composition_check(&outer, 2, &composed, &ConfVolConfig::default()).unwrap();
    assert!(rep.holds, "{} > {}", rep.composed.value, rep.bound);
    // 8 pi is also the orientable genus-zero bound 4 pi [(0 + 3) / 2] doubled.
    assert!((rep.bound - 8.0 * PI).abs() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pullback_volume_ignores_the_rotation(
        raw in prop::collection::vec(-1.0..1.0f64, 16),
        dir in prop::collection::vec(-1.0..1.0f64, 4),
        log_t in -2.5..2.5f64,
    ) {
        prop_assume!(dot(&dir, &dir) > 0.01);
        let rotation = orthonormal_rows(&raw, 4);
        prop_assume!(rotation.is_some());
        let imm = SphereImmersion::inclusion(&clifford_torus(16).unwrap()).unwrap();
        let pole = SpherePoint::new(unit(&dir)).unwrap();
        let plain = MoebiusMap::dilation(pole.clone(), log_t.exp()).unwrap();
        let rotated = MoebiusMap::new(rotation.unwrap(), pole, log_t.exp()).unwrap();
        let a = pullback_volume(&imm, &plain).unwrap();
        let b = pullback_volume(&imm, &rotated).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a);
        prop_assert!(a <= 2.0 * PI * PI * 1.05);
    }
}
