use std::f64::consts::PI;

use conflab::confvol::{ConfVolConfig, SphereImmersion};
use conflab::geomcore::fixtures::{clifford_torus, icosphere, revolution_torus};
use conflab::geomcore::{Fixture, TriangleMesh};
use conflab::harness::{
    build_tcv_witnesses, check_genus_bound, check_higher_bounds, check_liyau, check_reilly_first, check_schro_bounds,
    check_willmore_vc, constants, esi_residual, genus_vc_bound, verify, ErrorBars, HigherMode, InequalityReport,
    MeshSource, SchroMode, Theorem, VcValue, VerifyConfig,
};
use conflab::packing::GnyConfig;
use conflab::spectral::{assemble_laplacian, eigen_spectrum};
use conflab::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn sphere_vc() -> VcValue {
    VcValue::exact(4.0 * PI, "round S^2")
}

/// The unit icosphere scaled by `s`, together with its immersion into S^2
/// by normalization.
fn scaled_sphere(level: u32, s: f64) -> (TriangleMesh, SphereImmersion) {
    let unit = icosphere(level).unwrap();
    let big = unit.scaled(s).unwrap();
    let imm = SphereImmersion::new(big.clone(), unit.coords().to_vec(), 3).unwrap();
    (big, imm)
}

#[test]
fn counterexamples_need_zero_error_bars() {
    let bad = InequalityReport::new("x", "f", (2.0, "lhs"), (1.0, "rhs"), ErrorBars::default());
    assert!(!bad.passed && bad.is_counterexample());
    let covered = InequalityReport::new("x", "f", (1.05, "lhs"), (1.0, "rhs"), ErrorBars { spectral: 0.1, ..Default::default() });
    assert!(covered.passed && !covered.is_counterexample());
    let blurred = InequalityReport::new("x", "f", (2.0, "lhs"), (1.0, "rhs"), ErrorBars { quadrature: 0.1, ..Default::default() });
    assert!(!blurred.passed && !blurred.is_counterexample());
}

#[test]
fn first_eigenvalue_reports_are_scale_free() {
    let (m1, i1) = scaled_sphere(3, 1.0);
    let (m2, i2) = scaled_sphere(3, 2.0);
    let a = check_liyau(&i1, &sphere_vc(), "s1").unwrap().report;
    let b = check_liyau(&i2, &sphere_vc(), "s2").unwrap().report;
    assert!(rel(a.lhs, b.lhs) < 1e-9 && a.rhs == b.rhs && a.passed == b.passed);

    let a = check_reilly_first(&m1.as_euclidean().unwrap(), "s1").unwrap();
    let b = check_reilly_first(&m2, "s2").unwrap();
    assert!(rel(a.lhs, 4.0 * b.lhs) < 1e-9 && rel(a.rhs, 4.0 * b.rhs) < 1e-9);
    assert!((a.relative_gap() - b.relative_gap()).abs() < 1e-9);

    let torus = revolution_torus(2.0, 1.0, 24).unwrap();
    let a = check_willmore_vc(&torus, &ConfVolConfig::default(), "t1").unwrap().report;
    let b = check_willmore_vc(&torus.scaled(2.0).unwrap(), &ConfVolConfig::default(), "t2").unwrap().report;
    assert!(rel(a.rhs, b.rhs) < 1e-9);
    assert!(rel(a.lhs, b.lhs) < 1e-3, "{} vs {}", a.lhs, b.lhs);
    assert!(a.passed && b.passed);
}

#[test]
fn higher_eigenvalue_reports_are_scale_free() {
    let consts = constants(2, 2).unwrap();
    let run = |s: f64| {
        let (mesh, _) = scaled_sphere(3, s);
        let spec = eigen_spectrum(&assemble_laplacian(&mesh).unwrap(), 12).unwrap();
        check_higher_bounds(&mesh, &spec, Some(&sphere_vc()), 10, HigherMode::Tcv, &consts, "s").unwrap()
    };
    for (a, b) in run(1.0).iter().zip(&run(2.0)) {
        assert_eq!(a.k, b.k);
        assert!(rel(a.lhs, b.lhs) < 1e-8 && rel(a.rhs, b.rhs) < 1e-12);
        assert!(a.passed && b.passed && a.conclusive);
    }
}

#[test]
fn estimated_conformal_volume_makes_the_eigenvalue_bound_inconclusive() {
    let consts = constants(2, 3).unwrap();
    let mesh = clifford_torus(16).unwrap();
    let spec = eigen_spectrum(&assemble_laplacian(&mesh).unwrap(), 6).unwrap();
    let vc = VcValue { value: 2.0 * PI * PI, exact: false, source: "optimizer".into() };
    let reps = check_higher_bounds(&mesh, &spec, Some(&vc), 4, HigherMode::Tcv, &consts, "c").unwrap();
    assert!(reps.iter().all(|r| !r.conclusive));
    assert!(check_higher_bounds(&mesh, &spec, Some(&vc), 6, HigherMode::Tcv, &consts, "c").is_err());
}

#[test]
fn witness_supports_are_disjoint() {
    let gny = GnyConfig::default();
    let cases = [
        (SphereImmersion::inclusion(&icosphere(3).unwrap()).unwrap(), sphere_vc(), constants(2, 2).unwrap(), 4),
        (
            SphereImmersion::inclusion(&clifford_torus(32).unwrap()).unwrap(),
            VcValue::exact(2.0 * PI * PI, "minimal"),
            constants(2, 3).unwrap(),
            3,
        ),
    ];
    for (imm, vc, consts, k) in &cases {
        let rep = build_tcv_witnesses(imm, *k, vc, consts, &gny, "w").unwrap();
        assert_eq!(rep.witnesses.len(), k + 1);
        assert!(rep.supports_disjoint);
        assert!(rep.all_passed, "{rep:?}");
        assert!(rep.witnesses.iter().all(|w| w.support_size > 0 && w.numerator_holds && w.mass_holds));
    }
}

#[test]
fn schroedinger_potentials_are_validated() {
    let mesh = icosphere(2).unwrap();
    let imm = SphereImmersion::inclusion(&mesh).unwrap();
    let consts = constants(2, 2).unwrap();
    let n = mesh.n_vertices();
    let mut v = vec![1.0; n];
    v[7] = -0.5;
    let err = check_schro_bounds(&mesh, Some(&imm), &v, SchroMode::TMin, None, &consts, false, "s").unwrap_err();
    assert!(matches!(err, Error::NegativePotential { vertex: 7, .. }));
    let rep = check_schro_bounds(&mesh, Some(&imm), &v, SchroMode::TMin, None, &consts, true, "s").unwrap();
    assert!(rep.report.notes.iter().any(|s| s.contains("indefinite")));

    let zero = check_schro_bounds(&mesh, Some(&imm), &vec![0.0; n], SchroMode::TMin, None, &consts, false, "s").unwrap();
    assert_eq!(zero.count.count, 0);
    assert_eq!(zero.replay.kind, "degenerate");
    assert!(zero.report.passed);

    let short = check_schro_bounds(&mesh, Some(&imm), &[1.0], SchroMode::TMin, None, &consts, false, "s");
    assert!(matches!(short, Err(Error::DimensionMismatch { .. })));
}

#[test]
fn genus_bound_values() {
    assert_eq!(genus_vc_bound(0, true), 4.0 * PI);
    assert_eq!(genus_vc_bound(1, true), 8.0 * PI);
    assert_eq!(genus_vc_bound(2, true), 8.0 * PI);
    assert_eq!(genus_vc_bound(3, true), 12.0 * PI);
    assert_eq!(genus_vc_bound(0, false), 8.0 * PI);

    let torus = clifford_torus(16).unwrap();
    let rep = check_genus_bound(&torus, &[2.0 * PI * PI, 30.0], 1e-3, "c").unwrap();
    assert_eq!(rep.lhs, 2.0 * PI * PI);
    assert!(rep.passed);
    assert!(check_genus_bound(&torus, &[], 1e-3, "c").is_err());
}

#[test]
fn curvature_identity_on_a_translated_sphere() {
    let mesh = icosphere(3).unwrap().as_euclidean().unwrap().translated(&[0.3, -0.2, 0.5]).unwrap();
    let rep = esi_residual(&mesh, "ico").unwrap();
    assert!(rep.integrated.passed);
    assert_eq!(rep.middle_coefficient, 0.0);
    assert!(rep.residual_l2 < 0.05, "{}", rep.residual_l2);
    assert!(esi_residual(&icosphere(2).unwrap(), "s").is_err());
}

#[test]
fn abstract_torus_runs_only_intrinsic_checks() {
    let src = MeshSource::fixture(Fixture::FlatTorus { a: 1.0, b: 1.0, n: 12 }).unwrap();
    let cfg = VerifyConfig { k_max: 6, witness_k: vec![1], ..Default::default() };
    let bundle = verify(&src, &Theorem::ALL, &cfg).unwrap();
    assert!(bundle.all_passed);
    assert!(bundle.counterexamples.is_empty());
    assert!(!bundle.skipped.is_empty());
    assert!(bundle.reports_named("tcv").count() > 0);
    assert!(bundle.reports_named("reilly").count() == 0);
}

#[test]
fn theorem_names_round_trip() {
    for t in Theorem::ALL {
        assert_eq!(t.name().parse::<Theorem>().unwrap(), t);
    }
    assert!("nonsense".parse::<Theorem>().is_err());
}
