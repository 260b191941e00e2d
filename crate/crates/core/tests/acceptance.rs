//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line
//! with the measured numbers; the test fails if any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use conflab::confvol::{conformal_volume, ConfVolConfig, SphereImmersion};
use conflab::geomcore::fixtures::{clifford_torus, flat_torus, icosphere, revolution_torus};
use conflab::geomcore::{Fixture, TriangleMesh};
use conflab::harness::{
    build_tcv_witnesses, check_index_bound, check_reilly_first, check_willmore_vc, constants, esi_refinement_study,
    index_catalog, verify, InequalityReport, MeshSource, Theorem, VcValue, VerifyConfig,
};
use conflab::moebius::{
    bar_parameter, cap_parameters, geodesic_distance, random_sphere_point, sample_ball, u_annulus, xi_map, Annulus,
    CapFunction, SpherePoint,
};
use conflab::packing::{gny_decompose, theoretical_constant, verify_family, DiscreteMeasure, GnyConfig};
use conflab::spectral::{assemble_laplacian, eigen_spectrum, negative_count, weyl_fit};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn criterion(id: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    let (passed, detail) = match res {
        Ok(o) => (o.passed, o.detail),
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        }
    };
    println!("criterion {id:>2} [{}] {name}: {detail} ({secs:.1} s)", if passed { "PASS" } else { "FAIL" });
    passed
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn spectrum_of(mesh: &TriangleMesh, count: usize) -> (Vec<f64>, f64) {
    let ops = assemble_laplacian(mesh).unwrap();
    (eigen_spectrum(&ops, count).unwrap().eigenvalues, ops.total_mass())
}

/// Worst relative error of `ev[1..]` against a list of (value, multiplicity).
fn spectrum_error(ev: &[f64], want: &[(f64, usize)]) -> f64 {
    let expected: Vec<f64> = want.iter().flat_map(|&(v, m)| std::iter::repeat_n(v, m)).collect();
    ev[1..].iter().zip(&expected).map(|(a, b)| rel(*a, *b)).fold(0.0, f64::max)
}

fn spectral_oracle() -> Outcome {
    let t = Instant::now();
    let (ev, _) = spectrum_of(&icosphere(4).unwrap(), 10);
    let e_sphere = spectrum_error(&ev, &[(2.0, 3), (6.0, 5), (12.0, 1)]);
    let t_sphere = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let (ev, _) = spectrum_of(&flat_torus(2.0 * PI, 2.0 * PI, 48).unwrap(), 9);
    let e_torus = spectrum_error(&ev, &[(1.0, 4), (2.0, 4)]);
    let t_torus = t.elapsed().as_secs_f64();
    outcome(
        e_sphere <= 0.02 && e_torus <= 0.02 && t_sphere < 30.0 && t_torus < 30.0,
        format!(
            "sphere max rel err {:.3}% in {t_sphere:.1} s, flat torus {:.3}% in {t_torus:.1} s",
            100.0 * e_sphere,
            100.0 * e_torus
        ),
    )
}

fn equality_cases() -> Outcome {
    let cfg = ConfVolConfig::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, mesh) in [("sphere", icosphere(4).unwrap()), ("clifford", clifford_torus(64).unwrap())] {
        let (ev, vol) = spectrum_of(&mesh, 2);
        let vc = conformal_volume(&SphereImmersion::inclusion(&mesh).unwrap(), &cfg).unwrap().value;
        let (lhs, rhs) = (ev[1] * vol, 2.0 * vc);
        let gap = rel(lhs, rhs);
        let takahashi = rel(ev[1], 2.0);
        ok &= gap <= 0.03 && takahashi <= 0.02;
        parts.push(format!(
            "{name}: lambda_1 Vol = {lhs:.4}, 2 V_c = {rhs:.4} ({:.2}%), lambda_1 = {:.4}",
            100.0 * gap,
            ev[1]
        ));
    }
    outcome(ok, parts.join("; "))
}

fn reilly_equality() -> Outcome {
    let sphere = check_reilly_first(&icosphere(4).unwrap().as_euclidean().unwrap(), "icosphere:4").unwrap();
    let torus = check_reilly_first(&revolution_torus(3.0, 1.0, 48).unwrap(), "revolution_torus:3,1,48").unwrap();
    let strict = torus.passed && torus.slack > torus.error_bars.total();
    outcome(
        sphere.passed && sphere.relative_gap() <= 0.03 && strict,
        format!(
            "sphere lambda_1 = {:.4} vs {:.4} ({:.2}%), torus slack {:.4} > bars {:.1e}",
            sphere.lhs,
            sphere.rhs,
            100.0 * sphere.relative_gap(),
            torus.slack,
            torus.error_bars.total()
        ),
    )
}

/// Proof-chain constant `4n / ((81/2500) c) = 10000 n / (81 c)` in integer
/// arithmetic.
fn tcv_oracle(n: u128, m: u32) -> String {
    let c_inv = 8 * 9u128.pow(12 * m);
    assert_eq!(c_inv % 81, 0);
    (c_inv / 81).checked_mul(10_000 * n).expect("fits in u128").to_string()
}

fn explicit_constants() -> Outcome {
    let mut ok = true;
    for (n, m) in [(2usize, 2u32), (2, 3), (3, 3)] {
        let t = constants(n, m as usize).unwrap();
        ok &= t.covering_number == 9u128.pow(m).to_string();
        ok &= t.c_inverse == (8 * 9u128.pow(m).pow(12)).to_string();
        ok &= t.c_tcv_exact == tcv_oracle(n as u128, m);
    }
    let t = constants(2, 2).unwrap();
    outcome(ok, format!("N = {}, 1/c = {}, C_tcv = {} (n = m = 2)", t.covering_number, t.c_inverse, t.c_tcv_exact))
}

fn lemma_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut cap_min, mut ann_min) = (f64::INFINITY, f64::INFINITY);
    for i in 0..20 {
        let outer = (i as f64 + 0.5) / 20.0 * FRAC_PI_2;
        let inner = 0.5 * outer;
        for _ in 0..10 {
            let p = SpherePoint::new(random_sphere_point(2, &mut rng)).unwrap();
            let cap = CapFunction::new(outer, &p).unwrap();
            for q in sample_ball(p.coords(), outer, 10_000, &mut rng) {
                cap_min = cap_min.min(cap.eval(&q));
            }
            let ann = Annulus::new(p.clone(), inner, outer).unwrap();
            let mut seen = 0;
            while seen < 10_000 {
                for q in sample_ball(p.coords(), outer, 10_000, &mut rng) {
                    if seen < 10_000 && geodesic_distance(p.coords(), &q) >= inner {
                        ann_min = ann_min.min(u_annulus(&ann, &q).unwrap());
                        seen += 1;
                    }
                }
            }
        }
    }
    outcome(
        cap_min >= 0.6 - 1e-9 && ann_min >= 9.0 / 25.0 - 1e-9,
        format!("min cap value {cap_min:.6} (>= 0.6), min annulus value {ann_min:.6} (>= 0.36)"),
    )
}

fn cap_parameter_values() -> Outcome {
    let mut formula_err: f64 = 0.0;
    let mut geometric_err: f64 = 0.0;
    let p = [0.0, 0.0, 1.0];
    for i in 1..100 {
        let r = i as f64 / 100.0 * FRAC_PI_2;
        let (t, rho) = cap_parameters(r).unwrap();
        formula_err = formula_err.max(rel(t, r.tan())).max(rel(rho, 1.0 + 1.0 / r.cos()));
        // The dilation puts distance 2R on the equator; the image of the
        // circle at distance R sits at stereographic radius rho.
        let at = |d: f64| [d.sin(), 0.0, d.cos()];
        let rim = xi_map(&p, t, &at((2.0 * r).min(PI)));
        let circle = xi_map(&p, t, &at(r));
        let theta = geodesic_distance(&p, &circle);
        geometric_err = geometric_err.max(rim[2].abs()).max(rel(1.0 / (theta / 2.0).tan(), rho));
    }
    let (_, rho_small) = cap_parameters(1e-6).unwrap();
    let tau = bar_parameter(1.0).unwrap();
    let tau_ok = xi_map(&p, tau, &[0.5f64.sin(), 0.0, 0.5f64.cos()])[2].abs() < 1e-12;
    outcome(
        formula_err <= 1e-15 && geometric_err <= 1e-12 && (rho_small - 2.0).abs() < 1e-11 && tau_ok,
        format!(
            "formula err {formula_err:.1e}, geometric err {geometric_err:.1e}, rho(1e-6) - 2 = {:.1e}",
            rho_small - 2.0
        ),
    )
}

fn clustered_measure(seed: u64) -> DiscreteMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for _ in 0..4 {
        let c = random_sphere_point(2, &mut rng);
        for q in sample_ball(&c, 0.2, 400, &mut rng) {
            support.extend(q);
            weights.push(1.0);
        }
    }
    for _ in 0..400 {
        support.extend(random_sphere_point(2, &mut rng));
    }
    weights.resize(weights.len() + 400, 0.1);
    DiscreteMeasure::new(3, support, weights).unwrap()
}

fn gny_certificates() -> Outcome {
    let uniform = SphereImmersion::inclusion(&icosphere(4).unwrap()).unwrap().pushforward(None).unwrap();
    let clustered = clustered_measure(17);
    let c_theory = theoretical_constant(2);
    let mut ok = true;
    let mut worst = f64::INFINITY;
    let mut parts = Vec::new();
    for (name, mu) in [("uniform", &uniform), ("clustered", &clustered)] {
        let mut cs = Vec::new();
        for k in [1, 2, 4, 8] {
            let fam = gny_decompose(mu, k, &GnyConfig::default()).unwrap();
            let cert = verify_family(mu, &fam, k, c_theory);
            ok &= cert.passed && cert.overlaps.is_empty() && fam.c_achieved >= 1e-2;
            worst = worst.min(fam.c_achieved);
            cs.push(format!("{:.3}", fam.c_achieved));
        }
        parts.push(format!("{name} c = [{}]", cs.join(", ")));
    }
    outcome(ok, format!("{}; min {worst:.3} vs guaranteed {c_theory:.1e}", parts.join(", ")))
}

fn witness_chain() -> Outcome {
    let gny = GnyConfig::default();
    let cases = [
        ("icosphere:4", icosphere(4).unwrap(), VcValue::exact(4.0 * PI, "round S^2"), constants(2, 2).unwrap()),
        (
            "clifford:48",
            clifford_torus(48).unwrap(),
            VcValue::exact(2.0 * PI * PI, "minimal Clifford torus"),
            constants(2, 3).unwrap(),
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, mesh, vc, consts) in &cases {
        let imm = SphereImmersion::inclusion(mesh).unwrap();
        let mut failed = Vec::new();
        for k in 0..=8 {
            let rep = build_tcv_witnesses(&imm, k, vc, consts, &gny, name).unwrap();
            let good = rep.witnesses.len() == k + 1
                && rep.supports_disjoint
                && rep.all_passed
                && rep.witnesses.iter().all(|w| w.numerator_holds && w.mass_holds && w.rayleigh_holds);
            if !good {
                failed.push(k);
            }
        }
        ok &= failed.is_empty();
        parts.push(format!("{name}: failing k = {failed:?}"));
    }
    outcome(ok, parts.join("; "))
}

fn willmore_conformal_volume() -> Outcome {
    let cfg = ConfVolConfig::default();
    let run = |mesh: TriangleMesh| check_willmore_vc(&mesh, &cfg, "w").unwrap().report;
    let sphere = run(icosphere(4).unwrap().as_euclidean().unwrap());
    let clifford = run(revolution_torus(2f64.sqrt(), 1.0, 64).unwrap());
    let fat = run(revolution_torus(1.5, 1.0, 48).unwrap());
    let eq = |r: &InequalityReport, tol: f64| r.passed && r.relative_gap() <= tol;
    let strict = fat.passed && fat.slack > fat.error_bars.total();
    outcome(
        eq(&sphere, 0.03) && eq(&clifford, 0.04) && strict,
        format!(
            "sphere {:.4} vs {:.4}, projected Clifford {:.4} vs {:.4}, fat torus {:.4} < {:.4}",
            sphere.lhs, sphere.rhs, clifford.lhs, clifford.rhs, fat.lhs, fat.rhs
        ),
    )
}

fn esi_convergence() -> Outcome {
    let study = esi_refinement_study(&[3, 4, 5], &[0.3, -0.2, 0.5]).unwrap();
    outcome(
        study.ratios.iter().all(|&r| r >= 2.5),
        format!("residual L2 {:?}, ratios {:.2?}", study.residual_l2, study.ratios),
    )
}

fn schroedinger_counts() -> Outcome {
    let ops = assemble_laplacian(&icosphere(4).unwrap()).unwrap();
    let n = ops.n();
    let n1 = negative_count(&ops, &vec![1.0; n]).unwrap().count;
    let n25 = negative_count(&ops, &vec![2.5; n]).unwrap().count;
    let catalog = index_catalog(3, 48).unwrap();
    let consts = constants(2, 3).unwrap();
    let indices: Vec<usize> = catalog.iter().map(|e| check_index_bound(e, &consts).unwrap().index.count).collect();

    let fixtures = ["icosphere:3", "clifford:32", "revolution_torus:3,1,32", "veronese:2", "flat_torus:1,1,16"];
    let cfg = VerifyConfig::default();
    let mut bad = Vec::new();
    let mut checked = 0;
    for f in fixtures {
        let src = MeshSource::fixture(f.parse::<Fixture>().unwrap()).unwrap();
        let bundle = verify(&src, &[Theorem::Schro, Theorem::Index], &cfg).unwrap();
        for r in &bundle.reports {
            checked += 1;
            if !r.passed {
                bad.push(format!("{} on {f}", r.name));
            }
        }
        if !bundle.schro.iter().all(|s| s.replay.all_strict && s.replay.supports_disjoint) {
            bad.push(format!("replay on {f}"));
        }
    }
    outcome(
        n1 == 1 && n25 == 4 && indices == [1, 5] && bad.is_empty() && checked > 0,
        format!(
            "N(1) = {n1}, N(2.5) = {n25}, index equator/Clifford = {indices:?}, {checked} bound reports, failures {bad:?}"
        ),
    )
}

fn weyl_slopes() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, mesh) in
        [("flat torus", flat_torus(2.0 * PI, 2.0 * PI, 48).unwrap()), ("sphere", icosphere(4).unwrap())]
    {
        let (ev, vol) = spectrum_of(&mesh, 61);
        let fit = weyl_fit(&ev, vol, 2, 20..=60).unwrap();
        let err = rel(fit.slope, 4.0 * PI);
        ok &= err <= 0.10;
        parts.push(format!("{name} slope {:.3} ({:.1}% off 4 pi)", fit.slope, 100.0 * err));
    }
    outcome(ok, parts.join(", "))
}

fn determinism() -> Outcome {
    let cfg = VerifyConfig { seed: 99, ..Default::default() };
    let mut ok = true;
    let mut sizes = Vec::new();
    for f in ["icosphere:3", "clifford:24"] {
        let src = MeshSource::fixture(f.parse::<Fixture>().unwrap()).unwrap();
        let a = serde_json::to_vec(&verify(&src, &Theorem::ALL, &cfg).unwrap()).unwrap();
        let b = serde_json::to_vec(&verify(&src, &Theorem::ALL, &cfg).unwrap()).unwrap();
        ok &= a == b;
        sizes.push(format!("{f}: {} bytes", a.len()));
    }
    outcome(ok, format!("identical bundles ({})", sizes.join(", ")))
}

#[test]
fn acceptance_criteria() {
    println!();
    let results = [
        criterion(1, "spectral oracle", spectral_oracle),
        criterion(2, "first-eigenvalue equality cases", equality_cases),
        criterion(3, "mean-curvature bound equality and strictness", reilly_equality),
        criterion(4, "explicit constants", explicit_constants),
        criterion(5, "cap and annulus lemma suite", lemma_suite),
        criterion(6, "cap parameters", cap_parameter_values),
        criterion(7, "annulus decomposition certificates", gny_certificates),
        criterion(8, "eigenvalue witness chain", witness_chain),
        criterion(9, "Willmore energy vs conformal volume", willmore_conformal_volume),
        criterion(10, "curvature identity convergence", esi_convergence),
        criterion(11, "Schroedinger counts and index", schroedinger_counts),
        criterion(12, "Weyl slope", weyl_slopes),
        criterion(13, "determinism", determinism),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    assert_eq!(passed, results.len());
}
