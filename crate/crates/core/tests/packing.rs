use conflab::confvol::SphereImmersion;
use conflab::geomcore::fixtures::icosphere;
use conflab::moebius::{random_sphere_point, sample_ball};
use conflab::packing::{gny_decompose, theoretical_constant, verify_family, DiscreteMeasure, GnyConfig};
use conflab::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random points on S^2 with weights in [0.5, 2).
fn scattered(points: usize, seed: u64) -> DiscreteMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support: Vec<f64> = (0..points).flat_map(|_| random_sphere_point(2, &mut rng)).collect();
    let weights = (0..points).map(|_| rng.random_range(0.5..2.0)).collect();
    DiscreteMeasure::new(3, support, weights).unwrap()
}

/// Mass concentrated in a few small caps plus a light background.
fn clustered(seed: u64) -> DiscreteMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for _ in 0..3 {
        let c = random_sphere_point(2, &mut rng);
        for q in sample_ball(&c, 0.15, 150, &mut rng) {
            support.extend(q);
            weights.push(1.0);
        }
    }
    for _ in 0..150 {
        support.extend(random_sphere_point(2, &mut rng));
    }
    weights.resize(weights.len() + 150, 0.05);
    DiscreteMeasure::new(3, support, weights).unwrap()
}

#[test]
fn uniform_sphere_measure_decomposes() {
    let mesh = icosphere(3).unwrap();
    let mu = SphereImmersion::inclusion(&mesh).unwrap().pushforward(None).unwrap();
    for k in [1, 3, 6] {
        let fam = gny_decompose(&mu, k, &GnyConfig::default()).unwrap();
        assert_eq!(fam.annuli.len(), k);
        let cert = verify_family(&mu, &fam, k, fam.c_theory);
        assert!(cert.passed, "k = {k}: {cert:?}");
        assert!(fam.c_achieved > 0.05, "k = {k}: c = {}", fam.c_achieved);
    }
}

#[test]
fn clustered_measure_decomposes() {
    let mu = clustered(3);
    for k in [2, 4] {
        let fam = gny_decompose(&mu, k, &GnyConfig::default()).unwrap();
        assert!(verify_family(&mu, &fam, k, fam.c_achieved).passed);
    }
}

#[test]
fn atoms_and_empty_requests_are_rejected() {
    let mu = DiscreteMeasure::new(3, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0], vec![1.0, 1.0]).unwrap();
    assert!(matches!(gny_decompose(&mu, 1, &GnyConfig::default()), Err(Error::AtomicMeasure { .. })));
    assert!(gny_decompose(&scattered(50, 1), 0, &GnyConfig::default()).is_err());
    assert!(DiscreteMeasure::new(3, vec![0.0, 0.0, 2.0], vec![1.0]).is_err());
    assert!(DiscreteMeasure::new(3, vec![0.0, 0.0, 1.0], vec![-1.0]).is_err());
}

#[test]
fn a_broken_family_fails_verification() {
    let mu = scattered(400, 5);
    let mut fam = gny_decompose(&mu, 2, &GnyConfig::default()).unwrap();
    // Moving both annuli onto one centre makes the doubles overlap.
    fam.annuli[1].center = fam.annuli[0].center.clone();
    let cert = verify_family(&mu, &fam, 2, fam.c_theory);
    assert!(!cert.passed);
    assert!(!cert.overlaps.is_empty() || !cert.masses_match);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn decompositions_pass_their_certificate(seed in 0u64..10_000, k in 1usize..=6) {
        let mu = scattered(300, seed);
        let fam = gny_decompose(&mu, k, &GnyConfig::default()).unwrap();
        prop_assert_eq!(fam.annuli.len(), k);
        prop_assert!(fam.c_achieved >= theoretical_constant(2));
        prop_assert!(fam.c_achieved >= fam.c_theory);
        let cert = verify_family(&mu, &fam, k, fam.c_theory);
        prop_assert!(cert.passed, "{:?}", cert);
    }

    #[test]
    fn weight_scaling_is_equivariant(seed in 0u64..10_000, k in 1usize..=4, log_s in -6.0..6.0f64) {
        let s = log_s.exp();
        let mu = scattered(200, seed);
        let a = gny_decompose(&mu, k, &GnyConfig::default()).unwrap();
        let b = gny_decompose(&mu.scaled(s).unwrap(), k, &GnyConfig::default()).unwrap();
        prop_assert_eq!(&a.annuli, &b.annuli);
        for (x, y) in a.masses.iter().zip(&b.masses) {
            prop_assert!((y - s * x).abs() <= 1e-12 * s * x);
        }
    }
}
