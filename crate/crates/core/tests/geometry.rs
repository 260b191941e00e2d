use std::f64::consts::PI;

use conflab::geomcore::fixtures::{clifford_torus, flat_torus, icosphere, revolution_torus, veronese};
use conflab::geomcore::{mean_curvature, read_off, total_volume, willmore_energy, write_off, Ambient, Fixture};
use proptest::prelude::*;

/// Rotation matrix from a unit quaternion built from three angles.
fn rotation(a: f64, b: f64, c: f64) -> [[f64; 3]; 3] {
    let (w, x, y, z) = {
        let q = [a.cos(), a.sin() * b.cos(), a.sin() * b.sin() * c.cos(), a.sin() * b.sin() * c.sin()];
        (q[0], q[1], q[2], q[3])
    };
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

#[test]
fn euler_characteristic_matches_genus() {
    let meshes = [
        icosphere(3).unwrap(),
        flat_torus(1.0, 2.0, 12).unwrap(),
        clifford_torus(16).unwrap(),
        revolution_torus(3.0, 1.0, 20).unwrap(),
    ];
    for m in &meshes {
        assert!(m.orientable());
        let chi = m.n_vertices() as i64 - m.n_edges() as i64 + m.n_faces() as i64;
        assert_eq!(chi, m.euler_characteristic());
        assert_eq!(chi, 2 - 2 * m.genus() as i64);
    }
    assert_eq!(meshes[0].genus(), 0);
    assert!(meshes[1..].iter().all(|m| m.genus() == 1));

    let rp2 = veronese(2).unwrap();
    assert!(!rp2.orientable());
    assert_eq!(rp2.euler_characteristic(), 1);
}

#[test]
fn fixture_strings_round_trip() {
    for s in ["icosphere:2", "clifford:8", "flat_torus:1,2,6", "revolution_torus:3,1,10", "veronese:1"] {
        let f: Fixture = s.parse().unwrap();
        assert_eq!(f.to_string(), s);
        f.build().unwrap();
    }
    assert!("icosphere".parse::<Fixture>().is_err());
    assert!("revolution_torus:1,2,10".parse::<Fixture>().unwrap().build().is_err());
}

#[test]
fn off_round_trip_through_a_file() {
    let mesh = revolution_torus(2.0, 0.5, 8).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("torus.off");
    conflab::geomcore::save_mesh(&mesh, &path).unwrap();
    let back = conflab::geomcore::load_mesh(&path, None).unwrap();
    assert_eq!(back.faces(), mesh.faces());
    assert!((total_volume(&back) - total_volume(&mesh)).abs() < 1e-12 * total_volume(&mesh));

    let mut buf = Vec::new();
    write_off(&mesh, &mut buf).unwrap();
    let again = read_off(buf.as_slice(), None).unwrap();
    assert_eq!(again.n_vertices(), mesh.n_vertices());
}

#[test]
fn willmore_energy_of_icosphere_converges_monotonically() {
    let errs: Vec<f64> =
        (2..=4).map(|l| (willmore_energy(&icosphere(l).unwrap()).unwrap() - 4.0 * PI).abs()).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[2] < 0.01 * 4.0 * PI);
}

#[test]
fn clifford_mean_curvature_is_normal_to_the_sphere() {
    let mut prev = f64::INFINITY;
    for n in [16, 32, 64] {
        let h = mean_curvature(&clifford_torus(n).unwrap()).unwrap();
        let sup = h.tangential_norms().unwrap().into_iter().fold(0.0, f64::max);
        assert!(sup <= prev + 1e-12, "n = {n}: {sup} after {prev}");
        assert!(sup < 1e-8, "n = {n}: {sup}");
        prev = sup;
    }
}

#[test]
fn extrinsic_operations_refuse_abstract_meshes() {
    let torus = flat_torus(1.0, 1.0, 6).unwrap();
    assert_eq!(torus.ambient(), Ambient::Abstract);
    assert!(mean_curvature(&torus).is_err());
    assert!(torus.scaled(2.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn volume_is_invariant_under_rigid_motions(
        a in 0.0..PI, b in 0.0..PI, c in 0.0..2.0 * PI,
        shift in prop::array::uniform3(-5.0..5.0f64),
    ) {
        let mesh = revolution_torus(2.0, 0.7, 12).unwrap();
        let r = rotation(a, b, c);
        let moved = mesh
            .map_coords(Ambient::Euclidean(3), |p| {
                (0..3).map(|i| (0..3).map(|j| r[i][j] * p[j]).sum::<f64>() + shift[i]).collect()
            })
            .unwrap();
        let v0 = total_volume(&mesh);
        prop_assert!((total_volume(&moved) - v0).abs() <= 1e-12 * v0);
    }

    #[test]
    fn volume_scales_quadratically(s in 0.1..10.0f64) {
        let mesh = icosphere(2).unwrap();
        let v0 = total_volume(&mesh);
        prop_assert!((total_volume(&mesh.scaled(s).unwrap()) - s * s * v0).abs() <= 1e-12 * s * s * v0);
    }
}
