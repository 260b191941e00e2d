//! Discrete measures on spheres and their decomposition into annuli with
//! disjoint doubles.

mod gny;
mod measure;
mod verify;

pub use gny::{gny_decompose, theoretical_constant, AnnulusFamily, GnyConfig};
pub use measure::{pushforward_measure, DiscreteMeasure};
pub use verify::{select_light_annuli, verify_family, FamilyCertificate, LightSelection};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomcore::fixtures::icosphere;

    fn uniform(level: u32) -> DiscreteMeasure {
        let m = icosphere(level).unwrap();
        pushforward_measure(&m, m.coords(), 3, None).unwrap()
    }

    #[test]
    fn single_annulus_is_nearly_a_hemisphere() {
        let mu = uniform(3);
        let fam = gny_decompose(&mu, 1, &GnyConfig::default()).unwrap();
        assert_eq!(fam.annuli.len(), 1);
        assert_eq!(fam.annuli[0].inner, 0.0);
        assert!(fam.c_achieved > 0.45, "{}", fam.c_achieved);
        assert!(verify_family(&mu, &fam, 1, fam.c_achieved).passed);
    }

    #[test]
    fn two_annuli_have_disjoint_doubles() {
        let mu = uniform(3);
        let fam = gny_decompose(&mu, 2, &GnyConfig::default()).unwrap();
        let cert = verify_family(&mu, &fam, 2, fam.c_achieved);
        assert!(cert.passed, "{cert:?}");
        // Caps of radius pi/4 carry (1 - cos(pi/4))/2 of the mass.
        let cap = (1.0 - std::f64::consts::FRAC_PI_4.cos()) / 2.0;
        assert!(fam.c_achieved >= 0.9 * cap * 2.0, "{}", fam.c_achieved);
    }

    #[test]
    fn atomic_measure_is_rejected() {
        let mu = DiscreteMeasure::new(3, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            gny_decompose(&mu, 1, &GnyConfig::default()),
            Err(crate::Error::AtomicMeasure { .. })
        ));
    }
}
