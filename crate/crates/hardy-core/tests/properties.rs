use std::f64::consts::PI;

use hardy_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_grid() -> FrequencyGrid {
    FrequencyGrid::new(40.0, 256).unwrap()
}

fn field(seed: u64, band: usize) -> SpectralField {
    SpectralField::random_band_limited(small_grid(), band, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #[test]
    fn projection_is_idempotent(seed in any::<u64>()) {
        let g = small_grid();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<Complex64> = (0..g.num_points())
            .map(|_| Complex64::new(rand::Rng::gen_range(&mut rng, -1.0..1.0), rand::Rng::gen_range(&mut rng, -1.0..1.0)))
            .collect();
        let once = project_szego(&g, &FullField::from_samples(g, &samples).unwrap()).unwrap();
        let twice = project_szego(&g, &FullField::from_hardy(&once)).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn parseval(seed in any::<u64>(), band in 1usize..100) {
        let u = field(seed, band);
        let spectral = norm(&u, NormKind::L2).unwrap();
        let physical = (u.samples().iter().map(|v| v.norm_sqr()).sum::<f64>() * u.grid().dx()).sqrt();
        prop_assert!((spectral - physical).abs() <= 1e-10 * spectral);
    }

    #[test]
    fn gagliardo_nirenberg(seed in any::<u64>(), band in 1usize..128) {
        let q = field(seed, band).conserved_quantities().unwrap();
        prop_assert!(PI * q.e <= q.m * q.q * (1.0 + 1e-9));
    }

    #[test]
    fn conserved_quantities_are_gauge_and_translation_invariant(seed in any::<u64>(), theta in -3.0f64..3.0, x0 in -10.0f64..10.0) {
        let u = field(seed, 40);
        let v = u.scale(Complex64::from_polar(1.0, theta)).translate(x0);
        let a = u.conserved_quantities().unwrap();
        let b = v.conserved_quantities().unwrap();
        prop_assert!((a.q - b.q).abs() <= 1e-12 * a.q);
        prop_assert!((a.m - b.m).abs() <= 1e-12 * a.m);
        prop_assert!((a.e - b.e).abs() <= 1e-10 * a.e);
    }

    #[test]
    fn snapshot_roundtrip(seed in any::<u64>(), band in 0usize..128) {
        let u = field(seed, band);
        prop_assert_eq!(read_snapshot(&write_snapshot(&u, &[])).unwrap(), u);
    }

    #[test]
    fn snapshot_reader_never_panics(text in "\\PC*") {
        let _ = read_snapshot(&text);
    }

    #[test]
    fn soliton_saturates_gn(re in -3.0f64..3.0, r in 0.5f64..2.0, ar in 0.2f64..2.0, ph in -3.0f64..3.0) {
        let g = FrequencyGrid::new(128.0, 2048).unwrap();
        let (_, u) = make_soliton(Complex64::from_polar(ar, ph), Complex64::new(re, -r), &g).unwrap();
        let q = u.conserved_quantities().unwrap();
        prop_assert!((PI * q.e / (q.m * q.q) - 1.0).abs() < 1e-6);
    }
}
