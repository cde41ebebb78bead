use hardy_core::{make_soliton, synth_rational, Complex64, FrequencyGrid, PoleTerm, RationalSymbol, SpectralField};
use rand::SeedableRng;
use szego_dynamics::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn drifts(u0: &SpectralField) -> (f64, f64, f64) {
    let sched = Schedule { dt: 1e-3, steps: 50_000, snapshot_stride: 50_000, log_stride: 100 };
    integrate(u0, sched, &mut []).unwrap().drifts()
}

fn check(name: &str, d: (f64, f64, f64)) {
    eprintln!("{name}: drift Q={:.2e} M={:.2e} E={:.2e}", d.0, d.1, d.2);
    assert!(d.0 <= 1e-8 && d.1 <= 1e-8 && d.2 <= 1e-8, "{name}: {d:?}");
}

#[test]
fn soliton_conserves_over_t50() {
    let (_, u0) = make_soliton(c(1.0, 0.0), c(0.0, -1.0), &FrequencyGrid::default()).unwrap();
    check("soliton", drifts(&u0));
}

#[test]
fn rational_pair_conserves_over_t50() {
    let sym = RationalSymbol::new(vec![
        PoleTerm::new(c(0.0, -1.0), vec![c(1.0, 0.0)]),
        PoleTerm::new(c(0.0, -2.0), vec![c(-1.0, 0.0)]),
    ])
    .unwrap();
    check("rational", drifts(&synth_rational(&sym, &FrequencyGrid::default())));
}

#[test]
fn random_band_limited_data_conserves_over_t50() {
    let g = FrequencyGrid::default();
    let u = SpectralField::random_band_limited(g, 64, &mut rand_chacha::ChaCha8Rng::seed_from_u64(2024));
    let q = u.conserved_quantities().unwrap().q;
    let u0 = u.scale(Complex64::new((std::f64::consts::PI / q).sqrt(), 0.0));
    check("random", drifts(&u0));
}
