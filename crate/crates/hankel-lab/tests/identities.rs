use hankel_lab::*;
use hardy_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use szego_dynamics::{integrate, Schedule};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn kronecker_ranks_and_ranges_at_defaults() {
    for (n, sym) in rational_corpus().iter().enumerate() {
        let h = HankelOperator::from_rational(sym, 40.0, 2048).unwrap();
        let rep = kronecker_range_check(sym, &h, RANK_THRESHOLD).unwrap();
        assert_eq!(rep.rank, n + 1);
        assert!(rep.gap_ratio >= 1e6, "{rep:?}");
        assert!(rep.pass, "{rep:?}");
    }
}

#[test]
fn tail_singular_vectors_are_orthogonal_to_the_range_basis() {
    for sym in rational_corpus() {
        let h = HankelOperator::from_rational(&sym, 40.0, 256).unwrap();
        let svd = h.to_dense().thin_svd().unwrap();
        let u = svd.U();
        let n = sym.degree();
        for b in sym.range_basis() {
            let v = sample_rows(&b, &h);
            let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let mut tail = 0.0;
            for j in n..u.ncols() {
                let col = u.col(j);
                let d: Complex64 = (0..v.len()).map(|i| col[i].conj() * v[i]).sum();
                tail += d.norm_sqr();
            }
            assert!(tail.sqrt() / nv <= 1e-6);
        }
    }
}

#[test]
fn hs_identity_converges_monotonically() {
    for sym in rational_corpus() {
        let r = hs_refinement(&sym, 40.0, 2048, 3).unwrap();
        assert!(r[0] <= 1e-3, "{r:?}");
        assert!(r[1] < r[0] && r[2] < r[1], "{r:?}");
    }
    let unit = RationalSymbol::simple(c(1.0, 0.0), c(0.0, -1.0)).unwrap();
    let r = hs_refinement(&unit, 40.0, 2048, 1).unwrap()[0];
    // midpoint quadrature error h^2 / 6 with h = 40 / 2048
    let h = 40.0f64 / 2048.0;
    assert!((r - h * h / 6.0).abs() < 1e-7, "{r}");
    assert!(r <= 1e-4);
}

#[test]
fn unit_soliton_takagi_value_and_h2_relation() {
    let u = RationalSymbol::simple(c(1.0, 0.0), c(0.0, -1.0)).unwrap();
    let h = HankelOperator::from_rational(&u, 40.0, 2048).unwrap();
    let s = leading_svd(h.to_dense().as_ref(), 2).unwrap();
    assert!((s.values[0] - 0.5).abs() < 1e-4);
    assert!(s.values[1] < 1e-12);
    assert!(h2_eigen_residual(&u, &h, 0.5) <= 1e-4);
}

#[test]
fn lax_identity_on_default_corpus() {
    let g = FrequencyGrid::default();
    for (amp, p) in soliton_corpus() {
        let (_, u) = make_soliton(amp, p, &g).unwrap();
        assert!(lax_identity_residual(&u, 1024).unwrap() <= 1e-8);
    }
    for sym in rational_corpus() {
        assert!(lax_identity_residual(&synth_rational(&sym, &g), 1024).unwrap() <= 1e-8);
    }
}

#[test]
fn lax_identity_for_band_limited_data() {
    let g = FrequencyGrid::new(64.0, 1024).unwrap();
    let u = SpectralField::random_band_limited(g, 60, &mut ChaCha8Rng::seed_from_u64(31));
    // support well inside the K = N/4 window makes the identity exact
    assert!(lax_identity_residual(&u, 256).unwrap() <= 1e-10);
}

#[test]
fn traveling_wave_identity_with_fault_injection() {
    let g = FrequencyGrid::default();
    for (amp, p) in soliton_corpus() {
        let (_, u) = make_soliton(amp, p, &g).unwrap();
        let (speed, omega) = grid_wave_parameters(&u).unwrap();
        assert!(traveling_wave_identity_residual(&u, speed, omega, 1024).unwrap() <= 1e-6);
    }
    let (params, u) = make_soliton(c(1.0, 0.0), c(0.0, -1.0), &g).unwrap();
    assert!((params.speed - 0.5).abs() < 1e-15 && (params.omega - 0.25).abs() < 1e-15);
    // line values differ from the grid ones by the quadrature error of Q and M
    let line = traveling_wave_identity_residual(&u, 0.5, 0.25, 1024).unwrap();
    assert!(line <= 1e-3, "{line}");
    assert!(traveling_wave_identity_residual(&u, 0.5, 1.0, 1024).unwrap() > 1e-2);
}

#[test]
fn au_spectrum_of_unit_soliton() {
    let (_, u) = make_soliton(c(1.0, 0.0), c(0.0, -1.0), &FrequencyGrid::default()).unwrap();
    let sp = spectrum_au(&u, 0.5, 1024).unwrap();
    assert!((sp.lowest() + 0.5).abs() <= 1e-3);
    assert_eq!(sp.negative_count, 1);
    assert!(sp.overlap >= 0.999);
    // positive part fills the band with shrinking gaps
    let coarse = spectrum_au(&u, 0.5, 256).unwrap();
    assert!(sp.max_positive_gap < coarse.max_positive_gap);
    assert!(*sp.eigenvalues.last().unwrap() > 0.9 * FrequencyGrid::default().xi(1023));
}

#[test]
fn kernel_of_soliton_hankel_is_the_orthogonal_complement() {
    let g = FrequencyGrid::default();
    let (_, u) = make_soliton(c(1.0, 0.0), c(0.0, -1.0), &g).unwrap();
    let h = RationalSymbol::simple(c(1.0, 0.0), c(2.0, -0.5)).unwrap();
    let gf = synth_rational(&h, &g);
    let proj = gf.inner(&u).unwrap() / u.inner(&u).unwrap();
    let v = gf.sub(&u.scale(proj)).unwrap();
    assert!(pointwise_defect(&u, &v).unwrap() <= 1e-6);
    // a generic field does not satisfy T v = |u|^2 v
    assert!(pointwise_defect(&u, &gf).unwrap() > 1e-2);
}

#[test]
fn isospectral_along_short_trajectories() {
    let g = FrequencyGrid::new(32.0, 512).unwrap();
    let sym = &rational_corpus()[1];
    let u0 = synth_rational(sym, &g);
    let schedule = Schedule { dt: 1e-3, steps: 2000, snapshot_stride: 500, log_stride: 500 };
    let rec = integrate(&u0, schedule, &mut []).unwrap();
    let rep = isospectral_drift(&rec.snapshots, 2, 128).unwrap();
    assert_eq!(rep.values.len(), 5);
    assert!(rep.drift <= 1e-8, "{}", rep.drift);
}
