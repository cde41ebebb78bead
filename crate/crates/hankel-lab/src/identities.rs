//! Operator identities on the exact torus discretization.
//!
//! Conjugation bookkeeping: with `H(h) = M conj(h)` and a linear `T`,
//! `T H -> T M`, `H T -> M conj(T)`, `H^3 -> M conj(M) M`, and `H^2 -> M conj(M)`
//! (a linear map). `H` sends the half-shifted lattice to the integer lattice and
//! back; `D` is diagonal with the matching node frequencies on each side.

use faer::Mat;
use hardy_core::{RationalSymbol, SpectralField};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HankelError, Result};
use crate::operator::HankelOperator;
use crate::spectra::{sample_rows, spectral_norm};
use crate::toeplitz::ToeplitzOperator;

fn conj(m: &Mat<Complex64>) -> Mat<Complex64> {
    m.conjugate().to_owned()
}

/// Default operator size for field sources: `N/4`, so every `a_{k+l}` is in band.
pub fn default_field_size(u: &SpectralField) -> usize {
    u.grid().modes() / 2
}

/// `||H_{Pi(|u|^2 u)} - (T H + H T - H^3)||_2 / ||H_{Pi(|u|^2 u)}||_2`.
pub fn lax_identity_residual(u: &SpectralField, size: usize) -> Result<f64> {
    let m = HankelOperator::from_field(u, size)?.to_dense();
    let c = HankelOperator::from_field(&u.cubic_projection(), size)?.to_dense();
    let t = ToeplitzOperator::from_density(u, size)?.to_dense();
    let mbar = conj(&m);
    let tm: Mat<Complex64> = &t * &m;
    let mt: Mat<Complex64> = &m * conj(&t);
    let mmm: Mat<Complex64> = &m * (&mbar * &m);
    let r: Mat<Complex64> = &c - (tm + mt - mmm);
    let num = spectral_norm(r.as_ref())?;
    let den = spectral_norm(c.as_ref())?;
    Ok(if den == 0.0 { num } else { num / den })
}

/// `||A H + H A + (omega/c) H + (1/c) H^3||_2 / ||H||_2` with `A = D - T_{|u|^2}/c`.
pub fn traveling_wave_identity_residual(u: &SpectralField, speed: f64, omega: f64, size: usize) -> Result<f64> {
    if speed == 0.0 || !speed.is_finite() {
        return Err(HankelError::ZeroSpeed);
    }
    let h = HankelOperator::from_field(u, size)?;
    let m = h.to_dense();
    let t = ToeplitzOperator::from_density(u, size)?.to_dense();
    let rows = h.row_nodes();
    let cols = h.col_nodes();
    let inv = 1.0 / speed;
    let left = Mat::<Complex64>::from_fn(size, size, |i, j| {
        let d = if i == j { Complex64::new(rows[i], 0.0) } else { Complex64::new(0.0, 0.0) };
        d - t[(i, j)] * inv
    });
    let right = Mat::<Complex64>::from_fn(size, size, |i, j| {
        let d = if i == j { Complex64::new(cols[i], 0.0) } else { Complex64::new(0.0, 0.0) };
        d - t[(i, j)].conj() * inv
    });
    let mmm: Mat<Complex64> = &m * (conj(&m) * &m);
    let mut r: Mat<Complex64> = &left * &m + &m * &right;
    for j in 0..size {
        for i in 0..size {
            r[(i, j)] += m[(i, j)] * (omega * inv) + mmm[(i, j)] * inv;
        }
    }
    let den = spectral_norm(m.as_ref())?;
    let num = spectral_norm(r.as_ref())?;
    Ok(if den == 0.0 { num } else { num / den })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuSpectrum {
    /// Ascending eigenvalues of `D - T_{|u|^2}/c` on the first `K` modes.
    pub eigenvalues: Vec<f64>,
    pub negative_count: usize,
    /// `|<v_min, u>| / (||v_min|| ||u||)`.
    pub overlap: f64,
    /// Largest spacing between consecutive nonnegative eigenvalues.
    pub max_positive_gap: f64,
    #[serde(skip)]
    pub lowest_vector: Option<SpectralField>,
}

impl AuSpectrum {
    pub fn lowest(&self) -> f64 {
        self.eigenvalues[0]
    }
}

pub fn spectrum_au(u: &SpectralField, speed: f64, size: usize) -> Result<AuSpectrum> {
    if speed == 0.0 || !speed.is_finite() {
        return Err(HankelError::ZeroSpeed);
    }
    let g = *u.grid();
    if size == 0 || size > g.modes() {
        return Err(HankelError::Parameters(format!("size must be in 1..={}", g.modes())));
    }
    let t = ToeplitzOperator::from_density(u, size)?.to_dense();
    let a = Mat::<Complex64>::from_fn(size, size, |i, j| {
        let d = if i == j { g.xi(i) } else { 0.0 };
        Complex64::new(d, 0.0) - t[(i, j)] / speed
    });
    let evd = a
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| HankelError::Decomposition(format!("{e:?}")))?;
    let eigenvalues: Vec<f64> = evd.S().column_vector().iter().map(|s| s.re).collect();
    let v = evd.U().col(0);
    let mut amps = vec![Complex64::new(0.0, 0.0); g.modes()];
    for (i, a) in amps.iter_mut().take(size).enumerate() {
        *a = v[i];
    }
    let lowest = SpectralField::new(g, amps)?;
    let nu = u.inner(u)?.re.sqrt();
    let nv = lowest.inner(&lowest)?.re.sqrt();
    let overlap = if nu == 0.0 || nv == 0.0 { 0.0 } else { lowest.inner(u)?.norm() / (nu * nv) };
    let negative_count = eigenvalues.iter().filter(|&&e| e < 0.0).count();
    let positive: Vec<f64> = eigenvalues.iter().copied().filter(|&e| e >= 0.0).collect();
    let max_positive_gap = positive.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Ok(AuSpectrum { eigenvalues, negative_count, overlap, max_positive_gap, lowest_vector: Some(lowest) })
}

/// `||H^2 u - s^2 u|| / ||u||` with `u` sampled on the operator nodes.
pub fn h2_eigen_residual(sym: &RationalSymbol, h: &HankelOperator, s: f64) -> f64 {
    let u = sample_rows(sym, h);
    let hu = h.apply(&u);
    let h2u = h.apply(&hu);
    let num: f64 = h2u.iter().zip(&u).map(|(a, b)| (a - b * (s * s)).norm_sqr()).sum();
    let den: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    if den == 0.0 {
        0.0
    } else {
        (num / den).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hardy_core::{grid_wave_parameters, make_soliton, FrequencyGrid};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn small() -> FrequencyGrid {
        FrequencyGrid::new(64.0, 512).unwrap()
    }

    // coarse enough spacing that the amplitudes beyond K = N/4 are negligible
    fn compact() -> FrequencyGrid {
        FrequencyGrid::new(32.0, 512).unwrap()
    }

    #[test]
    fn zero_field() {
        let z = SpectralField::zeros(small());
        assert_eq!(lax_identity_residual(&z, 64).unwrap(), 0.0);
        assert_eq!(traveling_wave_identity_residual(&z, 1.0, 1.0, 64).unwrap(), 0.0);
        let sp = spectrum_au(&z, 1.0, 32).unwrap();
        for (k, e) in sp.eigenvalues.iter().enumerate() {
            assert!((e - small().xi(k)).abs() < 1e-12);
        }
    }

    #[test]
    fn lax_identity_on_small_grid() {
        let (_, u) = make_soliton(c(1.0, 0.0), c(0.0, -1.0), &compact()).unwrap();
        let r = lax_identity_residual(&u, 128).unwrap();
        assert!(r < 1e-8, "{r}");
        let v = SpectralField::random_band_limited(small(), 30, &mut ChaCha8Rng::seed_from_u64(9)).scale(c(0.1, 0.0));
        assert!(lax_identity_residual(&v, 128).unwrap() < 1e-10);
    }

    #[test]
    fn traveling_wave_identity_and_fault() {
        let (_, u) = make_soliton(c(1.0, 0.0), c(0.0, -1.0), &compact()).unwrap();
        let (speed, omega) = grid_wave_parameters(&u).unwrap();
        let r = traveling_wave_identity_residual(&u, speed, omega, 128).unwrap();
        assert!(r < 1e-8, "{r}");
        assert!(traveling_wave_identity_residual(&u, speed, 1.0, 128).unwrap() > 1e-2);
        assert!(matches!(traveling_wave_identity_residual(&u, 0.0, omega, 128), Err(HankelError::ZeroSpeed)));
    }

    #[test]
    fn h2_relation_for_unit_soliton() {
        let u = RationalSymbol::simple(c(1.0, 0.0), c(0.0, -1.0)).unwrap();
        let h = HankelOperator::from_rational(&u, 40.0, 512).unwrap();
        // discrete value h / (2 sinh h) on midpoint nodes
        let step = h.step();
        let s = step / (2.0 * step.sinh());
        assert!(h2_eigen_residual(&u, &h, s) < 1e-12);
        assert!(h2_eigen_residual(&u, &h, 0.5) < 1e-3);
    }
}
