use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{HardyError, Result};
use crate::fft;
use crate::grid::FrequencyGrid;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Values at `x_j = -L/2 + j L / n` (any box length) of `sum_k amps[k] e^{i xi_k x}`.
///
/// `n` must be even and at least the number of amplitudes.
pub fn synthesize(amps: &[Complex64], n: usize) -> Vec<Complex64> {
    assert!(n % 2 == 0 && n >= amps.len(), "synthesis grid too small");
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (k, a) in amps.iter().enumerate() {
        buf[k] = if k % 2 == 0 { *a } else { -*a };
    }
    fft::inverse_in_place(&mut buf);
    // e^{i xi_k x_j} = (-i) (-1)^k e^{i pi j / n} e^{2 pi i k j / n}
    for (j, v) in buf.iter_mut().enumerate() {
        let carrier = Complex64::from_polar(1.0, PI * j as f64 / n as f64);
        *v *= -I * carrier;
    }
    buf
}

/// Inverse of [`synthesize`] on the full half-shifted lattice of an `n`-point grid.
///
/// Entry `k < n/2` is the coefficient of `xi_k`; entry `k >= n/2` is the coefficient
/// of the negative frequency `xi_{k-n}`.
pub fn analyze(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    assert!(n % 2 == 0 && n > 0, "analysis grid must be even");
    let mut buf: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(j, f)| f * Complex64::from_polar(1.0, -PI * j as f64 / n as f64))
        .collect();
    fft::forward_in_place(&mut buf);
    let scale = 1.0 / n as f64;
    for (k, c) in buf.iter_mut().enumerate() {
        let sign = if k % 2 == 0 { scale } else { -scale };
        *c *= I * sign;
    }
    buf
}

/// A field with both positive and negative lattice frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FullField {
    grid: FrequencyGrid,
    coeffs: Vec<Complex64>,
}

impl FullField {
    pub fn from_samples(grid: FrequencyGrid, samples: &[Complex64]) -> Result<Self> {
        if samples.len() != grid.num_points() {
            return Err(HardyError::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.num_points(),
                samples.len()
            )));
        }
        Ok(Self { grid, coeffs: analyze(samples) })
    }

    pub fn from_real_samples(grid: FrequencyGrid, samples: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        Self::from_samples(grid, &c)
    }

    pub fn from_hardy(u: &SpectralField) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); u.grid.num_points()];
        coeffs[..u.amps.len()].copy_from_slice(&u.amps);
        Self { grid: u.grid, coeffs }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// Coefficient of the lattice frequency `(k + 1/2) dxi`, `k` in `-N/2..N/2`.
    pub fn coeff(&self, k: isize) -> Complex64 {
        let n = self.coeffs.len() as isize;
        self.coeffs[k.rem_euclid(n) as usize]
    }

    pub fn samples(&self) -> Vec<Complex64> {
        // negative indices k - n carry the same sign (-1)^k since n is even
        synthesize(&self.coeffs, self.coeffs.len())
    }
}

/// Szego projection: keep the nonnegative half of the lattice.
pub fn project_szego(grid: &FrequencyGrid, f: &FullField) -> Result<SpectralField> {
    grid.ensure_same(&f.grid)?;
    Ok(SpectralField::from_parts(*grid, f.coeffs[..grid.modes()].to_vec()))
}

/// Hardy field stored by its amplitudes `a_k = u_hat(xi_k) / L`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: FrequencyGrid,
    amps: Vec<Complex64>,
    samples: OnceLock<Vec<Complex64>>,
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.amps == other.amps
    }
}

/// `Q`, `M`, `E` of a field.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Conserved {
    pub q: f64,
    pub m: f64,
    pub e: f64,
}

impl SpectralField {
    pub fn new(grid: FrequencyGrid, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.modes() {
            return Err(HardyError::InvalidGrid(format!(
                "expected {} amplitudes, got {}",
                grid.modes(),
                amps.len()
            )));
        }
        Ok(Self::from_parts(grid, amps))
    }

    pub(crate) fn from_parts(grid: FrequencyGrid, amps: Vec<Complex64>) -> Self {
        Self { grid, amps, samples: OnceLock::new() }
    }

    pub fn zeros(grid: FrequencyGrid) -> Self {
        Self::from_parts(grid, vec![Complex64::new(0.0, 0.0); grid.modes()])
    }

    /// Single mode `amplitude * e^{i xi_k x}`.
    pub fn mode(grid: FrequencyGrid, k: usize, amplitude: Complex64) -> Self {
        let mut u = Self::zeros(grid);
        u.amps[k] = amplitude;
        u
    }

    /// Random smooth field supported on the first `band` modes with exponentially
    /// decaying amplitudes.
    pub fn random_band_limited<R: Rng + ?Sized>(grid: FrequencyGrid, band: usize, rng: &mut R) -> Self {
        let band = band.min(grid.modes());
        let decay = (band as f64 / 6.0).max(1.0);
        let mut amps = vec![Complex64::new(0.0, 0.0); grid.modes()];
        for (k, a) in amps.iter_mut().take(band).enumerate() {
            let w = (-(k as f64) / decay).exp();
            *a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * w;
        }
        Self::from_parts(grid, amps)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.amps.iter().position(|a| !(a.re.is_finite() && a.im.is_finite())) {
            Some(k) => Err(HardyError::NonFinite(k)),
            None => Ok(()),
        }
    }

    /// Physical samples on the `N` grid nodes (cached).
    pub fn samples(&self) -> &[Complex64] {
        self.samples
            .get_or_init(|| synthesize(&self.amps, self.grid.num_points()))
    }

    /// Physical samples on a refined grid of `n` points spanning the same box.
    pub fn samples_on(&self, n: usize) -> Vec<Complex64> {
        synthesize(&self.amps, n)
    }

    /// Direct evaluation of the trigonometric sum at `x`.
    pub fn value_at(&self, x: f64) -> Complex64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(k, a)| a * Complex64::from_polar(1.0, self.grid.xi(k) * x))
            .sum()
    }

    pub fn map_amplitudes(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let amps = self.amps.iter().enumerate().map(|(k, a)| f(k, *a)).collect();
        Self::from_parts(self.grid, amps)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map_amplitudes(|_, a| a * s)
    }

    /// `u(x - x0)`.
    pub fn translate(&self, x0: f64) -> Self {
        let g = self.grid;
        self.map_amplitudes(|k, a| a * Complex64::from_polar(1.0, -g.xi(k) * x0))
    }

    /// `u(x + i s)`: damps (s > 0) or amplifies (s < 0) high frequencies.
    pub fn imaginary_shift(&self, s: f64) -> Self {
        let g = self.grid;
        self.map_amplitudes(|k, a| a * (-s * g.xi(k)).exp())
    }

    /// `D u = -i u'`.
    pub fn derivative(&self) -> Self {
        let g = self.grid;
        self.map_amplitudes(|k, a| a * g.xi(k))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.grid, amps))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts(self.grid, amps))
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: Complex64, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a + s * b).collect();
        Ok(Self::from_parts(self.grid, amps))
    }

    /// `L^2` inner product `int u conj(v)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.grid.ensure_same(&other.grid)?;
        let s: Complex64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.grid.length())
    }

    /// `Pi(|u|^2 u)`, exact for the retained band (padding by two).
    pub fn cubic_projection(&self) -> Self {
        let n = 2 * self.grid.num_points();
        let mut w = synthesize(&self.amps, n);
        for v in w.iter_mut() {
            *v *= v.norm_sqr();
        }
        let full = analyze(&w);
        Self::from_parts(self.grid, full[..self.grid.modes()].to_vec())
    }

    /// Fourier coefficients `beta_m` of the `L`-periodic density
    /// `|u|^2 = sum_m beta_m e^{i m dxi x}`, for `m = -(K-1)..=(K-1)` with
    /// `K = N/2`, stored at index `m + K - 1`.
    pub fn density_coefficients(&self) -> Vec<Complex64> {
        let modes = self.grid.modes();
        let n = 2 * self.grid.num_points();
        let w = synthesize(&self.amps, n);
        let mut g: Vec<Complex64> = w.iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)).collect();
        fft::forward_in_place(&mut g);
        let scale = 1.0 / n as f64;
        (0..2 * modes - 1)
            .map(|idx| {
                let m = idx as isize - (modes as isize - 1);
                let c = g[m.rem_euclid(n as isize) as usize] * scale;
                // e^{i m dxi x_j} = (-1)^m e^{2 pi i m j / n}
                if m.rem_euclid(2) == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }

    /// `Q = int |u|^2`, `M = int conj(u) D u`, `E = int |u|^4`.
    ///
    /// `E` is the trapezoid rule on the padded grid, which is exact for the
    /// trigonometric polynomial `|u|^4`.
    pub fn conserved_quantities(&self) -> Result<Conserved> {
        self.check_finite()?;
        let l = self.grid.length();
        let q = l * self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        let m = l * self
            .amps
            .iter()
            .enumerate()
            .map(|(k, a)| self.grid.xi(k) * a.norm_sqr())
            .sum::<f64>();
        let n = 2 * self.grid.num_points();
        let w = synthesize(&self.amps, n);
        let e = l / n as f64 * w.iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>();
        Ok(Conserved { q, m, e })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> FrequencyGrid {
        FrequencyGrid::new(20.0, 64).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn synthesis_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = SpectralField::random_band_limited(grid(), 20, &mut rng);
        for (j, s) in u.samples().iter().enumerate() {
            assert!(close(*s, u.value_at(grid().x(j)), 1e-12));
        }
    }

    #[test]
    fn physical_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = SpectralField::random_band_limited(grid(), 32, &mut rng);
        let full = FullField::from_samples(grid(), u.samples()).unwrap();
        let back = project_szego(&grid(), &full).unwrap();
        let tol = 1e-12 * u.amplitudes().iter().map(|a| a.norm()).fold(0.0, f64::max);
        for (a, b) in back.amplitudes().iter().zip(u.amplitudes()) {
            assert!(close(*a, *b, tol));
        }
        let samples = full.samples();
        for (a, b) in samples.iter().zip(u.samples()) {
            assert!(close(*a, *b, 1e-12));
        }
    }

    #[test]
    fn projection_keeps_hardy_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = SpectralField::random_band_limited(grid(), 10, &mut rng);
        let p = project_szego(&grid(), &FullField::from_hardy(&u)).unwrap();
        assert_eq!(p, u);
    }

    #[test]
    fn projection_kills_negative_mode() {
        let g = grid();
        let xi = -0.5 * g.dxi();
        let s: Vec<Complex64> = g.nodes().iter().map(|x| Complex64::from_polar(1.0, xi * x)).collect();
        let p = project_szego(&g, &FullField::from_samples(g, &s).unwrap()).unwrap();
        assert!(p.amplitudes().iter().all(|a| a.norm() < 1e-14));
    }

    #[test]
    fn projection_of_cosine_keeps_positive_half() {
        let g = grid();
        let xi0 = g.xi(0);
        let s: Vec<f64> = g.nodes().iter().map(|x| 2.0 * (xi0 * x).cos()).collect();
        let p = project_szego(&g, &FullField::from_real_samples(g, &s).unwrap()).unwrap();
        assert!(close(p.amplitudes()[0], Complex64::new(1.0, 0.0), 1e-14));
        assert!(p.amplitudes()[1..].iter().all(|a| a.norm() < 1e-14));
    }

    #[test]
    fn projection_rejects_other_grid() {
        let other = FrequencyGrid::new(20.0, 32).unwrap();
        let f = FullField::from_hardy(&SpectralField::zeros(other));
        assert!(project_szego(&grid(), &f).is_err());
    }

    #[test]
    fn cubic_projection_matches_brute_force() {
        let g = FrequencyGrid::new(10.0, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let u = SpectralField::random_band_limited(g, 8, &mut rng);
        let a = u.amplitudes();
        let k = g.modes();
        let mut expect = vec![Complex64::new(0.0, 0.0); k];
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let t = i + j;
                    if t >= l && t - l < k {
                        expect[t - l] += a[i] * a[j] * a[l].conj();
                    }
                }
            }
        }
        for (x, y) in u.cubic_projection().amplitudes().iter().zip(&expect) {
            assert!(close(*x, *y, 1e-12));
        }
    }

    #[test]
    fn density_coefficients_match_brute_force() {
        let g = FrequencyGrid::new(10.0, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = SpectralField::random_band_limited(g, 8, &mut rng);
        let a = u.amplitudes();
        let k = g.modes() as isize;
        let beta = u.density_coefficients();
        for m in -(k - 1)..k {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..k {
                let j = i - m;
                if (0..k).contains(&j) {
                    s += a[i as usize] * a[j as usize].conj();
                }
            }
            assert!(close(beta[(m + k - 1) as usize], s, 1e-12));
        }
    }

    #[test]
    fn conserved_of_zero() {
        let c = SpectralField::zeros(grid()).conserved_quantities().unwrap();
        assert_eq!((c.q, c.m, c.e), (0.0, 0.0, 0.0));
    }

    #[test]
    fn non_finite_is_an_error() {
        let u = SpectralField::mode(grid(), 3, Complex64::new(f64::NAN, 0.0));
        assert_eq!(u.conserved_quantities(), Err(HardyError::NonFinite(3)));
    }

    #[test]
    fn quartic_integral_matches_fine_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = SpectralField::random_band_limited(grid(), 32, &mut rng);
        let fine = u.samples_on(1024);
        let e = grid().length() / 1024.0 * fine.iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>();
        let c = u.conserved_quantities().unwrap();
        assert!((c.e - e).abs() <= 1e-12 * e);
    }

    #[test]
    fn translation_is_exact_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = SpectralField::random_band_limited(grid(), 16, &mut rng);
        let v = u.translate(1.3);
        assert!(close(v.value_at(0.4), u.value_at(0.4 - 1.3), 1e-12));
    }
}
