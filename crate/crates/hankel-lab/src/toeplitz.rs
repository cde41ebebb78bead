use faer::Mat;
use hardy_core::{analyze, fft, FrequencyGrid, SpectralField};
use num_complex::Complex64;

use crate::error::{HankelError, Result};

/// Toeplitz matrix `T_kl = beta_{k-l}` of a symbol with `L`-periodic Fourier
/// coefficients `beta_m`; the same matrix acts on either frequency lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzOperator {
    size: usize,
    /// `beta_m` for `m = -(K-1)..=(K-1)` at index `m + K - 1`.
    coeffs: Vec<Complex64>,
}

impl ToeplitzOperator {
    fn from_centered(all: &[Complex64], size: usize) -> Result<Self> {
        let max = (all.len() + 1) / 2;
        if size == 0 || size > max {
            return Err(HankelError::UnderResolved(format!("Toeplitz size {size} exceeds the symbol band {max}")));
        }
        let mid = max - 1;
        Ok(Self { size, coeffs: all[mid + 1 - size..mid + size].to_vec() })
    }

    /// `T_{|u|^2}` from the exact density coefficients of a grid field.
    pub fn from_density(u: &SpectralField, size: usize) -> Result<Self> {
        Self::from_centered(&u.density_coefficients(), size)
    }

    /// Symbol given by real samples on the grid nodes.
    pub fn from_real_samples(grid: &FrequencyGrid, samples: &[f64], size: usize) -> Result<Self> {
        let n = grid.num_points();
        if samples.len() != n {
            return Err(HankelError::Parameters(format!("expected {n} samples, got {}", samples.len())));
        }
        let mut buf: Vec<Complex64> = samples.iter().map(|&b| Complex64::new(b, 0.0)).collect();
        fft::forward_in_place(&mut buf);
        let half = (n / 2) as isize;
        let all: Vec<Complex64> = (-(half - 1)..half)
            .map(|m| {
                let c = buf[m.rem_euclid(n as isize) as usize] / n as f64;
                if m.rem_euclid(2) == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        Self::from_centered(&all, size)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coeff(&self, m: isize) -> Complex64 {
        self.coeffs[(m + self.size as isize - 1) as usize]
    }

    pub fn to_dense(&self) -> Mat<Complex64> {
        Mat::from_fn(self.size, self.size, |k, l| self.coeff(k as isize - l as isize))
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.size, "vector length must match the operator size");
        (0..self.size)
            .map(|k| v.iter().enumerate().map(|(l, x)| self.coeff(k as isize - l as isize) * x).sum())
            .collect()
    }

    /// `max |T_kl - conj(T_lk)|`.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.size as isize)
            .map(|m| (self.coeff(m) - self.coeff(-m).conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// `||(I - Pi)(|u|^2 v)|| / ||u|^2 v||`: zero exactly when `T_{|u|^2} v = |u|^2 v`.
pub fn pointwise_defect(u: &SpectralField, v: &SpectralField) -> Result<f64> {
    u.grid().ensure_same(v.grid())?;
    let n = 2 * u.grid().num_points();
    let wu = u.samples_on(n);
    let wv = v.samples_on(n);
    let prod: Vec<Complex64> = wu.iter().zip(&wv).map(|(a, b)| a.norm_sqr() * b).collect();
    let full = analyze(&prod);
    let total: f64 = full.iter().map(|c| c.norm_sqr()).sum();
    let negative: f64 = full[n / 2..].iter().map(|c| c.norm_sqr()).sum();
    Ok(if total == 0.0 { 0.0 } else { (negative / total).sqrt() })
}
