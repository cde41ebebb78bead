use hardy_core::{make_soliton, norm, FrequencyGrid, HardyError, NormKind, SolitonParams, SpectralField};
use num_complex::Complex64;

use crate::error::{DynamicsError, Result};

/// `e^{-i omega t} u0(x - c t)` as per-mode phase twists.
pub fn advect(u0: &SpectralField, speed: f64, omega: f64, t: f64) -> SpectralField {
    let g = *u0.grid();
    u0.map_amplitudes(|k, a| a * Complex64::from_polar(1.0, -(omega + speed * g.xi(k)) * t))
}

/// Exact line traveling wave of a soliton, sampled on `grid`.
pub fn traveling_wave_reference(params: &SolitonParams, grid: &FrequencyGrid, t: f64) -> Result<SpectralField> {
    let (_, u0) = make_soliton(params.amplitude, params.pole, grid)?;
    Ok(advect(&u0, params.speed, params.omega, t))
}

pub fn deviation(u: &SpectralField, reference: &SpectralField, kind: NormKind) -> Result<f64> {
    Ok(norm(&u.sub(reference)?, kind)?)
}

/// Exact traveling wave of the periodic flow: amplitudes `-C p^{-k-1}`, i.e. the
/// carrier-modulated `C / (e^{i 2pi x / L} - p)`. Returns `(c, omega, u0)` from
/// the two lowest mode equations.
pub fn make_circle_soliton(amplitude: Complex64, p_disk: Complex64, grid: &FrequencyGrid) -> Result<(f64, f64, SpectralField)> {
    if !(p_disk.norm() > 1.0 && p_disk.norm().is_finite()) {
        return Err(DynamicsError::Config(format!("circle soliton needs |p| > 1, got {p_disk}")));
    }
    if amplitude.norm() == 0.0 || !amplitude.norm().is_finite() {
        return Err(HardyError::InvalidSymbol("circle soliton amplitude must be nonzero".into()).into());
    }
    let inv = 1.0 / p_disk;
    let mut amps = Vec::with_capacity(grid.modes());
    let mut pw = inv;
    for _ in 0..grid.modes() {
        amps.push(-amplitude * pw);
        pw *= inv;
    }
    let u = SpectralField::new(*grid, amps)?;
    let n = u.cubic_projection();
    let a = u.amplitudes();
    let b = n.amplitudes();
    let lam0 = (b[0] / a[0]).re;
    let lam1 = (b[1] / a[1]).re;
    let speed = (lam1 - lam0) / grid.dxi();
    let omega = lam0 - speed * grid.xi(0);
    Ok((speed, omega, u))
}
