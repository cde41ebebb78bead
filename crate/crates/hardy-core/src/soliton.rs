use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::field::SpectralField;
use crate::grid::FrequencyGrid;
use crate::rational::{synth_rational, RationalSymbol};

/// `u = C / (x - p)` with `Im p < 0` and its closed-form invariants on the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonParams {
    pub amplitude: Complex64,
    pub pole: Complex64,
    pub a: f64,
    pub r: f64,
    /// Speed `c = Q / 2pi`.
    pub speed: f64,
    /// Phase rate `omega = M / 2pi`.
    pub omega: f64,
    pub q: f64,
    pub m: f64,
    pub e: f64,
    /// The single nonzero Hankel singular value `a / (2r)`.
    pub singular_value: f64,
}

impl SolitonParams {
    pub fn new(amplitude: Complex64, pole: Complex64) -> Result<Self> {
        if !(pole.im < 0.0 && pole.re.is_finite() && pole.im.is_finite()) {
            return Err(HardyError::PoleNotInLowerHalfPlane(format!("{pole}")));
        }
        let a = amplitude.norm();
        if !(a.is_finite() && a > 0.0) {
            return Err(HardyError::InvalidSymbol(format!("soliton amplitude {amplitude} must be nonzero")));
        }
        let r = -pole.im;
        let q = PI * a * a / r;
        let m = PI * a * a / (2.0 * r * r);
        let e = PI * a.powi(4) / (2.0 * r.powi(3));
        Ok(Self {
            amplitude,
            pole,
            a,
            r,
            speed: q / (2.0 * PI),
            omega: m / (2.0 * PI),
            q,
            m,
            e,
            singular_value: a / (2.0 * r),
        })
    }

    pub fn symbol(&self) -> RationalSymbol {
        RationalSymbol::simple(self.amplitude, self.pole).expect("validated soliton")
    }
}

/// Soliton parameters and its grid field.
pub fn make_soliton(amplitude: Complex64, pole: Complex64, grid: &FrequencyGrid) -> Result<(SolitonParams, SpectralField)> {
    let params = SolitonParams::new(amplitude, pole)?;
    let field = synth_rational(&params.symbol(), grid);
    Ok((params, field))
}

/// `(c, omega) = (Q/2pi, M/2pi)` evaluated on the grid field.
pub fn grid_wave_parameters(u: &SpectralField) -> Result<(f64, f64)> {
    let c = u.conserved_quantities()?;
    Ok((c.q / (2.0 * PI), c.m / (2.0 * PI)))
}

/// `||c D u + omega u - Pi(|u|^2 u)|| / ||u||`.
pub fn traveling_wave_residual(u: &SpectralField, c: f64, omega: f64) -> f64 {
    let g = u.grid();
    let cubic = u.cubic_projection();
    let num: f64 = u
        .amplitudes()
        .iter()
        .zip(cubic.amplitudes())
        .enumerate()
        .map(|(k, (a, n))| (a * (c * g.xi(k) + omega) - n).norm_sqr())
        .sum();
    let den: f64 = u.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    if den == 0.0 {
        0.0
    } else {
        (num / den).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_soliton_parameters() {
        let s = SolitonParams::new(c(1.0, 0.0), c(0.0, -1.0)).unwrap();
        assert!((s.speed - 0.5).abs() < 1e-15);
        assert!((s.omega - 0.25).abs() < 1e-15);
        assert!((s.singular_value - 0.5).abs() < 1e-15);
        assert!((PI * s.e - s.m * s.q).abs() < 1e-14);
    }

    #[test]
    fn double_amplitude_soliton() {
        let s = SolitonParams::new(c(2.0, 0.0), c(0.0, -1.0)).unwrap();
        assert!((s.speed - 2.0).abs() < 1e-15);
        assert!((s.omega - 1.0).abs() < 1e-15);
    }

    #[test]
    fn narrower_pole_halves_mass() {
        let s = SolitonParams::new(c(1.0, 0.0), c(0.0, -2.0)).unwrap();
        assert!((s.q - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_upper_pole_and_zero_amplitude() {
        assert!(SolitonParams::new(c(1.0, 0.0), c(0.0, 1.0)).is_err());
        assert!(SolitonParams::new(c(0.0, 0.0), c(0.0, -1.0)).is_err());
    }

    #[test]
    fn residual_vanishes_with_grid_parameters() {
        let g = FrequencyGrid::new(64.0, 1024).unwrap();
        let (_, u) = make_soliton(c(1.0, 0.0), c(0.0, -1.0), &g).unwrap();
        let (cs, om) = grid_wave_parameters(&u).unwrap();
        assert!(traveling_wave_residual(&u, cs, om) < 1e-12);
        assert!(traveling_wave_residual(&u, cs, 4.0 * om) > 0.1);
    }
}
