use std::sync::Arc;

use hardy_core::{fft, FrequencyGrid, SpectralField};
use num_complex::Complex64;
use rustfft::Fft;

use crate::error::{DynamicsError, Result};

/// Amplitude above which a run is declared numerically blown up.
pub const BLOW_UP_MODULUS: f64 = 1e6;

/// Largest admissible `dt * max|u|^2`.
pub const STABILITY_GUARD: f64 = 0.2;

/// `-i Pi(|u|^2 u)`.
pub fn rhs(u: &SpectralField) -> SpectralField {
    u.cubic_projection().scale(Complex64::new(0.0, -1.0))
}

/// Reusable buffers for the padded cubic product.
///
/// On the half-shifted lattice the carrier phases of synthesis and analysis cancel
/// in `|u|^2 u`, so the product reduces to sign-alternated plain FFTs.
pub struct CubicKernel {
    modes: usize,
    padded: usize,
    length: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

/// Physical diagnostics gathered while forming the cubic term.
#[derive(Debug, Clone, Copy)]
pub struct PhysicalStats {
    pub max_modulus: f64,
    /// `int |u|^4`.
    pub quartic: f64,
}

impl CubicKernel {
    pub fn new(grid: &FrequencyGrid) -> Self {
        let padded = 2 * grid.num_points();
        let fwd = fft::forward(padded);
        let inv = fft::inverse(padded);
        let scratch_len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        Self {
            modes: grid.modes(),
            padded,
            length: grid.length(),
            fwd,
            inv,
            buf: vec![Complex64::new(0.0, 0.0); padded],
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    /// Writes `Pi(|u|^2 u)` into `out` and returns physical diagnostics of `u`.
    pub fn apply(&mut self, amps: &[Complex64], out: &mut [Complex64]) -> PhysicalStats {
        debug_assert_eq!(amps.len(), self.modes);
        let zero = Complex64::new(0.0, 0.0);
        for (k, b) in self.buf.iter_mut().enumerate() {
            *b = match amps.get(k) {
                Some(a) if k % 2 == 0 => *a,
                Some(a) => -*a,
                None => zero,
            };
        }
        self.inv.process_with_scratch(&mut self.buf, &mut self.scratch);
        let mut max2 = 0.0f64;
        let mut quartic = 0.0;
        for z in self.buf.iter_mut() {
            let m2 = z.norm_sqr();
            max2 = max2.max(m2);
            quartic += m2 * m2;
            *z *= m2;
        }
        self.fwd.process_with_scratch(&mut self.buf, &mut self.scratch);
        let scale = 1.0 / self.padded as f64;
        for (k, o) in out.iter_mut().enumerate() {
            let v = self.buf[k] * scale;
            *o = if k % 2 == 0 { v } else { -v };
        }
        PhysicalStats {
            max_modulus: if max2.is_finite() { max2.sqrt() } else { f64::INFINITY },
            quartic: if quartic.is_finite() { quartic * self.length / self.padded as f64 } else { f64::NAN },
        }
    }
}

/// Classical RK4 on the amplitude vector with a persistent workspace.
pub struct Rk4 {
    grid: FrequencyGrid,
    kernel: CubicKernel,
    k: [Vec<Complex64>; 4],
    stage: Vec<Complex64>,
}

impl Rk4 {
    pub fn new(grid: &FrequencyGrid) -> Self {
        let n = grid.modes();
        let z = || vec![Complex64::new(0.0, 0.0); n];
        Self { grid: *grid, kernel: CubicKernel::new(grid), k: [z(), z(), z(), z()], stage: z() }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// Advances `amps` by `dt` in place; returns the physical stats of the input state.
    pub fn step(&mut self, amps: &mut [Complex64], dt: f64) -> PhysicalStats {
        let mi = Complex64::new(0.0, -1.0);
        let stats = self.kernel.apply(amps, &mut self.k[0]);
        let weights = [0.5 * dt, 0.5 * dt, dt];
        for s in 0..3 {
            let (done, rest) = self.k.split_at_mut(s + 1);
            let prev = &done[s];
            for ((st, a), kk) in self.stage.iter_mut().zip(amps.iter()).zip(prev) {
                *st = a + mi * weights[s] * kk;
            }
            self.kernel.apply(&self.stage, &mut rest[0]);
        }
        let c = dt / 6.0;
        for (i, a) in amps.iter_mut().enumerate() {
            let sum = self.k[0][i] + 2.0 * self.k[1][i] + 2.0 * self.k[2][i] + self.k[3][i];
            *a += mi * c * sum;
        }
        stats
    }
}

/// One RK4 step; errors if the result is non-finite or exceeds the blow-up modulus.
pub fn step_rk4(u: &SpectralField, dt: f64) -> Result<SpectralField> {
    let mut rk = Rk4::new(u.grid());
    let mut amps = u.amplitudes().to_vec();
    rk.step(&mut amps, dt);
    let v = SpectralField::new(*u.grid(), amps)?;
    let bound: f64 = v.amplitudes().iter().map(|a| a.norm()).sum();
    if !bound.is_finite() || v.check_finite().is_err() {
        return Err(DynamicsError::BlowUp { t: dt, max_modulus: f64::INFINITY });
    }
    if bound > BLOW_UP_MODULUS {
        let max = v.samples().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max > BLOW_UP_MODULUS {
            return Err(DynamicsError::BlowUp { t: dt, max_modulus: max });
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid() -> FrequencyGrid {
        FrequencyGrid::new(32.0, 256).unwrap()
    }

    #[test]
    fn kernel_matches_field_cubic() {
        let u = SpectralField::random_band_limited(grid(), 60, &mut ChaCha8Rng::seed_from_u64(1));
        let mut out = vec![Complex64::new(0.0, 0.0); grid().modes()];
        let stats = CubicKernel::new(&grid()).apply(u.amplitudes(), &mut out);
        for (a, b) in out.iter().zip(u.cubic_projection().amplitudes()) {
            assert!((a - b).norm() < 1e-13);
        }
        let e = u.conserved_quantities().unwrap().e;
        assert!((stats.quartic - e).abs() < 1e-12 * e);
        let max = u.samples_on(512).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((stats.max_modulus - max).abs() < 1e-12);
    }

    #[test]
    fn rhs_of_zero_is_zero() {
        assert!(rhs(&SpectralField::zeros(grid())).is_zero());
    }

    #[test]
    fn rhs_is_gauge_covariant() {
        let u = SpectralField::random_band_limited(grid(), 40, &mut ChaCha8Rng::seed_from_u64(2));
        let ph = Complex64::from_polar(1.0, 0.3);
        let a = rhs(&u.scale(ph));
        let b = rhs(&u).scale(ph);
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn step_is_consistent_to_second_order() {
        let u = SpectralField::random_band_limited(grid(), 40, &mut ChaCha8Rng::seed_from_u64(3));
        let f = rhs(&u);
        let err = |dt: f64| {
            let v = step_rk4(&u, dt).unwrap();
            let d = v.sub(&u).unwrap().axpy(Complex64::new(-dt, 0.0), &f).unwrap();
            d.amplitudes().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
        };
        let (e1, e2) = (err(1e-2), err(5e-3));
        let slope = (e1 / e2).log2();
        assert!((slope - 2.0).abs() < 0.1, "{slope}");
    }

    #[test]
    fn huge_field_blows_up() {
        let u = SpectralField::mode(grid(), 0, Complex64::new(1e5, 0.0));
        assert!(matches!(step_rk4(&u, 1.0), Err(DynamicsError::BlowUp { .. })));
    }
}
