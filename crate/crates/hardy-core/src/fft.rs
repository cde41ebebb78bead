//! Shared FFT plan cache.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

pub fn forward(n: usize) -> Arc<dyn Fft<f64>> {
    planner().lock().expect("fft planner poisoned").plan_fft_forward(n)
}

pub fn inverse(n: usize) -> Arc<dyn Fft<f64>> {
    planner().lock().expect("fft planner poisoned").plan_fft_inverse(n)
}

/// Unnormalized forward transform in place.
pub fn forward_in_place(buf: &mut [Complex64]) {
    forward(buf.len()).process(buf);
}

/// Unnormalized inverse transform in place: `buf[j] <- sum_k buf[k] e^{2 pi i jk/n}`.
pub fn inverse_in_place(buf: &mut [Complex64]) {
    inverse(buf.len()).process(buf);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_scales_by_n() {
        let n = 12;
        let orig: Vec<Complex64> = (0..n).map(|k| Complex64::new(k as f64, -(k as f64) / 3.0)).collect();
        let mut buf = orig.clone();
        forward_in_place(&mut buf);
        inverse_in_place(&mut buf);
        for (a, b) in buf.iter().zip(&orig) {
            assert!((a / n as f64 - b).norm() < 1e-12);
        }
    }
}
