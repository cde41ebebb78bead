use hardy_core::{Complex64, FrequencyGrid, PoleTerm, RationalSymbol, SpectralField, synth_rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VariationalError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MinimizeOptions {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    pub initial_step: f64,
    pub max_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { max_iterations: 100_000, gradient_tolerance: 1e-8, initial_step: 0.1, max_step: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryRow {
    pub iteration: usize,
    pub m: f64,
    pub gradient_norm: f64,
    pub step: f64,
}

#[derive(Debug, Clone)]
pub struct Minimization {
    pub field: SpectralField,
    pub history: Vec<HistoryRow>,
    pub converged: bool,
}

impl Minimization {
    pub fn iterations(&self) -> usize {
        self.history.last().map_or(0, |h| h.iteration)
    }
}

/// Smooth random start: a few simple poles with `Re p in [-5, 5]`, `-Im p in [0.5, 2]`.
pub fn random_initial_field(grid: &FrequencyGrid, seed: u64) -> Result<SpectralField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = (0..3)
        .map(|_| {
            let p = Complex64::new(rng.gen_range(-5.0..5.0), -rng.gen_range(0.5..2.0));
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            PoleTerm::new(p, vec![c])
        })
        .collect();
    Ok(synth_rational(&RationalSymbol::new(terms)?, grid))
}

/// `beta u(x + i s)` with `E/Q^2` matched by bisection in `s`, then `Q` by `beta`.
pub fn reproject(u: &SpectralField, q: f64, e: f64) -> Result<SpectralField> {
    if u.is_zero() {
        return Err(VariationalError::ZeroField);
    }
    let grid = *u.grid();
    let target = e / (q * q);
    let support: Vec<usize> = (0..grid.modes()).filter(|&k| u.amplitudes()[k] != Complex64::new(0.0, 0.0)).collect();
    let damp = |s: f64| -> SpectralField {
        let top = support.iter().map(|&k| -s * grid.xi(k)).fold(f64::NEG_INFINITY, f64::max);
        u.map_amplitudes(|k, a| a * (-s * grid.xi(k) - top).max(-700.0).exp())
    };
    let gap = |s: f64| -> Result<f64> {
        let c = damp(s).conserved_quantities()?;
        Ok(c.e / (c.q * c.q) - target)
    };
    let (mut lo, mut hi);
    if gap(0.0)? > 0.0 {
        lo = 0.0;
        hi = 0.01;
        while gap(hi)? > 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > 1e6 {
                return Err(VariationalError::Infeasible(format!("E/Q^2 = {target} is below the grid range")));
            }
        }
    } else {
        hi = 0.0;
        lo = -0.01;
        while gap(lo)? < 0.0 {
            hi = lo;
            lo *= 2.0;
            if lo < -1e6 {
                return Err(VariationalError::Infeasible(format!("E/Q^2 = {target} is above the grid range")));
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v = damp(0.5 * (lo + hi));
    let qv = v.conserved_quantities()?.q;
    Ok(v.scale(Complex64::new((q / qv).sqrt(), 0.0)))
}

fn real_inner(a: &[Complex64], b: &[Complex64], w: &[f64]) -> f64 {
    a.iter().zip(b).zip(w).map(|((x, y), w)| w * (x * y.conj()).re).sum()
}

/// Preconditioned constrained gradient of `M` at `u`: the component of `D u`
/// orthogonal to the constraint gradients `u` and `Pi(|u|^2 u)`.
fn constrained_gradient(u: &SpectralField, pre: &[f64]) -> Vec<Complex64> {
    let g = *u.grid();
    let a = u.amplitudes();
    let du: Vec<Complex64> = a.iter().enumerate().map(|(k, x)| x * g.xi(k)).collect();
    let n2 = u.cubic_projection();
    let n2 = n2.amplitudes();
    let m11 = real_inner(a, a, pre);
    let m12 = real_inner(a, n2, pre);
    let m22 = real_inner(n2, n2, pre);
    let r1 = real_inner(&du, a, pre);
    let r2 = real_inner(&du, n2, pre);
    let det = m11 * m22 - m12 * m12;
    let (l1, l2) = if det.abs() > 1e-300 * m11 * m22 {
        ((r1 * m22 - r2 * m12) / det, (m11 * r2 - m12 * r1) / det)
    } else {
        (r1 / m11, 0.0)
    };
    (0..a.len()).map(|k| (du[k] - a[k] * l1 - n2[k] * l2) * pre[k]).collect()
}

const ROUNDOFF_BAND: f64 = 1e-14;

fn gradient_norm(u: &SpectralField, pre: &[f64]) -> f64 {
    let grad = constrained_gradient(u, pre);
    (u.grid().length() * grad.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
}

/// Minimizes `M` on `{Q = q, E = e}` by preconditioned projected descent.
pub fn minimize_momentum(q: f64, e: f64, init: &SpectralField, opts: &MinimizeOptions) -> Result<Minimization> {
    if !(q.is_finite() && q > 0.0 && e.is_finite() && e > 0.0) {
        return Err(VariationalError::Infeasible(format!("need Q > 0 and E > 0, got Q={q}, E={e}")));
    }
    let grid = *init.grid();
    let pre: Vec<f64> = (0..grid.modes()).map(|k| 1.0 / (1.0 + grid.xi(k))).collect();
    let len = grid.length();
    let mut u = reproject(init, q, e)?;
    let mut m = u.conserved_quantities()?.m;
    let mut step = opts.initial_step;
    let mut history = Vec::new();
    for it in 0..=opts.max_iterations {
        let grad = constrained_gradient(&u, &pre);
        let gn = (len * grad.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        history.push(HistoryRow { iteration: it, m, gradient_norm: gn, step });
        if gn <= opts.gradient_tolerance {
            return Ok(Minimization { field: u, history, converged: true });
        }
        if it == opts.max_iterations {
            break;
        }
        loop {
            let trial = u.map_amplitudes(|k, a| a - grad[k] * step);
            if let Ok(v) = reproject(&trial, q, e) {
                let mv = v.conserved_quantities()?.m;
                // near the minimum M only moves at roundoff; then a smaller gradient decides
                let flat = mv <= m * (1.0 + ROUNDOFF_BAND) && gradient_norm(&v, &pre) < gn;
                if mv < m || flat {
                    u = v;
                    m = mv;
                    step = (step * 1.5).min(opts.max_step);
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-14 {
                return Ok(Minimization { field: u, history, converged: false });
            }
        }
    }
    Ok(Minimization { field: u, history, converged: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hardy_core::make_soliton;
    use std::f64::consts::PI;

    #[test]
    fn reprojection_hits_both_targets() {
        let g = FrequencyGrid::default();
        let u = random_initial_field(&g, 3).unwrap();
        for (q, e) in [(PI, PI / 2.0), (1.0, 0.05), (2.0, 3.0)] {
            let v = reproject(&u, q, e).unwrap();
            let c = v.conserved_quantities().unwrap();
            assert!((c.q - q).abs() < 1e-12 * q);
            assert!((c.e - e).abs() < 1e-9 * e, "{} {}", c.e, e);
        }
        assert!(reproject(&SpectralField::zeros(g), 1.0, 1.0).is_err());
    }

    #[test]
    fn soliton_is_stationary() {
        let g = FrequencyGrid::default();
        let (_, u) = make_soliton(Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0), &g).unwrap();
        let c = u.conserved_quantities().unwrap();
        let r = minimize_momentum(c.q, c.e, &u, &MinimizeOptions::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations(), 0);
    }

    #[test]
    fn rejects_bad_targets() {
        let g = FrequencyGrid::new(64.0, 512).unwrap();
        let u = random_initial_field(&g, 1).unwrap();
        assert!(minimize_momentum(0.0, 1.0, &u, &MinimizeOptions::default()).is_err());
        assert!(minimize_momentum(1.0, f64::INFINITY, &u, &MinimizeOptions::default()).is_err());
    }
}
