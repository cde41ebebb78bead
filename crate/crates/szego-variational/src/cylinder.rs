use std::f64::consts::PI;

use hardy_core::{make_soliton, synthesize, Complex64, FrequencyGrid, NormKind, SpectralField};
use serde::{Deserialize, Serialize};
use szego_dynamics::Monitor;

use crate::error::{Result, VariationalError};

/// The orbit `{alpha / (x - p) : |alpha| = a, Im p = -r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderSpec {
    pub a: f64,
    pub r: f64,
}

impl CylinderSpec {
    pub fn new(a: f64, r: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && r.is_finite() && r > 0.0) {
            return Err(VariationalError::InvalidCylinder(format!("need a > 0 and r > 0, got a={a}, r={r}")));
        }
        Ok(Self { a, r })
    }

    /// Cylinder whose elements have the given mass and quartic energy.
    pub fn from_targets(q: f64, e: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0 && e.is_finite() && e > 0.0) {
            return Err(VariationalError::Infeasible(format!("need Q > 0 and E > 0, got Q={q}, E={e}")));
        }
        let r = q * q / (2.0 * PI * e);
        Self::new((q * r / PI).sqrt(), r)
    }

    pub fn q(&self) -> f64 {
        PI * self.a * self.a / self.r
    }

    pub fn e(&self) -> f64 {
        PI * self.a.powi(4) / (2.0 * self.r.powi(3))
    }

    pub fn m(&self) -> f64 {
        PI * self.a * self.a / (2.0 * self.r * self.r)
    }

    /// `e^{i theta} a / (x - x0 + i r)` on the grid.
    pub fn element(&self, grid: &FrequencyGrid, theta: f64, x0: f64) -> Result<SpectralField> {
        let amp = Complex64::from_polar(self.a, theta);
        Ok(make_soliton(amp, Complex64::new(x0, -self.r), grid)?.1)
    }
}

/// `pi E / (M Q)`, at most one by the sharp Gagliardo-Nirenberg inequality.
pub fn gn_ratio(u: &SpectralField) -> Result<f64> {
    let c = u.conserved_quantities()?;
    if c.q == 0.0 || c.m == 0.0 {
        return Err(VariationalError::ZeroField);
    }
    Ok(PI * c.e / (c.m * c.q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderDistance {
    pub distance: f64,
    /// In `[0, 2 pi)`.
    pub theta: f64,
    pub x0: f64,
}

const NORM: NormKind = NormKind::Sobolev(0.5);
const GOLDEN_STEPS: usize = 80;
const NEWTON_STEPS: usize = 3;

/// `inf ||v - e^{i theta} a/(x - x0 + i r)||` in the inhomogeneous `H^{1/2}` norm.
pub fn cylinder_distance(v: &SpectralField, spec: &CylinderSpec) -> Result<CylinderDistance> {
    let grid = *v.grid();
    let phi = spec.element(&grid, 0.0, 0.0)?;
    if v.is_zero() {
        let d = hardy_core::norm(&phi, NORM)?;
        return Ok(CylinderDistance { distance: d, theta: 0.0, x0: 0.0 });
    }
    // <v, phi(. - x0)> = sum_k c_k e^{i xi_k x0}
    let coeffs: Vec<Complex64> = (0..grid.modes())
        .map(|k| v.amplitudes()[k] * phi.amplitudes()[k].conj() * (NORM.weight(grid.xi(k)) * grid.length()))
        .collect();
    let corr = |x0: f64| -> Complex64 {
        coeffs.iter().enumerate().map(|(k, c)| c * Complex64::from_polar(1.0, grid.xi(k) * x0)).sum()
    };
    let n = grid.num_points();
    let sampled = synthesize(&coeffs, n);
    let best = (0..n).max_by(|&i, &j| sampled[i].norm().total_cmp(&sampled[j].norm())).unwrap_or(0);
    let dx = grid.dx();
    let (mut lo, mut hi) = (grid.x(best) - dx, grid.x(best) + dx);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (corr(x1).norm(), corr(x2).norm());
    for _ in 0..GOLDEN_STEPS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = corr(x2).norm();
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = corr(x1).norm();
        }
    }
    let mut x0 = 0.5 * (lo + hi);
    if corr(x0).norm() < sampled[best].norm() {
        x0 = grid.x(best);
    }
    // comparing values locates a flat maximum only to sqrt(eps); finish with Newton on d|S|^2/dx
    for _ in 0..NEWTON_STEPS {
        let (mut s0, mut s1, mut s2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (k, c) in coeffs.iter().enumerate() {
            let xi = grid.xi(k);
            let t = c * Complex64::from_polar(1.0, xi * x0);
            s0 += t;
            s1 += t * Complex64::new(0.0, xi);
            s2 -= t * (xi * xi);
        }
        let f = (s0.conj() * s1).re;
        let df = s1.norm_sqr() + (s0.conj() * s2).re;
        if !(df < 0.0) {
            break;
        }
        let next = x0 - f / df;
        if !((next - x0).abs() <= dx) {
            break;
        }
        x0 = next;
    }
    let mut theta = corr(x0).arg().rem_euclid(2.0 * PI);
    if theta >= 2.0 * PI {
        theta = 0.0;
    }
    let fit = spec.element(&grid, theta, x0)?;
    let distance = hardy_core::norm(&v.sub(&fit)?, NORM)?;
    Ok(CylinderDistance { distance, theta, x0 })
}

/// Distance to a fixed cylinder at snapshot times.
pub struct CylinderMonitor {
    pub spec: CylinderSpec,
}

impl Monitor for CylinderMonitor {
    fn columns(&self) -> Vec<String> {
        vec!["dist_cyl".into(), "theta_opt".into(), "x0_opt".into()]
    }

    fn observe(&mut self, _t: f64, u: &SpectralField) -> std::result::Result<Vec<f64>, String> {
        let d = cylinder_distance(u, &self.spec).map_err(|e| e.to_string())?;
        Ok(vec![d.distance, d.theta, d.x0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hardy_core::{synth_rational, RationalSymbol};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn invariants_of_the_cylinder() {
        for (a, r) in [(1.0, 1.0), (2.0, 0.5), (0.3, 3.0)] {
            let s = CylinderSpec::new(a, r).unwrap();
            assert!((s.e() - s.q() * s.q() / (2.0 * PI * r)).abs() < 1e-12 * s.e());
            assert!((s.m() * s.q() - PI * s.e()).abs() < 1e-12 * s.e());
            let back = CylinderSpec::from_targets(s.q(), s.e()).unwrap();
            assert!((back.a - a).abs() < 1e-12 && (back.r - r).abs() < 1e-12);
        }
        assert!(CylinderSpec::new(0.0, 1.0).is_err());
        assert!(CylinderSpec::new(1.0, f64::NAN).is_err());
        assert!(CylinderSpec::from_targets(-1.0, 1.0).is_err());
    }

    #[test]
    fn gn_ratio_values() {
        let g = FrequencyGrid::default();
        let (_, u) = make_soliton(c(0.7, 0.2), c(1.0, -1.3), &g).unwrap();
        assert!((gn_ratio(&u).unwrap() - 1.0).abs() < 1e-6);
        let v = synth_rational(&RationalSymbol::power(c(0.0, -1.0), 2).unwrap(), &g);
        assert!((gn_ratio(&v).unwrap() - 5.0 / 6.0).abs() < 1e-4);
        assert!(matches!(gn_ratio(&SpectralField::zeros(g)), Err(VariationalError::ZeroField)));
    }

    #[test]
    fn recovers_a_cylinder_member() {
        let g = FrequencyGrid::default();
        let spec = CylinderSpec::new(1.0, 1.0).unwrap();
        let v = spec.element(&g, 0.7, 3.0).unwrap();
        let d = cylinder_distance(&v, &spec).unwrap();
        assert!(d.distance <= 1e-6, "{d:?}");
        assert!((d.theta - 0.7).abs() < 1e-6 && (d.x0 - 3.0).abs() < 1e-6, "{d:?}");
    }

    #[test]
    fn zero_field_is_at_the_cylinder_norm() {
        let g = FrequencyGrid::new(64.0, 512).unwrap();
        let spec = CylinderSpec::new(1.0, 1.0).unwrap();
        let d = cylinder_distance(&SpectralField::zeros(g), &spec).unwrap();
        let n = hardy_core::norm(&spec.element(&g, 0.0, 0.0).unwrap(), NORM).unwrap();
        assert_eq!(d.distance, n);
    }
}
