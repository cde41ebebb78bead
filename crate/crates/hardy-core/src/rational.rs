use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::field::SpectralField;
use crate::grid::FrequencyGrid;

/// Principal part at one pole: `sum_m coeffs[m-1] / (z - pole)^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl PoleTerm {
    pub fn new(pole: Complex64, coeffs: Vec<Complex64>) -> Self {
        Self { pole, coeffs }
    }

    pub fn multiplicity(&self) -> usize {
        self.coeffs.len()
    }
}

/// Rational function with poles in the lower half-plane, in partial-fraction form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PoleTerm>", into = "Vec<PoleTerm>")]
pub struct RationalSymbol {
    terms: Vec<PoleTerm>,
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

impl RationalSymbol {
    pub fn new(terms: Vec<PoleTerm>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if !finite(t.pole) || t.pole.im >= 0.0 {
                return Err(HardyError::PoleNotInLowerHalfPlane(format!("{}", t.pole)));
            }
            match t.coeffs.last() {
                None => return Err(HardyError::InvalidSymbol(format!("pole {} has no coefficients", t.pole))),
                Some(c) if c.norm() == 0.0 => {
                    return Err(HardyError::InvalidSymbol(format!("pole {} has zero top coefficient", t.pole)))
                }
                _ => {}
            }
            if !t.coeffs.iter().all(|c| finite(*c)) {
                return Err(HardyError::InvalidSymbol(format!("pole {} has non-finite coefficient", t.pole)));
            }
            if terms[..i].iter().any(|o| o.pole == t.pole) {
                return Err(HardyError::InvalidSymbol(format!("pole {} repeated", t.pole)));
            }
        }
        Ok(Self { terms })
    }

    /// `c / (z - p)`.
    pub fn simple(c: Complex64, p: Complex64) -> Result<Self> {
        Self::new(vec![PoleTerm::new(p, vec![c])])
    }

    /// `1 / (z - p)^m`.
    pub fn power(p: Complex64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(HardyError::InvalidSymbol("power must be positive".into()));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); m];
        coeffs[m - 1] = Complex64::new(1.0, 0.0);
        Self::new(vec![PoleTerm::new(p, coeffs)])
    }

    pub fn terms(&self) -> &[PoleTerm] {
        &self.terms
    }

    /// Total degree `N = sum m_j`.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(PoleTerm::multiplicity).sum()
    }

    /// Range basis `1/(z - p_j)^m`, `m = 1..=m_j`.
    pub fn range_basis(&self) -> Vec<RationalSymbol> {
        self.terms
            .iter()
            .flat_map(|t| (1..=t.multiplicity()).map(move |m| Self::power(t.pole, m).expect("validated pole")))
            .collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let w = 1.0 / (z - t.pole);
            let mut pw = w;
            for c in &t.coeffs {
                s += c * pw;
                pw *= w;
            }
        }
        s
    }

    /// Spectral form `(alpha, n, p)`: `u_hat(xi) = sum alpha xi^n e^{-i p xi}` for `xi > 0`.
    fn spectral_terms(&self) -> Vec<(Complex64, usize, Complex64)> {
        let mut out = Vec::new();
        for t in &self.terms {
            let mut unit = Complex64::new(0.0, -2.0 * PI);
            for (idx, c) in t.coeffs.iter().enumerate() {
                out.push((c * unit / factorial(idx), idx, t.pole));
                unit *= Complex64::new(0.0, -1.0);
            }
        }
        out
    }

    /// Fourier transform `int e^{-i x xi} u(x) dx`; zero for `xi < 0`.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        if xi < 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.spectral_terms()
            .iter()
            .map(|(a, n, p)| a * xi.powi(*n as i32) * (Complex64::new(0.0, -xi) * p).exp())
            .sum()
    }

    /// `(1/2pi) int_0^inf xi^extra |u_hat|^2` in closed form.
    fn spectral_moment(&self, extra: usize) -> f64 {
        let terms = self.spectral_terms();
        let mut s = Complex64::new(0.0, 0.0);
        for (a1, n1, p1) in &terms {
            for (a2, n2, p2) in &terms {
                let n = n1 + n2 + extra;
                let sigma = Complex64::new(0.0, 1.0) * (p1 - p2.conj());
                s += a1 * a2.conj() * factorial(n) / sigma.powi(n as i32 + 1);
            }
        }
        s.re / (2.0 * PI)
    }

    /// `Q = int |u|^2` on the line.
    pub fn exact_q(&self) -> f64 {
        self.spectral_moment(0)
    }

    /// `M = (1/2pi) int xi |u_hat|^2` on the line.
    pub fn exact_m(&self) -> f64 {
        self.spectral_moment(1)
    }

    /// `E = int |u|^4 = Q(u^2)` on the line.
    pub fn exact_e(&self) -> f64 {
        self.product(self).spectral_moment(0)
    }

    /// Partial-fraction form of the product. The result may have vanishing top
    /// coefficients, so it is only used for closed-form integrals.
    fn product(&self, other: &Self) -> Self {
        let mut acc: Vec<PoleTerm> = Vec::new();
        let mut add = |pole: Complex64, order: usize, c: Complex64| {
            let idx = match acc.iter().position(|t| t.pole == pole) {
                Some(i) => i,
                None => {
                    acc.push(PoleTerm::new(pole, Vec::new()));
                    acc.len() - 1
                }
            };
            let coeffs = &mut acc[idx].coeffs;
            if coeffs.len() < order {
                coeffs.resize(order, Complex64::new(0.0, 0.0));
            }
            coeffs[order - 1] += c;
        };
        for t in &self.terms {
            for (i, c1) in t.coeffs.iter().enumerate() {
                let m = i + 1;
                for s in &other.terms {
                    for (j, c2) in s.coeffs.iter().enumerate() {
                        let n = j + 1;
                        let c = c1 * c2;
                        let (a, b) = (t.pole, s.pole);
                        if a == b {
                            add(a, m + n, c);
                            continue;
                        }
                        // 1/((z-a)^m (z-b)^n): Taylor coefficients of (z-b)^{-n} at a, and symmetrically
                        for k in 0..m {
                            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                            add(a, m - k, c * sign * binomial(n + k - 1, k) * (a - b).powi(-((n + k) as i32)));
                        }
                        for k in 0..n {
                            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                            add(b, n - k, c * sign * binomial(m + k - 1, k) * (b - a).powi(-((m + k) as i32)));
                        }
                    }
                }
            }
        }
        Self { terms: acc }
    }
}

impl TryFrom<Vec<PoleTerm>> for RationalSymbol {
    type Error = HardyError;
    fn try_from(terms: Vec<PoleTerm>) -> Result<Self> {
        Self::new(terms)
    }
}

impl From<RationalSymbol> for Vec<PoleTerm> {
    fn from(s: RationalSymbol) -> Self {
        s.terms
    }
}

/// Grid field with amplitudes `u_hat(xi_k) / L` taken from the closed-form transform.
pub fn synth_rational(sym: &RationalSymbol, grid: &FrequencyGrid) -> SpectralField {
    let l = grid.length();
    let amps = (0..grid.modes()).map(|k| sym.fourier(grid.xi(k)) / l).collect();
    SpectralField::new(*grid, amps).expect("length matches grid")
}
