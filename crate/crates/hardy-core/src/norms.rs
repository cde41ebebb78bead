use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::field::SpectralField;

/// Norms with the `1/2pi` Fourier convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NormKind {
    L2,
    L4,
    /// Homogeneous `H^{1/2}`; its square is `M(u)`.
    HomogeneousHalf,
    /// Inhomogeneous `H^s` with weight `(1 + xi^2)^s`.
    Sobolev(f64),
}

impl NormKind {
    pub fn weight(&self, xi: f64) -> f64 {
        match *self {
            NormKind::L2 | NormKind::L4 => 1.0,
            NormKind::HomogeneousHalf => xi.abs(),
            NormKind::Sobolev(s) => (1.0 + xi * xi).powf(s),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::L2 => write!(f, "l2"),
            NormKind::L4 => write!(f, "l4"),
            NormKind::HomogeneousHalf => write!(f, "homogeneous-half"),
            NormKind::Sobolev(s) => write!(f, "sobolev({s})"),
        }
    }
}

impl FromStr for NormKind {
    type Err = HardyError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "l2" => return Ok(NormKind::L2),
            "l4" => return Ok(NormKind::L4),
            "homogeneous-half" | "hdot-half" => return Ok(NormKind::HomogeneousHalf),
            _ => {}
        }
        let inner = t
            .strip_prefix("sobolev(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| HardyError::UnknownNorm(s.to_string()))?;
        let order: f64 = inner.trim().parse().map_err(|_| HardyError::UnknownNorm(s.to_string()))?;
        if !(order.is_finite() && order >= 0.0) {
            return Err(HardyError::UnknownNorm(s.to_string()));
        }
        Ok(NormKind::Sobolev(order))
    }
}

impl TryFrom<String> for NormKind {
    type Error = HardyError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<NormKind> for String {
    fn from(k: NormKind) -> String {
        k.to_string()
    }
}

pub fn norm(u: &SpectralField, kind: NormKind) -> Result<f64> {
    u.check_finite()?;
    match kind {
        NormKind::L4 => Ok(u.conserved_quantities()?.e.powf(0.25)),
        _ => Ok(weighted_inner(u, u, kind)?.re.max(0.0).sqrt()),
    }
}

/// `(1/2pi) int w(xi) u_hat conj(v_hat)` for the Hilbert norms; for `L4` the `L2`
/// inner product is returned.
pub fn weighted_inner(u: &SpectralField, v: &SpectralField, kind: NormKind) -> Result<Complex64> {
    u.grid().ensure_same(v.grid())?;
    let g = u.grid();
    let s: Complex64 = u
        .amplitudes()
        .iter()
        .zip(v.amplitudes())
        .enumerate()
        .map(|(k, (a, b))| a * b.conj() * kind.weight(g.xi(k)))
        .sum();
    Ok(s * g.length())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FrequencyGrid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_and_display_roundtrip() {
        for k in [NormKind::L2, NormKind::L4, NormKind::HomogeneousHalf, NormKind::Sobolev(0.5)] {
            assert_eq!(k.to_string().parse::<NormKind>().unwrap(), k);
        }
        assert_eq!(" L2 ".parse::<NormKind>().unwrap(), NormKind::L2);
        assert!("h3".parse::<NormKind>().is_err());
        assert!("sobolev(-1)".parse::<NormKind>().is_err());
        assert!("sobolev(nan)".parse::<NormKind>().is_err());
        assert!("sobolev(1".parse::<NormKind>().is_err());
    }

    #[test]
    fn sobolev_zero_is_l2() {
        let g = FrequencyGrid::new(30.0, 128).unwrap();
        let u = SpectralField::random_band_limited(g, 40, &mut ChaCha8Rng::seed_from_u64(1));
        let a = norm(&u, NormKind::L2).unwrap();
        let b = norm(&u, NormKind::Sobolev(0.0)).unwrap();
        assert!((a - b).abs() <= 1e-14 * a);
    }

    #[test]
    fn single_mode_parseval() {
        let g = FrequencyGrid::new(30.0, 128).unwrap();
        let amp = Complex64::new(0.3, -0.4);
        let u = SpectralField::mode(g, 5, amp);
        let n = norm(&u, NormKind::L2).unwrap();
        assert!((n - amp.norm() * 30f64.sqrt()).abs() < 1e-14);
        let phys: f64 = u.samples().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.dx();
        assert!((phys.sqrt() - n).abs() < 1e-12);
    }

    #[test]
    fn homogeneous_half_squared_is_momentum() {
        let g = FrequencyGrid::new(30.0, 128).unwrap();
        let u = SpectralField::random_band_limited(g, 40, &mut ChaCha8Rng::seed_from_u64(2));
        let h = norm(&u, NormKind::HomogeneousHalf).unwrap();
        let m = u.conserved_quantities().unwrap().m;
        assert!((h * h - m).abs() <= 1e-13 * m);
    }
}
