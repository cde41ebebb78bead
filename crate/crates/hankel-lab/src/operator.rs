use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use faer::Mat;
use hardy_core::{RationalSymbol, SpectralField};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HankelError, Result};

/// Where the kernel values came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Closed-form transform of a rational symbol on midpoint nodes `(k + 1/2) h`.
    Rational,
    /// Exact lookup in a grid field: rows on `k dxi`, columns on `(k + 1/2) dxi`.
    Field,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Rational => "rational",
            Provenance::Field => "field",
        })
    }
}

impl FromStr for Provenance {
    type Err = HankelError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Provenance::Rational),
            "field" => Ok(Provenance::Field),
            other => Err(HankelError::Parameters(format!("unknown provenance `{other}`"))),
        }
    }
}

/// Dense complex-symmetric discretization `M_ij = (h / 2pi) u_hat(xi_i + eta_j)`.
///
/// Only the anti-diagonal generator `g_s = M_ij` (`s = i + j`) is stored. The
/// antilinear action is `H(h) = M conj(h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelOperator {
    cutoff: f64,
    size: usize,
    provenance: Provenance,
    generator: Vec<Complex64>,
}

fn check_size(size: usize) -> Result<()> {
    if size == 0 {
        return Err(HankelError::Parameters("operator size must be positive".into()));
    }
    Ok(())
}

impl HankelOperator {
    pub fn from_rational(sym: &RationalSymbol, cutoff: f64, size: usize) -> Result<Self> {
        check_size(size)?;
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(HankelError::Parameters(format!("cutoff must be positive, got {cutoff}")));
        }
        let h = cutoff / size as f64;
        let generator = (0..2 * size - 1).map(|s| sym.fourier((s as f64 + 1.0) * h) * (h / (2.0 * PI))).collect();
        Ok(Self { cutoff, size, provenance: Provenance::Rational, generator })
    }

    /// Exact torus Hankel matrix `M_kl = a_{k+l}`; needs `2K - 1 <= N/2`.
    pub fn from_field(u: &SpectralField, size: usize) -> Result<Self> {
        check_size(size)?;
        let modes = u.grid().modes();
        if 2 * size - 1 > modes {
            return Err(HankelError::UnderResolved(format!(
                "K={size} needs {} modes, field has {modes}",
                2 * size - 1
            )));
        }
        Ok(Self {
            cutoff: size as f64 * u.grid().dxi(),
            size,
            provenance: Provenance::Field,
            generator: u.amplitudes()[..2 * size - 1].to_vec(),
        })
    }

    /// Rebuilds an operator from an exported matrix, checking the Hankel structure.
    pub fn from_matrix(m: &OperatorMatrix) -> Result<Self> {
        check_size(m.size)?;
        if !(m.cutoff.is_finite() && m.cutoff > 0.0) {
            return Err(HankelError::Parameters(format!("cutoff must be positive, got {}", m.cutoff)));
        }
        let k = m.size;
        let mut generator = vec![Complex64::new(0.0, 0.0); 2 * k - 1];
        for s in 0..2 * k - 1 {
            let i0 = s.saturating_sub(k - 1);
            generator[s] = m.entries[i0 * k + (s - i0)];
        }
        for i in 0..k {
            for j in 0..k {
                if m.entries[i * k + j] != generator[i + j] {
                    return Err(HankelError::Parameters(format!("entry ({i},{j}) breaks the Hankel structure")));
                }
            }
        }
        Ok(Self { cutoff: m.cutoff, size: k, provenance: m.provenance, generator })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Node spacing `h = cutoff / K`.
    pub fn step(&self) -> f64 {
        self.cutoff / self.size as f64
    }

    pub fn row_nodes(&self) -> Vec<f64> {
        let h = self.step();
        match self.provenance {
            Provenance::Rational => (0..self.size).map(|k| (k as f64 + 0.5) * h).collect(),
            Provenance::Field => (0..self.size).map(|k| k as f64 * h).collect(),
        }
    }

    pub fn col_nodes(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.size).map(|k| (k as f64 + 0.5) * h).collect()
    }

    pub fn generator(&self) -> &[Complex64] {
        &self.generator
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.generator[i + j]
    }

    pub fn to_dense(&self) -> Mat<Complex64> {
        Mat::from_fn(self.size, self.size, |i, j| self.generator[i + j])
    }

    /// `M conj(h)`.
    pub fn apply(&self, h: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(h.len(), self.size, "vector length must match the operator size");
        (0..self.size)
            .map(|i| self.generator[i..i + self.size].iter().zip(h).map(|(g, x)| g * x.conj()).sum())
            .collect()
    }

    /// Frobenius norm from anti-diagonal multiplicities.
    pub fn hs_norm(&self) -> f64 {
        let k = self.size;
        self.generator
            .iter()
            .enumerate()
            .map(|(s, g)| (s.min(2 * k - 2 - s) + 1) as f64 * g.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { generator: self.generator.iter().map(|g| g * s).collect(), ..self.clone() }
    }

    pub fn to_matrix(&self) -> OperatorMatrix {
        let k = self.size;
        let entries = (0..k * k).map(|n| self.generator[n / k + n % k]).collect();
        OperatorMatrix { cutoff: self.cutoff, size: k, provenance: self.provenance, entries }
    }
}

/// `|HS - ||u||_{Hdot^{1/2}} / sqrt(2pi)| / max(HS, eps)`.
pub fn hs_identity_residual(hdot_half_norm: f64, h: &HankelOperator) -> f64 {
    let hs = h.hs_norm();
    let target = hdot_half_norm / (2.0 * PI).sqrt();
    (hs - target).abs() / hs.max(f64::MIN_POSITIVE)
}

/// HS residual of a rational operator against the exact `H^{1/2}` norm of its symbol.
pub fn hs_identity_rational(sym: &RationalSymbol, h: &HankelOperator) -> f64 {
    hs_identity_residual(sym.exact_m().sqrt(), h)
}

/// Residuals for `size, 2 size, 4 size, ...` at a fixed cutoff.
pub fn hs_refinement(sym: &RationalSymbol, cutoff: f64, size: usize, levels: usize) -> Result<Vec<f64>> {
    (0..levels)
        .map(|j| Ok(hs_identity_rational(sym, &HankelOperator::from_rational(sym, cutoff, size << j)?)))
        .collect()
}

/// Row-major dense operator as exchanged in the text format.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub cutoff: f64,
    pub size: usize,
    pub provenance: Provenance,
    pub entries: Vec<Complex64>,
}

/// Largest size accepted by [`read_operator`].
pub const MAX_OPERATOR_SIZE: usize = 1 << 13;

/// Text export: optional `#` comments, a `cutoff K provenance` header, then one
/// `re im` line per entry in row-major order.
pub fn write_operator(m: &OperatorMatrix, comments: &[String]) -> String {
    let mut s = String::with_capacity(44 * m.entries.len() + 64);
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(s, "# {line}");
        }
    }
    let _ = writeln!(s, "{:?} {} {}", m.cutoff, m.size, m.provenance);
    for e in &m.entries {
        let _ = writeln!(s, "{:?} {:?}", e.re, e.im);
    }
    s
}

fn perr(line: usize, msg: impl Into<String>) -> HankelError {
    HankelError::Parse { line, msg: msg.into() }
}

fn num(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(perr(line, format!("bad number `{tok}`"))),
    }
}

pub fn read_operator(text: &str) -> Result<OperatorMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| perr(0, "missing header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(perr(hl, "header must be `cutoff K provenance`"));
    }
    let cutoff = num(toks[0], hl)?;
    if cutoff <= 0.0 {
        return Err(perr(hl, "cutoff must be positive"));
    }
    let size: usize = toks[1].parse().map_err(|_| perr(hl, format!("bad size `{}`", toks[1])))?;
    if size == 0 || size > MAX_OPERATOR_SIZE {
        return Err(perr(hl, format!("size must be in 1..={MAX_OPERATOR_SIZE}")));
    }
    let provenance: Provenance = toks[2].parse().map_err(|e: HankelError| perr(hl, e.to_string()))?;
    let expected = size * size;
    let mut entries = Vec::new();
    for (ln, line) in lines {
        if entries.len() == expected {
            return Err(perr(ln, "trailing data after the last entry"));
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(perr(ln, "entry line must be `re im`"));
        }
        entries.push(Complex64::new(num(toks[0], ln)?, num(toks[1], ln)?));
    }
    if entries.len() != expected {
        return Err(perr(0, format!("expected {expected} entries, found {}", entries.len())));
    }
    Ok(OperatorMatrix { cutoff, size, provenance, entries })
}
