use faer::{Mat, MatRef};
use hardy_core::RationalSymbol;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HankelError, Result};
use crate::operator::HankelOperator;

/// Default relative rank threshold.
pub const RANK_THRESHOLD: f64 = 1e-8;

const OVERSAMPLE: usize = 6;
const MAX_SWEEPS: usize = 200;
const SEED: u64 = 0x5eed_4a4e;

/// All singular values of the complex-symmetric matrix, descending. These are the
/// Takagi values of the antilinear operator.
pub fn takagi_values(h: &HankelOperator) -> Result<Vec<f64>> {
    singular_values(h.to_dense().as_ref())
}

pub fn singular_values(m: MatRef<'_, Complex64>) -> Result<Vec<f64>> {
    m.singular_values().map_err(|e| HankelError::Decomposition(format!("{e:?}")))
}

/// Leading part of an SVD from block subspace iteration.
#[derive(Debug, Clone)]
pub struct LeadingSvd {
    /// Descending estimates of the `count` largest singular values.
    pub values: Vec<f64>,
    /// Matching left singular vectors as columns.
    pub left: Mat<Complex64>,
    pub sweeps: usize,
}

fn thin_q(m: &Mat<Complex64>) -> Mat<Complex64> {
    m.qr().compute_thin_Q()
}

/// Largest `count` singular values and left vectors of `m`. Converges when the
/// leading values stop changing at roundoff level relative to the largest.
pub fn leading_svd(m: MatRef<'_, Complex64>, count: usize) -> Result<LeadingSvd> {
    let (rows, cols) = (m.nrows(), m.ncols());
    let count = count.min(rows.min(cols));
    let p = (count + OVERSAMPLE).min(rows.min(cols));
    if count == 0 || m.norm_l2() == 0.0 {
        return Ok(LeadingSvd { values: vec![0.0; count], left: Mat::zeros(rows, count), sweeps: 0 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut x = Mat::<Complex64>::from_fn(cols, p, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let mut prev: Vec<f64> = Vec::new();
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let q = thin_q(&(m * &x));
        let z: Mat<Complex64> = m.adjoint() * &q;
        // z^H = q^H m, so the small SVD of z^H gives the Ritz values
        let b: Mat<Complex64> = z.adjoint().to_owned();
        let svd = b.thin_svd().map_err(|e| HankelError::Decomposition(format!("{e:?}")))?;
        let vals: Vec<f64> = svd.S().column_vector().iter().map(|s| s.re).collect();
        let scale = vals[0].max(f64::MIN_POSITIVE);
        let done = prev.len() == vals.len()
            && vals.iter().zip(&prev).take(count).all(|(a, b)| (a - b).abs() <= 1e-15 * scale);
        if done || sweeps >= MAX_SWEEPS {
            let left: Mat<Complex64> = &q * svd.U();
            let left = left.subcols(0, count).to_owned();
            return Ok(LeadingSvd { values: vals[..count].to_vec(), left, sweeps });
        }
        prev = vals;
        x = thin_q(&z);
    }
}

/// `||v - U U^H v|| / ||v||` for orthonormal columns `U`.
pub fn range_residual(basis: MatRef<'_, Complex64>, v: &[Complex64]) -> f64 {
    let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nv == 0.0 {
        return 0.0;
    }
    let mut r = v.to_vec();
    for j in 0..basis.ncols() {
        let col = basis.col(j);
        let c: Complex64 = (0..v.len()).map(|i| col[i].conj() * v[i]).sum();
        for (i, ri) in r.iter_mut().enumerate() {
            *ri -= col[i] * c;
        }
    }
    r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / nv
}

/// Operator 2-norm.
pub fn spectral_norm(m: MatRef<'_, Complex64>) -> Result<f64> {
    Ok(leading_svd(m, 1)?.values.first().copied().unwrap_or(0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    /// Leading singular values (at least `rank + 1` when available).
    pub values: Vec<f64>,
    /// `s_rank / bound(s_{rank+1})`, where the bound is the Frobenius norm of the
    /// residual after projecting onto the leading `rank` left vectors.
    pub gap_ratio: f64,
}

/// Count of singular values above `tau * s_1`.
pub fn rank_estimate(h: &HankelOperator, tau: f64) -> Result<RankReport> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(HankelError::Parameters(format!("rank threshold must lie in (0,1), got {tau}")));
    }
    let m = h.to_dense();
    let k = h.size();
    let mut count = 8.min(k);
    loop {
        let lead = leading_svd(m.as_ref(), count)?;
        let s1 = lead.values[0];
        if s1 == 0.0 {
            return Ok(RankReport { rank: 0, values: lead.values, gap_ratio: f64::INFINITY });
        }
        let rank = lead.values.iter().filter(|&&s| s > tau * s1).count();
        if rank < count || count == k {
            let u = lead.left.subcols(0, rank).to_owned();
            let resid: Mat<Complex64> = &m - &u * (u.adjoint() * &m);
            let tail = resid.norm_l2();
            let gap_ratio = if rank == 0 { 0.0 } else { lead.values[rank - 1] / tail.max(f64::MIN_POSITIVE) };
            return Ok(RankReport { rank, values: lead.values, gap_ratio });
        }
        count = (2 * count).min(k);
    }
}

/// Samples of a symbol's transform on the operator's row nodes.
pub fn sample_rows(sym: &RationalSymbol, h: &HankelOperator) -> Vec<Complex64> {
    h.row_nodes().iter().map(|&xi| sym.fourier(xi)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KroneckerReport {
    pub expected_rank: usize,
    pub rank: usize,
    pub gap_ratio: f64,
    /// Residuals of `1/(z - p_j)^m` against the leading left singular space.
    pub basis_residuals: Vec<f64>,
    /// Residual of the symbol itself.
    pub symbol_residual: f64,
    pub pass: bool,
}

/// Range check against the leading `degree` left singular vectors.
pub fn kronecker_range_check(sym: &RationalSymbol, h: &HankelOperator, tau: f64) -> Result<KroneckerReport> {
    let n = sym.degree();
    let rank = rank_estimate(h, tau)?;
    let lead = leading_svd(h.to_dense().as_ref(), n.max(1))?;
    let basis = lead.left.subcols(0, n);
    let basis_residuals: Vec<f64> =
        sym.range_basis().iter().map(|b| range_residual(basis, &sample_rows(b, h))).collect();
    let symbol_residual = range_residual(basis, &sample_rows(sym, h));
    let pass = rank.rank == n && basis_residuals.iter().all(|r| *r <= 1e-6) && symbol_residual <= 1e-6;
    Ok(KroneckerReport {
        expected_rank: n,
        rank: rank.rank,
        gap_ratio: rank.gap_ratio,
        basis_residuals,
        symbol_residual,
        pass,
    })
}
