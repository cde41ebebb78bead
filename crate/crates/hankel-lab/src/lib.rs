//! Hankel and Toeplitz operators of Hardy fields and rational symbols.

pub mod corpus;
pub mod error;
pub mod identities;
pub mod isospectral;
pub mod operator;
pub mod spectra;
pub mod toeplitz;

pub use corpus::{rational_corpus, soliton_corpus};
pub use error::{HankelError, Result};
pub use identities::{
    default_field_size, h2_eigen_residual, lax_identity_residual, spectrum_au, traveling_wave_identity_residual,
    AuSpectrum,
};
pub use isospectral::{isospectral_drift, leading_values, HankelMonitor, IsospectralReport};
pub use operator::{
    hs_identity_rational, hs_identity_residual, hs_refinement, read_operator, write_operator, HankelOperator, OperatorMatrix, Provenance, MAX_OPERATOR_SIZE,
};
pub use spectra::{
    kronecker_range_check, leading_svd, range_residual, rank_estimate, sample_rows, singular_values, spectral_norm,
    takagi_values, KroneckerReport, LeadingSvd, RankReport, RANK_THRESHOLD,
};
pub use toeplitz::{pointwise_defect, ToeplitzOperator};
