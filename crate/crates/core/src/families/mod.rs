//! Closed-form wavelet families and the moment statements attached to them.

pub mod gram;
pub mod haar_type;
pub mod non_haar;
pub mod riesz;

pub use gram::{gram_spectrum_estimate, SpectrumReport};
pub use haar_type::{
    haar_mask_at_level, haar_type_alphas, haar_type_filter, haar_type_from_filter, haar_type_moment_criterion,
    haar_type_wavelets, psi_nu_zero, HaarTypeMomentRow, HaarTypeParams, HaarTypeWavelet,
};
pub use non_haar::{
    jpm, non_haar_alphas, non_haar_moment_check, non_haar_wavelet, same_profile, theta_wavelet, NonHaarParams,
    NonHaarReport, NonHaarRow,
};
pub use riesz::{
    riesz_admissible, riesz_expected_patterns, riesz_grid_patterns, riesz_index_sets, riesz_mask, riesz_masks,
    riesz_moment_criterion, riesz_phi_hat_at, riesz_system, RieszAdmissibility, RieszMomentReport, RieszSystem,
};
