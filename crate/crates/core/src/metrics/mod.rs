//! Binaural cue and colouration metrics.

mod gammatone;
mod iacc;
mod psd;

pub use gammatone::{
    compute_ild, compute_ild_with, erb, erb_rate, erb_rate_inverse, erb_space, GammatoneBank,
    IldResult, BAND_COUNT, HF_LIMIT_HZ,
};
pub use iacc::{compute_iacc_itd, max_lag, IaccItdResult};
pub use psd::{
    compute_psd, phon_to_sone, phon_to_spl, psd_frequencies, sone_to_phon, spl_to_phon,
    PSD_FFT_LEN,
};

/// `system - reference`.
pub fn signed_error(system: f64, reference: f64) -> f64 {
    system - reference
}
