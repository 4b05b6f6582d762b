//! Spherical-harmonic encoding and dual-band loudspeaker decoding.

mod decoder;
mod sh;

pub use decoder::{
    decoder_maxre, decoder_pinv, dual_band_decode, maxre_weights, AmbisonicDecoder, Band,
    DecoderMatrix, DEFAULT_CROSSOVER_HZ,
};
pub use sh::{
    acn, channel_count, degree_of, encode_plane_wave, legendre, sh_eval, Normalisation, ShSignal,
};
