//! Spherical wavelet framework: lifting-scheme wavelets on the octahedron
//! subdivision hierarchy.

mod codec;
mod lifting;

pub use codec::{
    default_target_level, remap_matrix, swf_analysis, swf_encode, swf_render, swf_synthesis,
    swf_truncate, RemapMode, SwfOptions, SwfRenderer, WaveletCoeffs, DEFAULT_FINEST_LEVEL,
};
pub use lifting::{LevelTopology, LiftingFilter, LiftingKind, PredictUpdate, UpdateFirst};
