//! Ambisonics and spherical-wavelet sound-field rendering with binaural
//! evaluation.

pub mod ambisonics;
pub mod binaural;
pub mod dsp;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod render;
pub mod signal;
pub mod swf;
pub mod vectors;

pub use error::{Error, Result};
pub use binaural::{BinauralPair, HrirSet};
pub use geometry::{Direction, LayoutName, LoudspeakerLayout, TriMeshHierarchy};
pub use render::{System, SystemRenderer, Technique};
pub use harness::{ExperimentConfig, MetricRecord};
pub use signal::MultichannelSignal;
pub use vectors::{analyze_gains, analyze_rendering, SpreadFormula, VectorAnalysis};
