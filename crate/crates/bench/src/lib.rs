//! Shared fixtures for the benchmarks.

use swfeval_core::binaural::BinauralPair;
use swfeval_core::harness::generate_pink_noise;

pub const SAMPLE_RATE: u32 = 48_000;

/// 100 ms of pink noise.
pub fn programme() -> Vec<f64> {
    generate_pink_noise(0.1, SAMPLE_RATE, 1).expect("valid duration")
}

/// A decorrelated, attenuated and delayed ear pair.
pub fn ear_pair() -> BinauralPair {
    let left = programme();
    let mut right = vec![0.0; 12];
    right.extend(generate_pink_noise(0.1, SAMPLE_RATE, 2).expect("valid duration").iter().zip(&left).map(|(a, b)| 0.3 * a + 0.5 * b));
    right.truncate(left.len());
    BinauralPair::new(SAMPLE_RATE, left, right).expect("equal lengths")
}
