//! Sample-rate-tagged audio buffers.

use crate::error::{Error, Result};

/// A matrix of samples with one row per channel.
///
/// Every row has the same length. Rows are loudspeaker feeds, ambisonic
/// channels or ear signals depending on context.
#[derive(Debug, Clone, PartialEq)]
pub struct MultichannelSignal {
    sample_rate: u32,
    rows: Vec<Vec<f64>>,
}

impl MultichannelSignal {
    pub fn new(sample_rate: u32, rows: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = rows.first() {
            let len = first.len();
            if let Some(bad) = rows.iter().find(|r| r.len() != len) {
                return Err(Error::Shape {
                    context: "multichannel signal rows",
                    expected: len,
                    got: bad.len(),
                });
            }
        }
        Ok(Self { sample_rate, rows })
    }

    pub fn silent(sample_rate: u32, channels: usize, len: usize) -> Self {
        Self {
            sample_rate,
            rows: vec![vec![0.0; len]; channels],
        }
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn channels(&self) -> usize {
        self.rows.len()
    }

    /// Number of samples per channel.
    pub fn len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<f64>> {
        self.rows
    }

    pub fn is_silent(&self) -> bool {
        self.rows.iter().flatten().all(|&x| x == 0.0)
    }

    pub fn peak(&self) -> f64 {
        self.rows.iter().flatten().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// Outer product `gains ⊗ s`: one row per gain.
    pub fn from_gains(sample_rate: u32, gains: &[f64], s: &[f64]) -> Self {
        let rows = gains
            .iter()
            .map(|&g| s.iter().map(|&x| g * x).collect())
            .collect();
        Self { sample_rate, rows }
    }
}

/// `dst += a * src`, element-wise over the common length.
pub(crate) fn axpy(dst: &mut [f64], a: f64, src: &[f64]) {
    if a == 0.0 {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d += a * s;
    }
}
