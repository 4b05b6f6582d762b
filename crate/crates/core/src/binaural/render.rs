use crate::dsp::convolve;
use crate::error::{Error, Result};
use crate::geometry::{Direction, LoudspeakerLayout};
use crate::signal::{axpy, MultichannelSignal};

use super::hrir::HrirSet;

/// Left and right ear signals.
#[derive(Debug, Clone, PartialEq)]
pub struct BinauralPair {
    pub sample_rate: u32,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl BinauralPair {
    pub fn new(sample_rate: u32, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::Shape {
                context: "binaural pair",
                expected: left.len(),
                got: right.len(),
            });
        }
        if left.iter().chain(&right).any(|v| !v.is_finite()) {
            return Err(Error::Metric("non-finite ear signal".into()));
        }
        Ok(Self { sample_rate, left, right })
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    pub fn peak(&self) -> f64 {
        self.left.iter().chain(&self.right).fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, k: f64) -> Self {
        let s = |x: &[f64]| x.iter().map(|v| v * k).collect();
        Self { sample_rate: self.sample_rate, left: s(&self.left), right: s(&self.right) }
    }

    /// Left and right exchanged.
    pub fn swapped(&self) -> Self {
        Self { sample_rate: self.sample_rate, left: self.right.clone(), right: self.left.clone() }
    }

    pub fn to_signal(&self) -> MultichannelSignal {
        MultichannelSignal::new(self.sample_rate, vec![self.left.clone(), self.right.clone()])
            .expect("ears have equal length")
    }
}

fn check_rate(signal: u32, hrir: &HrirSet) -> Result<()> {
    if signal != hrir.sample_rate() {
        return Err(Error::config(format!(
            "signal at {signal} Hz cannot use HRIRs at {} Hz",
            hrir.sample_rate()
        )));
    }
    Ok(())
}

/// `s` convolved with the HRIR pair nearest to `d`.
pub fn render_direct_reference(s: &[f64], sample_rate: u32, d: &Direction, h: &HrirSet) -> Result<BinauralPair> {
    check_rate(sample_rate, h)?;
    let (e, _) = h.lookup(d);
    BinauralPair::new(sample_rate, convolve(s, &e.left), convolve(s, &e.right))
}

/// Each feed convolved with the HRIRs of its loudspeaker, summed per ear.
pub fn render_virtual_loudspeakers(feeds: &MultichannelSignal, layout: &LoudspeakerLayout, h: &HrirSet) -> Result<BinauralPair> {
    check_rate(feeds.sample_rate(), h)?;
    if feeds.channels() != layout.len() {
        return Err(Error::Shape {
            context: "loudspeaker feeds",
            expected: layout.len(),
            got: feeds.channels(),
        });
    }
    let len = if feeds.is_empty() { 0 } else { feeds.len() + h.ir_len() - 1 };
    let mut left = vec![0.0; len];
    let mut right = vec![0.0; len];
    for (feed, d) in feeds.rows().iter().zip(layout.directions()) {
        if feed.iter().all(|&v| v == 0.0) {
            continue;
        }
        let (e, _) = h.lookup(d);
        axpy(&mut left, 1.0, &convolve(feed, &e.left));
        axpy(&mut right, 1.0, &convolve(feed, &e.right));
    }
    BinauralPair::new(feeds.sample_rate(), left, right)
}

/// Joint gain that brings the larger ear peak to `target_dbfs`.
pub fn peak_gain(p: &BinauralPair, target_dbfs: f64) -> Result<f64> {
    let peak = p.peak();
    if peak == 0.0 {
        return Err(Error::Normalization("cannot normalise a silent pair".into()));
    }
    Ok(10f64.powf(target_dbfs / 20.0) / peak)
}

pub fn normalize_peak(p: &BinauralPair, target_dbfs: f64) -> Result<BinauralPair> {
    Ok(p.scaled(peak_gain(p, target_dbfs)?))
}
