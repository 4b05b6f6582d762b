use nalgebra::{DMatrix, DVector};

use super::sh::{channel_count, degree_of, legendre, sh_eval, ShSignal};
use crate::dsp::SosFilter;
use crate::error::{Error, Result};
use crate::geometry::{load_layout, Direction, LayoutName, LoudspeakerLayout};
use crate::signal::{axpy, MultichannelSignal};

/// Singular values below this fraction of the largest are discarded.
const PINV_RCOND: f64 = 1e-10;

pub const DEFAULT_CROSSOVER_HZ: f64 = 800.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Low,
    High,
}

/// Loudspeaker gains, one row per loudspeaker and one column per ambisonic
/// channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderMatrix {
    pub layout: String,
    pub order: usize,
    pub band: Band,
    pub gains: DMatrix<f64>,
}

impl DecoderMatrix {
    pub fn loudspeakers(&self) -> usize {
        self.gains.nrows()
    }

    /// Loudspeaker gains for a plane wave from `d`.
    pub fn gains_for(&self, d: &Direction) -> Vec<f64> {
        let y = DVector::from_vec(sh_eval(self.order, d));
        (&self.gains * y).iter().copied().collect()
    }
}

/// `(order+1)² × L` matrix of harmonics at the loudspeaker directions.
fn sh_matrix(layout: &LoudspeakerLayout, order: usize) -> DMatrix<f64> {
    let q = channel_count(order);
    let mut y = DMatrix::zeros(q, layout.len());
    for (i, d) in layout.directions().iter().enumerate() {
        for (k, v) in sh_eval(order, d).into_iter().enumerate() {
            y[(k, i)] = v;
        }
    }
    y
}

fn check_size(layout: &LoudspeakerLayout, order: usize) -> Result<()> {
    if layout.len() < channel_count(order) {
        return Err(Error::config(format!(
            "layout `{}` has {} loudspeakers, order {order} needs at least {}",
            layout.name(),
            layout.len(),
            channel_count(order)
        )));
    }
    Ok(())
}

/// Mode-matching decoder `pinv(Y)` computed by SVD.
pub fn decoder_pinv(layout: &LoudspeakerLayout, order: usize) -> Result<DecoderMatrix> {
    check_size(layout, order)?;
    let y = sh_matrix(layout, order);
    let svd = y.svd(true, true);
    let smax = svd.singular_values.max();
    let gains = svd
        .pseudo_inverse(PINV_RCOND * smax)
        .map_err(|e| Error::config(format!("pseudo-inverse failed: {e}")))?;
    Ok(DecoderMatrix {
        layout: layout.name().to_owned(),
        order,
        band: Band::Low,
        gains,
    })
}

/// Per-degree max-rE weights `P_n(cos(137.9° / (N + 1.51)))`.
pub fn maxre_weights(order: usize) -> Vec<f64> {
    let x = (137.9f64 / (order as f64 + 1.51)).to_radians().cos();
    (0..=order).map(|n| legendre(n, x)).collect()
}

fn front_energy(d: &DecoderMatrix) -> f64 {
    d.gains_for(&Direction::new(0.0, 0.0))
        .iter()
        .map(|g| g * g)
        .sum()
}

/// Pseudo-inverse decoder with max-rE weighting, rescaled so that a
/// front-centre source has the same energy as through [`decoder_pinv`].
pub fn decoder_maxre(layout: &LoudspeakerLayout, order: usize) -> Result<DecoderMatrix> {
    let low = decoder_pinv(layout, order)?;
    let w = maxre_weights(order);
    let mut gains = low.gains.clone();
    for (q, mut col) in gains.column_iter_mut().enumerate() {
        col *= w[degree_of(q)];
    }
    let mut high = DecoderMatrix {
        band: Band::High,
        gains,
        ..low.clone()
    };
    let scale = (front_energy(&low) / front_energy(&high)).sqrt();
    high.gains *= scale;
    Ok(high)
}

/// Dual-band ambisonic decoder for one of the built-in layouts.
#[derive(Debug, Clone)]
pub struct AmbisonicDecoder {
    pub layout_name: LayoutName,
    pub layout: LoudspeakerLayout,
    pub low: DecoderMatrix,
    pub high: DecoderMatrix,
    pub crossover_hz: f64,
}

impl AmbisonicDecoder {
    pub fn for_layout(name: LayoutName, crossover_hz: f64) -> Result<Self> {
        let layout = load_layout(name)?;
        let order = name.ambisonic_order();
        Ok(Self {
            layout_name: name,
            low: decoder_pinv(&layout, order)?,
            high: decoder_maxre(&layout, order)?,
            layout,
            crossover_hz,
        })
    }

    pub fn order(&self) -> usize {
        self.low.order
    }

    /// Splits every channel with a 4th-order Linkwitz–Riley crossover,
    /// decodes each band with its matrix and sums per loudspeaker.
    pub fn decode(&self, x: &ShSignal) -> Result<MultichannelSignal> {
        if x.order() != self.order() {
            return Err(Error::config(format!(
                "order {} signal cannot be decoded to `{}` (expects order {})",
                x.order(),
                self.layout_name,
                self.order()
            )));
        }
        let fs = x.channels().sample_rate();
        if !(self.crossover_hz > 0.0 && self.crossover_hz < fs as f64 / 2.0) {
            return Err(Error::config(format!(
                "crossover {} Hz must lie between 0 and {} Hz",
                self.crossover_hz,
                fs / 2
            )));
        }
        let lp = SosFilter::linkwitz_riley_lowpass(self.crossover_hz, fs as f64);
        let hp = SosFilter::linkwitz_riley_highpass(self.crossover_hz, fs as f64);
        let len = x.channels().len();
        let mut out = MultichannelSignal::silent(fs, self.layout.len(), len);
        for (q, channel) in x.channels().rows().iter().enumerate() {
            if channel.iter().all(|&v| v == 0.0) {
                continue;
            }
            let low = lp.process(channel);
            let high = hp.process(channel);
            for i in 0..self.layout.len() {
                axpy(out.row_mut(i), self.low.gains[(i, q)], &low);
                axpy(out.row_mut(i), self.high.gains[(i, q)], &high);
            }
        }
        Ok(out)
    }
}

/// Decodes `x` to loudspeaker feeds for `layout` with a dual-band decoder.
pub fn dual_band_decode(x: &ShSignal, layout: LayoutName, crossover_hz: f64) -> Result<MultichannelSignal> {
    AmbisonicDecoder::for_layout(layout, crossover_hz)?.decode(x)
}
