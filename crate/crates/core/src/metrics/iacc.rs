use crate::binaural::BinauralPair;
use crate::dsp::{hilbert_envelope, SosFilter};
use crate::error::{Error, Result};

const LOWPASS_HZ: f64 = 3000.0;
const LOWPASS_ORDER: usize = 5;
const MAX_LAG_S: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IaccItdResult {
    pub iacc: f64,
    /// Seconds; positive when the right ear lags.
    pub itd_s: f64,
    pub lag_samples: i64,
}

/// Largest lag strictly inside ±1 ms.
pub fn max_lag(sample_rate: u32) -> usize {
    ((sample_rate as f64 * MAX_LAG_S).ceil() as usize).saturating_sub(1)
}

/// Envelope cross-correlation of the low-passed ear signals.
pub fn compute_iacc_itd(p: &BinauralPair) -> Result<IaccItdResult> {
    if p.sample_rate < 8000 {
        return Err(Error::Metric(format!("sample rate {} Hz is below 8 kHz", p.sample_rate)));
    }
    let fs = p.sample_rate as f64;
    let lp = SosFilter::butterworth_lowpass(LOWPASS_ORDER, LOWPASS_HZ, fs);
    // room for the forward-backward transients of the 3 kHz section
    let pad = (fs * 5e-3) as usize;
    let envelope = |x: &[f64]| hilbert_envelope(&lp.filtfilt_padded(x, pad));
    let (l, r) = (envelope(&p.left), envelope(&p.right));
    let el: f64 = l.iter().map(|v| v * v).sum();
    let er: f64 = r.iter().map(|v| v * v).sum();
    if el == 0.0 || er == 0.0 {
        return Err(Error::Metric("IACC of a silent ear is undefined".into()));
    }
    let norm = (el * er).sqrt();
    let k = max_lag(p.sample_rate) as i64;
    let n = l.len() as i64;
    let (mut best, mut best_lag) = (-1.0, 0);
    // ascending |lag| so ties resolve to the smallest delay
    let lags = std::iter::once(0).chain((1..=k).flat_map(|m| [m, -m]));
    for lag in lags {
        let (start, end) = (0.max(-lag), n.min(n - lag));
        let c: f64 = (start..end).map(|t| l[t as usize] * r[(t + lag) as usize]).sum::<f64>() / norm;
        if c.abs() > best {
            best = c.abs();
            best_lag = lag;
        }
    }
    Ok(IaccItdResult {
        iacc: best.min(1.0),
        itd_s: best_lag as f64 / fs,
        lag_samples: best_lag,
    })
}
