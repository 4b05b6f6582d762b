use crate::binaural::BinauralPair;
use crate::dsp::spectrum;
use crate::error::{Error, Result};

use super::gammatone::{erb, erb_rate, erb_rate_inverse};

pub const PSD_FFT_LEN: usize = 65_536;
/// Level in dB SPL of a full-scale band.
const FULL_SCALE_SPL: f64 = 100.0;
const ERB_STEP: f64 = 0.25;

const FREQ: [f64; 29] = [
    20.0, 25.0, 31.5, 40.0, 50.0, 63.0, 80.0, 100.0, 125.0, 160.0, 200.0, 250.0, 315.0, 400.0,
    500.0, 630.0, 800.0, 1000.0, 1250.0, 1600.0, 2000.0, 2500.0, 3150.0, 4000.0, 5000.0, 6300.0,
    8000.0, 10000.0, 12500.0,
];

const AF: [f64; 29] = [
    0.532, 0.506, 0.480, 0.455, 0.432, 0.409, 0.387, 0.367, 0.349, 0.330, 0.315, 0.301, 0.288,
    0.276, 0.267, 0.259, 0.253, 0.250, 0.246, 0.244, 0.243, 0.243, 0.243, 0.242, 0.242, 0.245,
    0.254, 0.271, 0.301,
];

const LU: [f64; 29] = [
    -31.6, -27.2, -23.0, -19.1, -15.9, -13.0, -10.3, -8.1, -6.2, -4.5, -3.1, -2.0, -1.1, -0.4,
    0.0, 0.3, 0.5, 0.0, -2.7, -4.1, -1.0, 1.7, 2.5, 1.2, -2.1, -7.1, -11.2, -10.7, -3.1,
];

const TF: [f64; 29] = [
    78.5, 68.7, 59.5, 51.1, 44.0, 37.5, 31.5, 26.5, 22.1, 17.9, 14.4, 11.4, 8.6, 6.2, 4.4, 3.0,
    2.2, 2.4, 3.5, 1.7, -1.3, -4.2, -6.0, -5.4, -1.5, 6.0, 12.6, 13.9, 12.3,
];

/// Equal-loudness parameters `(αf, Lu, Tf)` interpolated in frequency and
/// held constant outside the tabulated range.
fn contour_parameters(f: f64) -> (f64, f64, f64) {
    if f <= FREQ[0] {
        return (AF[0], LU[0], TF[0]);
    }
    let last = FREQ.len() - 1;
    if f >= FREQ[last] {
        return (AF[last], LU[last], TF[last]);
    }
    let i = FREQ.partition_point(|&x| x <= f) - 1;
    let k = (f - FREQ[i]) / (FREQ[i + 1] - FREQ[i]);
    let lerp = |t: &[f64; 29]| t[i] + k * (t[i + 1] - t[i]);
    (lerp(&AF), lerp(&LU), lerp(&TF))
}

/// Loudness level in phon of a pure tone at `spl` dB and `f` Hz, clamped
/// at 0.
pub fn spl_to_phon(spl: f64, f: f64) -> f64 {
    if !spl.is_finite() {
        return 0.0;
    }
    let (af, lu, tf) = contour_parameters(f);
    let term = |l: f64| (0.4 * 10f64.powf((l + lu) / 10.0 - 9.0)).powf(af);
    let bf = term(spl) - term(tf) + 0.005135;
    if bf <= 0.0 {
        return 0.0;
    }
    (40.0 * bf.log10() + 94.0).max(0.0)
}

/// SPL of a pure tone at `phon` loudness level, the inverse of
/// [`spl_to_phon`] above threshold.
pub fn phon_to_spl(phon: f64, f: f64) -> f64 {
    let (af, lu, tf) = contour_parameters(f);
    let a = 4.47e-3 * (10f64.powf(0.025 * phon) - 1.15) + (0.4 * 10f64.powf((tf + lu) / 10.0 - 9.0)).powf(af);
    10.0 / af * a.log10() - lu + 94.0
}

pub fn phon_to_sone(phon: f64) -> f64 {
    if phon >= 40.0 {
        2f64.powf((phon - 40.0) / 10.0)
    } else {
        (phon / 40.0).powf(2.642)
    }
}

pub fn sone_to_phon(sone: f64) -> f64 {
    if sone >= 1.0 {
        40.0 + 10.0 * sone.log2()
    } else {
        40.0 * sone.powf(1.0 / 2.642)
    }
}

/// Centre frequencies of the quarter-ERB analysis grid.
pub fn psd_frequencies(sample_rate: u32) -> Vec<f64> {
    let hi = 20_000f64.min(0.5 * sample_rate as f64);
    let (a, b) = (erb_rate(20.0), erb_rate(hi));
    let n = ((b - a) / ERB_STEP).floor() as usize + 1;
    (0..n).map(|i| erb_rate_inverse(a + i as f64 * ERB_STEP)).collect()
}

/// Loudness level per quarter-ERB band of one ear signal.
fn band_phons(x: &[f64], fft_len: usize, frames: usize, fs: f64, centres: &[f64]) -> Vec<f64> {
    let spec = spectrum(x, fft_len);
    let df = fs / fft_len as f64;
    let scale = 2.0 / (fft_len as f64 * frames as f64);
    centres
        .iter()
        .map(|&fc| {
            let half = 0.5 * ERB_STEP * erb(fc);
            let lo = ((fc - half) / df).ceil().max(1.0) as usize;
            let hi = (((fc + half) / df).floor() as usize).min(fft_len / 2).max(lo);
            let power: f64 = spec[lo..=hi].iter().map(|c| c.norm_sqr()).sum::<f64>() * scale;
            let spl = 10.0 * power.log10() + FULL_SCALE_SPL;
            sone_to_phon(phon_to_sone(spl_to_phon(spl, fc)))
        })
        .collect()
}

/// Mean absolute loudness-level difference in phon between `p` and `reference`
/// over both ears and every quarter-ERB band between 20 Hz and 20 kHz.
pub fn compute_psd(p: &BinauralPair, reference: &BinauralPair) -> Result<f64> {
    if p.sample_rate != reference.sample_rate {
        return Err(Error::Metric(format!(
            "sample rates differ: {} vs {} Hz",
            p.sample_rate, reference.sample_rate
        )));
    }
    for (what, pair) in [("test", p), ("reference", reference)] {
        if pair.left.iter().all(|&v| v == 0.0) || pair.right.iter().all(|&v| v == 0.0) {
            return Err(Error::Metric(format!("{what} signal has a silent ear")));
        }
    }
    let frames = p.len().max(reference.len());
    let fft_len = PSD_FFT_LEN.max(frames.next_power_of_two());
    let fs = p.sample_rate as f64;
    let centres = psd_frequencies(p.sample_rate);
    let mut total = 0.0;
    for (a, b) in [(&p.left, &reference.left), (&p.right, &reference.right)] {
        let pa = band_phons(a, fft_len, frames, fs, &centres);
        let pb = band_phons(b, fft_len, frames, fs, &centres);
        total += pa.iter().zip(&pb).map(|(x, y)| (x - y).abs()).sum::<f64>();
    }
    Ok(total / (2 * centres.len()) as f64)
}
