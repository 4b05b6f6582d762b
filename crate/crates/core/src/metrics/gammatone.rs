use std::f64::consts::PI;

use num_complex::Complex64;

use crate::binaural::BinauralPair;
use crate::dsp::rms;
use crate::error::{Error, Result};

pub const BAND_COUNT: usize = 42;
pub const HF_LIMIT_HZ: f64 = 1500.0;
const STAGES: i32 = 4;

/// ERB-rate in Cams.
pub fn erb_rate(f: f64) -> f64 {
    21.4 * (1.0 + 0.00437 * f).log10()
}

pub fn erb_rate_inverse(e: f64) -> f64 {
    (10f64.powf(e / 21.4) - 1.0) / 0.00437
}

/// Equivalent rectangular bandwidth in Hz.
pub fn erb(f: f64) -> f64 {
    24.7 * (1.0 + 0.00437 * f)
}

/// `n` centre frequencies uniformly spaced on the ERB-rate scale.
pub fn erb_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (erb_rate(lo), erb_rate(hi));
    (0..n)
        .map(|i| erb_rate_inverse(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Fourth-order all-pole gammatone approximation: four identical complex
/// one-pole sections per band, real part taken at the output.
#[derive(Debug, Clone)]
pub struct GammatoneBank {
    sample_rate: f64,
    centres: Vec<f64>,
    poles: Vec<Complex64>,
    gains: Vec<f64>,
}

impl GammatoneBank {
    pub fn new(sample_rate: f64, lo: f64, hi: f64, bands: usize) -> Self {
        let centres = erb_space(lo, hi, bands);
        let poles: Vec<Complex64> = centres
            .iter()
            .map(|&fc| {
                let r = (-2.0 * PI * 1.019 * erb(fc) / sample_rate).exp();
                Complex64::from_polar(r, 2.0 * PI * fc / sample_rate)
            })
            .collect();
        let mut bank = Self { sample_rate, centres, poles, gains: vec![1.0; bands] };
        bank.gains = (0..bands).map(|b| 1.0 / bank.raw_response(b, bank.centres[b])).collect();
        bank
    }

    /// The standard bank: 42 bands between 20 Hz and 20 kHz.
    pub fn standard(sample_rate: f64) -> Self {
        Self::new(sample_rate, 20.0, 20_000.0, BAND_COUNT)
    }

    pub fn centres(&self) -> &[f64] {
        &self.centres
    }

    fn raw_response(&self, band: usize, f: f64) -> f64 {
        let p = self.poles[band];
        let g = 1.0 - p.norm();
        let stage = |w: f64| g / (Complex64::new(1.0, 0.0) - p * Complex64::from_polar(1.0, -w));
        let w = 2.0 * PI * f / self.sample_rate;
        (stage(w).powi(STAGES) + stage(-w).conj().powi(STAGES)).norm()
    }

    /// Magnitude response of `band` at `f`.
    pub fn response(&self, band: usize, f: f64) -> f64 {
        self.gains[band] * self.raw_response(band, f)
    }

    pub fn filter(&self, band: usize, x: &[f64]) -> Vec<f64> {
        let p = self.poles[band];
        let g = 1.0 - p.norm();
        let mut state = [Complex64::new(0.0, 0.0); STAGES as usize];
        x.iter()
            .map(|&v| {
                let mut u = Complex64::new(v, 0.0);
                for s in state.iter_mut() {
                    *s = g * u + p * *s;
                    u = *s;
                }
                2.0 * self.gains[band] * u.re
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IldResult {
    pub centres: Vec<f64>,
    /// dB per band; `None` where either ear is silent in that band.
    pub per_band: Vec<Option<f64>>,
    /// Mean over valid bands above 1.5 kHz.
    pub broadband_hf: f64,
}

impl IldResult {
    pub fn excluded(&self) -> Vec<usize> {
        self.per_band.iter().enumerate().filter(|(_, v)| v.is_none()).map(|(i, _)| i).collect()
    }
}

pub fn compute_ild(p: &BinauralPair) -> Result<IldResult> {
    compute_ild_with(&GammatoneBank::standard(p.sample_rate as f64), p)
}

/// Per-band `20·log10(rms_L / rms_R)`, evaluated as a difference of logs
/// so that swapping the ears negates it exactly.
pub fn compute_ild_with(bank: &GammatoneBank, p: &BinauralPair) -> Result<IldResult> {
    let levels: Vec<(f64, f64)> = (0..bank.centres.len())
        .map(|b| (rms(&bank.filter(b, &p.left)), rms(&bank.filter(b, &p.right))))
        .collect();
    let loudest = levels.iter().fold(0.0f64, |m, &(l, r)| m.max(l).max(r));
    if loudest == 0.0 {
        return Err(Error::Metric("ILD of a silent pair is undefined".into()));
    }
    let floor = loudest * 1e-10;
    let per_band: Vec<Option<f64>> = levels
        .iter()
        .map(|&(l, r)| (l > floor && r > floor).then(|| 20.0 * (l.log10() - r.log10())))
        .collect();
    let hf: Vec<f64> = per_band
        .iter()
        .zip(&bank.centres)
        .filter(|(_, &fc)| fc > HF_LIMIT_HZ)
        .filter_map(|(v, _)| *v)
        .collect();
    if hf.is_empty() {
        return Err(Error::Metric("no audible band above 1.5 kHz".into()));
    }
    Ok(IldResult {
        centres: bank.centres.clone(),
        per_band,
        broadband_hf: hf.iter().sum::<f64>() / hf.len() as f64,
    })
}
