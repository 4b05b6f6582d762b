//! Filters, convolution and spectral helpers shared by the codecs and metrics.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Second-order IIR section, transposed direct form II.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Biquad {
    /// Bilinear-transform low-pass with prewarping at `fc`.
    pub fn lowpass(fc: f64, fs: f64, q: f64) -> Self {
        let w0 = 2.0 * PI * fc / fs;
        let (s, c) = w0.sin_cos();
        let alpha = s / (2.0 * q);
        let a0 = 1.0 + alpha;
        Self {
            b: [(1.0 - c) / 2.0 / a0, (1.0 - c) / a0, (1.0 - c) / 2.0 / a0],
            a: [-2.0 * c / a0, (1.0 - alpha) / a0],
        }
    }

    pub fn highpass(fc: f64, fs: f64, q: f64) -> Self {
        let w0 = 2.0 * PI * fc / fs;
        let (s, c) = w0.sin_cos();
        let alpha = s / (2.0 * q);
        let a0 = 1.0 + alpha;
        Self {
            b: [(1.0 + c) / 2.0 / a0, -(1.0 + c) / a0, (1.0 + c) / 2.0 / a0],
            a: [-2.0 * c / a0, (1.0 - alpha) / a0],
        }
    }

    /// First-order low-pass stored as a degenerate biquad.
    pub fn lowpass_first_order(fc: f64, fs: f64) -> Self {
        let k = (PI * fc / fs).tan();
        let norm = 1.0 / (1.0 + k);
        Self {
            b: [k * norm, k * norm, 0.0],
            a: [(k - 1.0) * norm, 0.0],
        }
    }

    pub fn response(&self, f: f64, fs: f64) -> Complex64 {
        let z1 = Complex64::from_polar(1.0, -2.0 * PI * f / fs);
        let z2 = z1 * z1;
        (self.b[0] + self.b[1] * z1 + self.b[2] * z2) / (1.0 + self.a[0] * z1 + self.a[1] * z2)
    }
}

/// Cascade of second-order sections.
#[derive(Debug, Clone, PartialEq)]
pub struct SosFilter {
    sections: Vec<Biquad>,
}

impl SosFilter {
    pub fn new(sections: Vec<Biquad>) -> Self {
        Self { sections }
    }

    /// Digital Butterworth low-pass of arbitrary order.
    pub fn butterworth_lowpass(order: usize, fc: f64, fs: f64) -> Self {
        let mut sections: Vec<Biquad> = (1..=order / 2)
            .map(|k| {
                let q = 1.0 / (2.0 * ((2 * k - 1) as f64 * PI / (2 * order) as f64).sin());
                Biquad::lowpass(fc, fs, q)
            })
            .collect();
        if order % 2 == 1 {
            sections.push(Biquad::lowpass_first_order(fc, fs));
        }
        Self { sections }
    }

    /// 4th-order Linkwitz–Riley low-pass (two cascaded Butterworth pairs).
    pub fn linkwitz_riley_lowpass(fc: f64, fs: f64) -> Self {
        let s = Biquad::lowpass(fc, fs, std::f64::consts::FRAC_1_SQRT_2);
        Self::new(vec![s, s])
    }

    pub fn linkwitz_riley_highpass(fc: f64, fs: f64) -> Self {
        let s = Biquad::highpass(fc, fs, std::f64::consts::FRAC_1_SQRT_2);
        Self::new(vec![s, s])
    }

    pub fn response(&self, f: f64, fs: f64) -> Complex64 {
        self.sections
            .iter()
            .map(|s| s.response(f, fs))
            .fold(Complex64::new(1.0, 0.0), |acc, h| acc * h)
    }

    /// Causal filtering from zero initial state.
    pub fn process(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for s in &self.sections {
            let (mut z1, mut z2) = (0.0, 0.0);
            for v in y.iter_mut() {
                let input = *v;
                let out = s.b[0] * input + z1;
                z1 = s.b[1] * input - s.a[0] * out + z2;
                z2 = s.b[2] * input - s.a[1] * out;
                *v = out;
            }
        }
        y
    }

    /// Zero-phase forward-backward filtering. The input is zero-padded by
    /// `pad` samples at both ends so transients have room to decay; the
    /// returned signal keeps the padding.
    pub fn filtfilt_padded(&self, x: &[f64], pad: usize) -> Vec<f64> {
        let mut buf = vec![0.0; x.len() + 2 * pad];
        buf[pad..pad + x.len()].copy_from_slice(x);
        let mut y = self.process(&buf);
        y.reverse();
        let mut y = self.process(&y);
        y.reverse();
        y
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn planner_forward(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

fn planner_inverse(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// Full complex spectrum of `x` zero-padded to `n` points.
pub fn spectrum(x: &[f64], n: usize) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x
        .iter()
        .take(n)
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    buf.resize(n, Complex64::new(0.0, 0.0));
    planner_forward(n).process(&mut buf);
    buf
}

/// Inverse of [`spectrum`]: real part of the normalised inverse transform.
pub fn inverse_spectrum(mut spec: Vec<Complex64>) -> Vec<f64> {
    let n = spec.len();
    planner_inverse(n).process(&mut spec);
    spec.into_iter().map(|c| c.re / n as f64).collect()
}

/// Products below this size use direct convolution.
const DIRECT_CONVOLUTION_LIMIT: usize = 1 << 16;

/// Full linear convolution, length `a.len() + b.len() - 1`.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() * b.len() <= DIRECT_CONVOLUTION_LIMIT {
        convolve_direct(a, b)
    } else {
        convolve_fft(a, b)
    }
}

pub fn convolve_direct(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &h) in out[i..].iter_mut().zip(b) {
            *o += x * h;
        }
    }
    out
}

pub fn convolve_fft(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len() + b.len() - 1;
    let n = len.next_power_of_two();
    let sa = spectrum(a, n);
    let sb = spectrum(b, n);
    let prod: Vec<Complex64> = sa.iter().zip(&sb).map(|(x, y)| x * y).collect();
    let mut out = inverse_spectrum(prod);
    out.truncate(len);
    out
}

/// Magnitude of the analytic signal.
pub fn hilbert_envelope(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let mut spec = spectrum(x, n);
    for (k, c) in spec.iter_mut().enumerate() {
        let h = if k == 0 || (n.is_multiple_of(2) && k == n / 2) {
            1.0
        } else if k < n.div_ceil(2) {
            2.0
        } else {
            0.0
        };
        *c *= h;
    }
    planner_inverse(n).process(&mut spec);
    spec.iter().map(|c| c.norm() / n as f64).collect()
}

pub fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

pub fn db20(x: f64) -> f64 {
    20.0 * x.log10()
}
