//! Analytic spherical-head HRIRs.
//!
//! A rigid sphere with the ears at ±y: a one-pole/one-zero head-shadow
//! filter whose high-frequency gain depends on the incidence angle, plus
//! the ray-traced diffraction delay. There are no pinna or torso cues, so
//! elevation is only encoded through the incidence angle.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::hrir::{HrirEntry, HrirSet};
use crate::dsp::inverse_spectrum;
use crate::error::Result;
use crate::geometry::{fibonacci_grid, load_layout, table_positions, Direction, LayoutName, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalHead {
    pub radius_m: f64,
    pub speed_of_sound: f64,
    /// High-frequency shadow gain at the darkest incidence angle.
    pub alpha_min: f64,
    pub theta_min_deg: f64,
    /// Delay added to every response so that the near ear stays causal.
    pub bulk_delay_s: f64,
    pub fft_len: usize,
    pub ir_len: usize,
    pub pinna: bool,
}

/// Pinna echoes: reflection coefficient, and the delay constants A, B (in
/// samples at 44.1 kHz) and D of each echo.
const PINNA_ECHOES: [(f64, f64, f64, f64); 5] = [
    (0.5, 1.0, 2.0, 1.0),
    (-1.0, 5.0, 4.0, 0.5),
    (0.5, 5.0, 7.0, 0.5),
    (-0.25, 5.0, 11.0, 0.5),
    (0.25, 5.0, 13.0, 0.5),
];

impl Default for SphericalHead {
    fn default() -> Self {
        Self {
            radius_m: 0.0875,
            speed_of_sound: 343.0,
            alpha_min: 0.1,
            theta_min_deg: 150.0,
            bulk_delay_s: 1e-3,
            fft_len: 512,
            ir_len: 256,
            pinna: true,
        }
    }
}

impl SphericalHead {
    /// Echo delays in seconds. Rear polar angles are folded to the front.
    fn pinna_delays(source: &Vec3) -> [f64; 5] {
        let lateral = source.y.clamp(-1.0, 1.0).asin();
        let mut polar = source.z.atan2(source.x);
        if polar > FRAC_PI_2 {
            polar = PI - polar;
        } else if polar < -FRAC_PI_2 {
            polar = -PI - polar;
        }
        PINNA_ECHOES.map(|(_, a, b, d)| (a * (lateral / 2.0).cos() * (d * (FRAC_PI_2 - polar)).sin() + b) / 44_100.0)
    }

    /// Response of the ear on axis `ear` to a plane wave from `source`.
    fn ear_response(&self, ear: &Vec3, source: &Vec3, fs: f64) -> Vec<f64> {
        let theta = ear.dot(source).clamp(-1.0, 1.0).acos();
        let a_c = self.radius_m / self.speed_of_sound;
        let delay = if theta < FRAC_PI_2 { -a_c * theta.cos() } else { a_c * (theta - FRAC_PI_2) } + self.bulk_delay_s;
        let alpha = (1.0 + self.alpha_min / 2.0)
            + (1.0 - self.alpha_min / 2.0) * (theta.to_degrees() / self.theta_min_deg * PI).cos();
        let w0 = 1.0 / a_c;

        let echoes = self.pinna.then(|| Self::pinna_delays(source));
        let n = self.fft_len;
        let mut spec = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..=n / 2 {
            let w = 2.0 * PI * k as f64 * fs / n as f64;
            let shadow = Complex64::new(1.0, alpha * w / (2.0 * w0)) / Complex64::new(1.0, w / (2.0 * w0));
            let mut h = shadow * Complex64::from_polar(1.0, -w * delay);
            if let Some(tau) = &echoes {
                h *= PINNA_ECHOES
                    .iter()
                    .zip(tau)
                    .fold(Complex64::new(1.0, 0.0), |acc, (e, t)| acc + Complex64::from_polar(e.0, -w * t));
            }
            if k == n / 2 {
                h = Complex64::new(h.re, 0.0);
            }
            spec[k] = h;
            if k > 0 && k < n / 2 {
                spec[n - k] = h.conj();
            }
        }
        let mut ir = inverse_spectrum(spec);
        ir.truncate(self.ir_len);
        let fade = (self.ir_len / 8).max(1);
        for i in 0..fade {
            let g = 0.5 * (1.0 + (PI * (i + 1) as f64 / fade as f64).cos());
            ir[self.ir_len - fade + i] *= g;
        }
        ir
    }

    pub fn entry(&self, d: &Direction, sample_rate: u32) -> HrirEntry {
        let u = d.to_unit();
        let fs = sample_rate as f64;
        HrirEntry {
            direction: *d,
            left: self.ear_response(&Vec3::y(), &u, fs),
            right: self.ear_response(&-Vec3::y(), &u, fs),
        }
    }

    pub fn build_set(&self, grid: &[Direction], sample_rate: u32) -> Result<HrirSet> {
        let entries = grid.iter().map(|d| self.entry(d, sample_rate)).collect();
        HrirSet::new("spherical-head", sample_rate, entries)
    }
}

/// Every built-in loudspeaker and source position plus a dense Fibonacci
/// lattice, so that evaluation directions resolve exactly.
pub fn default_model_grid() -> Vec<Direction> {
    let mut grid = table_positions();
    for name in LayoutName::ALL {
        grid.extend_from_slice(load_layout(name).expect("built-in layout").directions());
    }
    grid.extend(fibonacci_grid(8802));
    grid
}

/// The stand-in HRIR set used when no measured set is configured.
pub fn spherical_head_set(sample_rate: u32) -> Result<HrirSet> {
    SphericalHead::default().build_set(&default_model_grid(), sample_rate)
}
