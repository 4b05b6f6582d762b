use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

const WARM_UP: usize = 8192;

/// Pink noise from Gaussian white noise through Paul Kellet's refined
/// IIR approximation of a −3 dB/octave slope, scaled to unit peak.
pub fn generate_pink_noise(duration_s: f64, sample_rate: u32, seed: u64) -> Result<Vec<f64>> {
    if !(duration_s > 0.0) {
        return Err(Error::config(format!("noise duration must be positive, got {duration_s}")));
    }
    let n = (duration_s * sample_rate as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = [0.0f64; 7];
    let mut out = Vec::with_capacity(n);
    for i in 0..WARM_UP + n {
        let w: f64 = StandardNormal.sample(&mut rng);
        b[0] = 0.99886 * b[0] + w * 0.0555179;
        b[1] = 0.99332 * b[1] + w * 0.0750759;
        b[2] = 0.96900 * b[2] + w * 0.1538520;
        b[3] = 0.86650 * b[3] + w * 0.3104856;
        b[4] = 0.55000 * b[4] + w * 0.5329522;
        b[5] = -0.7616 * b[5] - w * 0.0168980;
        let pink = b.iter().sum::<f64>() + w * 0.5362;
        b[6] = w * 0.115926;
        if i >= WARM_UP {
            out.push(pink);
        }
    }
    let peak = out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > 0.0 {
        out.iter_mut().for_each(|v| *v /= peak);
    }
    Ok(out)
}
