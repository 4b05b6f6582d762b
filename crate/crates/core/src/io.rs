//! Multichannel WAV files.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};
use serde::{Deserialize, Serialize};

use crate::ambisonics::{Normalisation, ShSignal};
use crate::error::{Error, Result};
use crate::signal::MultichannelSignal;

/// On-disk sample encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WavFormat {
    #[default]
    Float32,
    Int24,
}

/// Reads any integer or float PCM WAV, scaling integers to [-1, 1).
pub fn read_wav(path: &Path) -> Result<MultichannelSignal> {
    let mut reader = WavReader::open(path)?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    let interleaved: Vec<f64> = match spec.sample_format {
        SampleFormat::Float => reader
            .samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<Result<_, _>>()?,
        SampleFormat::Int => {
            let scale = 1.0 / (1i64 << (spec.bits_per_sample - 1)) as f64;
            reader
                .samples::<i32>()
                .map(|s| s.map(|v| v as f64 * scale))
                .collect::<Result<_, _>>()?
        }
    };
    let frames = interleaved.len() / channels.max(1);
    let mut rows = vec![Vec::with_capacity(frames); channels];
    for frame in interleaved.chunks_exact(channels) {
        for (row, &v) in rows.iter_mut().zip(frame) {
            row.push(v);
        }
    }
    MultichannelSignal::new(spec.sample_rate, rows)
}

pub fn write_wav(path: &Path, x: &MultichannelSignal, format: WavFormat) -> Result<()> {
    if x.channels() == 0 || x.channels() > u16::MAX as usize {
        return Err(Error::config(format!("cannot write {} channels to WAV", x.channels())));
    }
    let spec = WavSpec {
        channels: x.channels() as u16,
        sample_rate: x.sample_rate(),
        bits_per_sample: match format {
            WavFormat::Float32 => 32,
            WavFormat::Int24 => 24,
        },
        sample_format: match format {
            WavFormat::Float32 => SampleFormat::Float,
            WavFormat::Int24 => SampleFormat::Int,
        },
    };
    let mut w = WavWriter::create(path, spec)?;
    const FULL: f64 = 8_388_607.0;
    for t in 0..x.len() {
        for row in x.rows() {
            match format {
                WavFormat::Float32 => w.write_sample(row[t] as f32)?,
                WavFormat::Int24 => w.write_sample((row[t] * (FULL + 1.0)).round().clamp(-FULL - 1.0, FULL) as i32)?,
            }
        }
    }
    w.finalize()?;
    Ok(())
}

/// Reads ACN/SN3D channels and converts them to N3D.
pub fn read_ambisonic_wav(path: &Path) -> Result<ShSignal> {
    ShSignal::from_channels(read_wav(path)?, Normalisation::SN3D)
}

/// Writes ACN/SN3D channels.
pub fn write_ambisonic_wav(path: &Path, x: &ShSignal, format: WavFormat) -> Result<()> {
    write_wav(path, &x.to_normalisation(Normalisation::SN3D), format)
}
