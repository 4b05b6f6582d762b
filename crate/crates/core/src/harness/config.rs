use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::noise::generate_pink_noise;
use crate::ambisonics::DEFAULT_CROSSOVER_HZ;
use crate::binaural::DEFAULT_TARGET_DBFS;
use crate::error::{Error, Result};
use crate::geometry::{table_positions, Direction};
use crate::io::read_wav;
use crate::render::System;
use crate::swf::SwfOptions;
use crate::vectors::SpreadFormula;

/// Programme material for one row of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Programme {
    PinkNoise { duration_s: f64, seed: u64 },
    /// First channel of a WAV file.
    Wav { path: PathBuf },
}

impl Programme {
    pub fn id(&self) -> String {
        match self {
            Programme::PinkNoise { seed, .. } => format!("pink-{seed}"),
            Programme::Wav { path } => path
                .file_stem()
                .map_or_else(|| "wav".into(), |s| s.to_string_lossy().into_owned()),
        }
    }

    pub fn load(&self, sample_rate: u32) -> Result<Vec<f64>> {
        match self {
            Programme::PinkNoise { duration_s, seed } => generate_pink_noise(*duration_s, sample_rate, *seed),
            Programme::Wav { path } => {
                let x = read_wav(path)?;
                if x.sample_rate() != sample_rate {
                    return Err(Error::config(format!(
                        "{} is at {} Hz, the experiment runs at {sample_rate} Hz",
                        path.display(),
                        x.sample_rate()
                    )));
                }
                if x.is_empty() {
                    return Err(Error::config(format!("{} is empty", path.display())));
                }
                Ok(x.into_rows().swap_remove(0))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub systems: Vec<System>,
    pub positions: Vec<Direction>,
    pub programmes: Vec<Programme>,
    /// Measured HRIR manifest; the spherical-head model is used when absent.
    pub hrir_manifest: Option<PathBuf>,
    pub sample_rate: u32,
    pub output_dir: PathBuf,
    pub swf: SwfOptions,
    pub spread_formula: SpreadFormula,
    pub crossover_hz: f64,
    pub target_dbfs: f64,
    pub persist_wavs: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            systems: System::default_grid(),
            positions: table_positions(),
            programmes: vec![
                Programme::PinkNoise { duration_s: 0.1, seed: 1 },
                Programme::PinkNoise { duration_s: 0.1, seed: 2 },
            ],
            hrir_manifest: None,
            sample_rate: 48_000,
            output_dir: PathBuf::from("swfeval-out"),
            swf: SwfOptions::default(),
            spread_formula: SpreadFormula::default(),
            crossover_hz: DEFAULT_CROSSOVER_HZ,
            target_dbfs: DEFAULT_TARGET_DBFS,
            persist_wavs: false,
        }
    }
}

impl ExperimentConfig {
    /// Reads a JSON config; relative paths are resolved against its
    /// directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg: Self = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(m) = cfg.hrir_manifest.as_mut() {
            resolve(m);
        }
        for p in cfg.programmes.iter_mut() {
            if let Programme::Wav { path } = p {
                resolve(path);
            }
        }
        cfg.positions = cfg
            .positions
            .iter()
            .map(|d| Direction::new(d.azimuth(), d.elevation()))
            .collect();
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.systems.is_empty() || self.positions.is_empty() || self.programmes.is_empty() {
            return Err(Error::config("systems, positions and programmes must be non-empty"));
        }
        if self.sample_rate < 8000 {
            return Err(Error::config(format!("sample rate {} Hz is too low", self.sample_rate)));
        }
        if let Some(m) = &self.hrir_manifest {
            if !m.exists() {
                return Err(Error::config(format!("HRIR manifest {} not found", m.display())));
            }
        }
        for p in &self.programmes {
            match p {
                Programme::Wav { path } if !path.exists() => {
                    return Err(Error::config(format!("programme {} not found", path.display())))
                }
                Programme::PinkNoise { duration_s, .. } if !(*duration_s > 0.0) => {
                    return Err(Error::config("noise duration must be positive"))
                }
                _ => {}
            }
        }
        let mut ids: Vec<String> = self.programmes.iter().map(Programme::id).collect();
        ids.sort();
        ids.dedup();
        if ids.len() != self.programmes.len() {
            return Err(Error::config("programme ids must be unique"));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serialises");
        Sha256::digest(json.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
