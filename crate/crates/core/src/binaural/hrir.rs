//! HRIR sets and the JSON manifest format.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angle_between, Direction, Vec3};
use crate::io::{read_wav, write_wav, WavFormat};
use crate::signal::MultichannelSignal;

#[derive(Debug, Clone, PartialEq)]
pub struct HrirEntry {
    pub direction: Direction,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// Head-related impulse responses on a direction grid with
/// nearest-neighbour lookup.
#[derive(Debug, Clone)]
pub struct HrirSet {
    name: String,
    sample_rate: u32,
    ir_len: usize,
    entries: Vec<HrirEntry>,
    units: Vec<Vec3>,
}

impl HrirSet {
    pub fn new(name: impl Into<String>, sample_rate: u32, entries: Vec<HrirEntry>) -> Result<Self> {
        let name = name.into();
        let first = entries
            .first()
            .ok_or_else(|| Error::Ingestion { entry: name.clone(), reason: "no entries".into() })?;
        let ir_len = first.left.len();
        for e in &entries {
            if e.left.len() != ir_len || e.right.len() != ir_len {
                return Err(Error::Ingestion {
                    entry: e.direction.to_string(),
                    reason: format!("impulse responses must all have {ir_len} samples"),
                });
            }
        }
        let units = entries.iter().map(|e| e.direction.to_unit()).collect();
        Ok(Self { name, sample_rate, ir_len, entries, units })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn ir_len(&self) -> usize {
        self.ir_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[HrirEntry] {
        &self.entries
    }

    /// Closest entry to `d` and its great-circle distance in degrees.
    pub fn lookup(&self, d: &Direction) -> (&HrirEntry, f64) {
        let v = d.to_unit();
        let (i, _) = self
            .units
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.dot(&v).total_cmp(&b.1.dot(&v)))
            .expect("set is non-empty");
        (&self.entries[i], angle_between(&self.units[i], &v))
    }

    /// Largest nearest-entry distance over `probe`, in degrees.
    pub fn coverage(&self, probe: &[Direction]) -> f64 {
        probe.iter().map(|d| self.lookup(d).1).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub azimuth: f64,
    pub elevation: f64,
    pub wav_path: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default)]
    pub name: Option<String>,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ManifestFile {
    Full(Manifest),
    Bare(Vec<ManifestEntry>),
}

/// Loads a manifest of per-direction stereo WAVs. Paths are relative to
/// the manifest's directory.
pub fn load_hrir_set(manifest_path: &Path) -> Result<HrirSet> {
    let text = std::fs::read_to_string(manifest_path).map_err(|e| Error::Ingestion {
        entry: manifest_path.display().to_string(),
        reason: e.to_string(),
    })?;
    let manifest = match serde_json::from_str::<ManifestFile>(&text)? {
        ManifestFile::Full(m) => m,
        ManifestFile::Bare(entries) => Manifest { name: None, entries },
    };
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let name = manifest.name.clone().unwrap_or_else(|| {
        manifest_path.file_stem().map_or("hrir".into(), |s| s.to_string_lossy().into_owned())
    });
    let mut sample_rate = None;
    let mut entries = Vec::with_capacity(manifest.entries.len());
    for e in &manifest.entries {
        let path = base.join(&e.wav_path);
        let fail = |reason: String| Error::Ingestion { entry: e.wav_path.display().to_string(), reason };
        let x = read_wav(&path).map_err(|err| fail(err.to_string()))?;
        if x.channels() != 2 {
            return Err(fail(format!("expected 2 channels, found {}", x.channels())));
        }
        match sample_rate {
            None => sample_rate = Some(x.sample_rate()),
            Some(fs) if fs != x.sample_rate() => {
                return Err(fail(format!("sample rate {} differs from {fs}", x.sample_rate())))
            }
            _ => {}
        }
        let mut rows = x.into_rows().into_iter();
        entries.push(HrirEntry {
            direction: Direction::new(e.azimuth, e.elevation),
            left: rows.next().unwrap_or_default(),
            right: rows.next().unwrap_or_default(),
        });
    }
    HrirSet::new(name, sample_rate.unwrap_or(48_000), entries)
}

/// Writes `set` as a manifest plus one stereo float WAV per entry into
/// `dir`, returning the manifest path.
pub fn write_hrir_set(set: &HrirSet, dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(set.len());
    for (i, e) in set.entries().iter().enumerate() {
        let file = PathBuf::from(format!("hrir_{i:05}.wav"));
        let x = MultichannelSignal::new(set.sample_rate(), vec![e.left.clone(), e.right.clone()])?;
        write_wav(&dir.join(&file), &x, WavFormat::Float32)?;
        entries.push(ManifestEntry {
            azimuth: e.direction.azimuth(),
            elevation: e.direction.elevation(),
            wav_path: file,
        });
    }
    let path = dir.join("manifest.json");
    let manifest = Manifest { name: Some(set.name().to_string()), entries };
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(path)
}
