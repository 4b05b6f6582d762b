use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::LayoutName;
use crate::render::Technique;
use crate::swf::{LiftingKind, RemapMode};
use crate::vectors::SpreadFormula;

pub const SCHEMA_VERSION: &str = "1";

/// One evaluated condition: a system, a source position and a programme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub technique: Technique,
    pub layout: LayoutName,
    pub azimuth: f64,
    pub elevation: f64,
    pub programme: String,
    pub itd_error_s: f64,
    pub ild_error_db: f64,
    pub iacc_error: f64,
    pub psd: f64,
    pub itd_reference_s: f64,
    pub ild_reference_db: f64,
    pub iacc_reference: f64,
    /// Vector columns depend only on the condition and repeat across
    /// programmes.
    pub re_mag: f64,
    pub rv_mag: Option<f64>,
    pub spread_deg: f64,
    pub spread_formula: SpreadFormula,
    pub remap_mode: RemapMode,
    pub lifting: LiftingKind,
    pub target_dbfs: f64,
}

impl MetricRecord {
    /// Canonical ordering of the output table.
    pub fn sort_key(&self) -> (Technique, LayoutName, i64, i64, &str) {
        // micro-degrees keep the key totally ordered
        let q = |x: f64| (x * 1e6).round() as i64;
        (self.technique, self.layout, q(self.azimuth), q(self.elevation), &self.programme)
    }

    pub fn system(&self) -> String {
        format!("{}/{}", self.technique, self.layout)
    }
}

pub fn sort_records(records: &mut [MetricRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Writes the versioned comment line followed by the CSV table.
pub fn write_records<W: Write>(mut w: W, records: &[MetricRecord], config_hash: &str) -> Result<()> {
    writeln!(
        w,
        "# swfeval {} schema {SCHEMA_VERSION} config-sha256 {config_hash}",
        env!("CARGO_PKG_VERSION")
    )?;
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(r: R) -> Result<Vec<MetricRecord>> {
    let mut text = String::new();
    for line in BufReader::new(r).lines() {
        let line = line?;
        if !line.starts_with('#') {
            text.push_str(&line);
            text.push('\n');
        }
    }
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(Into::into))
        .collect()
}

pub fn read_records_file(path: &Path) -> Result<Vec<MetricRecord>> {
    read_records(std::fs::File::open(path)?)
}
