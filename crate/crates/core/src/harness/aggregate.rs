use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::records::MetricRecord;
use crate::error::{Error, Result};

pub const BOOTSTRAP_RESAMPLES: usize = 10_000;
pub const DEFAULT_BOOTSTRAP_SEED: u64 = 0x5eed;
const MIN_GROUP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    ItdError,
    IldError,
    IaccError,
    Psd,
    ReMag,
    RvMag,
    Spread,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::ItdError,
        Metric::IldError,
        Metric::IaccError,
        Metric::Psd,
        Metric::ReMag,
        Metric::RvMag,
        Metric::Spread,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::ItdError => "itd_error_s",
            Metric::IldError => "ild_error_db",
            Metric::IaccError => "iacc_error",
            Metric::Psd => "psd",
            Metric::ReMag => "re_mag",
            Metric::RvMag => "rv_mag",
            Metric::Spread => "spread_deg",
        }
    }

    /// Auditory metrics vary per programme; vector metrics only per
    /// condition.
    pub fn is_vector(&self) -> bool {
        matches!(self, Metric::ReMag | Metric::RvMag | Metric::Spread)
    }

    pub fn value(&self, r: &MetricRecord) -> Option<f64> {
        let v = match self {
            Metric::ItdError => r.itd_error_s,
            Metric::IldError => r.ild_error_db,
            Metric::IaccError => r.iacc_error,
            Metric::Psd => r.psd,
            Metric::ReMag => r.re_mag,
            Metric::RvMag => r.rv_mag?,
            Metric::Spread => r.spread_deg,
        };
        v.is_finite().then_some(v)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s || m.as_str().trim_end_matches("_s").trim_end_matches("_db") == s)
            .ok_or_else(|| Error::config(format!("unknown metric `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupBy {
    /// Technique and layout.
    #[default]
    System,
    Technique,
    Layout,
}

impl GroupBy {
    pub fn key(&self, r: &MetricRecord) -> String {
        match self {
            GroupBy::System => r.system(),
            GroupBy::Technique => r.technique.to_string(),
            GroupBy::Layout => r.layout.to_string(),
        }
    }
}

impl FromStr for GroupBy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "system" => Ok(GroupBy::System),
            "technique" => Ok(GroupBy::Technique),
            "layout" => Ok(GroupBy::Layout),
            other => Err(Error::config(format!("unknown grouping `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub group: String,
    pub metric: Metric,
    pub n: usize,
    pub median: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    median_sorted(&v)
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Bias-corrected percentile bootstrap interval of the median.
pub fn bootstrap_median_ci(values: &[f64], level: f64, resamples: usize, seed: u64) -> (f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = median_sorted(&v);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boot: Vec<f64> = (0..resamples)
        .map(|_| {
            let mut s: Vec<f64> = (0..v.len()).map(|_| v[rng.random_range(0..v.len())]).collect();
            s.sort_by(f64::total_cmp);
            median_sorted(&s)
        })
        .collect();
    boot.sort_by(f64::total_cmp);
    let below = boot.iter().filter(|&&b| b < m).count() as f64;
    let ties = boot.iter().filter(|&&b| b == m).count() as f64;
    let b = resamples as f64;
    let p0 = ((below + 0.5 * ties) / b).clamp(0.5 / b, 1.0 - 0.5 / b);
    let normal = Normal::standard();
    let z0 = normal.inverse_cdf(p0);
    let za = normal.inverse_cdf(0.5 * (1.0 - level));
    let pick = |z: f64| {
        let q = normal.cdf(2.0 * z0 + z);
        let idx = ((q * b).floor() as usize).min(resamples - 1);
        boot[idx]
    };
    (m, pick(za).min(m), pick(-za).max(m))
}

/// Per-group median and 95% interval of `metric`. Groups with fewer than
/// three finite values are skipped. Vector metrics take one value per
/// condition.
pub fn aggregate(records: &[MetricRecord], metric: Metric, group_by: GroupBy, seed: u64) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut seen = std::collections::HashSet::new();
    for r in records {
        // vector columns repeat across programmes; count each condition once
        if metric.is_vector() {
            let (t, l, az, el, _) = r.sort_key();
            if !seen.insert((t, l, az, el)) {
                continue;
            }
        }
        let entry = groups.entry(group_by.key(r)).or_default();
        if let Some(v) = metric.value(r) {
            entry.push(v);
        }
    }
    groups
        .into_iter()
        .filter_map(|(group, values)| {
            if values.len() < MIN_GROUP {
                warn!("skipping {group}/{metric}: {} values", values.len());
                return None;
            }
            let (median, ci_low, ci_high) = bootstrap_median_ci(&values, 0.95, BOOTSTRAP_RESAMPLES, seed);
            Some(SummaryRow { group, metric, n: values.len(), median, ci_low, ci_high })
        })
        .collect()
}

pub fn write_summary<W: Write>(w: W, rows: &[SummaryRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
