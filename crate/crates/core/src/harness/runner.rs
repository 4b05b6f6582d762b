use std::collections::BTreeMap;
use std::path::Path;

use log::{info, warn};
use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::records::{sort_records, write_records, MetricRecord};
use crate::binaural::{
    load_hrir_set, normalize_peak, render_direct_reference, render_virtual_loudspeakers,
    spherical_head_set, BinauralPair, HrirSet,
};
use crate::error::{Error, Result};
use crate::geometry::Direction;
use crate::io::{write_wav, WavFormat};
use crate::metrics::{compute_iacc_itd, compute_ild, compute_psd, signed_error};
use crate::render::{System, SystemRenderer, Technique};
use crate::signal::MultichannelSignal;
use crate::vectors::{analyze_rendering, SpreadFormula, VectorAnalysis};

/// A condition that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub system: System,
    pub position: Direction,
    pub programme: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentOutcome {
    pub records: Vec<MetricRecord>,
    pub failures: Vec<Failure>,
}

impl ExperimentOutcome {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The configured HRIR manifest, or the spherical-head model.
pub fn load_hrirs(config: &ExperimentConfig) -> Result<HrirSet> {
    match &config.hrir_manifest {
        Some(path) => load_hrir_set(path),
        None => spherical_head_set(config.sample_rate),
    }
}

/// Loudspeaker feeds and ear signals of one system rendering.
pub struct Rendered {
    pub feeds: Option<MultichannelSignal>,
    pub binaural: BinauralPair,
}

/// Renders `s` from `d` through `renderer` (or directly for the reference)
/// and normalises the ear signals.
pub fn render_condition(
    renderer: Option<&SystemRenderer>,
    d: &Direction,
    s: &[f64],
    sample_rate: u32,
    hrirs: &HrirSet,
    target_dbfs: f64,
) -> Result<Rendered> {
    match renderer {
        None => Ok(Rendered {
            feeds: None,
            binaural: normalize_peak(&render_direct_reference(s, sample_rate, d, hrirs)?, target_dbfs)?,
        }),
        Some(r) => {
            let feeds = r.render(d, s, sample_rate)?;
            let binaural = normalize_peak(&render_virtual_loudspeakers(&feeds, r.layout(), hrirs)?, target_dbfs)?;
            Ok(Rendered { feeds: Some(feeds), binaural })
        }
    }
}

/// Vector metrics of a point source, used for the reference rows.
fn point_source() -> VectorAnalysis {
    let e = crate::geometry::Vec3::x();
    VectorAnalysis { pressure: 1.0, energy: 1.0, rv: Some(e), re: e, rv_mag: Some(1.0), re_mag: 1.0, spread_deg: 0.0 }
}

fn vector_for(renderer: Option<&SystemRenderer>, d: &Direction, spread: SpreadFormula) -> Result<VectorAnalysis> {
    match renderer {
        None => Ok(point_source()),
        Some(r) => analyze_rendering(r, d, spread),
    }
}

fn file_tag(system: &System, d: &Direction, programme: &str) -> String {
    format!(
        "{}_{}_az{:+07.2}_el{:+06.2}_{programme}",
        system.technique,
        system.layout,
        d.azimuth(),
        d.elevation()
    )
}

/// Writes via a temporary file so a condition's artefact is either
/// complete or absent.
fn write_atomic(path: &Path, x: &MultichannelSignal) -> Result<()> {
    let tmp = path.with_extension("wav.part");
    write_wav(&tmp, x, WavFormat::Float32)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs every (system, position, programme) condition. Failures are
/// collected rather than aborting the sweep.
pub fn run_experiment(config: &ExperimentConfig, hrirs: &HrirSet) -> Result<ExperimentOutcome> {
    config.validate()?;
    if hrirs.sample_rate() != config.sample_rate {
        return Err(Error::config(format!(
            "HRIRs are at {} Hz, the experiment runs at {} Hz",
            hrirs.sample_rate(),
            config.sample_rate
        )));
    }
    let programmes: Vec<(String, Vec<f64>)> = config
        .programmes
        .iter()
        .map(|p| Ok((p.id(), p.load(config.sample_rate)?)))
        .collect::<Result<_>>()?;

    let wav_dir = config.output_dir.join("wav");
    if config.persist_wavs {
        std::fs::create_dir_all(&wav_dir)?;
    }

    let renderers: BTreeMap<System, std::result::Result<Option<SystemRenderer>, String>> = config
        .systems
        .iter()
        .map(|&sys| {
            let r = match sys.technique {
                Technique::Reference => Ok(None),
                _ => SystemRenderer::with_crossover(sys, config.swf, config.crossover_hz)
                    .map(Some)
                    .map_err(|e| e.to_string()),
            };
            (sys, r)
        })
        .collect();

    let references: Vec<Vec<Result<BinauralPair>>> = config
        .positions
        .par_iter()
        .map(|d| {
            programmes
                .iter()
                .map(|(_, s)| {
                    render_condition(None, d, s, config.sample_rate, hrirs, config.target_dbfs).map(|r| r.binaural)
                })
                .collect()
        })
        .collect();

    let mut work = Vec::new();
    for &sys in &config.systems {
        for (pi, d) in config.positions.iter().enumerate() {
            for gi in 0..programmes.len() {
                work.push((sys, pi, *d, gi));
            }
        }
    }
    info!("evaluating {} conditions", work.len());

    let results: Vec<std::result::Result<MetricRecord, Failure>> = work
        .par_iter()
        .map(|&(sys, pi, d, gi)| {
            let (id, s) = &programmes[gi];
            let fail = |reason: String| Failure { system: sys, position: d, programme: id.clone(), reason };
            let renderer = renderers[&sys].as_ref().map_err(|e| fail(e.clone()))?.as_ref();
            let reference = references[pi][gi].as_ref().map_err(|e| fail(format!("reference: {e}")))?;
            evaluate(config, sys, renderer, &d, id, s, reference, hrirs, &wav_dir).map_err(|e| fail(e.to_string()))
        })
        .collect();

    let mut outcome = ExperimentOutcome::default();
    for r in results {
        match r {
            Ok(rec) => outcome.records.push(rec),
            Err(f) => {
                warn!("{} at {} ({}) failed: {}", f.system, f.position, f.programme, f.reason);
                outcome.failures.push(f);
            }
        }
    }
    sort_records(&mut outcome.records);
    Ok(outcome)
}

#[allow(clippy::too_many_arguments)]
fn evaluate(
    config: &ExperimentConfig,
    sys: System,
    renderer: Option<&SystemRenderer>,
    d: &Direction,
    programme: &str,
    s: &[f64],
    reference: &BinauralPair,
    hrirs: &HrirSet,
    wav_dir: &Path,
) -> Result<MetricRecord> {
    let rendered = render_condition(renderer, d, s, config.sample_rate, hrirs, config.target_dbfs)?;
    let p = &rendered.binaural;
    let (cue, cue_ref) = (compute_iacc_itd(p)?, compute_iacc_itd(reference)?);
    let (ild, ild_ref) = (compute_ild(p)?, compute_ild(reference)?);
    let psd = compute_psd(p, reference)?;
    let v = vector_for(renderer, d, config.spread_formula)?;
    if config.persist_wavs {
        let tag = file_tag(&sys, d, programme);
        write_atomic(&wav_dir.join(format!("{tag}_binaural.wav")), &p.to_signal())?;
        if let Some(feeds) = &rendered.feeds {
            write_atomic(&wav_dir.join(format!("{tag}_feeds.wav")), feeds)?;
        }
    }
    Ok(MetricRecord {
        technique: sys.technique,
        layout: sys.layout,
        azimuth: d.azimuth(),
        elevation: d.elevation(),
        programme: programme.to_string(),
        itd_error_s: signed_error(cue.itd_s, cue_ref.itd_s),
        ild_error_db: signed_error(ild.broadband_hf, ild_ref.broadband_hf),
        iacc_error: signed_error(cue.iacc, cue_ref.iacc),
        psd,
        itd_reference_s: cue_ref.itd_s,
        ild_reference_db: ild_ref.broadband_hf,
        iacc_reference: cue_ref.iacc,
        re_mag: v.re_mag,
        rv_mag: v.rv_mag,
        spread_deg: v.spread_deg,
        spread_formula: config.spread_formula,
        remap_mode: config.swf.remap,
        lifting: config.swf.lifting,
        target_dbfs: config.target_dbfs,
    })
}

/// Writes `metrics.csv` and, when anything failed, `failures.csv` into the
/// output directory.
pub fn write_outcome(config: &ExperimentConfig, outcome: &ExperimentOutcome) -> Result<()> {
    std::fs::create_dir_all(&config.output_dir)?;
    let file = std::fs::File::create(config.output_dir.join("metrics.csv"))?;
    write_records(std::io::BufWriter::new(file), &outcome.records, &config.hash())?;
    let failures = config.output_dir.join("failures.csv");
    if outcome.failures.is_empty() {
        if failures.exists() {
            std::fs::remove_file(failures)?;
        }
        return Ok(());
    }
    let mut w = csv::Writer::from_path(failures)?;
    w.write_record(["technique", "layout", "azimuth", "elevation", "programme", "reason"])?;
    for f in &outcome.failures {
        w.write_record([
            f.system.technique.to_string(),
            f.system.layout.to_string(),
            f.position.azimuth().to_string(),
            f.position.elevation().to_string(),
            f.programme.clone(),
            f.reason.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
