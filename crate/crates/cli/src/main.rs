use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use swfeval_core::binaural::{spherical_head_set, write_hrir_set, BinauralPair};
use swfeval_core::harness::{
    aggregate, generate_pink_noise, load_hrirs, read_records_file, render_condition,
    run_experiment, write_outcome, write_summary, ExperimentConfig, GroupBy, Metric, Programme,
    DEFAULT_BOOTSTRAP_SEED,
};
use swfeval_core::io::{write_wav, WavFormat};
use swfeval_core::metrics::{compute_iacc_itd, compute_ild, compute_psd};
use swfeval_core::{Direction, LayoutName, MultichannelSignal, System, SystemRenderer, Technique};

#[derive(Parser)]
#[command(name = "swfeval", version, about = "Render and evaluate Ambisonics and spherical-wavelet panning")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (JSON). Missing fields take their defaults.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Output directory, overriding the config.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Reseeds the pink-noise programmes as seed, seed+1, ...
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_file(p).with_context(|| format!("reading {}", p.display()))?,
            None => ExperimentConfig::default(),
        };
        if let Some(o) = &self.out {
            cfg.output_dir = o.clone();
        }
        if let Some(seed) = self.seed {
            let mut next = seed;
            for p in cfg.programmes.iter_mut() {
                if let Programme::PinkNoise { seed, .. } = p {
                    *seed = next;
                    next += 1;
                }
            }
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Renders one condition to WAV files.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "swf")]
        technique: Technique,
        #[arg(long, default_value = "octahedron")]
        layout: LayoutName,
        #[arg(long, allow_hyphen_values = true)]
        azimuth: f64,
        #[arg(long, allow_hyphen_values = true)]
        elevation: f64,
    },
    /// Runs the full sweep and writes metrics.csv.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Also write feed and binaural WAVs per condition.
        #[arg(long)]
        persist_wavs: bool,
    },
    /// Summarises metrics.csv into medians with bootstrap intervals.
    Aggregate {
        metrics: PathBuf,
        /// Output CSV; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Metric column, or every metric when absent.
        #[arg(long)]
        metric: Option<Metric>,
        #[arg(long, default_value = "system")]
        group_by: GroupBy,
        #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_SEED)]
        seed: u64,
    },
    /// Writes seeded pink noise as a mono WAV.
    GenNoise {
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        duration: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 48_000)]
        sample_rate: u32,
    },
    /// Writes the spherical-head HRIR set as a manifest plus WAVs.
    GenHrir {
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, default_value_t = 48_000)]
        sample_rate: u32,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Render { common, technique, layout, azimuth, elevation } => {
            render(&common.load()?, System::new(technique, layout), Direction::new(azimuth, elevation))?;
        }
        Command::Evaluate { common, persist_wavs } => {
            let mut cfg = common.load()?;
            cfg.persist_wavs |= persist_wavs;
            cfg.validate()?;
            let hrirs = load_hrirs(&cfg)?;
            info!("HRIRs: {} ({} directions)", hrirs.name(), hrirs.len());
            let outcome = run_experiment(&cfg, &hrirs)?;
            write_outcome(&cfg, &outcome)?;
            println!(
                "{} rows, {} failures -> {}",
                outcome.records.len(),
                outcome.failures.len(),
                cfg.output_dir.join("metrics.csv").display()
            );
            if !outcome.is_clean() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Aggregate { metrics, out, metric, group_by, seed } => {
            let records = read_records_file(&metrics).with_context(|| format!("reading {}", metrics.display()))?;
            let chosen = metric.map_or(Metric::ALL.to_vec(), |m| vec![m]);
            let rows: Vec<_> = chosen.into_iter().flat_map(|m| aggregate(&records, m, group_by, seed)).collect();
            match out {
                Some(p) => write_summary(std::fs::File::create(&p)?, &rows)?,
                None => write_summary(std::io::stdout().lock(), &rows)?,
            }
        }
        Command::GenNoise { out, duration, seed, sample_rate } => {
            let x = generate_pink_noise(duration, sample_rate, seed)?;
            write_wav(&out, &MultichannelSignal::new(sample_rate, vec![x])?, WavFormat::Float32)?;
        }
        Command::GenHrir { out, sample_rate } => {
            let set = spherical_head_set(sample_rate)?;
            let manifest = write_hrir_set(&set, &out)?;
            println!("{}", manifest.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn render(cfg: &ExperimentConfig, system: System, d: Direction) -> Result<()> {
    cfg.validate()?;
    let Some(programme) = cfg.programmes.first() else { bail!("no programme configured") };
    let s = programme.load(cfg.sample_rate)?;
    let hrirs = load_hrirs(cfg)?;
    let renderer = match system.technique {
        Technique::Reference => None,
        _ => Some(SystemRenderer::with_crossover(system, cfg.swf, cfg.crossover_hz)?),
    };
    let reference = render_condition(None, &d, &s, cfg.sample_rate, &hrirs, cfg.target_dbfs)?.binaural;
    let rendered = render_condition(renderer.as_ref(), &d, &s, cfg.sample_rate, &hrirs, cfg.target_dbfs)?;

    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir)?;
    let stem = format!("{}_{}", system.technique, system.layout);
    save(&dir.join("reference_binaural.wav"), &reference)?;
    save(&dir.join(format!("{stem}_binaural.wav")), &rendered.binaural)?;
    if let Some(feeds) = &rendered.feeds {
        write_wav(&dir.join(format!("{stem}_feeds.wav")), feeds, WavFormat::Float32)?;
    }

    let (cue, cue_ref) = (compute_iacc_itd(&rendered.binaural)?, compute_iacc_itd(&reference)?);
    let (ild, ild_ref) = (compute_ild(&rendered.binaural)?, compute_ild(&reference)?);
    println!("{system} at {d}, programme {}", programme.id());
    println!("itd_error_s  {:+.3e}", cue.itd_s - cue_ref.itd_s);
    println!("ild_error_db {:+.3}", ild.broadband_hf - ild_ref.broadband_hf);
    println!("iacc_error   {:+.4}", cue.iacc - cue_ref.iacc);
    println!("psd          {:.3}", compute_psd(&rendered.binaural, &reference)?);
    Ok(())
}

fn save(path: &Path, p: &BinauralPair) -> Result<()> {
    write_wav(path, &p.to_signal(), WavFormat::Float32)?;
    Ok(())
}
