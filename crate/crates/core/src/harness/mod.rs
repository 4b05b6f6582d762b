//! Condition sweeps, per-condition records and bootstrap summaries.

mod aggregate;
mod config;
mod noise;
mod records;
mod runner;

pub use aggregate::{
    aggregate, bootstrap_median_ci, median, write_summary, GroupBy, Metric, SummaryRow,
    BOOTSTRAP_RESAMPLES, DEFAULT_BOOTSTRAP_SEED,
};
pub use config::{ExperimentConfig, Programme};
pub use noise::generate_pink_noise;
pub use records::{
    read_records, read_records_file, sort_records, write_records, MetricRecord, SCHEMA_VERSION,
};
pub use runner::{
    load_hrirs, render_condition, run_experiment, write_outcome, ExperimentOutcome, Failure,
    Rendered,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binaural::{HrirSet, SphericalHead};
    use crate::geometry::{load_layout, Direction, LayoutName};
    use crate::render::{System, Technique};
    use proptest::prelude::*;

    fn small_hrirs(positions: &[Direction]) -> HrirSet {
        let mut grid = positions.to_vec();
        for name in LayoutName::ALL {
            grid.extend_from_slice(load_layout(name).unwrap().directions());
        }
        SphericalHead::default().build_set(&grid, 48_000).unwrap()
    }

    fn small_config(dir: &std::path::Path) -> ExperimentConfig {
        ExperimentConfig {
            systems: vec![
                System::new(Technique::Reference, LayoutName::Octahedron),
                System::new(Technique::Swf, LayoutName::Octahedron),
                System::new(Technique::Ambisonics, LayoutName::Tdesign24),
            ],
            positions: vec![Direction::new(0.0, 90.0), Direction::new(30.0, 0.0)],
            programmes: vec![Programme::PinkNoise { duration_s: 0.02, seed: 3 }],
            output_dir: dir.to_path_buf(),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn default_grid_size() {
        let c = ExperimentConfig::default();
        assert_eq!(c.systems.len() * c.positions.len() * c.programmes.len(), 120);
        assert_eq!(c.systems.len() * c.positions.len(), 60);
        c.validate().unwrap();
    }

    #[test]
    fn config_round_trip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let c = small_config(dir.path());
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, serde_json::to_string_pretty(&c).unwrap()).unwrap();
        let back = ExperimentConfig::from_file(&path).unwrap();
        assert_eq!(back.hash(), c.hash());

        let partial = dir.path().join("partial.json");
        std::fs::write(&partial, r#"{"positions": [{"azimuth": 0, "elevation": 135}], "hrir_manifest": "missing.json"}"#).unwrap();
        let p = ExperimentConfig::from_file(&partial).unwrap();
        assert_eq!(p.systems.len(), 6);
        assert_eq!(p.positions[0], Direction::new(180.0, 45.0));
        assert!(matches!(p.validate(), Err(crate::Error::Config(_))));

        let mut dup = c.clone();
        dup.programmes.push(dup.programmes[0].clone());
        assert!(dup.validate().is_err());
        let mut empty = c;
        empty.positions.clear();
        assert!(empty.validate().is_err());
    }

    #[test]
    fn sweep_records_and_artefacts() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small_config(dir.path());
        c.persist_wavs = true;
        let h = small_hrirs(&c.positions);
        let out = run_experiment(&c, &h).unwrap();
        assert!(out.is_clean(), "{:?}", out.failures);
        assert_eq!(out.records.len(), 6);

        for r in out.records.iter().filter(|r| r.technique == Technique::Reference) {
            assert_eq!(r.itd_error_s, 0.0);
            assert_eq!(r.ild_error_db, 0.0);
            assert_eq!(r.iacc_error, 0.0);
            assert_eq!(r.psd, 0.0);
        }

        let feeds = dir.path().join("wav").join("swf_octahedron_az+000.00_el+90.00_pink-3_feeds.wav");
        let x = crate::io::read_wav(&feeds).unwrap();
        assert_eq!(x.channels(), 6);
        assert_eq!(x.rows().iter().filter(|r| r.iter().any(|&v| v != 0.0)).count(), 1);

        write_outcome(&c, &out).unwrap();
        let text = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
        assert!(text.starts_with(&format!("# swfeval {} schema 1 config-sha256 {}", env!("CARGO_PKG_VERSION"), c.hash())));
        assert_eq!(read_records(text.as_bytes()).unwrap(), out.records);
    }

    #[test]
    fn sweep_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let c = small_config(dir.path());
        let h = small_hrirs(&c.positions);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_records(&mut a, &run_experiment(&c, &h).unwrap().records, &c.hash()).unwrap();
        write_records(&mut b, &run_experiment(&c, &h).unwrap().records, &c.hash()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn failures_are_collected() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small_config(dir.path());
        c.crossover_hz = 30_000.0;
        c.programmes = vec![Programme::PinkNoise { duration_s: 0.02, seed: 3 }];
        let h = small_hrirs(&c.positions);
        // a crossover above Nyquist only breaks the ambisonic system
        let out = run_experiment(&c, &h).unwrap();
        assert_eq!(out.records.len(), 4);
        assert_eq!(out.failures.len(), 2);
        assert!(out.failures.iter().all(|f| f.system.technique == Technique::Ambisonics && f.reason.contains("crossover")));

        let wrong_rate = SphericalHead::default().build_set(&c.positions, 44_100).unwrap();
        assert!(run_experiment(&c, &wrong_rate).is_err());
    }

    fn record(system: (Technique, LayoutName), value: f64) -> MetricRecord {
        MetricRecord {
            technique: system.0,
            layout: system.1,
            azimuth: value,
            elevation: 0.0,
            programme: "p".into(),
            itd_error_s: value,
            ild_error_db: value,
            iacc_error: value,
            psd: value,
            itd_reference_s: 0.0,
            ild_reference_db: 0.0,
            iacc_reference: 1.0,
            re_mag: value,
            rv_mag: None,
            spread_deg: value,
            spread_formula: Default::default(),
            remap_mode: Default::default(),
            lifting: Default::default(),
            target_dbfs: -1.0,
        }
    }

    #[test]
    fn aggregate_examples() {
        let sys = (Technique::Swf, LayoutName::Octahedron);
        let equal: Vec<MetricRecord> = (0..6).map(|_| record(sys, 2.5)).collect();
        let rows = aggregate(&equal, Metric::Psd, GroupBy::System, 1);
        assert_eq!((rows[0].median, rows[0].ci_low, rows[0].ci_high), (2.5, 2.5, 2.5));

        let five: Vec<MetricRecord> = (1..=5).map(|v| record(sys, v as f64)).collect();
        let rows = aggregate(&five, Metric::ItdError, GroupBy::System, 1);
        assert_eq!(rows[0].median, 3.0);
        assert_eq!(rows[0].group, "swf/octahedron");

        // rV is undefined in every record and the two-record group is too small
        assert!(aggregate(&five, Metric::RvMag, GroupBy::System, 1).is_empty());
        assert!(aggregate(&five[..2], Metric::Psd, GroupBy::System, 1).is_empty());
        assert_eq!("psd".parse::<Metric>().unwrap(), Metric::Psd);
        assert_eq!("itd_error".parse::<Metric>().unwrap(), Metric::ItdError);
    }

    #[test]
    fn vector_metrics_count_conditions_once() {
        let sys = (Technique::Swf, LayoutName::Tdesign24);
        let mut recs = Vec::new();
        for v in 0..4 {
            for p in ["a", "b"] {
                let mut r = record(sys, v as f64);
                r.programme = p.into();
                recs.push(r);
            }
        }
        assert_eq!(aggregate(&recs, Metric::ReMag, GroupBy::System, 1)[0].n, 4);
        assert_eq!(aggregate(&recs, Metric::Psd, GroupBy::System, 1)[0].n, 8);
    }

    #[test]
    fn summary_csv() {
        let sys = (Technique::Ambisonics, LayoutName::Lebedev50);
        let recs: Vec<MetricRecord> = (0..4).map(|v| record(sys, v as f64)).collect();
        let mut buf = Vec::new();
        write_summary(&mut buf, &aggregate(&recs, Metric::ReMag, GroupBy::Layout, 1)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("group,metric,n,median,ci_low,ci_high\nlebedev50,re_mag,4,1.5,"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn bootstrap_brackets_median_and_ignores_order(
            mut values in proptest::collection::vec(-10.0f64..10.0, 3..30),
            seed in 0u64..100,
        ) {
            let (m, lo, hi) = bootstrap_median_ci(&values, 0.95, 500, seed);
            prop_assert!(lo <= m && m <= hi);
            prop_assert_eq!(m, median(&values));
            values.reverse();
            prop_assert_eq!(bootstrap_median_ci(&values, 0.95, 500, seed), (m, lo, hi));
        }
    }
}
