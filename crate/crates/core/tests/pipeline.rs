use swfeval_core::ambisonics::{dual_band_decode, encode_plane_wave, DEFAULT_CROSSOVER_HZ};
use swfeval_core::binaural::{load_hrir_set, write_hrir_set, SphericalHead};
use swfeval_core::geometry::{build_octahedron_hierarchy, load_layout, table_positions, Direction};
use swfeval_core::harness::{generate_pink_noise, run_experiment, ExperimentConfig, Programme};
use swfeval_core::io::{read_ambisonic_wav, write_ambisonic_wav, WavFormat};
use swfeval_core::swf::{swf_render, LiftingKind, SwfOptions, SwfRenderer};
use swfeval_core::{LayoutName, System, SystemRenderer, Technique};

const FS: u32 = 48_000;

fn max_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn signal_path_matches_gain_path() {
    let s = generate_pink_noise(0.01, FS, 9).unwrap();
    for name in LayoutName::ALL {
        let layout = load_layout(name).unwrap();
        let r = SwfRenderer::for_layout(name, SwfOptions::default()).unwrap();
        let h = build_octahedron_hierarchy(2).unwrap();
        for d in table_positions() {
            let fast = r.render(&d, &s, FS);
            let slow = swf_render(&h, LiftingKind::UpdateFirst.filter().as_ref(), &d, &s, FS, &layout, Default::default()).unwrap();
            assert!(max_diff(fast.rows(), slow.rows()) < 1e-12, "{name} {d}");
        }
    }
}

#[test]
fn ambisonic_file_round_trip_decodes_identically() {
    let dir = tempfile::tempdir().unwrap();
    let s = generate_pink_noise(0.01, FS, 2).unwrap();
    let x = encode_plane_wave(3, &Direction::new(45.0, 20.0), &s, FS).unwrap();
    let path = dir.path().join("b.wav");
    write_ambisonic_wav(&path, &x, WavFormat::Float32).unwrap();
    let back = read_ambisonic_wav(&path).unwrap();
    let a = dual_band_decode(&x, LayoutName::Tdesign24, DEFAULT_CROSSOVER_HZ).unwrap();
    let b = dual_band_decode(&back, LayoutName::Tdesign24, DEFAULT_CROSSOVER_HZ).unwrap();
    assert!(max_diff(a.rows(), b.rows()) < 1e-5);
}

#[test]
fn sweep_on_a_manifest_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let positions = vec![Direction::new(30.0, 0.0), Direction::new(0.0, 90.0)];
    let mut grid = positions.clone();
    grid.extend_from_slice(load_layout(LayoutName::Octahedron).unwrap().directions());
    let set = SphericalHead::default().build_set(&grid, FS).unwrap();
    let manifest = write_hrir_set(&set, &dir.path().join("hrir")).unwrap();
    let loaded = load_hrir_set(&manifest).unwrap();
    assert_eq!(loaded.len(), set.len());

    let config = ExperimentConfig {
        systems: vec![System::new(Technique::Swf, LayoutName::Octahedron), System::new(Technique::Ambisonics, LayoutName::Octahedron)],
        positions,
        programmes: vec![Programme::PinkNoise { duration_s: 0.02, seed: 1 }],
        hrir_manifest: Some(manifest),
        output_dir: dir.path().join("out"),
        ..ExperimentConfig::default()
    };
    let from_disk = run_experiment(&config, &loaded).unwrap();
    let in_memory = run_experiment(&config, &set).unwrap();
    assert_eq!(from_disk.records.len(), 4);
    for (a, b) in from_disk.records.iter().zip(&in_memory.records) {
        // float32 storage of the HRIRs
        assert!((a.psd - b.psd).abs() < 1e-3);
        assert!((a.ild_error_db - b.ild_error_db).abs() < 1e-3);
        assert_eq!(a.itd_error_s, b.itd_error_s);
    }
}

#[test]
fn renderers_cover_the_default_grid() {
    for sys in System::default_grid() {
        let r = SystemRenderer::new(sys, SwfOptions::default()).unwrap();
        let feeds = r.render(&Direction::new(30.0, 0.0), &[1.0, 0.0, 0.0], FS).unwrap();
        assert_eq!(feeds.channels(), r.layout().len(), "{sys}");
    }
    assert!(SystemRenderer::new(System::new(Technique::Reference, LayoutName::Octahedron), SwfOptions::default()).is_err());
}
