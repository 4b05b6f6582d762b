//! HRIR sets, direct and virtual-loudspeaker binaural rendering.

mod hrir;
mod model;
mod render;

pub use hrir::{load_hrir_set, write_hrir_set, HrirEntry, HrirSet, Manifest, ManifestEntry};
pub use model::{default_model_grid, spherical_head_set, SphericalHead};
pub use render::{
    normalize_peak, peak_gain, render_direct_reference, render_virtual_loudspeakers, BinauralPair,
};

/// Default peak level of normalised renders.
pub const DEFAULT_TARGET_DBFS: f64 = -1.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::geometry::{fibonacci_grid, load_layout, Direction, LayoutName, LoudspeakerLayout};
    use crate::signal::MultichannelSignal;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn head() -> &'static HrirSet {
        static SET: OnceLock<HrirSet> = OnceLock::new();
        SET.get_or_init(|| spherical_head_set(48_000).unwrap())
    }

    fn small_set() -> HrirSet {
        let grid = [Direction::new(0.0, 0.0), Direction::new(90.0, 0.0), Direction::new(-90.0, 0.0)];
        SphericalHead::default().build_set(&grid, 48_000).unwrap()
    }

    #[test]
    fn manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let set = small_set();
        let path = write_hrir_set(&set, dir.path()).unwrap();
        let back = load_hrir_set(&path).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back.sample_rate(), 48_000);
        let (e, dist) = back.lookup(&Direction::new(0.0, 0.0));
        assert_eq!(dist, 0.0);
        for (a, b) in e.left.iter().zip(&set.entries()[0].left) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn bare_list_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_hrir_set(&small_set(), dir.path()).unwrap();
        let m: Manifest = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let bare = dir.path().join("bare.json");
        std::fs::write(&bare, serde_json::to_string(&m.entries).unwrap()).unwrap();
        assert_eq!(load_hrir_set(&bare).unwrap().len(), 3);
    }

    #[test]
    fn ingestion_errors_name_the_entry() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_hrir_set(&small_set(), dir.path()).unwrap();
        let mono = MultichannelSignal::new(44_100, vec![vec![0.0; 8], vec![0.0; 8]]).unwrap();
        crate::io::write_wav(&dir.path().join("hrir_00001.wav"), &mono, crate::io::WavFormat::Float32).unwrap();
        match load_hrir_set(&path) {
            Err(Error::Ingestion { entry, reason }) => {
                assert_eq!(entry, "hrir_00001.wav");
                assert!(reason.contains("sample rate"));
            }
            other => panic!("{other:?}"),
        }
        let mono = MultichannelSignal::new(48_000, vec![vec![0.0; 8]]).unwrap();
        crate::io::write_wav(&dir.path().join("hrir_00001.wav"), &mono, crate::io::WavFormat::Float32).unwrap();
        assert!(matches!(load_hrir_set(&path), Err(Error::Ingestion { .. })));
        std::fs::remove_file(dir.path().join("hrir_00002.wav")).unwrap();
        assert!(matches!(load_hrir_set(&path), Err(Error::Ingestion { .. })));
    }

    #[test]
    fn model_grid_covers_sphere() {
        assert!(head().coverage(&fibonacci_grid(2000)) < 2.0);
        for name in LayoutName::ALL {
            for d in load_layout(name).unwrap().directions() {
                assert!(head().lookup(d).1 < 1e-9);
            }
        }
    }

    #[test]
    fn model_is_left_right_mirrored() {
        let m = SphericalHead::default();
        let a = m.entry(&Direction::new(30.0, 10.0), 48_000);
        let b = m.entry(&Direction::new(-30.0, 10.0), 48_000);
        assert_eq!(a.left, b.right);
        assert_eq!(a.right, b.left);
        let front = m.entry(&Direction::new(0.0, 0.0), 48_000);
        assert_eq!(front.left, front.right);
    }

    #[test]
    fn model_has_interaural_cues() {
        let e = SphericalHead::default().entry(&Direction::new(90.0, 0.0), 48_000);
        let argmax = |x: &[f64]| x.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).unwrap().0;
        // source on the left: left ear earlier and louder
        assert!(argmax(&e.left) < argmax(&e.right));
        let energy = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        assert!(energy(&e.left) > 2.0 * energy(&e.right));
    }

    #[test]
    fn pinna_separates_median_plane() {
        let head = SphericalHead::default();
        let front = head.entry(&Direction::new(0.0, 0.0), 48_000);
        let above = head.entry(&Direction::new(0.0, 90.0), 48_000);
        assert_eq!(front.left, front.right);
        let diff: f64 = front.left.iter().zip(&above.left).map(|(a, b)| (a - b).powi(2)).sum();
        assert!(diff > 1e-3);
        let plain = SphericalHead { pinna: false, ..head };
        assert_eq!(plain.entry(&Direction::new(0.0, 0.0), 48_000).left, plain.entry(&Direction::new(0.0, 90.0), 48_000).left);
    }

    #[test]
    fn impulse_returns_hrir() {
        let d = Direction::new(90.0, 0.0);
        let p = render_direct_reference(&[1.0], 48_000, &d, head()).unwrap();
        let (e, _) = head().lookup(&d);
        assert_eq!(p.left, e.left);
        assert_eq!(p.right, e.right);
        assert!(render_direct_reference(&[1.0], 44_100, &d, head()).is_err());
    }

    #[test]
    fn front_source_is_symmetric() {
        let s: Vec<f64> = (0..300).map(|i| (i as f64 * 0.1).sin()).collect();
        let p = render_direct_reference(&s, 48_000, &Direction::new(0.0, 0.0), head()).unwrap();
        assert_eq!(p.left, p.right);
    }

    #[test]
    fn single_feed_equals_direct() {
        let l = load_layout(LayoutName::Tdesign24).unwrap();
        let s: Vec<f64> = (0..100).map(|i| ((i * 7) % 13) as f64 - 6.0).collect();
        let mut feeds = MultichannelSignal::silent(48_000, l.len(), s.len());
        feeds.row_mut(5).copy_from_slice(&s);
        let a = render_virtual_loudspeakers(&feeds, &l, head()).unwrap();
        let b = render_direct_reference(&s, 48_000, &l.directions()[5], head()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn silent_feeds_and_shape_errors() {
        let l = load_layout(LayoutName::Octahedron).unwrap();
        let p = render_virtual_loudspeakers(&MultichannelSignal::silent(48_000, 6, 10), &l, head()).unwrap();
        assert!(p.peak() == 0.0 && p.len() == 10 + head().ir_len() - 1);
        assert!(matches!(
            render_virtual_loudspeakers(&MultichannelSignal::silent(48_000, 5, 10), &l, head()),
            Err(Error::Shape { .. })
        ));
        assert!(render_virtual_loudspeakers(&MultichannelSignal::silent(44_100, 6, 10), &l, head()).is_err());
    }

    #[test]
    fn symmetric_pair_gives_equal_ears() {
        let l = LoudspeakerLayout::from_directions(
            "stereo",
            vec![
                Direction::new(30.0, 0.0),
                Direction::new(-30.0, 0.0),
                Direction::new(0.0, 90.0),
                Direction::new(0.0, -90.0),
                Direction::new(180.0, 0.0),
            ],
        )
        .unwrap();
        let s: Vec<f64> = (0..64).map(|i| (i as f64 * 0.45).cos()).collect();
        let mut feeds = MultichannelSignal::silent(48_000, 5, 64);
        feeds.row_mut(0).copy_from_slice(&s);
        feeds.row_mut(1).copy_from_slice(&s);
        let set = SphericalHead::default().build_set(l.directions(), 48_000).unwrap();
        let p = render_virtual_loudspeakers(&feeds, &l, &set).unwrap();
        for (a, b) in p.left.iter().zip(&p.right) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn normalisation() {
        let p = BinauralPair::new(48_000, vec![0.5, -0.1], vec![0.25, 0.0]).unwrap();
        let k = peak_gain(&p, -1.0).unwrap();
        assert!((k - 10f64.powf(-0.05) / 0.5).abs() < 1e-12);
        assert!((k - 1.7825).abs() < 1e-4);
        let n = normalize_peak(&p, -1.0).unwrap();
        assert!((n.left[0] / n.right[0] - 2.0).abs() < 1e-12);
        assert!((peak_gain(&n, -1.0).unwrap() - 1.0).abs() < 1e-12);
        let silent = BinauralPair::new(48_000, vec![0.0; 4], vec![0.0; 4]).unwrap();
        assert!(matches!(normalize_peak(&silent, -1.0), Err(Error::Normalization(_))));
        assert!(BinauralPair::new(48_000, vec![0.0; 4], vec![0.0; 3]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn virtual_loudspeakers_are_a_weighted_sum(
            gains in proptest::collection::vec(-1.0f64..1.0, 6),
            perm_seed in 0usize..720,
        ) {
            let l = load_layout(LayoutName::Octahedron).unwrap();
            let s: Vec<f64> = (0..40).map(|i| (i as f64 * 0.7).sin()).collect();
            let feeds = MultichannelSignal::from_gains(48_000, &gains, &s);
            let p = render_virtual_loudspeakers(&feeds, &l, head()).unwrap();
            let mut left = vec![0.0; p.len()];
            let mut right = vec![0.0; p.len()];
            for (g, d) in gains.iter().zip(l.directions()) {
                let q = render_direct_reference(&s, 48_000, d, head()).unwrap();
                for t in 0..p.len() {
                    left[t] += g * q.left[t];
                    right[t] += g * q.right[t];
                }
            }
            for t in 0..p.len() {
                prop_assert!((p.left[t] - left[t]).abs() < 1e-12);
                prop_assert!((p.right[t] - right[t]).abs() < 1e-12);
            }

            // permuting loudspeakers and feeds together
            let mut order: Vec<usize> = (0..6).collect();
            let mut k = perm_seed;
            for i in (1..6).rev() {
                order.swap(i, k % (i + 1));
                k /= i + 1;
            }
            let dirs: Vec<Direction> = order.iter().map(|&i| l.directions()[i]).collect();
            let lp = LoudspeakerLayout::from_directions("permuted", dirs).unwrap();
            let rows: Vec<Vec<f64>> = order.iter().map(|&i| feeds.row(i).to_vec()).collect();
            let q = render_virtual_loudspeakers(&MultichannelSignal::new(48_000, rows).unwrap(), &lp, head()).unwrap();
            for t in 0..p.len() {
                prop_assert!((p.left[t] - q.left[t]).abs() < 1e-12);
                prop_assert!((p.right[t] - q.right[t]).abs() < 1e-12);
            }
        }
    }
}
