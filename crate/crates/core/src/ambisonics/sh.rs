use crate::error::{Error, Result};
use crate::geometry::Direction;
use crate::signal::MultichannelSignal;

/// Number of ambisonic channels for `order`.
pub fn channel_count(order: usize) -> usize {
    (order + 1) * (order + 1)
}

/// ACN channel index of degree `n`, index `m` (`-n <= m <= n`).
pub fn acn(n: usize, m: i64) -> usize {
    ((n * n + n) as i64 + m) as usize
}

/// Ambisonic degree of ACN channel `q`.
pub fn degree_of(q: usize) -> usize {
    (q as f64).sqrt().floor() as usize
}

/// Real spherical harmonics up to `order`, ACN order, N3D normalisation,
/// without the Condon–Shortley phase.
pub fn sh_eval(order: usize, d: &Direction) -> Vec<f64> {
    let az = d.azimuth().to_radians();
    let x = d.elevation().to_radians().sin();
    let legendre = associated_legendre(order, x);
    let mut out = vec![0.0; channel_count(order)];
    for n in 0..=order {
        for m in 0..=n {
            let p = legendre[n][m];
            // (n-m)!/(n+m)! as a running product
            let ratio: f64 = ((n - m + 1)..=(n + m)).map(|k| 1.0 / k as f64).product();
            let dm = if m == 0 { 1.0 } else { 2.0 };
            let norm = ((2 * n + 1) as f64 * dm * ratio).sqrt();
            let base = n * n + n;
            if m == 0 {
                out[base] = norm * p;
            } else {
                let ma = m as f64 * az;
                out[base + m] = norm * p * ma.cos();
                out[base - m] = norm * p * ma.sin();
            }
        }
    }
    out
}

/// `P[n][m]` for `0 <= m <= n <= order`, no Condon–Shortley phase.
fn associated_legendre(order: usize, x: f64) -> Vec<Vec<f64>> {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut p = vec![vec![0.0; order + 1]; order + 1];
    p[0][0] = 1.0;
    for m in 1..=order {
        p[m][m] = p[m - 1][m - 1] * (2 * m - 1) as f64 * s;
    }
    for m in 0..order {
        p[m + 1][m] = x * (2 * m + 1) as f64 * p[m][m];
    }
    for m in 0..=order {
        for n in (m + 2)..=order {
            p[n][m] = ((2 * n - 1) as f64 * x * p[n - 1][m] - (n + m - 1) as f64 * p[n - 2][m])
                / (n - m) as f64;
        }
    }
    p
}

/// Legendre polynomial `P_n(x)` by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalisation {
    N3D,
    SN3D,
}

/// Ambisonic signal in ACN order with N3D normalisation.
#[derive(Debug, Clone, PartialEq)]
pub struct ShSignal {
    order: usize,
    channels: MultichannelSignal,
}

impl ShSignal {
    pub fn new(order: usize, channels: MultichannelSignal) -> Result<Self> {
        if channels.channels() != channel_count(order) {
            return Err(Error::Shape {
                context: "ambisonic channel count",
                expected: channel_count(order),
                got: channels.channels(),
            });
        }
        Ok(Self { order, channels })
    }

    /// Infers the order from the channel count; `channels` is interpreted in
    /// `norm` and converted to N3D.
    pub fn from_channels(channels: MultichannelSignal, norm: Normalisation) -> Result<Self> {
        let q = channels.channels();
        let order = ((q as f64).sqrt().round() as usize).saturating_sub(1);
        if channel_count(order) != q {
            return Err(Error::config(format!(
                "{q} channels is not a full ambisonic channel set"
            )));
        }
        let mut channels = channels;
        if norm == Normalisation::SN3D {
            for c in 0..q {
                let k = ((2 * degree_of(c) + 1) as f64).sqrt();
                channels.row_mut(c).iter_mut().for_each(|v| *v *= k);
            }
        }
        Ok(Self { order, channels })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn normalisation(&self) -> Normalisation {
        Normalisation::N3D
    }

    pub fn channels(&self) -> &MultichannelSignal {
        &self.channels
    }

    /// Copy of the channels in the requested normalisation.
    pub fn to_normalisation(&self, norm: Normalisation) -> MultichannelSignal {
        let mut out = self.channels.clone();
        if norm == Normalisation::SN3D {
            for c in 0..out.channels() {
                let k = 1.0 / ((2 * degree_of(c) + 1) as f64).sqrt();
                out.row_mut(c).iter_mut().for_each(|v| *v *= k);
            }
        }
        out
    }
}

/// Encodes a mono plane wave from `d`: channel `q` is `Y_q(d) * s`.
pub fn encode_plane_wave(order: usize, d: &Direction, s: &[f64], sample_rate: u32) -> Result<ShSignal> {
    if s.is_empty() {
        return Err(Error::config("cannot encode an empty signal"));
    }
    let y = sh_eval(order, d);
    ShSignal::new(order, MultichannelSignal::from_gains(sample_rate, &y, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{lebedev50_weights, load_layout, LayoutName};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn order_zero_is_one() {
        assert_eq!(sh_eval(0, &Direction::new(123.0, -40.0)), vec![1.0]);
    }

    #[test]
    fn first_order_front() {
        let y = sh_eval(1, &Direction::new(0.0, 0.0));
        let expected = [1.0, 0.0, 0.0, 3f64.sqrt()];
        for (a, b) in y.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    /// Closed forms for the second-degree N3D harmonics.
    #[test]
    fn second_degree_closed_forms() {
        let d = Direction::new(37.0, 21.0);
        let v = d.to_unit();
        let (x, y, z) = (v.x, v.y, v.z);
        let s15 = 15f64.sqrt();
        let expected = [
            s15 * x * y,
            s15 * y * z,
            5f64.sqrt() / 2.0 * (3.0 * z * z - 1.0),
            s15 * x * z,
            s15 / 2.0 * (x * x - y * y),
        ];
        let got = sh_eval(2, &d);
        for (a, b) in got[4..9].iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn addition_theorem() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let d = Direction::new(rng.random_range(-180.0..180.0), rng.random_range(-90.0..90.0));
            let y = sh_eval(5, &d);
            for n in 0..=5 {
                let s: f64 = y[n * n..(n + 1) * (n + 1)].iter().map(|v| v * v).sum();
                assert!((s - (2 * n + 1) as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn lebedev_gram_is_identity() {
        let l = load_layout(LayoutName::Lebedev50).unwrap();
        let w = lebedev50_weights(&l);
        let ys: Vec<Vec<f64>> = l.directions().iter().map(|d| sh_eval(5, d)).collect();
        let q = channel_count(5);
        for i in 0..q {
            for j in 0..q {
                let g: f64 = ys.iter().zip(&w).map(|(y, w)| w * y[i] * y[j]).sum();
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g - e).abs() < 1e-10, "G[{i}][{j}] = {g}");
            }
        }
    }

    #[test]
    fn legendre_values() {
        assert!((legendre(2, 0.5) - (-0.125)).abs() < 1e-15);
        assert!((legendre(3, 0.3) - 0.5 * (5.0 * 0.027 - 0.9)).abs() < 1e-15);
    }

    #[test]
    fn encode_examples() {
        let imp = [1.0, 0.0, 0.0];
        let x = encode_plane_wave(0, &Direction::new(10.0, 10.0), &imp, 48_000).unwrap();
        assert_eq!(x.channels().rows(), &[imp.to_vec()]);

        let x = encode_plane_wave(1, &Direction::new(0.0, 0.0), &imp, 48_000).unwrap();
        let r = x.channels().rows();
        assert_eq!(r[0], imp.to_vec());
        assert!(r[1].iter().chain(&r[2]).all(|v| v.abs() < 1e-15));
        assert!((r[3][0] - 3f64.sqrt()).abs() < 1e-12);

        assert!(encode_plane_wave(1, &Direction::new(0.0, 0.0), &[], 48_000).is_err());
    }

    #[test]
    fn sn3d_round_trip() {
        let x = encode_plane_wave(3, &Direction::new(40.0, 10.0), &[0.5, -0.25], 48_000).unwrap();
        let sn3d = x.to_normalisation(Normalisation::SN3D);
        // SN3D first-degree gains are bounded by one
        assert!(sn3d.rows()[1..4].iter().flatten().all(|v| v.abs() <= 0.5 + 1e-12));
        let back = ShSignal::from_channels(sn3d, Normalisation::SN3D).unwrap();
        for (a, b) in back.channels().rows().iter().flatten().zip(x.channels().rows().iter().flatten()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn bad_channel_count() {
        let m = MultichannelSignal::silent(48_000, 5, 4);
        assert!(ShSignal::from_channels(m, Normalisation::N3D).is_err());
    }

    proptest! {
        #[test]
        fn encoding_is_linear(a in -4.0f64..4.0, s in proptest::collection::vec(-1.0f64..1.0, 1..32)) {
            let d = Direction::new(70.0, -20.0);
            let scaled: Vec<f64> = s.iter().map(|v| a * v).collect();
            let x = encode_plane_wave(2, &d, &s, 48_000).unwrap();
            let y = encode_plane_wave(2, &d, &scaled, 48_000).unwrap();
            for (q, row) in y.channels().rows().iter().enumerate() {
                for (i, v) in row.iter().enumerate() {
                    prop_assert!((v - a * x.channels().row(q)[i]).abs() <= 1e-12 * v.abs().max(1.0));
                }
            }
        }
    }
}
