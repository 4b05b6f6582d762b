use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

pub type Vec3 = Vector3<f64>;

/// A direction on the unit sphere in degrees.
///
/// Azimuth is counter-clockwise from the front (+x) so that +90° is the
/// left (+y); elevation is positive upwards. Construction folds elevations
/// beyond the poles back onto the sphere, so `(0°, 135°)` becomes
/// `(180°, 45°)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    azimuth: f64,
    elevation: f64,
}

impl Direction {
    pub fn new(azimuth: f64, elevation: f64) -> Self {
        let mut az = azimuth;
        let mut el = (elevation + 180.0).rem_euclid(360.0) - 180.0;
        if el > 90.0 {
            el = 180.0 - el;
            az += 180.0;
        } else if el < -90.0 {
            el = -180.0 - el;
            az += 180.0;
        }
        if !(-180.0..360.0).contains(&az) {
            az = (az + 180.0).rem_euclid(360.0) - 180.0;
        }
        Self {
            azimuth: az,
            elevation: el,
        }
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    pub fn elevation(&self) -> f64 {
        self.elevation
    }

    pub fn to_unit(&self) -> Vec3 {
        let (az, el) = (self.azimuth.to_radians(), self.elevation.to_radians());
        Vec3::new(el.cos() * az.cos(), el.cos() * az.sin(), el.sin())
    }

    /// Inverse of [`to_unit`](Self::to_unit); azimuth in (-180, 180].
    pub fn from_vector(v: &Vec3) -> Self {
        let u = v.normalize();
        let el = u.z.clamp(-1.0, 1.0).asin().to_degrees();
        let az = if u.x == 0.0 && u.y == 0.0 {
            0.0
        } else {
            u.y.atan2(u.x).to_degrees()
        };
        Self {
            azimuth: az,
            elevation: el,
        }
    }

    /// Great-circle distance in degrees.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        angle_between(&self.to_unit(), &other.to_unit())
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}°, {}°)", self.azimuth, self.elevation)
    }
}

/// Angle between two vectors in degrees, robust near 0° and 180°.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b)).to_degrees()
}

/// `n` nearly uniform directions on a Fibonacci lattice.
pub fn fibonacci_grid(n: usize) -> Vec<Direction> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Direction::from_vector(&Vec3::new(r * phi.cos(), r * phi.sin(), z))
        })
        .collect()
}

/// The ten source positions used by the default evaluation grid.
pub fn table_positions() -> Vec<Direction> {
    [
        (0.0, 0.0),
        (30.0, 0.0),
        (90.0, 0.0),
        (135.0, 0.0),
        (180.0, 0.0),
        (0.0, 45.0),
        (0.0, 90.0),
        (0.0, 135.0),
        (45.0, 45.0),
        (135.0, 45.0),
    ]
    .into_iter()
    .map(|(az, el)| Direction::new(az, el))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn front_left_up() {
        assert!((Direction::new(0.0, 0.0).to_unit() - Vec3::x()).norm() < 1e-15);
        assert!((Direction::new(90.0, 0.0).to_unit() - Vec3::y()).norm() < 1e-15);
        assert!((Direction::new(0.0, 90.0).to_unit() - Vec3::z()).norm() < 1e-15);
    }

    #[test]
    fn over_the_pole() {
        let d = Direction::new(0.0, 135.0);
        assert_eq!(d.azimuth(), 180.0);
        assert_eq!(d.elevation(), 45.0);
        let v = d.to_unit();
        let expected = Vec3::new(-1.0, 0.0, 1.0).normalize();
        assert!((v - expected).norm() < 1e-15);
    }

    #[test]
    fn table_has_ten_distinct_positions() {
        let p = table_positions();
        assert_eq!(p.len(), 10);
        for i in 0..10 {
            for j in 0..i {
                assert!(p[i].angle_to(&p[j]) > 1.0);
            }
        }
    }

    proptest! {
        #[test]
        fn unit_norm(az in -180.0f64..360.0, el in -90.0f64..=90.0) {
            let n = Direction::new(az, el).to_unit().norm();
            prop_assert!((n - 1.0).abs() < 1e-12);
        }

        #[test]
        fn degree_round_trip(az in -180.0f64..360.0, el in -89.0f64..89.0) {
            let back = Direction::from_vector(&Direction::new(az, el).to_unit());
            let daz = (back.azimuth() - az).rem_euclid(360.0);
            let daz = daz.min(360.0 - daz);
            prop_assert!(daz < 1e-9);
            prop_assert!((back.elevation() - el).abs() < 1e-9);
        }
    }
}
