use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::direction::{angle_between, Direction, Vec3};
use super::hull::convex_hull;
use super::mesh::TriMesh;
use crate::error::{Error, Result};

const OCTAHEDRON_TXT: &str = include_str!("../../data/octahedron.txt");
const TDESIGN24_TXT: &str = include_str!("../../data/tdesign24.txt");
const LEBEDEV50_TXT: &str = include_str!("../../data/lebedev50.txt");

const OCTAHEDRON_SHA256: &str = "f5fc56b0e6524881dc879d11ecaf66932dacf84f40fef2d9b4a6ef04adb44fc5";
const TDESIGN24_SHA256: &str = "4edd4f6fcc9a9cd229779d4ba628a320c63012402eaf22497789ef4a02af10ce";
const LEBEDEV50_SHA256: &str = "2a9d24707b101e06a531c6e6928848038f91e3caba6ff352bc42bd5e0f7dd704";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutName {
    Octahedron,
    Tdesign24,
    Lebedev50,
}

impl LayoutName {
    pub const ALL: [LayoutName; 3] = [
        LayoutName::Octahedron,
        LayoutName::Tdesign24,
        LayoutName::Lebedev50,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            LayoutName::Octahedron => "octahedron",
            LayoutName::Tdesign24 => "tdesign24",
            LayoutName::Lebedev50 => "lebedev50",
        }
    }

    /// Ambisonic order matched to the layout's channel count.
    pub fn ambisonic_order(&self) -> usize {
        match self {
            LayoutName::Octahedron => 1,
            LayoutName::Tdesign24 => 3,
            LayoutName::Lebedev50 => 5,
        }
    }

    fn data(&self) -> (&'static str, &'static str) {
        match self {
            LayoutName::Octahedron => (OCTAHEDRON_TXT, OCTAHEDRON_SHA256),
            LayoutName::Tdesign24 => (TDESIGN24_TXT, TDESIGN24_SHA256),
            LayoutName::Lebedev50 => (LEBEDEV50_TXT, LEBEDEV50_SHA256),
        }
    }
}

impl fmt::Display for LayoutName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LayoutName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "octahedron" => Ok(LayoutName::Octahedron),
            "tdesign24" | "t-design-24" | "tdesign" => Ok(LayoutName::Tdesign24),
            "lebedev50" | "lebedev-50" | "lebedev" => Ok(LayoutName::Lebedev50),
            other => Err(Error::config(format!("unknown layout `{other}`"))),
        }
    }
}

/// A named loudspeaker arrangement with a convex-hull triangulation.
#[derive(Debug, Clone)]
pub struct LoudspeakerLayout {
    name: String,
    directions: Vec<Direction>,
    mesh: TriMesh,
}

impl LoudspeakerLayout {
    pub fn from_directions(name: impl Into<String>, directions: Vec<Direction>) -> Result<Self> {
        if directions.len() < 4 {
            return Err(Error::config("a layout needs at least 4 loudspeakers"));
        }
        let vertices: Vec<Vec3> = directions.iter().map(Direction::to_unit).collect();
        for i in 0..vertices.len() {
            for j in 0..i {
                if angle_between(&vertices[i], &vertices[j]) <= 0.1 {
                    return Err(Error::config(format!(
                        "loudspeakers {j} and {i} are closer than 0.1°"
                    )));
                }
            }
        }
        let triangles = convex_hull(&vertices);
        Ok(Self {
            name: name.into(),
            directions,
            mesh: TriMesh {
                vertices,
                triangles,
            },
        })
    }

    /// Parses the plain-text grid format: one `azimuth elevation` pair per
    /// line in degrees, `#` starts a comment.
    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        Self::from_directions(name, parse_directions(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        Self::parse(name, &text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn unit_vectors(&self) -> &[Vec3] {
        &self.mesh.vertices
    }

    pub fn triangulation(&self) -> &[[usize; 3]] {
        &self.mesh.triangles
    }

    pub fn mesh(&self) -> &TriMesh {
        &self.mesh
    }

    /// Index of the loudspeaker closest to `v`.
    pub fn nearest(&self, v: &Vec3) -> usize {
        self.mesh
            .vertices
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.dot(v).total_cmp(&b.1.dot(v)))
            .map(|(i, _)| i)
            .expect("layout is non-empty")
    }
}

pub fn parse_directions(text: &str) -> Result<Vec<Direction>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parsed: Option<(f64, f64)> = match fields.as_slice() {
            [az, el] => az.parse().ok().zip(el.parse().ok()),
            _ => None,
        };
        let (az, el) = parsed.ok_or_else(|| {
            Error::config(format!(
                "line {}: expected `azimuth elevation`, got `{raw}`",
                lineno + 1
            ))
        })?;
        out.push(Direction::new(az, el));
    }
    Ok(out)
}

/// Loads one of the built-in layouts after verifying its data checksum.
pub fn load_layout(name: LayoutName) -> Result<LoudspeakerLayout> {
    let (text, expected) = name.data();
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    if hex != expected {
        return Err(Error::Data(format!(
            "{name}: checksum {hex} does not match {expected}"
        )));
    }
    LoudspeakerLayout::parse(name.as_str(), text)
}

/// Quadrature weights of the Lebedev-50 grid in file order, summing to 1.
///
/// Weights depend only on the node's orbit, identified from its
/// coordinates.
pub fn lebedev50_weights(layout: &LoudspeakerLayout) -> Vec<f64> {
    layout
        .unit_vectors()
        .iter()
        .map(|v| {
            let mut a = [v.x.abs(), v.y.abs(), v.z.abs()];
            a.sort_by(f64::total_cmp);
            if a[1] < 1e-6 {
                1.0 / 78.75
            } else if a[0] < 1e-6 {
                64.0 / 2835.0
            } else if (a[2] - a[0]).abs() < 1e-6 {
                27.0 / 1280.0
            } else {
                14_641.0 / 725_760.0
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::direction::fibonacci_grid;

    #[test]
    fn sizes() {
        assert_eq!(load_layout(LayoutName::Octahedron).unwrap().len(), 6);
        assert_eq!(load_layout(LayoutName::Tdesign24).unwrap().len(), 24);
        assert_eq!(load_layout(LayoutName::Lebedev50).unwrap().len(), 50);
    }

    #[test]
    fn octahedron_has_poles() {
        let l = load_layout(LayoutName::Octahedron).unwrap();
        let has = |el: f64| l.directions().iter().any(|d| d.elevation() == el);
        assert!(has(90.0) && has(-90.0));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!("dodecahedron".parse::<LayoutName>(), Err(Error::Config(_))));
    }

    #[test]
    fn triangulations_cover_sphere() {
        for name in LayoutName::ALL {
            let l = load_layout(name).unwrap();
            let omega = l.mesh().total_solid_angle();
            assert!(
                (omega - 4.0 * std::f64::consts::PI).abs() < 1e-6,
                "{name}: {omega}"
            );
            assert_eq!(l.mesh().euler_characteristic(), 2, "{name}");
            assert_eq!(l.triangulation().len(), 2 * l.len() - 4, "{name}");
        }
    }

    #[test]
    fn triangulations_locate_everywhere() {
        for name in LayoutName::ALL {
            let l = load_layout(name).unwrap();
            for d in fibonacci_grid(2_000) {
                let loc = l.mesh().locate(&d);
                assert!((loc.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lebedev_weights_sum_to_one() {
        let l = load_layout(LayoutName::Lebedev50).unwrap();
        let w = lebedev50_weights(&l);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn duplicate_directions_rejected() {
        let text = "0 0\n90 0\n0 90\n0 -90\n0.01 0\n";
        assert!(matches!(
            LoudspeakerLayout::parse("dup", text),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn parse_reports_line() {
        let err = parse_directions("# header\n0 0\nbogus\n").unwrap_err();
        assert!(err.to_string().contains("line 3"));
    }
}
