//! Convex-hull triangulation of small point sets on the sphere.

use super::direction::Vec3;

const PLANE_TOL: f64 = 1e-9;

/// Triangulates the convex hull of unit vectors by brute force over point
/// triples, which is adequate for loudspeaker-sized sets (under a few
/// hundred points). Coplanar hull faces, such as the squares of a snub cube,
/// are fan-triangulated.
///
/// Triangles are wound counter-clockwise when seen from outside.
pub fn convex_hull(points: &[Vec3]) -> Vec<[usize; 3]> {
    let n = points.len();
    let mut planes: Vec<(Vec3, f64)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let normal = (points[j] - points[i]).cross(&(points[k] - points[i]));
                let len = normal.norm();
                if len < 1e-12 {
                    continue;
                }
                let mut normal = normal / len;
                let mut offset = normal.dot(&points[i]);
                if offset < 0.0 {
                    normal = -normal;
                    offset = -offset;
                }
                if points.iter().all(|p| normal.dot(p) <= offset + PLANE_TOL)
                    && !planes
                        .iter()
                        .any(|(m, o)| (m - normal).norm() < 1e-7 && (o - offset).abs() < 1e-7)
                {
                    planes.push((normal, offset));
                }
            }
        }
    }

    let mut triangles = Vec::new();
    for (normal, offset) in planes {
        let mut face: Vec<usize> = (0..n)
            .filter(|&i| (normal.dot(&points[i]) - offset).abs() < PLANE_TOL)
            .collect();
        let centre = face.iter().map(|&i| points[i]).sum::<Vec3>() / face.len() as f64;
        let mut u = points[face[0]] - centre;
        u -= normal * normal.dot(&u);
        let u = u.normalize();
        let v = normal.cross(&u);
        face.sort_by(|&a, &b| {
            let pa = points[a] - centre;
            let pb = points[b] - centre;
            let ta = pa.dot(&v).atan2(pa.dot(&u));
            let tb = pb.dot(&v).atan2(pb.dot(&u));
            ta.total_cmp(&tb)
        });
        for t in 1..face.len() - 1 {
            triangles.push([face[0], face[t], face[t + 1]]);
        }
    }
    triangles
}
