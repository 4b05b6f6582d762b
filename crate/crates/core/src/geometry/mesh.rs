use std::collections::BTreeSet;

use nalgebra::Matrix3;

use super::direction::{Direction, Vec3};

/// A closed triangulated mesh whose vertices lie on the unit sphere.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
}

/// Triangle containing a direction together with the interpolation weights
/// of its three corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    pub triangle: usize,
    pub vertices: [usize; 3],
    pub weights: [f64; 3],
}

const INSIDE_TOL: f64 = 1e-12;

impl TriMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Undirected edges as sorted vertex pairs.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut edges = BTreeSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        edges
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges().len() as i64 + self.triangles.len() as i64
    }

    /// Sum of the spherical triangles' solid angles (4π for a full cover).
    pub fn total_solid_angle(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| solid_angle(&self.vertices[t[0]], &self.vertices[t[1]], &self.vertices[t[2]]))
            .sum()
    }

    /// Finds the spherical triangle containing `d`.
    ///
    /// Weights are the planar barycentric coordinates of the central
    /// projection of `d` onto the triangle's plane, clipped at zero and
    /// renormalised. Directions on a shared edge resolve to the lowest
    /// triangle index.
    pub fn locate(&self, d: &Direction) -> Location {
        self.locate_vector(&d.to_unit())
    }

    pub fn locate_vector(&self, v: &Vec3) -> Location {
        let mut best: Option<(f64, usize, [f64; 3])> = None;
        for (id, t) in self.triangles.iter().enumerate() {
            let w = match projected_weights(
                &self.vertices[t[0]],
                &self.vertices[t[1]],
                &self.vertices[t[2]],
                v,
            ) {
                Some(w) => w,
                None => continue,
            };
            let worst = w[0].min(w[1]).min(w[2]);
            if worst >= -INSIDE_TOL {
                return Location {
                    triangle: id,
                    vertices: *t,
                    weights: clip_normalise(w),
                };
            }
            if best.is_none_or(|(b, _, _)| worst > b) {
                best = Some((worst, id, w));
            }
        }
        // Only reachable through round-off on a degenerate query; take the
        // least-violating triangle so the lookup stays total.
        let (_, id, w) = best.expect("mesh has no triangles");
        Location {
            triangle: id,
            vertices: self.triangles[id],
            weights: clip_normalise(w),
        }
    }
}

/// Solves `[a b c] w = v`. Positive weights mean `v` lies inside the cone
/// spanned by the corners. Returns `None` for triangles facing away.
fn projected_weights(a: &Vec3, b: &Vec3, c: &Vec3, v: &Vec3) -> Option<[f64; 3]> {
    let m = Matrix3::from_columns(&[*a, *b, *c]);
    let w = m.lu().solve(v)?;
    let sum = w.x + w.y + w.z;
    if sum <= 0.0 {
        return None;
    }
    Some([w.x / sum, w.y / sum, w.z / sum])
}

fn clip_normalise(w: [f64; 3]) -> [f64; 3] {
    let c = w.map(|x| x.max(0.0));
    let s: f64 = c.iter().sum();
    c.map(|x| x / s)
}

/// Solid angle of the spherical triangle (Van Oosterom & Strackee).
pub fn solid_angle(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let num = a.dot(&b.cross(c)).abs();
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn octant() -> TriMesh {
        TriMesh {
            vertices: vec![Vec3::x(), Vec3::y(), Vec3::z()],
            triangles: vec![[0, 1, 2]],
        }
    }

    #[test]
    fn octant_solid_angle() {
        let m = octant();
        assert!((m.total_solid_angle() - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn centroid_weights() {
        let m = octant();
        let loc = m.locate_vector(&Vec3::new(1.0, 1.0, 1.0).normalize());
        for w in loc.weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-12);
        }
    }
}
