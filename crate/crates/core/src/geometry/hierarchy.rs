use std::collections::HashMap;

use super::direction::Vec3;
use super::mesh::TriMesh;
use crate::error::{Error, Result};

pub const MAX_LEVEL: usize = 6;

/// One level of a subdivision hierarchy.
///
/// Vertices `0..coarse_count` are inherited unchanged from the previous
/// level; vertex `coarse_count + j` is the reprojected midpoint of the
/// previous-level edge `parents[j]`.
#[derive(Debug, Clone)]
pub struct MeshLevel {
    pub mesh: TriMesh,
    pub coarse_count: usize,
    pub parents: Vec<[usize; 2]>,
}

impl MeshLevel {
    pub fn vertex_count(&self) -> usize {
        self.mesh.vertex_count()
    }

    pub fn new_vertex_count(&self) -> usize {
        self.parents.len()
    }
}

/// Nested spherical meshes from repeated 1-to-4 subdivision of an
/// octahedron.
#[derive(Debug, Clone)]
pub struct TriMeshHierarchy {
    levels: Vec<MeshLevel>,
}

impl TriMeshHierarchy {
    pub fn levels(&self) -> &[MeshLevel] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> &MeshLevel {
        &self.levels[k]
    }

    pub fn finest_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn finest(&self) -> &TriMesh {
        &self.levels[self.finest_level()].mesh
    }

    pub fn vertex_counts(&self) -> Vec<usize> {
        self.levels.iter().map(MeshLevel::vertex_count).collect()
    }
}

pub fn octahedron() -> TriMesh {
    TriMesh {
        vertices: vec![
            Vec3::x(),
            -Vec3::x(),
            Vec3::y(),
            -Vec3::y(),
            Vec3::z(),
            -Vec3::z(),
        ],
        triangles: vec![
            [0, 2, 4],
            [2, 1, 4],
            [1, 3, 4],
            [3, 0, 4],
            [2, 0, 5],
            [1, 2, 5],
            [3, 1, 5],
            [0, 3, 5],
        ],
    }
}

/// Builds levels `0..=max_level`; level 0 is the octahedron with vertices
/// at ±x, ±y, ±z.
pub fn build_octahedron_hierarchy(max_level: usize) -> Result<TriMeshHierarchy> {
    if max_level > MAX_LEVEL {
        return Err(Error::Bounds {
            what: "hierarchy level",
            value: max_level as i64,
            min: 0,
            max: MAX_LEVEL as i64,
        });
    }
    let mut levels = vec![MeshLevel {
        mesh: octahedron(),
        coarse_count: 0,
        parents: Vec::new(),
    }];
    for _ in 0..max_level {
        let next = subdivide(&levels.last().unwrap().mesh);
        levels.push(next);
    }
    Ok(TriMeshHierarchy { levels })
}

fn subdivide(mesh: &TriMesh) -> MeshLevel {
    let coarse_count = mesh.vertex_count();
    let mut vertices = mesh.vertices.clone();
    let mut parents = Vec::new();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());

    let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Vec3>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoints.entry(key).or_insert_with(|| {
            vertices.push((vertices[a] + vertices[b]).normalize());
            parents.push([key.0, key.1]);
            vertices.len() - 1
        })
    };

    for &[a, b, c] in &mesh.triangles {
        let ab = midpoint(a, b, &mut vertices);
        let bc = midpoint(b, c, &mut vertices);
        let ca = midpoint(c, a, &mut vertices);
        triangles.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
    }

    MeshLevel {
        mesh: TriMesh {
            vertices,
            triangles,
        },
        coarse_count,
        parents,
    }
}
