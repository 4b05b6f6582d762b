//! Directions, subdivision meshes and loudspeaker layouts.

mod direction;
mod hierarchy;
mod hull;
mod layout;
mod mesh;

pub use direction::{angle_between, fibonacci_grid, table_positions, Direction, Vec3};
pub use hierarchy::{build_octahedron_hierarchy, octahedron, MeshLevel, TriMeshHierarchy, MAX_LEVEL};
pub use hull::convex_hull;
pub use layout::{
    lebedev50_weights, load_layout, parse_directions, LayoutName, LoudspeakerLayout,
};
pub use mesh::{solid_angle, Location, TriMesh};
