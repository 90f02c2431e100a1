//! Indexed triangle meshes.
//!
//! A mesh is loaded as a triangle soup (STL), then welded by exact bit
//! equality of vertex coordinates. Triangle ids are file ordinals and serve
//! as the global deterministic sort key for everything derived from them.
//!
//! Every welded vertex and every unique edge is owned by the lowest-id
//! triangle incident to it; only the owner emits the vertex sphere or the
//! edge cylinder, so shared primitives are generated once.

mod shapes;
mod stl;

use std::collections::HashMap;

pub use shapes::{cube, icosphere, torus};
pub use stl::{load_stl, write_stl_binary};

use crate::error::MeshError;
use crate::geom::Point3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub v: [u32; 3],
    /// Position in the input file.
    pub id: u32,
    /// Zero area under exact arithmetic on the stored coordinates.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Welded vertex indices, smaller first.
    pub v: [u32; 2],
    /// Incident triangle ids in ascending order.
    pub triangles: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZInterval {
    pub z_min: f64,
    pub z_max: f64,
}

impl ZInterval {
    pub fn contains(&self, z: f64) -> bool {
        self.z_min <= z && z <= self.z_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point3,
    pub max: Point3,
}

#[derive(Debug, Clone)]
pub struct IndexedMesh {
    vertices: Vec<Point3>,
    triangles: Vec<Triangle>,
    edges: Vec<Edge>,
    edge_lookup: HashMap<(u32, u32), u32>,
    /// Edge index for (v0,v1), (v1,v2), (v2,v0); `u32::MAX` when collapsed.
    triangle_edges: Vec<[u32; 3]>,
    vertex_owner: Vec<u32>,
    edge_owner: Vec<u32>,
}

pub const NO_EDGE: u32 = u32::MAX;

fn weld_key(p: Point3) -> [u64; 3] {
    // -0.0 and 0.0 compare equal but differ in bits
    let canon = |v: f64| if v == 0.0 { 0.0f64.to_bits() } else { v.to_bits() };
    [canon(p.x), canon(p.y), canon(p.z)]
}

fn edge_key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl IndexedMesh {
    /// Welds a triangle soup. Triangle ids follow the soup order.
    pub fn from_soup(soup: &[[Point3; 3]]) -> Result<Self, MeshError> {
        if soup.is_empty() {
            return Err(MeshError::NoTriangles);
        }
        let mut vertices = Vec::new();
        let mut lookup: HashMap<[u64; 3], u32> = HashMap::new();
        let mut triangles = Vec::with_capacity(soup.len());
        for (facet, tri) in soup.iter().enumerate() {
            let mut v = [0u32; 3];
            for (k, p) in tri.iter().enumerate() {
                if !p.is_finite() {
                    return Err(MeshError::NonFinite { facet });
                }
                let key = weld_key(*p);
                let idx = *lookup.entry(key).or_insert_with(|| {
                    vertices.push(Point3::new(p.x + 0.0, p.y + 0.0, p.z + 0.0));
                    (vertices.len() - 1) as u32
                });
                v[k] = idx;
            }
            let degenerate = v[0] == v[1] || v[1] == v[2] || v[0] == v[2] || {
                let (a, b, c) = (vertices[v[0] as usize], vertices[v[1] as usize], vertices[v[2] as usize]);
                (b - a).cross(c - a) == Point3::default()
            };
            triangles.push(Triangle { v, id: facet as u32, degenerate });
        }

        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_lookup: HashMap<(u32, u32), u32> = HashMap::new();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for t in &triangles {
            let mut te = [NO_EDGE; 3];
            for (k, slot) in te.iter_mut().enumerate() {
                let (a, b) = (t.v[k], t.v[(k + 1) % 3]);
                if a == b {
                    continue;
                }
                let key = edge_key(a, b);
                let e = *edge_lookup.entry(key).or_insert_with(|| {
                    edges.push(Edge { v: [key.0, key.1], triangles: Vec::new() });
                    (edges.len() - 1) as u32
                });
                let incident = &mut edges[e as usize].triangles;
                if incident.last() != Some(&t.id) {
                    incident.push(t.id);
                }
                *slot = e;
            }
            triangle_edges.push(te);
        }

        let mut vertex_owner = vec![u32::MAX; vertices.len()];
        for t in &triangles {
            for &v in &t.v {
                let o = &mut vertex_owner[v as usize];
                *o = (*o).min(t.id);
            }
        }
        let edge_owner = edges.iter().map(|e| e.triangles[0]).collect();

        Ok(Self { vertices, triangles, edges, edge_lookup, triangle_edges, vertex_owner, edge_owner })
    }

    /// Re-emits the mesh as an unwelded soup in triangle order.
    pub fn to_soup(&self) -> Vec<[Point3; 3]> {
        self.triangles.iter().map(|t| self.triangle_points(t)).collect()
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: u32) -> Point3 {
        self.vertices[v as usize]
    }

    pub fn triangle_points(&self, t: &Triangle) -> [Point3; 3] {
        [self.vertex(t.v[0]), self.vertex(t.v[1]), self.vertex(t.v[2])]
    }

    pub fn edge_index(&self, a: u32, b: u32) -> Option<u32> {
        self.edge_lookup.get(&edge_key(a, b)).copied()
    }

    /// Edge indices of triangle `id`, `NO_EDGE` for collapsed edges.
    pub fn triangle_edges(&self, id: u32) -> [u32; 3] {
        self.triangle_edges[id as usize]
    }

    pub fn vertex_owner(&self, v: u32) -> u32 {
        self.vertex_owner[v as usize]
    }

    pub fn edge_owner(&self, e: u32) -> u32 {
        self.edge_owner[e as usize]
    }

    pub fn triangle_z_interval(&self, t: &Triangle) -> ZInterval {
        let [a, b, c] = self.triangle_points(t);
        ZInterval { z_min: a.z.min(b.z).min(c.z), z_max: a.z.max(b.z).max(c.z) }
    }

    pub fn bounds(&self) -> Result<Aabb, MeshError> {
        let first = *self.vertices.first().ok_or(MeshError::EmptyMesh)?;
        let mut bb = Aabb { min: first, max: first };
        for p in &self.vertices[1..] {
            bb.min = Point3::new(bb.min.x.min(p.x), bb.min.y.min(p.y), bb.min.z.min(p.z));
            bb.max = Point3::new(bb.max.x.max(p.x), bb.max.y.max(p.y), bb.max.z.max(p.z));
        }
        Ok(bb)
    }

    /// True when every edge has exactly two incident triangles.
    pub fn is_closed_manifold(&self) -> bool {
        self.edges.iter().all(|e| e.triangles.len() == 2)
    }
}

/// Free-function form of [`IndexedMesh::triangle_z_interval`].
pub fn triangle_z_interval(tri: &Triangle, mesh: &IndexedMesh) -> ZInterval {
    mesh.triangle_z_interval(tri)
}

/// Free-function form of [`IndexedMesh::bounds`].
pub fn mesh_bounds(mesh: &IndexedMesh) -> Result<Aabb, MeshError> {
    mesh.bounds()
}
