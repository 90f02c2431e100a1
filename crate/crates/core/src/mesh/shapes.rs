//! Procedural closed meshes, outward-facing (CCW seen from outside).

use std::collections::HashMap;

use super::IndexedMesh;
use crate::geom::Point3;

fn build(vertices: &[Point3], faces: &[[usize; 3]]) -> IndexedMesh {
    let soup: Vec<[Point3; 3]> = faces.iter().map(|f| [vertices[f[0]], vertices[f[1]], vertices[f[2]]]).collect();
    IndexedMesh::from_soup(&soup).expect("generated mesh is non-empty")
}

/// Axis-aligned cube with the given minimum corner and edge length.
pub fn cube(min: Point3, size: f64) -> IndexedMesh {
    let v: Vec<Point3> = (0..8)
        .map(|i| {
            let bit = |k: usize| if i >> k & 1 == 1 { size } else { 0.0 };
            Point3::new(min.x + bit(0), min.y + bit(1), min.z + bit(2))
        })
        .collect();
    // vertex index = x | y<<1 | z<<2
    let faces = [
        [0, 2, 3],
        [0, 3, 1], // z = 0
        [4, 5, 7],
        [4, 7, 6], // z = 1
        [0, 1, 5],
        [0, 5, 4], // y = 0
        [2, 6, 7],
        [2, 7, 3], // y = 1
        [0, 4, 6],
        [0, 6, 2], // x = 0
        [1, 3, 7],
        [1, 7, 5], // x = 1
    ];
    build(&v, &faces)
}

/// Subdivided icosahedron with all vertices on the sphere of `radius`
/// around the origin. `20 * 4^subdivisions` triangles.
pub fn icosphere(subdivisions: u32, radius: f64) -> IndexedMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Point3> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Point3::new(x, y, z))
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let unit = |p: Point3| p * (1.0 / p.norm());
    for v in verts.iter_mut() {
        *v = unit(*v);
    }
    for _ in 0..subdivisions {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Point3>| {
            let key = if a < b { (a, b) } else { (b, a) };
            *mid.entry(key).or_insert_with(|| {
                let m = unit((verts[key.0] + verts[key.1]) * 0.5);
                verts.push(m);
                verts.len() - 1
            })
        };
        for f in &faces {
            let ab = midpoint(f[0], f[1], &mut verts);
            let bc = midpoint(f[1], f[2], &mut verts);
            let ca = midpoint(f[2], f[0], &mut verts);
            next.push([f[0], ab, ca]);
            next.push([f[1], bc, ab]);
            next.push([f[2], ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    let scaled: Vec<Point3> = verts.iter().map(|&p| p * radius).collect();
    build(&scaled, &faces)
}

/// Torus around the z axis: `2 * major_steps * minor_steps` triangles.
pub fn torus(major: f64, minor: f64, major_steps: usize, minor_steps: usize) -> IndexedMesh {
    let tau = std::f64::consts::TAU;
    let mut verts = Vec::with_capacity(major_steps * minor_steps);
    for i in 0..major_steps {
        let u = tau * i as f64 / major_steps as f64;
        for j in 0..minor_steps {
            let v = tau * j as f64 / minor_steps as f64;
            let rr = major + minor * v.cos();
            verts.push(Point3::new(rr * u.cos(), rr * u.sin(), minor * v.sin()));
        }
    }
    let idx = |i: usize, j: usize| (i % major_steps) * minor_steps + (j % minor_steps);
    let mut faces = Vec::with_capacity(2 * major_steps * minor_steps);
    for i in 0..major_steps {
        for j in 0..minor_steps {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    build(&verts, &faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed_volume(m: &IndexedMesh) -> f64 {
        m.to_soup().iter().map(|[a, b, c]| a.dot(b.cross(*c)) / 6.0).sum()
    }

    #[test]
    fn generated_meshes_are_closed_and_outward() {
        for (m, vol) in [
            (cube(Point3::new(0.0, 0.0, 0.0), 1.0), 1.0),
            (icosphere(2, 1.0), 4.0 / 3.0 * std::f64::consts::PI),
            (torus(3.0, 1.0, 48, 24), 2.0 * std::f64::consts::PI.powi(2) * 3.0),
        ] {
            assert!(m.is_closed_manifold());
            assert_eq!(m.edges().len() * 2, m.triangles().len() * 3);
            let v = signed_volume(&m);
            assert!(v > 0.0 && (v - vol).abs() / vol < 0.1, "volume {v} vs {vol}");
        }
    }

    #[test]
    fn icosphere_counts() {
        let m = icosphere(3, 1.0);
        assert_eq!(m.triangles().len(), 1280);
        assert_eq!(m.vertices().len(), 642);
        for p in m.vertices() {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
    }
}
