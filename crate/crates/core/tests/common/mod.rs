//! Brute-force geometric oracles, independent of the slicing code paths.
#![allow(dead_code)]

use offslice::{Bitmap, BitmapSpec, IndexedMesh, Point2, Point3};

pub fn sub(a: Point3, b: Point3) -> [f64; 3] {
    [a.x - b.x, a.y - b.y, a.z - b.z]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn at(a: Point3, ab: [f64; 3], s: f64, ac: [f64; 3], t: f64) -> Point3 {
    Point3::new(a.x + ab[0] * s + ac[0] * t, a.y + ab[1] * s + ac[1] * t, a.z + ab[2] * s + ac[2] * t)
}

/// Closest point on triangle `abc` to `p` (Voronoi-region walk).
pub fn closest_on_triangle(p: Point3, a: Point3, b: Point3, c: Point3) -> Point3 {
    let (ab, ac, ap) = (sub(b, a), sub(c, a), sub(p, a));
    let (d1, d2) = (dot(ab, ap), dot(ac, ap));
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = sub(p, b);
    let (d3, d4) = (dot(ab, bp), dot(ac, bp));
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return at(a, ab, d1 / (d1 - d3), ac, 0.0);
    }
    let cp = sub(p, c);
    let (d5, d6) = (dot(ab, cp), dot(ac, cp));
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return at(a, ab, 0.0, ac, d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b.lerp(c, w);
    }
    let denom = 1.0 / (va + vb + vc);
    at(a, ab, vb * denom, ac, vc * denom)
}

pub fn distance_to_surface(mesh: &IndexedMesh, p: Point3) -> f64 {
    mesh.to_soup().iter().map(|t| (p - closest_on_triangle(p, t[0], t[1], t[2])).norm()).fold(f64::INFINITY, f64::min)
}

/// Ray parity along a fixed generic direction (Moller-Trumbore hits).
pub fn inside(soup: &[[Point3; 3]], p: Point3) -> bool {
    let dir = [1.0, 0.001_234_567, 0.000_765_432_1];
    let mut hits = 0;
    for t in soup {
        let (e1, e2) = (sub(t[1], t[0]), sub(t[2], t[0]));
        let h = cross(dir, e2);
        let det = dot(e1, h);
        if det.abs() < 1e-15 {
            continue;
        }
        let s = sub(p, t[0]);
        let u = dot(s, h) / det;
        if !(0.0..=1.0).contains(&u) {
            continue;
        }
        let q = cross(s, e1);
        let v = dot(dir, q) / det;
        if v < 0.0 || u + v > 1.0 {
            continue;
        }
        if dot(e2, q) / det > 0.0 {
            hits += 1;
        }
    }
    hits % 2 == 1
}

/// Distance from `p` to the solid bounded by `soup` (0 inside).
pub fn distance_to_solid(soup: &[[Point3; 3]], p: Point3) -> f64 {
    if inside(soup, p) {
        return 0.0;
    }
    soup.iter().map(|t| (p - closest_on_triangle(p, t[0], t[1], t[2])).norm()).fold(f64::INFINITY, f64::min)
}

/// Signed-free exact distance to the axis-aligned box `[0, 1]^3` (0 inside).
pub fn unit_cube_distance(p: Point3) -> f64 {
    let d = |v: f64| (-v).max(v - 1.0).max(0.0);
    (d(p.x).powi(2) + d(p.y).powi(2) + d(p.z).powi(2)).sqrt()
}

/// Signed distance to the unit cube, negative inside.
pub fn unit_cube_signed(p: Point3) -> f64 {
    let outside = unit_cube_distance(p);
    if outside > 0.0 {
        return outside;
    }
    -[p.x, 1.0 - p.x, p.y, 1.0 - p.y, p.z, 1.0 - p.z].into_iter().fold(f64::INFINITY, f64::min)
}

pub fn square_spec(lo: f64, hi: f64, n: usize) -> BitmapSpec {
    BitmapSpec { width: n, height: n, origin: Point2::new(lo, lo), pitch: (hi - lo) / n as f64 }
}

/// Pixels set in `a` but absent from `b` and not within one pixel
/// (8-neighbourhood) of a pixel of `b`.
pub fn violations_outside_band(a: &Bitmap, b: &Bitmap) -> usize {
    let (w, h) = (a.width(), a.height());
    let mut count = 0;
    for j in 0..h {
        for i in 0..w {
            if !a.get(i, j) || b.get(i, j) {
                continue;
            }
            let near = (j.saturating_sub(1)..(j + 2).min(h))
                .any(|jj| (i.saturating_sub(1)..(i + 2).min(w)).any(|ii| b.get(ii, jj)));
            if !near {
                count += 1;
            }
        }
    }
    count
}

/// Rotates a mesh by 90 degrees about the x axis, turning its y extent
/// into the z extent.
pub fn stand_up(mesh: &IndexedMesh) -> IndexedMesh {
    let rot = |p: Point3| Point3::new(p.x, -p.z, p.y);
    let soup: Vec<[Point3; 3]> = mesh.to_soup().iter().map(|t| [rot(t[0]), rot(t[1]), rot(t[2])]).collect();
    IndexedMesh::from_soup(&soup).expect("non-empty")
}
