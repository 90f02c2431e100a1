//! Plane sections of the pieces a dilated triangle decomposes into: vertex
//! spheres, edge cylinders (or conical capsules when the radius varies), the
//! center prism, plus the raw triangle itself for the base slice.
//!
//! All curved outputs are inscribed polygons whose chord sag stays within the
//! requested tolerance. Every returned contour is convex and counter-clockwise.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::contour::ContourKind;
use crate::error::PrimitiveError;
use crate::geom::{convex_hull, signed_area, Point2, Point3};
use crate::mesh::{IndexedMesh, Triangle};

/// Sections whose inscribed-circle radius falls below this emit nothing (mm).
pub const R_MIN_CUT: f64 = 1e-6;
/// Below this axis inclination (radians) a cylinder is sliced as a strip.
pub const THETA_MIN: f64 = 1e-4;
/// Minimum vertex count of any closed curved outline.
pub const MIN_SEGMENTS: usize = 8;
/// Upper bound on axis samples for a conical capsule.
pub const MAX_CAPSULE_SAMPLES: usize = 4096;

/// Maximum allowed distance between a tessellated outline and its curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordTolerance(f64);

impl ChordTolerance {
    pub fn new(eps: f64) -> Result<Self, PrimitiveError> {
        if eps > 0.0 && eps.is_finite() {
            Ok(Self(eps))
        } else {
            Err(PrimitiveError::BadTolerance(eps))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    fn halved(self) -> Self {
        Self(self.0 * 0.5)
    }
}

/// Convex counter-clockwise outline produced by one primitive.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexContour {
    pub points: Vec<Point2>,
    pub kind: ContourKind,
    /// Id of the triangle that emitted this primitive.
    pub source: u32,
}

impl ConvexContour {
    fn new(points: Vec<Point2>, kind: ContourKind) -> Option<Self> {
        if points.len() < 3 || inradius_estimate(&points) < R_MIN_CUT {
            return None;
        }
        Some(Self { points, kind, source: 0 })
    }

    pub fn with_source(mut self, source: u32) -> Self {
        self.source = source;
        self
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.points)
    }
}

/// Oriented base-slice segment. Solid lies to its left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment2 {
    pub start: Point2,
    pub end: Point2,
    /// Welded-vertex edge key of the mesh edge `start` lies on.
    pub start_key: (u32, u32),
    pub end_key: (u32, u32),
    pub source: u32,
}

// 2A/P, exact for triangles and tangential polygons.
fn inradius_estimate(points: &[Point2]) -> f64 {
    let area = signed_area(points);
    let perimeter: f64 = (0..points.len()).map(|i| (points[(i + 1) % points.len()] - points[i]).norm()).sum();
    if perimeter <= 0.0 {
        0.0
    } else {
        2.0 * area / perimeter
    }
}

/// Number of sides of the inscribed polygon approximating a circle.
pub fn circle_segments(radius: f64, eps: ChordTolerance) -> usize {
    let ratio = eps.get() / radius;
    if !(ratio < 1.0) {
        return MIN_SEGMENTS;
    }
    let n = (PI / (1.0 - ratio).acos()).ceil();
    if n.is_finite() {
        (n as usize).max(MIN_SEGMENTS)
    } else {
        MIN_SEGMENTS
    }
}

fn circle_points(center: Point2, radius: f64, eps: ChordTolerance) -> Vec<Point2> {
    let n = circle_segments(radius, eps);
    (0..n)
        .map(|i| {
            let a = TAU * i as f64 / n as f64;
            Point2::new(center.x + radius * a.cos(), center.y + radius * a.sin())
        })
        .collect()
}

/// Regular inscribed n-gon, first vertex at angle 0, counter-clockwise.
pub fn tessellate_circle(center: Point2, radius: f64, eps: ChordTolerance) -> ConvexContour {
    ConvexContour { points: circle_points(center, radius, eps), kind: ContourKind::Sphere, source: 0 }
}

pub fn slice_sphere(center: Point3, r: f64, z: f64, eps: ChordTolerance) -> Option<ConvexContour> {
    let d = (z - center.z).abs();
    if !(d < r) {
        return None;
    }
    let rho = ((r - d) * (r + d)).sqrt();
    if rho < R_MIN_CUT {
        return None;
    }
    ConvexContour::new(circle_points(center.xy(), rho, eps), ContourKind::Sphere)
}

/// Ellipse `center + a cos(phi) major + b sin(phi) major.perp()`.
struct Ellipse {
    center: Point2,
    major: Point2,
    a: f64,
    b: f64,
}

impl Ellipse {
    fn at(&self, phi: f64) -> Point2 {
        self.center + self.major * (self.a * phi.cos()) + self.major.perp() * (self.b * phi.sin())
    }

    // The parameter midpoint of an elliptic arc is where the tangent is
    // parallel to its chord, so its distance to the chord is the exact sag.
    fn sag(&self, p0: f64, p1: f64) -> f64 {
        let (a, b) = (self.at(p0), self.at(p1));
        let m = self.at(0.5 * (p0 + p1));
        let chord = b - a;
        let len = chord.norm();
        if len == 0.0 {
            return (m - a).norm();
        }
        (chord.cross(m - a) / len).abs()
    }

    fn refine(&self, p0: f64, p1: f64, eps: f64, depth: u32, out: &mut Vec<Point2>) {
        if depth < 24 && self.sag(p0, p1) > eps {
            let mid = 0.5 * (p0 + p1);
            self.refine(p0, mid, eps, depth + 1, out);
            self.refine(mid, p1, eps, depth + 1, out);
        } else {
            out.push(self.at(p1));
        }
    }

    /// Points on the arc from `p0` to `p1` (increasing), both ends included.
    fn arc(&self, p0: f64, p1: f64, eps: f64, out: &mut Vec<Point2>) {
        out.push(self.at(p0));
        let pieces = ((p1 - p0) / FRAC_PI_2).ceil().max(1.0) as usize;
        let step = (p1 - p0) / pieces as f64;
        for i in 0..pieces {
            let lo = p0 + step * i as f64;
            let hi = if i + 1 == pieces { p1 } else { lo + step };
            self.refine(lo, hi, eps, 0, out);
        }
    }
}

/// Section of the finite cylinder of radius `r` around segment `p0 p1`,
/// capped by the planes through the endpoints perpendicular to the axis.
pub fn slice_capped_cylinder(p0: Point3, p1: Point3, r: f64, z: f64, eps: ChordTolerance) -> Option<ConvexContour> {
    if !(r > 0.0) {
        return None;
    }
    let (p0, p1) = if p1.z < p0.z { (p1, p0) } else { (p0, p1) };
    let axis = p1 - p0;
    let len = axis.norm();
    if len == 0.0 {
        return None;
    }
    let u = axis * (1.0 / len);
    let horiz = u.x.hypot(u.y);
    if horiz == 0.0 {
        if z < p0.z || z > p1.z {
            return None;
        }
        return ConvexContour::new(circle_points(p0.xy(), r, eps), ContourKind::Cylinder);
    }
    let dir = Point2::new(u.x / horiz, u.y / horiz);
    let sin_t = u.z;
    if sin_t < THETA_MIN {
        let d = (z - 0.5 * (p0.z + p1.z)).abs();
        if !(d < r) {
            return None;
        }
        let half = ((r - d) * (r + d)).sqrt();
        let n = dir.perp() * half;
        let (a, b) = (p0.xy(), p1.xy());
        return ConvexContour::new(vec![a - n, b - n, b + n, a + n], ContourKind::Cylinder);
    }

    // distance along the axis to where it pierces the plane
    let s = (z - p0.z) / sin_t;
    let center = (p0 + u * s).xy();
    let ellipse = Ellipse { center, major: dir, a: r / sin_t, b: r };
    // axis parameter of the ellipse point at phi is s + k cos(phi)
    let k = r * horiz / sin_t;
    let lo = -s / k;
    let hi = (len - s) / k;
    if lo > 1.0 || hi < -1.0 {
        return None;
    }
    let alpha = lo.clamp(-1.0, 1.0).acos();
    let beta = hi.clamp(-1.0, 1.0).acos();
    if beta >= alpha {
        return None;
    }
    let e = eps.get();
    let mut pts = Vec::new();
    match (alpha >= PI, beta <= 0.0) {
        (true, true) => {
            ellipse.arc(0.0, TAU, e, &mut pts);
            pts.pop();
        }
        (true, false) => ellipse.arc(beta, TAU - beta, e, &mut pts),
        (false, true) => ellipse.arc(-alpha, alpha, e, &mut pts),
        (false, false) => {
            ellipse.arc(beta, alpha, e, &mut pts);
            ellipse.arc(TAU - alpha, TAU - beta, e, &mut pts);
        }
    }
    ConvexContour::new(convex_hull(&pts), ContourKind::Cylinder)
}

/// Combinatorial edges of a triangular prism: vertices 0..3 on one face,
/// 3..6 on the other, `i` joined to `i + 3`.
pub const PRISM_EDGES: [(usize, usize); 9] = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)];

/// Crossing of the plane `z` with edge `a b`, given that a vertex at exactly
/// `z` counts as above. Endpoint order must be canonical for bit-identical
/// results from both sides of a shared edge.
fn edge_crossing(a: Point3, b: Point3, z: f64) -> Point2 {
    if a.z == z {
        return a.xy();
    }
    if b.z == z {
        return b.xy();
    }
    let t = (z - a.z) / (b.z - a.z);
    Point2::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
}

/// Section of a convex hexahedral prism with fixed edge topology.
pub fn slice_convex_polytope(vertices: &[Point3; 6], z: f64) -> Result<Option<ConvexContour>, PrimitiveError> {
    if !z.is_finite() || vertices.iter().any(|p| !p.is_finite()) {
        return Err(PrimitiveError::NonFinite);
    }
    let above = |p: &Point3| p.z >= z;
    let mut pts: Vec<Point2> = vertices.iter().filter(|p| p.z == z).map(|p| p.xy()).collect();
    for &(i, j) in &PRISM_EDGES {
        let (a, b) = (vertices[i], vertices[j]);
        if above(&a) != above(&b) {
            pts.push(edge_crossing(a, b, z));
        }
    }
    if pts.len() < 3 {
        return Ok(None);
    }
    Ok(ConvexContour::new(convex_hull(&pts), ContourKind::Prism))
}

/// The prism `{triangle} x [-r, r]` along the unit face normal, with per-vertex
/// half-thickness. `None` for degenerate triangles.
pub fn prism_vertices(tri: [Point3; 3], radii: [f64; 3]) -> Option<[Point3; 6]> {
    let n = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
    let len = n.norm();
    if !(len > 0.0) {
        return None;
    }
    let n = n * (1.0 / len);
    Some([
        tri[0] - n * radii[0],
        tri[1] - n * radii[1],
        tri[2] - n * radii[2],
        tri[0] + n * radii[0],
        tri[1] + n * radii[1],
        tri[2] + n * radii[2],
    ])
}

/// Section of the convex hull of balls `B(p0, r0)` and `B(p1, r1)`.
pub fn slice_conical_capsule(
    p0: Point3,
    r0: f64,
    p1: Point3,
    r1: f64,
    z: f64,
    eps: ChordTolerance,
) -> Option<ConvexContour> {
    if r0 < 0.0 || r1 < 0.0 || (r0 == 0.0 && r1 == 0.0) {
        return None;
    }
    let len = (p1 - p0).norm();
    if len + r0.min(r1) <= r0.max(r1) {
        // one ball swallows the other
        let (c, r) = if r0 >= r1 { (p0, r0) } else { (p1, r1) };
        return slice_sphere(c, r, z, eps).map(|mut c| {
            c.kind = ContourKind::ConeCapsule;
            c
        });
    }
    let half = eps.halved();
    let travel = len + (r1 - r0).abs();
    let samples = ((travel / half.get()).ceil() as usize).clamp(1, MAX_CAPSULE_SAMPLES);
    let mut pts = Vec::new();
    for k in 0..=samples {
        let t = k as f64 / samples as f64;
        let c = p0.lerp(p1, t);
        let r = r0 + (r1 - r0) * t;
        let d = (z - c.z).abs();
        if d < r {
            let rho = ((r - d) * (r + d)).sqrt();
            pts.extend(circle_points(c.xy(), rho, half));
        }
    }
    ConvexContour::new(convex_hull(&pts), ContourKind::ConeCapsule)
}

/// Oriented segment where the plane `z` crosses the triangle, solid on its
/// left. Vertices exactly at `z` count as above; coplanar triangles and
/// triangles fully on one side yield nothing.
pub fn slice_triangle(tri: &Triangle, mesh: &IndexedMesh, z: f64) -> Option<Segment2> {
    let p = mesh.triangle_points(tri);
    let above = [p[0].z >= z, p[1].z >= z, p[2].z >= z];
    let count = above.iter().filter(|&&a| a).count();
    if count == 0 || count == 3 {
        return None;
    }
    let lone = (0..3).find(|&k| above.iter().filter(|&&a| a == above[k]).count() == 1)?;
    let (v, vn, vp) = (lone, (lone + 1) % 3, (lone + 2) % 3);
    let crossing = |i: usize, j: usize| {
        let (a, b) = (tri.v[i], tri.v[j]);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        (edge_crossing(mesh.vertex(lo), mesh.vertex(hi), z), (lo, hi))
    };
    let (out_pt, out_key) = crossing(v, vn);
    let (in_pt, in_key) = crossing(vp, v);
    let (start, start_key, end, end_key) =
        if above[lone] { (out_pt, out_key, in_pt, in_key) } else { (in_pt, in_key, out_pt, out_key) };
    Some(Segment2 { start, end, start_key, end_key, source: tri.id })
}
