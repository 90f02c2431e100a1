//! Parallel slicing of offset volumes.
//!
//! Each slab of consecutive slices is processed in two phases. First,
//! workers pull triangles from a shared cursor and emit, for every slice the
//! triangle can reach, its base-slice segment and the sections of the
//! primitives it owns (vertex spheres, edge cylinders, center prism). Then
//! the slices of the slab are contoured in parallel. Every slice is sorted
//! canonically before extraction, so results do not depend on the worker
//! count, slab size or scheduling.

mod plan;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub use plan::{affected_slices, bisect_height, first_index_estimate, SlicePlan};

use crate::contour::{offset_combine, segments_to_contours, winding_extract, Accumulation, Contour, ContourSet};
use crate::error::{ChainError, EngineError};
use crate::geom::Point3;
use crate::mesh::{IndexedMesh, NO_EDGE};
use crate::primitives::{
    prism_vertices, slice_capped_cylinder, slice_conical_capsule, slice_convex_polytope, slice_sphere, slice_triangle,
    ChordTolerance, Segment2,
};

/// Default chord tolerance in millimeters.
pub const DEFAULT_CHORD: f64 = 0.005;
/// Largest coordinate magnitude (mm) representable on the snapping grid.
pub const COORD_LIMIT: f64 = 54_000.0;

/// Offset applied to the solid.
#[derive(Debug, Clone, PartialEq)]
pub enum OffsetSpec {
    /// Minkowski sum with a ball of the given radius.
    Dilate(f64),
    /// Complement of the dilated complement.
    Erode(f64),
    /// Dilation with one radius per welded vertex, interpolated linearly
    /// along edges and across faces.
    Variable(Vec<f64>),
}

impl OffsetSpec {
    /// Signed uniform offset: positive dilates, negative erodes.
    pub fn signed(r: f64) -> Self {
        if r < 0.0 {
            OffsetSpec::Erode(-r)
        } else {
            OffsetSpec::Dilate(r)
        }
    }

    fn validate(&self, mesh: &IndexedMesh) -> Result<(), EngineError> {
        let bad = |r: f64| !(r >= 0.0 && r.is_finite());
        match self {
            OffsetSpec::Dilate(r) | OffsetSpec::Erode(r) if bad(*r) => {
                Err(EngineError::InvalidConfig(format!("offset radius must be finite and >= 0, got {r}")))
            }
            OffsetSpec::Variable(radii) if radii.len() != mesh.vertices().len() => Err(EngineError::InvalidConfig(
                format!("{} radii given for {} welded vertices", radii.len(), mesh.vertices().len()),
            )),
            OffsetSpec::Variable(radii) => match radii.iter().find(|&&r| bad(r)) {
                Some(r) => Err(EngineError::InvalidConfig(format!("vertex radius must be finite and >= 0, got {r}"))),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            OffsetSpec::Dilate(r) | OffsetSpec::Erode(r) => *r == 0.0,
            OffsetSpec::Variable(radii) => radii.iter().all(|&r| r == 0.0),
        }
    }

    fn erodes(&self) -> bool {
        matches!(self, OffsetSpec::Erode(_))
    }

    fn max_radius(&self) -> f64 {
        match self {
            OffsetSpec::Dilate(r) | OffsetSpec::Erode(r) => *r,
            OffsetSpec::Variable(radii) => radii.iter().copied().fold(0.0, f64::max),
        }
    }
}

/// Number of consecutive slices generated together; bounds memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SlabConfig {
    /// `None` processes the whole plan as one slab.
    pub slices: Option<usize>,
}

impl SlabConfig {
    pub fn all() -> Self {
        Self { slices: None }
    }

    pub fn slices(n: usize) -> Self {
        Self { slices: Some(n) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub workers: usize,
    pub chord: ChordTolerance,
    pub accumulation: Accumulation,
    pub convex_fast_path: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            chord: ChordTolerance::new(DEFAULT_CHORD).expect("positive default"),
            accumulation: Accumulation::default(),
            convex_fast_path: false,
        }
    }
}

impl EngineConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_chord(mut self, chord: ChordTolerance) -> Self {
        self.chord = chord;
        self
    }
}

/// Contours of one slice, or the chaining failure that prevented them.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceResult {
    pub index: usize,
    pub z: f64,
    /// Final contours in canonical order; empty when `error` is set.
    pub contours: ContourSet,
    pub error: Option<ChainError>,
}

#[derive(Default)]
struct Bucket {
    segments: Vec<Segment2>,
    primitives: Vec<Contour>,
}

struct Job<'a> {
    mesh: &'a IndexedMesh,
    spec: &'a OffsetSpec,
    plan: &'a SlicePlan,
    cfg: &'a EngineConfig,
    with_primitives: bool,
    r_max: f64,
}

impl Job<'_> {
    fn radius(&self, v: u32) -> f64 {
        match self.spec {
            OffsetSpec::Dilate(r) | OffsetSpec::Erode(r) => *r,
            OffsetSpec::Variable(radii) => radii[v as usize],
        }
    }

    fn triangle_reach(&self, t: usize) -> f64 {
        match self.spec {
            OffsetSpec::Variable(radii) => {
                self.mesh.triangles()[t].v.iter().map(|&v| radii[v as usize]).fold(0.0, f64::max)
            }
            _ if self.with_primitives => self.r_max,
            _ => 0.0,
        }
    }

    /// Emits everything triangle `t` contributes to slices `first..first+n`.
    fn visit(&self, t: usize, first: usize, n: usize, out: &mut [Bucket]) {
        let mesh = self.mesh;
        let tri = &mesh.triangles()[t];
        let reach = self.triangle_reach(t);
        let range = affected_slices(mesh.triangle_z_interval(tri), reach, self.plan);
        let lo = range.start.max(first);
        let hi = range.end.min(first + n);
        if lo >= hi {
            return;
        }
        let eps = self.cfg.chord;
        let pts = mesh.triangle_points(tri);
        let edges = mesh.triangle_edges(tri.id);
        let prism = if self.with_primitives && !tri.degenerate {
            prism_vertices(pts, [self.radius(tri.v[0]), self.radius(tri.v[1]), self.radius(tri.v[2])])
        } else {
            None
        };
        let variable = matches!(self.spec, OffsetSpec::Variable(_));
        for j in lo..hi {
            let z = self.plan.height(j);
            let bucket = &mut out[j - first];
            if let Some(s) = slice_triangle(tri, mesh, z) {
                bucket.segments.push(s);
            }
            if !self.with_primitives {
                continue;
            }
            let src = tri.id;
            for k in 0..3 {
                let v = tri.v[k];
                // duplicate indices in a degenerate triangle name one vertex
                if tri.v[..k].contains(&v) || mesh.vertex_owner(v) != src {
                    continue;
                }
                let r = self.radius(v);
                if r > 0.0 {
                    if let Some(c) = slice_sphere(mesh.vertex(v), r, z, eps) {
                        bucket.primitives.push(c.with_source(src).into());
                    }
                }
            }
            for &e in &edges {
                if e == NO_EDGE || mesh.edge_owner(e) != src {
                    continue;
                }
                let [a, b] = mesh.edges()[e as usize].v;
                let (pa, pb): (Point3, Point3) = (mesh.vertex(a), mesh.vertex(b));
                let c = if variable {
                    slice_conical_capsule(pa, self.radius(a), pb, self.radius(b), z, eps)
                } else {
                    slice_capped_cylinder(pa, pb, self.radius(a), z, eps)
                };
                if let Some(c) = c {
                    bucket.primitives.push(c.with_source(src).into());
                }
            }
            if let Some(p) = &prism {
                // prism vertices are finite for finite meshes and radii
                if let Ok(Some(c)) = slice_convex_polytope(p, z) {
                    bucket.primitives.push(c.with_source(src).into());
                }
            }
        }
    }

    fn contour(&self, index: usize, bucket: Bucket) -> SliceResult {
        let z = self.plan.height(index);
        let base = match segments_to_contours(&bucket.segments, z) {
            Ok(b) => b,
            Err(error) => return SliceResult { index, z, contours: ContourSet::empty(z), error: Some(error) },
        };
        let base = winding_extract(&base);
        let contours = if self.with_primitives {
            offset_combine(
                &base,
                bucket.primitives,
                self.spec.erodes(),
                self.cfg.accumulation,
                self.cfg.convex_fast_path,
            )
        } else {
            base
        };
        SliceResult { index, z, contours, error: None }
    }

    fn run_slab(&self, first: usize, n: usize) -> Vec<SliceResult> {
        let workers = self.cfg.workers.min(self.mesh.triangles().len()).max(1);
        let buckets: Vec<Mutex<Bucket>> = (0..n).map(|_| Mutex::default()).collect();
        let cursor = AtomicUsize::new(0);
        let tri_count = self.mesh.triangles().len();
        const CHUNK: usize = 64;
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| {
                    let mut local: Vec<Bucket> = (0..n).map(|_| Bucket::default()).collect();
                    loop {
                        let start = cursor.fetch_add(CHUNK, Ordering::Relaxed);
                        if start >= tri_count {
                            break;
                        }
                        for t in start..(start + CHUNK).min(tri_count) {
                            self.visit(t, first, n, &mut local);
                        }
                    }
                    for (k, l) in local.into_iter().enumerate() {
                        if l.segments.is_empty() && l.primitives.is_empty() {
                            continue;
                        }
                        let mut b = buckets[k].lock().expect("bucket lock");
                        b.segments.extend(l.segments);
                        b.primitives.extend(l.primitives);
                    }
                });
            }
        });

        let results: Vec<Mutex<Option<SliceResult>>> = (0..n).map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        std::thread::scope(|s| {
            for _ in 0..self.cfg.workers.min(n).max(1) {
                s.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= n {
                        break;
                    }
                    let bucket = std::mem::take(&mut *buckets[k].lock().expect("bucket lock"));
                    let r = self.contour(first + k, bucket);
                    *results[k].lock().expect("result lock") = Some(r);
                });
            }
        });
        results.into_iter().map(|m| m.into_inner().expect("result lock").expect("slice contoured")).collect()
    }
}

fn check_inputs(mesh: &IndexedMesh, spec: &OffsetSpec, cfg: &EngineConfig) -> Result<(), EngineError> {
    if cfg.workers == 0 {
        return Err(EngineError::InvalidConfig("worker count must be at least 1".into()));
    }
    spec.validate(mesh)?;
    let reach = spec.max_radius();
    for p in mesh.vertices() {
        for c in [p.x, p.y] {
            if c.abs() + reach >= COORD_LIMIT {
                return Err(EngineError::OutOfRange(c));
            }
        }
    }
    Ok(())
}

/// Slices the offset solid, handing each slice to `sink` in plan order as
/// soon as its slab is done.
pub fn slice_offset_with(
    mesh: &IndexedMesh,
    spec: &OffsetSpec,
    plan: &SlicePlan,
    cfg: &EngineConfig,
    slab: SlabConfig,
    mut sink: impl FnMut(SliceResult),
) -> Result<(), EngineError> {
    check_inputs(mesh, spec, cfg)?;
    if slab.slices == Some(0) {
        return Err(EngineError::InvalidConfig("slab size must be at least 1".into()));
    }
    let job = Job { mesh, spec, plan, cfg, with_primitives: !spec.is_zero(), r_max: spec.max_radius() };
    let n = plan.len();
    let step = slab.slices.unwrap_or(n).max(1);
    let mut first = 0;
    while first < n {
        let count = step.min(n - first);
        for r in job.run_slab(first, count) {
            sink(r);
        }
        first += count;
    }
    Ok(())
}

/// Slices the offset solid at every height of `plan`.
pub fn slice_offset(
    mesh: &IndexedMesh,
    spec: &OffsetSpec,
    plan: &SlicePlan,
    cfg: &EngineConfig,
    slab: SlabConfig,
) -> Result<Vec<SliceResult>, EngineError> {
    let mut out = Vec::with_capacity(plan.len());
    slice_offset_with(mesh, spec, plan, cfg, slab, |r| out.push(r))?;
    Ok(out)
}

/// One slice at height `z`; triangles out of reach are skipped after a
/// z-interval test. The result carries index 0.
pub fn slice_single(
    mesh: &IndexedMesh,
    spec: &OffsetSpec,
    z: f64,
    cfg: &EngineConfig,
) -> Result<SliceResult, EngineError> {
    let plan = SlicePlan::explicit(vec![z])?;
    let mut out = slice_offset(mesh, spec, &plan, cfg, SlabConfig::all())?;
    Ok(out.pop().expect("one height"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{cube, icosphere};

    fn cfg(workers: usize) -> EngineConfig {
        EngineConfig::default().with_workers(workers)
    }

    fn unit_cube() -> IndexedMesh {
        cube(Point3::new(0.0, 0.0, 0.0), 1.0)
    }

    #[test]
    fn plain_cube_slice() {
        let r = slice_single(&unit_cube(), &OffsetSpec::Dilate(0.0), 0.5, &cfg(2)).unwrap();
        assert!(r.error.is_none());
        assert_eq!(r.contours.len(), 1);
        assert!((r.contours.net_area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cube_erosion_area() {
        let r = slice_single(&unit_cube(), &OffsetSpec::Erode(0.2), 0.5, &cfg(2)).unwrap();
        assert_eq!(r.contours.len(), 1);
        assert!((r.contours.net_area() - 0.36).abs() < 0.0036);
        let plan = SlicePlan::covering(0.0, 1.0, 0.1).unwrap();
        let all = slice_offset(&unit_cube(), &OffsetSpec::Erode(0.5), &plan, &cfg(2), SlabConfig::all()).unwrap();
        assert!(all.iter().all(|s| s.contours.is_empty() && s.error.is_none()));
    }

    #[test]
    fn cube_dilation_area() {
        let r = slice_single(&unit_cube(), &OffsetSpec::Dilate(0.2), 0.5, &cfg(1)).unwrap();
        let exact = 1.0 + 4.0 * 0.2 + std::f64::consts::PI * 0.04;
        assert!((r.contours.net_area() - exact).abs() < 0.01, "{}", r.contours.net_area());
        assert_eq!(r.contours.len(), 1);
    }

    #[test]
    fn results_do_not_depend_on_scheduling() {
        let mesh = icosphere(1, 1.0);
        let plan = SlicePlan::covering(-1.2, 1.2, 0.3).unwrap();
        let spec = OffsetSpec::Dilate(0.15);
        let reference = slice_offset(&mesh, &spec, &plan, &cfg(1), SlabConfig::all()).unwrap();
        for (k, n) in [(2, Some(1)), (3, Some(4)), (8, None)] {
            let got = slice_offset(&mesh, &spec, &plan, &cfg(k), SlabConfig { slices: n }).unwrap();
            assert_eq!(got, reference);
        }
        let single = slice_single(&mesh, &spec, plan.height(4), &cfg(2)).unwrap();
        assert_eq!(single.contours, reference[4].contours);
    }

    #[test]
    fn open_mesh_reports_per_slice() {
        let full = unit_cube().to_soup();
        let mesh = IndexedMesh::from_soup(&full[..11]).unwrap();
        let plan = SlicePlan::explicit(vec![0.5, 2.0]).unwrap();
        let res = slice_offset(&mesh, &OffsetSpec::Dilate(0.0), &plan, &cfg(1), SlabConfig::all()).unwrap();
        assert!(res[0].error.is_some());
        assert!(res[1].error.is_none() && res[1].contours.is_empty());
    }

    #[test]
    fn invalid_inputs() {
        let m = unit_cube();
        let p = SlicePlan::explicit(vec![0.5]).unwrap();
        assert!(slice_offset(&m, &OffsetSpec::Dilate(-1.0), &p, &cfg(1), SlabConfig::all()).is_err());
        assert!(slice_offset(&m, &OffsetSpec::Variable(vec![0.1; 3]), &p, &cfg(1), SlabConfig::all()).is_err());
        assert!(slice_offset(&m, &OffsetSpec::Dilate(0.1), &p, &cfg(0), SlabConfig::all()).is_err());
        assert!(slice_offset(&m, &OffsetSpec::Dilate(0.1), &p, &cfg(1), SlabConfig::slices(0)).is_err());
    }

    #[test]
    fn variable_radius_matches_uniform_bounds() {
        let m = unit_cube();
        let radii = vec![0.2; m.vertices().len()];
        let v = slice_single(&m, &OffsetSpec::Variable(radii), 0.5, &cfg(2)).unwrap();
        let u = slice_single(&m, &OffsetSpec::Dilate(0.2), 0.5, &cfg(2)).unwrap();
        let (va, ua) = (v.contours.net_area(), u.contours.net_area());
        assert!((va - ua).abs() < 0.01, "{va} vs {ua}");
    }
}
