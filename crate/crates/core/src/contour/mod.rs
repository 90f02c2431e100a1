//! Oriented contours and winding-number extraction.
//!
//! Orientation carries meaning: counter-clockwise loops bound solid,
//! clockwise loops bound holes, and a point is solid when its winding number
//! is strictly positive. Extraction turns an arbitrary overlapping set of
//! loops into non-crossing outer/hole loops of the `{winding > 0}` region.
//!
//! Coordinates are snap-rounded to a 1e-7 mm grid and all predicates are
//! evaluated exactly on integers, so results are platform independent.
//! Grouping does not matter either: progressive, divide-and-conquer and
//! direct extraction produce identical contours.

mod accumulate;
mod arrangement;
mod raster;

use std::cmp::Ordering;
use std::collections::HashMap;

pub use accumulate::{
    accumulate_divide_conquer, accumulate_progressive, offset_combine, Accumulation, DEFAULT_BATCH, DEFAULT_LEAF,
};
pub use raster::{rasterize_winding, Bitmap, BitmapSpec, RasterError};

use crate::error::ChainError;
use crate::geom::{signed_area, Point2};
use crate::primitives::{ConvexContour, Segment2};

/// Snap grid pitch in millimeters.
pub const SNAP_GRID: f64 = 1e-7;

/// What produced a contour. The declaration order is part of the canonical
/// sort key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContourKind {
    Base,
    Sphere,
    Cylinder,
    Prism,
    ConeCapsule,
    Final,
}

impl ContourKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ContourKind::Base => "base",
            ContourKind::Sphere => "sphere",
            ContourKind::Cylinder => "cylinder",
            ContourKind::Prism => "prism",
            ContourKind::ConeCapsule => "cone-capsule",
            ContourKind::Final => "final",
        }
    }
}

/// Closed polygon; closure is implicit (first point is not repeated).
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    points: Vec<Point2>,
    area: f64,
    /// Emitting triangle id, or -1 for base-mesh and extracted contours.
    pub source: i64,
    pub kind: ContourKind,
    // known convex by construction
    convex: bool,
}

impl Contour {
    /// `None` when there are fewer than three points or the area is zero.
    pub fn new(points: Vec<Point2>, source: i64, kind: ContourKind) -> Option<Self> {
        let area = signed_area(&points);
        if points.len() < 3 || area == 0.0 || !area.is_finite() {
            return None;
        }
        Some(Self { points, area, source, kind, convex: false })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn is_ccw(&self) -> bool {
        self.area > 0.0
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    /// Same loop traversed the other way; the area changes sign.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self { points, area: -self.area, ..*self }
    }

    fn order_key(&self, other: &Self) -> Ordering {
        let first = |c: &Self| c.points[0];
        self.source
            .cmp(&other.source)
            .then(self.kind.cmp(&other.kind))
            .then_with(|| first(self).x.total_cmp(&first(other).x))
            .then_with(|| first(self).y.total_cmp(&first(other).y))
            .then_with(|| self.points.len().cmp(&other.points.len()))
            .then_with(|| {
                for (a, b) in self.points.iter().zip(&other.points) {
                    let o = a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

impl From<ConvexContour> for Contour {
    fn from(c: ConvexContour) -> Self {
        let area = signed_area(&c.points);
        Self { points: c.points, area, source: c.source as i64, kind: c.kind, convex: true }
    }
}

/// Contours of one slice plane.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContourSet {
    pub contours: Vec<Contour>,
    pub z: f64,
}

impl ContourSet {
    pub fn new(contours: Vec<Contour>, z: f64) -> Self {
        Self { contours, z }
    }

    pub fn empty(z: f64) -> Self {
        Self { contours: Vec::new(), z }
    }

    pub fn len(&self) -> usize {
        self.contours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contours.is_empty()
    }

    /// Sorts by (source id, kind, first point, remaining points).
    pub fn sort_canonical(&mut self) {
        sort_canonical(&mut self.contours);
    }

    /// Sum of signed areas.
    pub fn net_area(&self) -> f64 {
        self.contours.iter().map(Contour::area).sum()
    }
}

pub fn sort_canonical(contours: &mut [Contour]) {
    contours.sort_by(Contour::order_key);
}

/// Chains base-slice segments into closed loops by the mesh edge each
/// endpoint lies on. Zero-length links are kept for connectivity and
/// dropped from the geometry.
pub fn segments_to_contours(segments: &[Segment2], z: f64) -> Result<ContourSet, ChainError> {
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by_key(|&i| (segments[i].source, segments[i].start_key));
    let mut by_start: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
    for &i in &order {
        by_start.entry(segments[i].start_key).or_default().push(i);
    }
    // pop from the back, so reverse to consume in sorted order
    for v in by_start.values_mut() {
        v.reverse();
    }
    let mut balance: HashMap<(u32, u32), i32> = HashMap::new();
    for s in segments {
        *balance.entry(s.start_key).or_default() += 1;
        *balance.entry(s.end_key).or_default() -= 1;
    }
    let mut dangling: Vec<(u32, u32)> = balance.into_iter().filter(|&(_, b)| b != 0).map(|(k, _)| k).collect();
    if !dangling.is_empty() {
        dangling.sort_unstable();
        return Err(ChainError { dangling });
    }
    let mut used = vec![false; segments.len()];
    let mut contours = Vec::new();
    for &first in &order {
        if used[first] {
            continue;
        }
        let start_key = segments[first].start_key;
        if let Some(list) = by_start.get_mut(&start_key) {
            list.retain(|&j| j != first);
        }
        used[first] = true;
        let mut pts = vec![segments[first].start];
        let mut cur = first;
        let closed = loop {
            let key = segments[cur].end_key;
            if key == start_key {
                break true;
            }
            let next = by_start.get_mut(&key).and_then(|l| l.pop());
            match next {
                Some(n) => {
                    used[n] = true;
                    pts.push(segments[n].start);
                    cur = n;
                }
                // unreachable once every key is balanced
                None => break false,
            }
        };
        if closed {
            pts.dedup();
            while pts.len() > 1 && pts.first() == pts.last() {
                pts.pop();
            }
            if let Some(c) = Contour::new(pts, -1, ContourKind::Base) {
                contours.push(c);
            }
        }
    }
    let mut set = ContourSet::new(contours, z);
    set.sort_canonical();
    Ok(set)
}

/// Region `{winding > 0}` of the input as CCW outer loops and CW holes.
pub fn winding_extract(set: &ContourSet) -> ContourSet {
    let mut contours = set.contours.clone();
    sort_canonical(&mut contours);
    let arr = arrangement::Arrangement::build(&contours, false);
    let edges = arr.boundary_of(0..contours.len());
    ContourSet::new(arrangement::edges_to_contours(edges), set.z)
}

/// Every contour reversed; order preserved.
pub fn reverse_contours(set: &ContourSet) -> ContourSet {
    ContourSet::new(set.contours.iter().map(Contour::reversed).collect(), set.z)
}
