//! Unions of many overlapping contours.
//!
//! All strategies share one snap-rounded arrangement of the inputs, and a
//! partial result is just a subset of its fragments. Re-feeding a partial
//! boundary therefore never introduces new vertices, which makes every
//! grouping produce the same contours as a single extraction.

use super::arrangement::{boundary, edges_to_contours, Arrangement, DirEdge, IPt};
use super::{sort_canonical, Contour, ContourSet};

/// Contours merged per progressive round.
pub const DEFAULT_BATCH: usize = 256;
/// Contours per divide-and-conquer leaf.
pub const DEFAULT_LEAF: usize = 64;

/// How primitive slices are unioned within one slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Accumulation {
    /// One extraction over everything.
    Direct,
    /// Merge the running result with each batch of new contours.
    Progressive { batch: usize },
    /// Split in halves down to leaves, union the leaves, merge pairwise.
    DivideConquer { leaf: usize },
}

impl Default for Accumulation {
    fn default() -> Self {
        Accumulation::Progressive { batch: DEFAULT_BATCH }
    }
}

fn weighted(edges: &[DirEdge], w: i32) -> impl Iterator<Item = (IPt, IPt, i32)> + '_ {
    edges.iter().map(move |&(a, b)| (a, b, w))
}

fn union_edges(arr: &Arrangement, ids: &[usize], strategy: Accumulation) -> Vec<DirEdge> {
    match strategy {
        Accumulation::Direct => arr.boundary_of(ids.iter().copied()),
        Accumulation::Progressive { batch } => {
            let mut partial: Vec<DirEdge> = Vec::new();
            for chunk in ids.chunks(batch.max(1)) {
                let mut input: Vec<_> = weighted(&partial, 1).collect();
                for &i in chunk {
                    input.extend(weighted(arr.fragments(i), 1));
                }
                partial = boundary(input);
            }
            partial
        }
        Accumulation::DivideConquer { leaf } => divide(arr, ids, leaf.max(1)),
    }
}

fn divide(arr: &Arrangement, ids: &[usize], leaf: usize) -> Vec<DirEdge> {
    if ids.len() <= leaf {
        return arr.boundary_of(ids.iter().copied());
    }
    let (l, r) = ids.split_at(ids.len() / 2);
    let left = divide(arr, l, leaf);
    let right = divide(arr, r, leaf);
    boundary(weighted(&left, 1).chain(weighted(&right, 1)).collect())
}

fn union_with(set: &ContourSet, strategy: Accumulation) -> ContourSet {
    let mut contours = set.contours.clone();
    sort_canonical(&mut contours);
    let arr = Arrangement::build(&contours, false);
    let ids: Vec<usize> = (0..contours.len()).collect();
    ContourSet::new(edges_to_contours(union_edges(&arr, &ids, strategy)), set.z)
}

/// Union of `{winding > 0}` of the inputs, merged `batch` contours at a time.
/// Inputs are expected to be non-negative regions (each contour's own
/// winding never below zero).
pub fn accumulate_progressive(set: &ContourSet, batch: usize) -> ContourSet {
    union_with(set, Accumulation::Progressive { batch: batch.max(2) })
}

/// Same union, computed by recursive halving with leaves of `leaf` contours.
pub fn accumulate_divide_conquer(set: &ContourSet, leaf: usize) -> ContourSet {
    union_with(set, Accumulation::DivideConquer { leaf: leaf.max(1) })
}

/// `base ∪ primitives` (dilation) or `base \ primitives` (erosion).
///
/// `base` must already be normalized (non-crossing outer/hole loops).
pub fn offset_combine(
    base: &ContourSet,
    primitives: Vec<Contour>,
    erode: bool,
    strategy: Accumulation,
    convex_fast_path: bool,
) -> ContourSet {
    let mut prims = primitives;
    sort_canonical(&mut prims);
    let nb = base.contours.len();
    let mut all = base.contours.clone();
    all.extend(prims);
    let arr = Arrangement::build(&all, convex_fast_path);
    let ids: Vec<usize> = (nb..all.len()).collect();
    let union = union_edges(&arr, &ids, strategy);
    let mut input = Vec::new();
    for i in 0..nb {
        input.extend(weighted(arr.fragments(i), 1));
    }
    input.extend(weighted(&union, if erode { -1 } else { 1 }));
    ContourSet::new(edges_to_contours(boundary(input)), base.z)
}

#[cfg(test)]
mod tests {
    use super::super::{winding_extract, ContourKind};
    use super::*;
    use crate::geom::{Point2, Point3};
    use crate::primitives::{slice_sphere, ChordTolerance};

    fn square(x0: f64, y0: f64, s: f64) -> Contour {
        let pts =
            vec![Point2::new(x0, y0), Point2::new(x0 + s, y0), Point2::new(x0 + s, y0 + s), Point2::new(x0, y0 + s)];
        Contour::new(pts, 0, ContourKind::Prism).unwrap()
    }

    fn jittered(n: usize) -> ContourSet {
        let mut c = Vec::new();
        for i in 0..n {
            let t = i as f64 * 0.37;
            let pts: Vec<Point2> = (0..7)
                .map(|k| {
                    let a = k as f64 * std::f64::consts::TAU / 7.0 + t;
                    Point2::new(t.sin() * 2.0 + 0.8 * a.cos(), (1.3 * t).cos() * 2.0 + 0.8 * a.sin())
                })
                .collect();
            c.push(Contour::new(pts, i as i64, ContourKind::Sphere).unwrap());
        }
        ContourSet::new(c, 0.5)
    }

    #[test]
    fn strategies_agree_exactly() {
        let set = jittered(90);
        let direct = winding_extract(&set);
        assert!(!direct.is_empty());
        for k in [2, 3, 17, 256] {
            assert_eq!(accumulate_progressive(&set, k), direct, "batch {k}");
        }
        for l in [1, 4, 64] {
            assert_eq!(accumulate_divide_conquer(&set, l), direct, "leaf {l}");
        }
    }

    #[test]
    fn dilate_and_erode_squares() {
        let base = winding_extract(&ContourSet::new(vec![square(0.0, 0.0, 4.0)], 0.0));
        let prims = vec![square(3.0, 1.0, 2.0)];
        let d = offset_combine(&base, prims.clone(), false, Accumulation::Direct, true);
        assert!((d.net_area() - 18.0).abs() < 1e-9);
        let e = offset_combine(&base, prims, true, Accumulation::Direct, true);
        assert!((e.net_area() - 14.0).abs() < 1e-9);
        assert!(e.contours.iter().all(|c| c.is_ccw()));
    }

    #[test]
    fn fast_path_does_not_change_output() {
        let base = winding_extract(&ContourSet::new(vec![square(0.0, 0.0, 4.0)], 0.0));
        let eps = ChordTolerance::new(0.01).unwrap();
        let prims: Vec<Contour> = (0..40)
            .filter_map(|i| {
                let t = i as f64 * 0.41;
                slice_sphere(Point3::new(4.0 * t.cos(), 4.0 * t.sin(), 0.1), 0.7, 0.0, eps)
                    .map(|c| Contour::from(c.with_source(i)))
            })
            .collect();
        assert!(prims.iter().all(Contour::is_convex));
        let a = offset_combine(&base, prims.clone(), false, Accumulation::Direct, false);
        let b = offset_combine(&base, prims, false, Accumulation::Direct, true);
        assert_eq!(a, b);
    }
}
