//! Randomized invariants of the engine and its building blocks.

mod common;

use common::square_spec;
use offslice::mesh::ZInterval;
use offslice::primitives::tessellate_circle;
use offslice::{
    accumulate_divide_conquer, accumulate_progressive, affected_slices, cube, format_number, icosphere,
    rasterize_winding, slice_offset, slice_single, winding_extract, ChordTolerance, Contour, ContourSet, EngineConfig,
    OffsetSpec, Point2, Point3, SlabConfig, SlicePlan,
};
use proptest::prelude::*;

fn cfg() -> EngineConfig {
    EngineConfig::default().with_workers(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn culling_is_sound(
        a in -3.0..3.0f64, b in -3.0..3.0f64, r in 0.0..1.5f64,
        z0 in -5.0..0.0f64, tau in 0.01..0.7f64, n in 0usize..200,
    ) {
        let iv = ZInterval { z_min: a.min(b), z_max: a.max(b) };
        let plan = SlicePlan::uniform(z0, tau, n).unwrap();
        let range = affected_slices(iv, r, &plan);
        for j in 0..plan.len() {
            let h = plan.height(j);
            let reached = h >= iv.z_min - r && h <= iv.z_max + r;
            prop_assert_eq!(range.contains(&j), reached, "slice {} at {}", j, h);
        }
    }

    #[test]
    fn number_format_round_trips(x in prop::num::f64::NORMAL) {
        let s = format_number(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= x.abs() * 1e-8, "{} -> {}", x, s);
        let mantissa = s.split('e').next().unwrap().trim_start_matches('-').trim_start_matches(['0', '.']);
        prop_assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 9, "{}", s);
    }

    #[test]
    fn zero_offset_is_plain_slicing(z in 0.01..0.99f64) {
        let mesh = icosphere(1, 1.0);
        let zero = slice_single(&mesh, &OffsetSpec::Dilate(0.0), z, &cfg()).unwrap();
        let eroded = slice_single(&mesh, &OffsetSpec::Erode(0.0), z, &cfg()).unwrap();
        let radii = vec![0.0; mesh.vertices().len()];
        let variable = slice_single(&mesh, &OffsetSpec::Variable(radii), z, &cfg()).unwrap();
        prop_assert_eq!(&zero.contours, &eroded.contours);
        prop_assert_eq!(&zero.contours, &variable.contours);
        prop_assert_eq!(zero.contours.len(), 1);
        prop_assert!(zero.contours.contours[0].points().len() >= 5);
    }

    #[test]
    fn dilation_is_monotone_in_radius(z in -1.2..1.2f64, r1 in 0.0..0.4f64, dr in 0.0..0.4f64) {
        let mesh = icosphere(1, 1.0);
        let spec = square_spec(-1.8, 1.8, 128);
        let area = |r: f64| {
            let s = slice_single(&mesh, &OffsetSpec::Dilate(r), z, &cfg()).unwrap();
            rasterize_winding(&s.contours, &spec).unwrap()
        };
        let (small, large) = (area(r1), area(r1 + dr));
        prop_assert!(small.count_set() <= large.count_set());
    }

    #[test]
    fn strategies_agree_on_random_circles(
        circles in prop::collection::vec((0.0..4.0f64, 0.0..4.0f64, 0.05..1.0f64), 1..60),
        batch in 2usize..20, leaf in 1usize..12,
    ) {
        let eps = ChordTolerance::new(0.01).unwrap();
        let contours: Vec<Contour> = circles
            .iter()
            .enumerate()
            .map(|(i, &(x, y, r))| {
                let mut c: Contour = tessellate_circle(Point2::new(x, y), r, eps).into();
                c.source = i as i64;
                c
            })
            .collect();
        let set = ContourSet::new(contours, 0.0);
        let direct = winding_extract(&set);
        prop_assert_eq!(&direct, &accumulate_progressive(&set, batch));
        prop_assert_eq!(&direct, &accumulate_divide_conquer(&set, leaf));
        for c in &direct.contours {
            prop_assert!(c.area().abs() > 0.0);
        }
    }
}

#[test]
fn slabs_and_workers_do_not_change_erosion() {
    let mesh = cube(Point3::new(0.0, 0.0, 0.0), 1.0);
    let plan = SlicePlan::covering(0.0, 1.0, 0.05).unwrap();
    let reference =
        slice_offset(&mesh, &OffsetSpec::Erode(0.1), &plan, &cfg().with_workers(1), SlabConfig::all()).unwrap();
    for (k, n) in [(3, 1), (5, 7)] {
        let other =
            slice_offset(&mesh, &OffsetSpec::Erode(0.1), &plan, &cfg().with_workers(k), SlabConfig::slices(n)).unwrap();
        assert_eq!(reference, other);
    }
}
