//! Slices of dilated and eroded triangle-mesh solids, computed directly.
//!
//! A dilated triangle is the union of three vertex spheres, three edge
//! cylinders and a center prism. Slicing those primitives analytically and
//! combining them with the mesh's own slice under the positive winding rule
//! yields each slice of the offset solid without ever building the offset
//! surface:
//!
//! ```
//! use offslice::{cube, slice_single, EngineConfig, OffsetSpec, Point3};
//!
//! let mesh = cube(Point3::new(0.0, 0.0, 0.0), 1.0);
//! let slice = slice_single(&mesh, &OffsetSpec::Erode(0.2), 0.5, &EngineConfig::default()).unwrap();
//! assert!((slice.contours.net_area() - 0.36).abs() < 0.004);
//! ```

// `!(a < b)` is used on purpose to reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod contour;
pub mod engine;
pub mod error;
pub mod export;
pub mod geom;
pub mod mesh;
pub mod primitives;

pub use contour::{
    accumulate_divide_conquer, accumulate_progressive, rasterize_winding, reverse_contours, segments_to_contours,
    winding_extract, Accumulation, Bitmap, BitmapSpec, Contour, ContourKind, ContourSet,
};
pub use engine::{
    affected_slices, bisect_height, slice_offset, slice_offset_with, slice_single, EngineConfig, OffsetSpec,
    SlabConfig, SlicePlan, SliceResult,
};
pub use error::{ChainError, EngineError, MeshError, PrimitiveError};
pub use export::{format_number, jsonl_records, write_jsonl, write_png, write_svg};
pub use geom::{Point2, Point3};
pub use mesh::{cube, icosphere, load_stl, mesh_bounds, torus, triangle_z_interval, write_stl_binary, IndexedMesh};
pub use primitives::ChordTolerance;
