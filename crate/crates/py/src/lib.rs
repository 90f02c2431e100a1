//! Python module `offslice`: meshes, offset slicing and serialization.

// Python keyword arguments map one-to-one onto function parameters
#![allow(clippy::too_many_arguments)]

use std::sync::Arc;

use offslice::mesh::ZInterval;
use offslice::{
    Accumulation, BitmapSpec, ChordTolerance, Contour, EngineConfig, IndexedMesh, OffsetSpec, Point2, Point3,
    SlabConfig, SlicePlan, SliceResult,
};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

type Bounds = ((f64, f64, f64), (f64, f64, f64));

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn p3(t: (f64, f64, f64)) -> Point3 {
    Point3::new(t.0, t.1, t.2)
}

fn t3(p: Point3) -> (f64, f64, f64) {
    (p.x, p.y, p.z)
}

/// Welded triangle mesh.
#[pyclass(name = "Mesh", module = "offslice", frozen)]
pub struct PyMesh {
    inner: Arc<IndexedMesh>,
}

impl PyMesh {
    fn wrap(mesh: IndexedMesh) -> Self {
        Self { inner: Arc::new(mesh) }
    }
}

#[pymethods]
impl PyMesh {
    /// Loads a binary or ASCII STL file.
    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let bytes = std::fs::read(&path).map_err(|e| PyOSError::new_err(format!("{}: {e}", path.display())))?;
        Self::from_stl_bytes(&bytes)
    }

    #[staticmethod]
    fn from_stl_bytes(data: &[u8]) -> PyResult<Self> {
        offslice::load_stl(data).map(Self::wrap).map_err(value_error)
    }

    /// Builds a mesh from `[(a, b, c), ...]` with each corner an `(x, y, z)`.
    #[staticmethod]
    fn from_triangles(triangles: Vec<[(f64, f64, f64); 3]>) -> PyResult<Self> {
        let soup: Vec<[Point3; 3]> = triangles.into_iter().map(|t| t.map(p3)).collect();
        IndexedMesh::from_soup(&soup).map(Self::wrap).map_err(value_error)
    }

    #[staticmethod]
    #[pyo3(signature = (size=1.0, origin=(0.0, 0.0, 0.0)))]
    fn cube(size: f64, origin: (f64, f64, f64)) -> Self {
        Self::wrap(offslice::cube(p3(origin), size))
    }

    #[staticmethod]
    #[pyo3(signature = (subdivisions=3, radius=1.0))]
    fn icosphere(subdivisions: u32, radius: f64) -> PyResult<Self> {
        if subdivisions > 8 {
            return Err(PyValueError::new_err("at most 8 subdivisions"));
        }
        Ok(Self::wrap(offslice::icosphere(subdivisions, radius)))
    }

    #[staticmethod]
    fn torus(major: f64, minor: f64, major_steps: usize, minor_steps: usize) -> PyResult<Self> {
        if major_steps < 3 || minor_steps < 3 {
            return Err(PyValueError::new_err("torus needs at least 3 steps in each direction"));
        }
        Ok(Self::wrap(offslice::torus(major, minor, major_steps, minor_steps)))
    }

    #[getter]
    fn triangle_count(&self) -> usize {
        self.inner.triangles().len()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertices().len()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edges().len()
    }

    /// `((xmin, ymin, zmin), (xmax, ymax, zmax))`.
    #[getter]
    fn bounds(&self) -> PyResult<Bounds> {
        let b = self.inner.bounds().map_err(value_error)?;
        Ok((t3(b.min), t3(b.max)))
    }

    #[getter]
    fn is_closed(&self) -> bool {
        self.inner.is_closed_manifold()
    }

    /// Welded vertices, in the order a radius list must follow.
    fn vertices(&self) -> Vec<(f64, f64, f64)> {
        self.inner.vertices().iter().map(|&p| t3(p)).collect()
    }

    fn to_stl_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &offslice::write_stl_binary(&self.inner.to_soup()))
    }

    fn __repr__(&self) -> String {
        format!("Mesh(triangles={}, vertices={})", self.triangle_count(), self.vertex_count())
    }
}

/// Closed polygon; counter-clockwise outlines solid, clockwise a hole.
#[pyclass(name = "Contour", module = "offslice", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyContour {
    inner: Contour,
}

#[pymethods]
impl PyContour {
    #[getter]
    fn points(&self) -> Vec<(f64, f64)> {
        self.inner.points().iter().map(|p| (p.x, p.y)).collect()
    }

    #[getter]
    fn area(&self) -> f64 {
        self.inner.area()
    }

    #[getter]
    fn is_ccw(&self) -> bool {
        self.inner.is_ccw()
    }

    fn __len__(&self) -> usize {
        self.inner.points().len()
    }

    fn __repr__(&self) -> String {
        format!("Contour(points={}, area={})", self.inner.points().len(), offslice::format_number(self.inner.area()))
    }
}

/// Contours of the offset solid at one height.
#[pyclass(name = "Slice", module = "offslice", frozen)]
pub struct PySlice {
    inner: SliceResult,
}

#[pymethods]
impl PySlice {
    #[getter]
    fn index(&self) -> usize {
        self.inner.index
    }

    #[getter]
    fn z(&self) -> f64 {
        self.inner.z
    }

    #[getter]
    fn contours(&self) -> Vec<PyContour> {
        self.inner.contours.contours.iter().map(|c| PyContour { inner: c.clone() }).collect()
    }

    /// Chaining failure of the mesh slice, if any.
    #[getter]
    fn error(&self) -> Option<String> {
        self.inner.error.as_ref().map(|e| e.to_string())
    }

    #[getter]
    fn net_area(&self) -> f64 {
        self.inner.contours.net_area()
    }

    fn to_jsonl(&self) -> String {
        String::from_utf8(offslice::write_jsonl(&self.inner)).expect("jsonl is ASCII")
    }

    fn to_svg(&self) -> String {
        String::from_utf8(offslice::write_svg(&self.inner)).expect("svg is ASCII")
    }

    /// Solid pixels, one bytes row per image row from the bottom up
    /// (1 = solid).
    fn rasterize<'py>(
        &self,
        py: Python<'py>,
        origin: (f64, f64),
        pitch: f64,
        width: usize,
        height: usize,
    ) -> PyResult<Vec<Bound<'py, PyBytes>>> {
        let spec = BitmapSpec { width, height, origin: Point2::new(origin.0, origin.1), pitch };
        let bmp = offslice::rasterize_winding(&self.inner.contours, &spec).map_err(value_error)?;
        Ok((0..height)
            .map(|j| {
                let row: Vec<u8> = (0..width).map(|i| u8::from(bmp.get(i, j))).collect();
                PyBytes::new(py, &row)
            })
            .collect())
    }

    /// Grayscale PNG of the same raster, top row first.
    fn to_png<'py>(
        &self,
        py: Python<'py>,
        origin: (f64, f64),
        pitch: f64,
        width: usize,
        height: usize,
    ) -> PyResult<Bound<'py, PyBytes>> {
        let spec = BitmapSpec { width, height, origin: Point2::new(origin.0, origin.1), pitch };
        let bmp = offslice::rasterize_winding(&self.inner.contours, &spec).map_err(value_error)?;
        let png = offslice::write_png(&bmp).map_err(value_error)?;
        Ok(PyBytes::new(py, &png))
    }

    fn __len__(&self) -> usize {
        self.inner.contours.len()
    }

    fn __repr__(&self) -> String {
        format!("Slice(index={}, z={}, contours={})", self.inner.index, self.inner.z, self.inner.contours.len())
    }
}

fn offset_spec(offset: f64, mode: &str, radii: Option<Vec<f64>>) -> PyResult<OffsetSpec> {
    if let Some(r) = radii {
        if mode == "erode" {
            return Err(PyValueError::new_err("per-vertex radii only support dilation"));
        }
        return Ok(OffsetSpec::Variable(r));
    }
    match mode {
        "auto" => Ok(OffsetSpec::signed(offset)),
        "dilate" => Ok(OffsetSpec::Dilate(offset.abs())),
        "erode" => Ok(OffsetSpec::Erode(offset.abs())),
        other => Err(PyValueError::new_err(format!("mode must be auto, dilate or erode, got {other:?}"))),
    }
}

fn accumulation(name: &str, batch: usize, leaf: usize) -> PyResult<Accumulation> {
    match name {
        "direct" => Ok(Accumulation::Direct),
        "progressive" => Ok(Accumulation::Progressive { batch }),
        "divide_conquer" => Ok(Accumulation::DivideConquer { leaf }),
        other => Err(PyValueError::new_err(format!(
            "accumulation must be direct, progressive or divide_conquer, got {other:?}"
        ))),
    }
}

fn engine_config(chord: f64, workers: Option<usize>, accumulation: Accumulation) -> PyResult<EngineConfig> {
    let mut cfg = EngineConfig::default().with_chord(ChordTolerance::new(chord).map_err(value_error)?);
    if let Some(k) = workers {
        cfg = cfg.with_workers(k);
    }
    cfg.accumulation = accumulation;
    Ok(cfg)
}

fn outward_reach(spec: &OffsetSpec) -> f64 {
    match spec {
        OffsetSpec::Dilate(r) => *r,
        OffsetSpec::Erode(_) => 0.0,
        OffsetSpec::Variable(radii) => radii.iter().copied().fold(0.0, f64::max),
    }
}

/// Slices the offset of `mesh` at explicit `heights`, or every `thickness`
/// over the mesh's z-extent grown by the outward offset.
#[pyfunction]
#[pyo3(signature = (
    mesh, *, offset=0.0, mode="auto", radii=None, thickness=None, heights=None, chord=0.005,
    workers=None, slab=None, accumulation="progressive", batch=256, leaf=64
))]
fn slice_offset(
    py: Python<'_>,
    mesh: &PyMesh,
    offset: f64,
    mode: &str,
    radii: Option<Vec<f64>>,
    thickness: Option<f64>,
    heights: Option<Vec<f64>>,
    chord: f64,
    workers: Option<usize>,
    slab: Option<usize>,
    accumulation: &str,
    batch: usize,
    leaf: usize,
) -> PyResult<Vec<PySlice>> {
    let spec = offset_spec(offset, mode, radii)?;
    let cfg = engine_config(chord, workers, self::accumulation(accumulation, batch, leaf)?)?;
    let plan = match (thickness, heights) {
        (Some(tau), None) => {
            let b = mesh.inner.bounds().map_err(value_error)?;
            let reach = outward_reach(&spec);
            SlicePlan::covering(b.min.z - reach, b.max.z + reach, tau)
        }
        (None, Some(h)) => SlicePlan::explicit(h),
        _ => return Err(PyValueError::new_err("pass exactly one of thickness or heights")),
    }
    .map_err(value_error)?;
    let slab = slab.map_or(SlabConfig::all(), SlabConfig::slices);
    let m = Arc::clone(&mesh.inner);
    let out = py.detach(move || offslice::slice_offset(&m, &spec, &plan, &cfg, slab)).map_err(value_error)?;
    Ok(out.into_iter().map(|inner| PySlice { inner }).collect())
}

/// One slice at height `z`, skipping triangles out of reach.
#[pyfunction]
#[pyo3(signature = (mesh, z, *, offset=0.0, mode="auto", radii=None, chord=0.005, workers=None))]
fn slice_single(
    py: Python<'_>,
    mesh: &PyMesh,
    z: f64,
    offset: f64,
    mode: &str,
    radii: Option<Vec<f64>>,
    chord: f64,
    workers: Option<usize>,
) -> PyResult<PySlice> {
    let spec = offset_spec(offset, mode, radii)?;
    let cfg = engine_config(chord, workers, Accumulation::default())?;
    let m = Arc::clone(&mesh.inner);
    let inner = py.detach(move || offslice::slice_single(&m, &spec, z, &cfg)).map_err(value_error)?;
    Ok(PySlice { inner })
}

/// Half-open index range `(start, stop)` of `heights` within
/// `[z_min - r, z_max + r]`.
#[pyfunction]
fn affected_slices(z_min: f64, z_max: f64, r: f64, heights: Vec<f64>) -> PyResult<(usize, usize)> {
    let plan = SlicePlan::explicit(heights).map_err(value_error)?;
    let range = offslice::affected_slices(ZInterval { z_min, z_max }, r, &plan);
    Ok((range.start, range.end))
}

/// Heights of a uniform plan covering `[z_lo, z_hi]`.
#[pyfunction]
fn plan_heights(z_lo: f64, z_hi: f64, thickness: f64) -> PyResult<Vec<f64>> {
    SlicePlan::covering(z_lo, z_hi, thickness).map(|p| p.heights()).map_err(value_error)
}

/// Nine-significant-digit formatting used by the JSONL output.
#[pyfunction]
fn format_number(x: f64) -> String {
    offslice::format_number(x)
}

#[pymodule]
#[pyo3(name = "offslice")]
pub fn offslice_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMesh>()?;
    m.add_class::<PyContour>()?;
    m.add_class::<PySlice>()?;
    m.add_function(wrap_pyfunction!(slice_offset, m)?)?;
    m.add_function(wrap_pyfunction!(slice_single, m)?)?;
    m.add_function(wrap_pyfunction!(affected_slices, m)?)?;
    m.add_function(wrap_pyfunction!(plan_heights, m)?)?;
    m.add_function(wrap_pyfunction!(format_number, m)?)?;
    m.add("DEFAULT_CHORD", offslice::engine::DEFAULT_CHORD)?;
    Ok(())
}
