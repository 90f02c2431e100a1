use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::wrap_pymodule;

/// Runs `code` with the module importable as `offslice`; assertion
/// failures surface as Python exceptions.
fn run_python(code: &str) {
    Python::attach(|py| {
        let module = wrap_pymodule!(offslice_py::offslice_module)(py);
        py.import("sys").unwrap().getattr("modules").unwrap().set_item("offslice", module).unwrap();
        let code = CString::new(code).unwrap();
        if let Err(e) = py.run(&code, None, None) {
            let trace = e.traceback(py).and_then(|t| t.format().ok()).unwrap_or_default();
            panic!("{trace}{e}");
        }
    });
}

#[test]
fn mesh_constructors_and_stats() {
    run_python(
        r#"
import offslice
m = offslice.Mesh.cube(1.0)
assert (m.triangle_count, m.vertex_count, m.edge_count) == (12, 8, 18)
assert m.bounds == ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
assert m.is_closed
again = offslice.Mesh.from_stl_bytes(m.to_stl_bytes())
assert again.triangle_count == 12
tri = offslice.Mesh.from_triangles([((0, 0, 0), (1, 0, 0), (0, 1, 0))])
assert not tri.is_closed
try:
    offslice.Mesh.from_stl_bytes(b"solid x\n facet")
    raise AssertionError("expected ValueError")
except ValueError:
    pass
"#,
    );
}

#[test]
fn slicing_matches_analytic_values() {
    run_python(
        r#"
import offslice
cube = offslice.Mesh.cube(1.0)
s = offslice.slice_single(cube, 0.5, offset=-0.2)
assert len(s) == 1 and abs(s.net_area - 0.36) < 1e-9, s.net_area
assert s.contours[0].is_ccw
assert '"area":0.360000000' in s.to_jsonl()
assert s.to_svg().count("<path") == 1

plan = offslice.slice_offset(cube, offset=0.2, thickness=0.1)
assert len(plan) == 15
for k in (1, 2):
    other = offslice.slice_offset(cube, offset=0.2, thickness=0.1, workers=k, slab=4, accumulation="divide_conquer")
    assert [p.to_jsonl() for p in other] == [p.to_jsonl() for p in plan]
mid = offslice.slice_single(cube, plan[7].z, offset=0.2)
assert mid.to_jsonl() == plan[7].to_jsonl()

rows = s.rasterize((0.0, 0.0), 0.01, 100, 100)
assert sum(sum(r) for r in rows) == 60 * 60
assert s.to_png((0.0, 0.0), 0.01, 100, 100)[:8] == b"\x89PNG\r\n\x1a\n"

radii = [0.1] * cube.vertex_count
v = offslice.slice_single(cube, 0.5, radii=radii)
u = offslice.slice_single(cube, 0.5, offset=0.1)
exact = 1.4 + 3.141592653589793 * 0.01
assert abs(v.net_area - exact) < 0.005 and abs(u.net_area - exact) < 0.005, (v.net_area, u.net_area)
"#,
    );
}

#[test]
fn helpers_and_errors() {
    run_python(
        r#"
import offslice
assert offslice.affected_slices(1.0, 1.2, 0.5, [0.04 * j for j in range(100)])[0] == 13
assert len(offslice.plan_heights(-0.2, 1.2, 0.1)) == 15
assert offslice.format_number(-0.0) == "0.00000000"
cube = offslice.Mesh.cube()
for kwargs in ({"thickness": 0.1, "chord": 0.0}, {"thickness": 0.1, "mode": "grow"}, {}, {"heights": [0.5, 0.2]},
               {"thickness": 0.1, "accumulation": "x"}, {"thickness": 0.1, "radii": [0.1]}):
    try:
        offslice.slice_offset(cube, **kwargs)
        raise AssertionError(kwargs)
    except ValueError:
        pass
"#,
    );
}
