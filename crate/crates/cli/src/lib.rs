//! Batch slicing driver and HTTP slice service.

pub mod service;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Parser, ValueEnum};
use offslice::mesh::Aabb;
use offslice::{
    load_stl, rasterize_winding, slice_offset_with, write_jsonl, write_png, write_svg, BitmapSpec, ChordTolerance,
    EngineConfig, IndexedMesh, OffsetSpec, Point2, SlabConfig, SlicePlan, SliceResult,
};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BAD_STL: i32 = 2;
pub const EXIT_CHAIN: i32 = 3;

/// Upper bound on pixels per raster image.
const MAX_PIXELS: f64 = 2.0e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Sign of --offset decides: positive dilates, negative erodes.
    Auto,
    Dilate,
    Erode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Jsonl,
    Png,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Svg => "svg",
            Format::Jsonl => "jsonl",
            Format::Png => "png",
        }
    }
}

/// Slice the dilation or erosion of an STL mesh.
#[derive(Debug, Clone, Parser)]
#[command(name = "offslice", version)]
#[command(group(ArgGroup::new("plan").args(["thickness", "heights"])))]
pub struct RunConfig {
    /// Binary or ASCII STL file.
    #[arg(long)]
    pub input: PathBuf,
    /// Offset in mm: positive dilates, negative erodes, zero slices plainly.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub offset: f64,
    /// Override the sign convention of --offset; its magnitude is used.
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
    /// One radius per welded vertex, one per line (variable dilation).
    #[arg(long)]
    pub radius_file: Option<PathBuf>,
    /// Uniform slice thickness in mm.
    #[arg(long)]
    pub thickness: Option<f64>,
    /// Ascending slice heights, one per line.
    #[arg(long)]
    pub heights: Option<PathBuf>,
    /// Maximum chord error of tessellated curves, in mm.
    #[arg(long, default_value_t = offslice::engine::DEFAULT_CHORD)]
    pub chord: f64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Slices processed together; defaults to the whole plan.
    #[arg(long)]
    pub slab: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "slices")]
    pub out: PathBuf,
    /// Comma-separated output formats.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Format::Svg, Format::Jsonl])]
    pub formats: Vec<Format>,
    /// Raster pixel size in mm for PNG output.
    #[arg(long, default_value_t = 0.05)]
    pub pitch: f64,
    /// Serve slices over HTTP instead of writing files.
    #[arg(long)]
    pub serve: bool,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Directory served under /ui.
    #[arg(long)]
    pub ui_dir: Option<PathBuf>,
}

/// A failure with its exit code and one-line diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self { code: EXIT_CONFIG, message: message.into() }
    }
}

fn read_file(path: &Path, what: &str) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::config(format!("cannot read {what} {}: {e}", path.display())))
}

fn read_numbers(path: &Path, what: &str) -> Result<Vec<f64>, Failure> {
    let text = String::from_utf8(read_file(path, what)?)
        .map_err(|_| Failure::config(format!("{what} {} is not UTF-8", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<f64>()
                .map_err(|_| Failure::config(format!("{what} {} line {}: not a number", path.display(), i + 1)))
        })
        .collect()
}

pub fn load_mesh(path: &Path) -> Result<IndexedMesh, Failure> {
    let bytes = read_file(path, "input")?;
    load_stl(&bytes).map_err(|e| Failure { code: EXIT_BAD_STL, message: format!("{}: {e}", path.display()) })
}

/// The offset specification selected by the flags.
pub fn offset_spec(config: &RunConfig, mesh: &IndexedMesh) -> Result<OffsetSpec, Failure> {
    if !config.offset.is_finite() {
        return Err(Failure::config("offset must be finite"));
    }
    if let Some(path) = &config.radius_file {
        if config.mode == Mode::Erode || config.offset < 0.0 {
            return Err(Failure::config("per-vertex radii only support dilation"));
        }
        let radii = read_numbers(path, "radius file")?;
        if radii.len() != mesh.vertices().len() {
            return Err(Failure::config(format!(
                "radius file has {} values for {} welded vertices",
                radii.len(),
                mesh.vertices().len()
            )));
        }
        return Ok(OffsetSpec::Variable(radii));
    }
    Ok(match config.mode {
        Mode::Auto => OffsetSpec::signed(config.offset),
        Mode::Dilate => OffsetSpec::Dilate(config.offset.abs()),
        Mode::Erode => OffsetSpec::Erode(config.offset.abs()),
    })
}

/// How far the offset solid can extend beyond the mesh.
pub fn outward_reach(spec: &OffsetSpec) -> f64 {
    match spec {
        OffsetSpec::Dilate(r) => *r,
        OffsetSpec::Erode(_) => 0.0,
        OffsetSpec::Variable(radii) => radii.iter().copied().fold(0.0, f64::max),
    }
}

pub fn engine_config(chord: f64, threads: Option<usize>) -> Result<EngineConfig, Failure> {
    let chord = ChordTolerance::new(chord).map_err(|e| Failure::config(e.to_string()))?;
    let mut cfg = EngineConfig::default().with_chord(chord);
    if let Some(k) = threads {
        if k == 0 {
            return Err(Failure::config("--threads must be at least 1"));
        }
        cfg = cfg.with_workers(k);
    }
    Ok(cfg)
}

fn slice_plan(config: &RunConfig, bounds: &Aabb, reach: f64) -> Result<SlicePlan, Failure> {
    let plan = match (config.thickness, &config.heights) {
        (Some(tau), None) => SlicePlan::covering(bounds.min.z - reach, bounds.max.z + reach, tau),
        (None, Some(path)) => SlicePlan::explicit(read_numbers(path, "heights file")?),
        _ => return Err(Failure::config("exactly one of --thickness or --heights is required")),
    };
    plan.map_err(|e| Failure::config(e.to_string()))
}

fn raster_spec(bounds: &Aabb, reach: f64, pitch: f64) -> Result<BitmapSpec, Failure> {
    if !(pitch > 0.0 && pitch.is_finite()) {
        return Err(Failure::config(format!("--pitch must be positive, got {pitch}")));
    }
    let margin = reach + pitch;
    let origin = Point2::new(bounds.min.x - margin, bounds.min.y - margin);
    let w = ((bounds.max.x + margin - origin.x) / pitch).ceil();
    let h = ((bounds.max.y + margin - origin.y) / pitch).ceil();
    if w * h > MAX_PIXELS {
        return Err(Failure::config(format!("raster of {w}x{h} pixels is too large; increase --pitch")));
    }
    Ok(BitmapSpec { width: w as usize, height: h as usize, origin, pitch })
}

fn write_slice(dir: &Path, slice: &SliceResult, formats: &[Format], raster: Option<&BitmapSpec>) -> Result<(), String> {
    for &f in formats {
        let bytes = match f {
            Format::Svg => write_svg(slice),
            Format::Jsonl => write_jsonl(slice),
            Format::Png => {
                let spec = raster.expect("raster spec prepared for png output");
                let bmp = rasterize_winding(&slice.contours, spec).map_err(|e| e.to_string())?;
                write_png(&bmp).map_err(|e| e.to_string())?
            }
        };
        let path = dir.join(format!("slice_{:05}.{}", slice.index, f.extension()));
        fs::write(&path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn bbox_json(b: &Aabb) -> serde_json::Value {
    json!({ "min": [b.min.x, b.min.y, b.min.z], "max": [b.max.x, b.max.y, b.max.z] })
}

pub fn mesh_stats(mesh: &IndexedMesh) -> serde_json::Value {
    let bounds = mesh.bounds().ok();
    json!({
        "triangles": mesh.triangles().len(),
        "vertices": mesh.vertices().len(),
        "edges": mesh.edges().len(),
        "bbox": bounds.as_ref().map(bbox_json),
    })
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Batch mode: slices the whole plan and writes one file per slice and
/// format plus `manifest.json`. Returns the process exit code.
pub fn run(config: &RunConfig) -> Result<i32, Failure> {
    let t_load = Instant::now();
    let mesh = load_mesh(&config.input)?;
    let load_ms = ms(t_load);
    let spec = offset_spec(config, &mesh)?;
    let cfg = engine_config(config.chord, config.threads)?;
    if config.serve {
        return service::serve(mesh, cfg, config.port, config.ui_dir.clone()).map(|()| EXIT_OK);
    }
    let bounds = mesh.bounds().map_err(|e| Failure { code: EXIT_BAD_STL, message: e.to_string() })?;
    let reach = outward_reach(&spec);
    let plan = slice_plan(config, &bounds, reach)?;
    let slab = match config.slab {
        Some(0) => return Err(Failure::config("--slab must be at least 1")),
        Some(n) => SlabConfig::slices(n),
        None => SlabConfig::all(),
    };
    let mut formats = config.formats.clone();
    formats.dedup();
    let raster = if formats.contains(&Format::Png) { Some(raster_spec(&bounds, reach, config.pitch)?) } else { None };
    fs::create_dir_all(&config.out)
        .map_err(|e| Failure::config(format!("cannot create {}: {e}", config.out.display())))?;

    let t_slice = Instant::now();
    let mut write_ms = 0.0;
    let mut failed = Vec::new();
    let mut write_error = None;
    slice_offset_with(&mesh, &spec, &plan, &cfg, slab, |slice| {
        if let Some(e) = &slice.error {
            failed.push(json!({ "index": slice.index, "z": slice.z, "error": e.to_string() }));
            return;
        }
        if write_error.is_some() {
            return;
        }
        let t = Instant::now();
        if let Err(e) = write_slice(&config.out, &slice, &formats, raster.as_ref()) {
            write_error = Some(e);
        }
        write_ms += ms(t);
    })
    .map_err(|e| Failure::config(e.to_string()))?;
    if let Some(e) = write_error {
        return Err(Failure::config(e));
    }
    let slice_ms = ms(t_slice) - write_ms;

    let (mode, radius) = match &spec {
        OffsetSpec::Dilate(r) => ("dilate", json!(r)),
        OffsetSpec::Erode(r) => ("erode", json!(r)),
        OffsetSpec::Variable(_) => ("variable", json!(null)),
    };
    let manifest = json!({
        "input": config.input.display().to_string(),
        "offset": config.offset,
        "mode": mode,
        "radius": radius,
        "chord": config.chord,
        "threads": cfg.workers,
        "slab": config.slab,
        "formats": formats.iter().map(|f| f.extension()).collect::<Vec<_>>(),
        "pitch": raster.as_ref().map(|r| r.pitch),
        "mesh": mesh_stats(&mesh),
        "heights": plan.heights(),
        "failed_slices": failed,
        "timing_ms": { "load": load_ms, "slice": slice_ms, "write": write_ms },
    });
    let text = serde_json::to_string_pretty(&manifest).expect("json values serialize");
    let path = config.out.join("manifest.json");
    fs::write(&path, text + "\n").map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))?;

    if !failed.is_empty() {
        let list: Vec<String> = failed.iter().map(|f| f["index"].to_string()).collect();
        return Err(Failure {
            code: EXIT_CHAIN,
            message: format!("{} slice(s) failed to chain (mesh not watertight): {}", failed.len(), list.join(",")),
        });
    }
    Ok(EXIT_OK)
}
