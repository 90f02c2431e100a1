//! Compares one preview slice with a full plan on a torus.
//!
//! `cargo run --release --example preview_cost -- [steps] [radius] [workers]`

use std::time::Instant;

use offslice::{slice_offset, slice_single, torus, EngineConfig, OffsetSpec, SlabConfig, SlicePlan};

fn arg<T: std::str::FromStr>(i: usize, default: T) -> T {
    std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() {
    let (steps, r, workers): (usize, f64, usize) = (arg(1, 200), arg(2, 1.0), arg(3, 1));
    let mesh = torus(30.0, 10.0, steps * 2, steps / 2);
    let cfg = EngineConfig::default().with_workers(workers);
    let spec = OffsetSpec::Dilate(r);
    println!("{} triangles, r = {r}, {workers} worker(s)", mesh.triangles().len());

    let t = Instant::now();
    let single = slice_single(&mesh, &spec, 0.3, &cfg).expect("valid input");
    println!("single slice: {:?}, {} contours", t.elapsed(), single.contours.len());

    let plan = SlicePlan::covering(-10.0 - r, 10.0 + r, 2.0).expect("valid plan");
    let t = Instant::now();
    let all = slice_offset(&mesh, &spec, &plan, &cfg, SlabConfig::all()).expect("valid input");
    println!("full plan: {} slices in {:?}", all.len(), t.elapsed());
}
