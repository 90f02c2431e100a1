//! Integer planar arrangement used by every boolean operation.
//!
//! Input loops are snapped to the grid and their segments are snap-rounded
//! (hot-pixel rerouting, repeated until no segment touches a foreign hot
//! pixel). The resulting fragments never cross, so winding numbers can be
//! assigned per fragment with a plain sweep, and any subset of fragments can
//! be combined again without creating new vertices.
//!
//! Coordinate magnitudes stay below 2^39 grid units so every predicate fits
//! in an `i128`.

use super::{Contour, ContourKind, SNAP_GRID};
use crate::geom::Point2;

const SCALE: f64 = 1.0 / SNAP_GRID;
/// Largest accepted absolute grid coordinate.
pub(crate) const LIMIT: i64 = 1 << 39;
const MAX_PASSES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct IPt {
    pub x: i64,
    pub y: i64,
}

impl IPt {
    pub fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn snap(p: Point2) -> Self {
        let q = |v: f64| ((v * SCALE).round() as i64).clamp(-LIMIT, LIMIT);
        Self::new(q(p.x), q(p.y))
    }

    pub fn to_point(self) -> Point2 {
        Point2::new(self.x as f64 / SCALE, self.y as f64 / SCALE)
    }
}

/// Directed edge between grid points.
pub(crate) type DirEdge = (IPt, IPt);

fn orient(a: IPt, b: IPt, c: IPt) -> i128 {
    (b.x - a.x) as i128 * (c.y - a.y) as i128 - (b.y - a.y) as i128 * (c.x - a.x) as i128
}

fn cross(ax: i64, ay: i64, bx: i64, by: i64) -> i128 {
    ax as i128 * by as i128 - ay as i128 * bx as i128
}

/// `round(n / d)` with ties toward +infinity, matching pixel membership
/// `[h - 1/2, h + 1/2)`.
fn round_div(n: i128, d: i128) -> i128 {
    let (n, d) = if d < 0 { (-n, -d) } else { (n, d) };
    (2 * n + d).div_euclid(2 * d)
}

#[derive(Debug, Clone, Copy)]
struct Seg {
    a: IPt,
    b: IPt,
    origin: u32,
}

fn proper_crossing(s: &Seg, t: &Seg) -> Option<IPt> {
    if s.a.x.max(s.b.x) < t.a.x.min(t.b.x)
        || t.a.x.max(t.b.x) < s.a.x.min(s.b.x)
        || s.a.y.max(s.b.y) < t.a.y.min(t.b.y)
        || t.a.y.max(t.b.y) < s.a.y.min(s.b.y)
    {
        return None;
    }
    let o1 = orient(s.a, s.b, t.a);
    let o2 = orient(s.a, s.b, t.b);
    if o1 == 0 || o2 == 0 || (o1 > 0) == (o2 > 0) {
        return None;
    }
    let o3 = orient(t.a, t.b, s.a);
    let o4 = orient(t.a, t.b, s.b);
    if o3 == 0 || o4 == 0 || (o3 > 0) == (o4 > 0) {
        return None;
    }
    let (dx1, dy1) = (s.b.x - s.a.x, s.b.y - s.a.y);
    let (dx2, dy2) = (t.b.x - t.a.x, t.b.y - t.a.y);
    let den = cross(dx1, dy1, dx2, dy2);
    let num = cross(t.a.x - s.a.x, t.a.y - s.a.y, dx2, dy2);
    let x = s.a.x as i128 + round_div(dx1 as i128 * num, den);
    let y = s.a.y as i128 + round_div(dy1 as i128 * num, den);
    Some(IPt::new(x as i64, y as i64))
}

/// Does segment `a b` meet the half-open pixel `[h - 1/2, h + 1/2)^2`?
///
/// The open sides are handled by shrinking the square by an infinitesimal
/// amount and resolving ties symbolically.
fn touches_pixel(a: IPt, b: IPt, h: IPt) -> bool {
    // cheap rejection: distance from the line well above a pixel diagonal
    let (fx, fy) = ((b.x - a.x) as f64, (b.y - a.y) as f64);
    let c = fx * (h.y - a.y) as f64 - fy * (h.x - a.x) as f64;
    if c.abs() > 2.0 * (fx.abs() + fy.abs()) + 1.0 {
        return false;
    }
    let (ax, ay, bx, by) = (2 * a.x, 2 * a.y, 2 * b.x, 2 * b.y);
    let (lx, hx, ly, hy) = (2 * h.x - 1, 2 * h.x + 1, 2 * h.y - 1, 2 * h.y + 1);
    if ax.max(bx) < lx || ax.min(bx) >= hx || ay.max(by) < ly || ay.min(by) >= hy {
        return false;
    }
    let (dx, dy) = ((bx - ax) as i128, (by - ay) as i128);
    let (aa, bb) = (IPt::new(ax, ay), IPt::new(bx, by));
    let mut pos = false;
    let mut neg = false;
    // corner and the direction it is pulled in by the shrink
    for (c, ex, ey) in
        [(IPt::new(lx, ly), 0i128, 0i128), (IPt::new(hx, ly), 1, 0), (IPt::new(hx, hy), 1, 1), (IPt::new(lx, hy), 0, 1)]
    {
        let mut o = orient(aa, bb, c);
        if o == 0 {
            o = -(dx * ey - dy * ex);
        }
        if o == 0 {
            return true;
        }
        if o > 0 {
            pos = true;
        } else {
            neg = true;
        }
    }
    pos && neg
}

/// Uniform bucket grid over integer coordinates.
struct Grid {
    x0: f64,
    y0: f64,
    cell: f64,
    inv: f64,
    nx: usize,
    ny: usize,
}

impl Grid {
    fn new(segs: &[Seg]) -> Self {
        let (mut xmin, mut ymin, mut xmax, mut ymax) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        let mut total = 0.0;
        for s in segs {
            for p in [s.a, s.b] {
                xmin = xmin.min(p.x as f64);
                ymin = ymin.min(p.y as f64);
                xmax = xmax.max(p.x as f64);
                ymax = ymax.max(p.y as f64);
            }
            total += ((s.b.x - s.a.x) as f64).hypot((s.b.y - s.a.y) as f64);
        }
        let n = segs.len().max(1) as f64;
        let (w, h) = ((xmax - xmin).max(1.0), (ymax - ymin).max(1.0));
        let cell = (2.0 * total / n).max((w * h / (4.0 * n)).sqrt()).max(4.0);
        let nx = (w / cell).floor() as usize + 1;
        let ny = (h / cell).floor() as usize + 1;
        Self { x0: xmin, y0: ymin, cell, inv: 1.0 / cell, nx, ny }
    }

    // float-to-int casts saturate, so negatives land in cell 0
    fn col(&self, x: f64) -> usize {
        (((x - self.x0) * self.inv) as usize).min(self.nx - 1)
    }

    fn row(&self, y: f64) -> usize {
        (((y - self.y0) * self.inv) as usize).min(self.ny - 1)
    }

    fn cell_of(&self, p: IPt) -> usize {
        self.row(p.y as f64) * self.nx + self.col(p.x as f64)
    }

    /// Calls `f` once for every cell within `pad` of the segment.
    fn for_cells(&self, a: IPt, b: IPt, pad: f64, mut f: impl FnMut(usize)) {
        let (ax, ay, bx, by) = (a.x as f64, a.y as f64, b.x as f64, b.y as f64);
        let r0 = self.row(ay.min(by) - pad);
        let r1 = self.row(ay.max(by) + pad);
        for r in r0..=r1 {
            let band_lo = self.y0 + r as f64 * self.cell - pad;
            let band_hi = band_lo + self.cell + 2.0 * pad;
            let (xa, xb) = if ay == by {
                (ax.min(bx), ax.max(bx))
            } else {
                let t0 = ((band_lo - ay) / (by - ay)).clamp(0.0, 1.0);
                let t1 = ((band_hi - ay) / (by - ay)).clamp(0.0, 1.0);
                let (x0, x1) = (ax + (bx - ax) * t0, ax + (bx - ax) * t1);
                (x0.min(x1), x0.max(x1))
            };
            let c0 = self.col(xa - pad);
            let c1 = self.col(xb + pad);
            for c in c0..=c1 {
                f(r * self.nx + c);
            }
        }
    }
}

/// Compressed cell -> item lists.
struct Buckets {
    start: Vec<u32>,
    items: Vec<u32>,
}

impl Buckets {
    fn build(cells: usize, mut each: impl FnMut(&mut dyn FnMut(usize, u32))) -> Self {
        let mut count = vec![0u32; cells + 1];
        each(&mut |c, _| count[c + 1] += 1);
        for i in 0..cells {
            count[i + 1] += count[i];
        }
        let mut fill = count.clone();
        let mut items = vec![0u32; count[cells] as usize];
        each(&mut |c, item| {
            items[fill[c] as usize] = item;
            fill[c] += 1;
        });
        Self { start: count, items }
    }

    fn get(&self, cell: usize) -> &[u32] {
        &self.items[self.start[cell] as usize..self.start[cell + 1] as usize]
    }
}

/// Proper crossings between all segment pairs.
fn find_crossings(segs: &[Seg], grid: &Grid, skip_same: &[bool]) -> Vec<IPt> {
    let cells = grid.nx * grid.ny;
    let buckets = Buckets::build(cells, |push| {
        for (i, s) in segs.iter().enumerate() {
            grid.for_cells(s.a, s.b, 1.0, |c| push(c, i as u32));
        }
    });
    let mut mark = vec![u32::MAX; segs.len()];
    let mut out = Vec::new();
    for (i, s) in segs.iter().enumerate() {
        let skip_own = skip_same.get(s.origin as usize).copied().unwrap_or(false);
        grid.for_cells(s.a, s.b, 1.0, |c| {
            for &j in buckets.get(c) {
                let j = j as usize;
                if j <= i || mark[j] == i as u32 {
                    continue;
                }
                mark[j] = i as u32;
                let t = &segs[j];
                if skip_own && t.origin == s.origin {
                    continue;
                }
                if let Some(p) = proper_crossing(s, t) {
                    out.push(p);
                }
            }
        });
    }
    out
}

fn hot_buckets(grid: &Grid, hot: &[IPt]) -> Buckets {
    Buckets::build(grid.nx * grid.ny, |push| {
        for (i, &h) in hot.iter().enumerate() {
            push(grid.cell_of(h), i as u32);
        }
    })
}

/// Reroutes `fresh` segments through every hot pixel they touch. Returns
/// the fragments, their freshness, and whether anything was split.
fn reroute(segs: &[Seg], fresh: &[bool], hot: &[IPt], grid: &Grid) -> (Vec<Seg>, Vec<bool>, bool) {
    let buckets = hot_buckets(grid, hot);
    let mut out = Vec::with_capacity(segs.len());
    let mut out_fresh = Vec::with_capacity(segs.len());
    let mut changed = false;
    let mut hits: Vec<(i128, IPt)> = Vec::new();
    for (i, s) in segs.iter().enumerate() {
        hits.clear();
        if fresh[i] {
            let (dx, dy) = ((s.b.x - s.a.x) as i128, (s.b.y - s.a.y) as i128);
            grid.for_cells(s.a, s.b, 1.5, |c| {
                for &h in buckets.get(c) {
                    let h = hot[h as usize];
                    if h != s.a && h != s.b && touches_pixel(s.a, s.b, h) {
                        let key = (h.x - s.a.x) as i128 * dx + (h.y - s.a.y) as i128 * dy;
                        hits.push((key, h));
                    }
                }
            });
        }
        if hits.is_empty() {
            out.push(*s);
            out_fresh.push(false);
            continue;
        }
        changed = true;
        hits.sort_unstable();
        hits.dedup();
        let mut prev = s.a;
        for &(_, h) in hits.iter() {
            out.push(Seg { a: prev, b: h, origin: s.origin });
            prev = h;
        }
        out.push(Seg { a: prev, b: s.b, origin: s.origin });
        out_fresh.resize(out.len(), true);
    }
    (out, out_fresh, changed)
}

/// Iterated snap rounding. The first pass finds all crossings; rounded
/// fragments never cross properly, so later passes only reroute fragments
/// created by the previous pass that now touch another hot pixel.
fn snap_round(mut segs: Vec<Seg>, skip_same: &[bool]) -> Vec<Seg> {
    segs.retain(|s| s.a != s.b);
    if segs.is_empty() {
        return segs;
    }
    let mut fresh = vec![true; segs.len()];
    let grid = Grid::new(&segs);
    let mut hot = find_crossings(&segs, &grid, skip_same);
    hot.extend(segs.iter().flat_map(|s| [s.a, s.b]));
    hot.sort_unstable();
    hot.dedup();
    for _ in 0..MAX_PASSES {
        let grid = Grid::new(&segs);
        let (next, next_fresh, changed) = reroute(&segs, &fresh, &hot, &grid);
        segs = next;
        fresh = next_fresh;
        if !changed {
            break;
        }
    }
    segs
}

/// Convex and counter-clockwise after snapping: all turns left and each
/// coordinate direction changes sign at most twice.
fn snapped_convex(pts: &[IPt]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let mut x_flips = 0;
    let mut y_flips = 0;
    let (mut last_dx, mut last_dy) = (0i64, 0i64);
    for i in 0..=n {
        let (a, b, c) = (pts[i % n], pts[(i + 1) % n], pts[(i + 2) % n]);
        if orient(a, b, c) < 0 {
            return false;
        }
        let (dx, dy) = ((b.x - a.x).signum(), (b.y - a.y).signum());
        if i < n {
            if dx != 0 {
                if last_dx != 0 && dx != last_dx {
                    x_flips += 1;
                }
                last_dx = dx;
            }
            if dy != 0 {
                if last_dy != 0 && dy != last_dy {
                    y_flips += 1;
                }
                last_dy = dy;
            }
        }
    }
    x_flips <= 2 && y_flips <= 2
}

/// Snap-rounded fragments of a list of contours, grouped by contour.
pub(crate) struct Arrangement {
    frags: Vec<Vec<DirEdge>>,
}

impl Arrangement {
    /// With `convex_fast_path`, edges of one provably convex contour are not
    /// tested against each other; they cannot cross, so output is unchanged.
    pub fn build(contours: &[Contour], convex_fast_path: bool) -> Self {
        let mut segs = Vec::new();
        let mut skip = vec![false; contours.len()];
        for (ci, c) in contours.iter().enumerate() {
            let mut pts: Vec<IPt> = c.points().iter().map(|&p| IPt::snap(p)).collect();
            pts.dedup();
            while pts.len() > 1 && pts.first() == pts.last() {
                pts.pop();
            }
            if pts.len() < 3 {
                continue;
            }
            skip[ci] = convex_fast_path && c.is_convex() && snapped_convex(&pts);
            for i in 0..pts.len() {
                segs.push(Seg { a: pts[i], b: pts[(i + 1) % pts.len()], origin: ci as u32 });
            }
        }
        let segs = snap_round(segs, &skip);
        let mut frags = vec![Vec::new(); contours.len()];
        for s in segs {
            frags[s.origin as usize].push((s.a, s.b));
        }
        Self { frags }
    }

    pub fn fragments(&self, contour: usize) -> &[DirEdge] {
        &self.frags[contour]
    }

    /// Boundary of `{winding > 0}` over the given contours.
    pub fn boundary_of(&self, ids: impl IntoIterator<Item = usize>) -> Vec<DirEdge> {
        let mut weighted = Vec::new();
        for i in ids {
            weighted.extend(self.frags[i].iter().map(|&(a, b)| (a, b, 1)));
        }
        boundary(weighted)
    }
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    a: IPt,
    b: IPt,
    w: i32,
}

/// Sums weights of coincident edges; keys are oriented `a < b`.
fn merge(mut weighted: Vec<(IPt, IPt, i32)>) -> Vec<Edge> {
    for e in weighted.iter_mut() {
        if e.1 < e.0 {
            *e = (e.1, e.0, -e.2);
        }
    }
    weighted.sort_unstable_by_key(|e| (e.0, e.1));
    let mut out: Vec<Edge> = Vec::with_capacity(weighted.len());
    for (a, b, w) in weighted {
        if a == b {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.a == a && last.b == b => last.w += w,
            _ => out.push(Edge { a, b, w }),
        }
    }
    out.retain(|e| e.w != 0);
    out
}

// `edge` spans x. Numerator of its y at x over denominator dx.
fn y_num(e: &Edge, x: i64) -> i128 {
    let (dx, dy) = ((e.b.x - e.a.x) as i128, (e.b.y - e.a.y) as i128);
    e.a.y as i128 * dx + (x - e.a.x) as i128 * dy
}

/// Is active edge `f` below edge `e` just right of `e.a`?
fn below_at_start(f: &Edge, e: &Edge) -> bool {
    let x = e.a.x;
    let dxf = (f.b.x - f.a.x) as i128;
    let lhs = y_num(f, x);
    let rhs = e.a.y as i128 * dxf;
    if lhs != rhs {
        return lhs < rhs;
    }
    let (dxe, dye) = ((e.b.x - e.a.x) as i128, (e.b.y - e.a.y) as i128);
    let dyf = (f.b.y - f.a.y) as i128;
    dyf * dxe < dye * dxf
}

/// Directed boundary of `{winding > 0}` for edges that do not cross, solid
/// on the left of every returned edge.
pub(crate) fn boundary(weighted: Vec<(IPt, IPt, i32)>) -> Vec<DirEdge> {
    let edges = merge(weighted);
    let side = sweep(&edges);
    let mut out = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        // for a < b the left side of a->b is above (or left of an upward edge)
        let right = side[i];
        let left = right + e.w;
        if left > 0 && right <= 0 {
            out.push((e.a, e.b));
        } else if right > 0 && left <= 0 {
            out.push((e.b, e.a));
        }
    }
    out
}

/// Winding number just below each non-vertical edge, or just right of each
/// vertical one.
fn sweep(edges: &[Edge]) -> Vec<i32> {
    let mut nonvert = Vec::new();
    let mut vert = Vec::new();
    let mut xs = Vec::with_capacity(edges.len() * 2);
    for (i, e) in edges.iter().enumerate() {
        if e.a.x == e.b.x {
            vert.push(i);
        } else {
            nonvert.push(i);
            xs.push(e.b.x);
        }
        xs.push(e.a.x);
    }
    xs.sort_unstable();
    xs.dedup();

    let mut side = vec![0i32; edges.len()];
    let mut active: Vec<usize> = Vec::new();
    let (mut ni, mut vi) = (0, 0);
    let mut ends = nonvert.clone();
    ends.sort_unstable_by_key(|&i| edges[i].b);
    let mut ei = 0;
    for &x in &xs {
        // edges ending at one point are adjacent in `active`
        while ei < ends.len() && edges[ends[ei]].b.x == x {
            let q = edges[ends[ei]].b;
            let mut k = ei;
            while k < ends.len() && edges[ends[k]].b == q {
                k += 1;
            }
            let lo = active.partition_point(|&f| {
                let g = &edges[f];
                y_num(g, x) < q.y as i128 * (g.b.x - g.a.x) as i128
            });
            let mut hi = lo;
            while hi < active.len() && edges[active[hi]].b == q {
                hi += 1;
            }
            debug_assert_eq!(hi - lo, k - ei);
            active.drain(lo..hi);
            ei = k;
        }
        while ni < nonvert.len() && edges[nonvert[ni]].a.x == x {
            // all edges leaving one vertex go in together, lowest slope first
            let p = edges[nonvert[ni]].a;
            let mut end = ni;
            while end < nonvert.len() && edges[nonvert[end]].a == p {
                end += 1;
            }
            let mut group = nonvert[ni..end].to_vec();
            group.sort_by(|&i, &j| {
                let (ei, ej) = (&edges[i], &edges[j]);
                let si = (ei.b.y - ei.a.y) as i128 * (ej.b.x - ej.a.x) as i128;
                let sj = (ej.b.y - ej.a.y) as i128 * (ei.b.x - ei.a.x) as i128;
                si.cmp(&sj)
            });
            let pos = active.partition_point(|&f| below_at_start(&edges[f], &edges[group[0]]));
            let mut w = if pos == 0 { 0 } else { side[active[pos - 1]] + edges[active[pos - 1]].w };
            for (k, &e) in group.iter().enumerate() {
                side[e] = w;
                w += edges[e].w;
                active.insert(pos + k, e);
            }
            ni = end;
        }
        while vi < vert.len() && edges[vert[vi]].a.x == x {
            let e = &edges[vert[vi]];
            let mid2 = (e.a.y + e.b.y) as i128;
            let pos = active.partition_point(|&f| {
                let g = &edges[f];
                2 * y_num(g, x) < mid2 * (g.b.x - g.a.x) as i128
            });
            side[vert[vi]] = if pos == 0 { 0 } else { side[active[pos - 1]] + edges[active[pos - 1]].w };
            vi += 1;
        }
    }
    side
}

/// Orders turn directions relative to `din`; larger means further left.
fn turn_key(din: (i64, i64), d: (i64, i64)) -> (u8, (i64, i64)) {
    let c = cross(din.0, din.1, d.0, d.1);
    let dot = din.0 as i128 * d.0 as i128 + din.1 as i128 * d.1 as i128;
    let class = if c < 0 {
        0
    } else if c == 0 && dot > 0 {
        1
    } else if c > 0 {
        2
    } else {
        3
    };
    (class, d)
}

fn more_left(din: (i64, i64), a: (i64, i64), b: (i64, i64)) -> bool {
    let (ca, _) = turn_key(din, a);
    let (cb, _) = turn_key(din, b);
    if ca != cb {
        return cb > ca;
    }
    cross(a.0, a.1, b.0, b.1) > 0
}

/// Chains solid-left boundary edges into loops, taking the leftmost turn at
/// shared vertices so touching loops stay separate.
pub(crate) fn chain(mut edges: Vec<DirEdge>) -> Vec<Vec<IPt>> {
    edges.sort_unstable();
    edges.dedup();
    let n = edges.len();
    let mut used = vec![false; n];
    let mut loops = Vec::new();
    let outgoing = |v: IPt| {
        let lo = edges.partition_point(|e| e.0 < v);
        let hi = edges.partition_point(|e| e.0 <= v);
        lo..hi
    };
    for first in 0..n {
        if used[first] {
            continue;
        }
        let mut pts = Vec::new();
        let mut cur = first;
        let closed = loop {
            used[cur] = true;
            let (a, b) = edges[cur];
            pts.push(a);
            let din = (b.x - a.x, b.y - a.y);
            let mut best: Option<usize> = None;
            for j in outgoing(b) {
                let d = (edges[j].1.x - b.x, edges[j].1.y - b.y);
                best = match best {
                    None => Some(j),
                    Some(k) => {
                        let dk = (edges[k].1.x - b.x, edges[k].1.y - b.y);
                        if more_left(din, dk, d) {
                            Some(j)
                        } else {
                            Some(k)
                        }
                    }
                };
            }
            match best {
                Some(j) if j == first => break true,
                Some(j) if !used[j] => cur = j,
                _ => break false,
            }
        };
        if closed {
            if let Some(l) = simplify(pts) {
                loops.push(l);
            }
        }
    }
    loops.sort();
    loops
}

/// Drops straight-through vertices and rotates to the smallest vertex.
fn simplify(mut pts: Vec<IPt>) -> Option<Vec<IPt>> {
    loop {
        let n = pts.len();
        if n < 3 {
            return None;
        }
        let keep: Vec<bool> = (0..n)
            .map(|i| {
                let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
                orient(a, b, c) != 0
            })
            .collect();
        if keep.iter().all(|&k| k) {
            break;
        }
        // drop one straight vertex at a time from each run so neighbors are
        // re-evaluated against the survivors
        let mut next = Vec::with_capacity(n);
        let mut dropped_prev = false;
        for i in 0..n {
            if !keep[i] && !dropped_prev {
                dropped_prev = true;
                continue;
            }
            dropped_prev = false;
            next.push(pts[i]);
        }
        pts = next;
    }
    let area2: i128 = (0..pts.len())
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
            a.x as i128 * b.y as i128 - b.x as i128 * a.y as i128
        })
        .sum();
    if area2 == 0 {
        return None;
    }
    let start = (0..pts.len()).min_by_key(|&i| pts[i]).unwrap();
    pts.rotate_left(start);
    Some(pts)
}

pub(crate) fn edges_to_contours(edges: Vec<DirEdge>) -> Vec<Contour> {
    chain(edges)
        .into_iter()
        .filter_map(|l| Contour::new(l.into_iter().map(IPt::to_point).collect(), -1, ContourKind::Final))
        .collect()
}

#[cfg(test)]
pub(crate) fn has_crossings(edges: &[DirEdge]) -> bool {
    let segs: Vec<Seg> = edges.iter().map(|&(a, b)| Seg { a, b, origin: 0 }).collect();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if proper_crossing(&segs[i], &segs[j]).is_some() {
                return true;
            }
            // vertex strictly inside another edge
            for (s, t) in [(&segs[i], &segs[j]), (&segs[j], &segs[i])] {
                for p in [t.a, t.b] {
                    if p != s.a && p != s.b && orient(s.a, s.b, p) == 0 {
                        let d = (p.x - s.a.x) as i128 * (s.b.x - s.a.x) as i128
                            + (p.y - s.a.y) as i128 * (s.b.y - s.a.y) as i128;
                        let len2 = (s.b.x - s.a.x) as i128 * (s.b.x - s.a.x) as i128
                            + (s.b.y - s.a.y) as i128 * (s.b.y - s.a.y) as i128;
                        if d > 0 && d < len2 {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_matches_pixel_membership() {
        assert_eq!(round_div(5, 2), 3);
        assert_eq!(round_div(-5, 2), -2);
        assert_eq!(round_div(7, -2), -3);
        assert_eq!(round_div(1, 3), 0);
        assert_eq!(round_div(-1, 3), 0);
    }

    #[test]
    fn crossing_point_is_rounded() {
        let s = Seg { a: IPt::new(0, 0), b: IPt::new(10, 10), origin: 0 };
        let t = Seg { a: IPt::new(0, 10), b: IPt::new(10, 1), origin: 1 };
        let p = proper_crossing(&s, &t).unwrap();
        // exact crossing at x = y = 100/19 = 5.26
        assert_eq!(p, IPt::new(5, 5));
        let touching = Seg { a: IPt::new(5, 5), b: IPt::new(9, 0), origin: 1 };
        assert!(proper_crossing(&s, &touching).is_none());
    }

    #[test]
    fn pixel_touch() {
        let p = IPt::new;
        assert!(touches_pixel(p(0, 0), p(10, 0), p(5, 0)));
        assert!(touches_pixel(p(0, 0), p(10, 1), p(5, 1)));
        assert!(!touches_pixel(p(0, 0), p(10, 0), p(5, 1)));
        assert!(!touches_pixel(p(0, 0), p(10, 0), p(12, 0)));
        // a unit diagonal only grazes the corners of its side neighbors
        assert!(!touches_pixel(p(0, 0), p(1, 1), p(0, 1)));
        assert!(!touches_pixel(p(0, 0), p(1, 1), p(1, 0)));
        assert!(!touches_pixel(p(0, 1), p(1, 0), p(0, 0)));
        assert!(touches_pixel(p(0, 1), p(1, 0), p(1, 1)));
        // lower and left sides are closed, upper and right sides open
        assert!(touches_pixel(p(0, 0), p(1, 1), p(1, 1)));
        assert!(touches_pixel(p(-3, -1), p(3, -1), p(0, -1)));
        assert!(!touches_pixel(p(0, 1), p(4, 3), p(2, 1)));
        assert!(touches_pixel(p(0, 0), p(4, 2), p(1, 0)));
        assert!(touches_pixel(p(0, 0), p(4, 2), p(3, 1)));
    }

    #[test]
    fn snap_rounding_output_is_planar() {
        // a fan of long segments crossing near-degenerately
        let mut segs = Vec::new();
        for k in 0..12i64 {
            segs.push(Seg { a: IPt::new(-1000, -37 * k), b: IPt::new(1000, 41 * k - 3), origin: k as u32 });
            segs.push(Seg { a: IPt::new(-13 * k, -900), b: IPt::new(17 * k + 1, 950), origin: 100 + k as u32 });
        }
        let out = snap_round(segs, &[]);
        let edges: Vec<DirEdge> = out.iter().map(|s| (s.a, s.b)).collect();
        assert!(!has_crossings(&edges));
    }

    #[test]
    fn random_snap_rounding_is_planar() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for round in 0..60 {
            let span = [8i64, 40, 400, 5000][round % 4];
            let segs: Vec<Seg> = (0..40u32)
                .map(|origin| Seg {
                    a: IPt::new(rng.gen_range(-span..span), rng.gen_range(-span..span)),
                    b: IPt::new(rng.gen_range(-span..span), rng.gen_range(-span..span)),
                    origin,
                })
                .collect();
            let out = snap_round(segs, &[]);
            let edges: Vec<DirEdge> = out.iter().map(|s| (s.a, s.b)).collect();
            assert!(!has_crossings(&edges), "round {round}");
        }
    }

    fn ray_winding(edges: &[Edge], px: f64, py: f64) -> i32 {
        let mut w = 0;
        for f in edges {
            let (ax, ay, bx, by) = (f.a.x as f64, f.a.y as f64, f.b.x as f64, f.b.y as f64);
            if (ay <= py) != (by <= py) && ax + (py - ay) / (by - ay) * (bx - ax) > px {
                w += if by > ay { f.w } else { -f.w };
            }
        }
        w
    }

    #[test]
    fn sweep_matches_ray_casting() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let mut segs = Vec::new();
            for origin in 0..6u32 {
                let (cx, cy) = (rng.gen_range(-60..60i64), rng.gen_range(-60..60i64));
                let n = rng.gen_range(3..9);
                let pts: Vec<IPt> =
                    (0..n).map(|_| IPt::new(cx + rng.gen_range(-50..50), cy + rng.gen_range(-50..50))).collect();
                for k in 0..n {
                    if pts[k] != pts[(k + 1) % n] {
                        segs.push(Seg { a: pts[k], b: pts[(k + 1) % n], origin });
                    }
                }
            }
            let frags = snap_round(segs, &[]);
            let edges = merge(frags.iter().map(|s| (s.a, s.b, 1)).collect());
            let side = sweep(&edges);
            for (e, &w) in edges.iter().zip(&side) {
                let (mx, my) = ((e.a.x + e.b.x) as f64 / 2.0, (e.a.y + e.b.y) as f64 / 2.0);
                let (px, py) = if e.a.x == e.b.x { (mx + 1e-3, my) } else { (mx, my - 1e-3) };
                assert_eq!(w, ray_winding(&edges, px, py), "{e:?}");
            }
        }
    }

    #[test]
    fn convexity_after_snapping() {
        let sq = [IPt::new(0, 0), IPt::new(4, 0), IPt::new(4, 4), IPt::new(0, 4)];
        assert!(snapped_convex(&sq));
        let bow = [IPt::new(0, 0), IPt::new(4, 4), IPt::new(4, 0), IPt::new(0, 4)];
        assert!(!snapped_convex(&bow));
        // a doubly wound star has only left turns but rotates twice
        let star = [IPt::new(10, 0), IPt::new(-8, 6), IPt::new(3, -10), IPt::new(3, 10), IPt::new(-8, -6)];
        assert!(!snapped_convex(&star));
    }

    #[test]
    fn simplify_removes_straight_runs() {
        let l = vec![IPt::new(0, 0), IPt::new(1, 0), IPt::new(2, 0), IPt::new(3, 0), IPt::new(3, 3), IPt::new(0, 3)];
        assert_eq!(simplify(l).unwrap(), vec![IPt::new(0, 0), IPt::new(3, 0), IPt::new(3, 3), IPt::new(0, 3)]);
    }
}
