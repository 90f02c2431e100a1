//! Scanline rasterization with the positive winding rule.

use thiserror::Error;

use super::ContourSet;
use crate::geom::Point2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RasterError {
    #[error("bitmap must have non-zero size, got {0}x{1}")]
    ZeroSize(usize, usize),
    #[error("pixel pitch must be positive and finite, got {0}")]
    BadPitch(f64),
}

/// Pixel grid placement. Pixel `(i, j)` covers
/// `[origin.x + i*pitch, origin.x + (i+1)*pitch)` by the same in y; row 0 is
/// the bottom row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitmapSpec {
    pub width: usize,
    pub height: usize,
    pub origin: Point2,
    pub pitch: f64,
}

impl BitmapSpec {
    pub fn pixel_center(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.origin.x + (i as f64 + 0.5) * self.pitch, self.origin.y + (j as f64 + 0.5) * self.pitch)
    }
}

/// One bit per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    width: usize,
    height: usize,
    bits: Vec<u64>,
}

impl Bitmap {
    fn new(width: usize, height: usize) -> Self {
        Self { width, height, bits: vec![0; (width * height).div_ceil(64)] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        let k = j * self.width + i;
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize) {
        let k = j * self.width + i;
        self.bits[k / 64] |= 1 << (k % 64);
    }

    pub fn count_set(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Pixels set here but not in `other`.
    pub fn difference_count(&self, other: &Bitmap) -> usize {
        self.bits.iter().zip(&other.bits).map(|(a, b)| (a & !b).count_ones() as usize).sum()
    }

    /// Rows top to bottom, one byte per pixel (255 = solid).
    pub fn to_gray_rows(&self) -> Vec<Vec<u8>> {
        (0..self.height)
            .rev()
            .map(|j| (0..self.width).map(|i| if self.get(i, j) { 255 } else { 0 }).collect())
            .collect()
    }
}

/// Sets every pixel whose center has winding number > 0.
///
/// Edge crossings use the half-open rule `y0 <= yc < y1`, so a center on a
/// vertex or horizontal edge is counted once.
pub fn rasterize_winding(set: &ContourSet, spec: &BitmapSpec) -> Result<Bitmap, RasterError> {
    if spec.width == 0 || spec.height == 0 {
        return Err(RasterError::ZeroSize(spec.width, spec.height));
    }
    if !(spec.pitch > 0.0 && spec.pitch.is_finite()) {
        return Err(RasterError::BadPitch(spec.pitch));
    }
    let mut bmp = Bitmap::new(spec.width, spec.height);
    let mut xs: Vec<(f64, i32)> = Vec::new();
    for j in 0..spec.height {
        let yc = spec.origin.y + (j as f64 + 0.5) * spec.pitch;
        xs.clear();
        for c in &set.contours {
            let pts = c.points();
            for k in 0..pts.len() {
                let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
                let (lo, hi, dir) = if a.y <= b.y { (a, b, 1) } else { (b, a, -1) };
                if lo.y <= yc && yc < hi.y {
                    let t = (yc - lo.y) / (hi.y - lo.y);
                    xs.push((lo.x + (hi.x - lo.x) * t, dir));
                }
            }
        }
        if xs.is_empty() {
            continue;
        }
        xs.sort_by(|p, q| p.0.total_cmp(&q.0));
        // upward edge to the left of a point adds +1 for a CCW loop; sweeping
        // left to right, crossing it increments the winding
        let mut w = 0;
        let mut next = 0;
        for i in 0..spec.width {
            let xc = spec.origin.x + (i as f64 + 0.5) * spec.pitch;
            while next < xs.len() && xs[next].0 <= xc {
                w -= xs[next].1;
                next += 1;
            }
            if w > 0 {
                bmp.set(i, j);
            }
        }
    }
    Ok(bmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::{Contour, ContourKind};

    fn square(x0: f64, y0: f64, s: f64, ccw: bool) -> Contour {
        let mut pts =
            vec![Point2::new(x0, y0), Point2::new(x0 + s, y0), Point2::new(x0 + s, y0 + s), Point2::new(x0, y0 + s)];
        if !ccw {
            pts.reverse();
        }
        Contour::new(pts, -1, ContourKind::Final).unwrap()
    }

    fn spec(n: usize, lo: f64, hi: f64) -> BitmapSpec {
        BitmapSpec { width: n, height: n, origin: Point2::new(lo, lo), pitch: (hi - lo) / n as f64 }
    }

    #[test]
    fn unit_square_fills_grid() {
        let set = ContourSet::new(vec![square(0.0, 0.0, 1.0, true)], 0.0);
        assert_eq!(rasterize_winding(&set, &spec(10, 0.0, 1.0)).unwrap().count_set(), 100);
    }

    #[test]
    fn clockwise_square_is_empty() {
        let set = ContourSet::new(vec![square(0.0, 0.0, 1.0, false)], 0.0);
        assert_eq!(rasterize_winding(&set, &spec(10, 0.0, 1.0)).unwrap().count_set(), 0);
    }

    #[test]
    fn annulus_count_tracks_area() {
        let set = ContourSet::new(vec![square(0.0, 0.0, 2.0, true), square(0.53, 0.61, 1.0, false)], 0.0);
        let s = spec(100, -0.5, 2.5);
        let n = rasterize_winding(&set, &s).unwrap().count_set() as f64;
        let expect = set.net_area() / (s.pitch * s.pitch);
        // one boundary-pixel band around both loops
        let band = (8.0 + 4.0) / s.pitch;
        assert!((n - expect).abs() <= band, "{n} vs {expect}");
    }

    #[test]
    fn bad_specs() {
        let set = ContourSet::empty(0.0);
        let mut s = spec(10, 0.0, 1.0);
        s.width = 0;
        assert!(matches!(rasterize_winding(&set, &s), Err(RasterError::ZeroSize(0, 10))));
        let mut s = spec(10, 0.0, 1.0);
        s.pitch = 0.0;
        assert!(rasterize_winding(&set, &s).is_err());
    }
}
