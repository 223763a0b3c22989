use super::lines::{extended, map_lines, ExtendedPrefix};
use super::{width_to_taps, Boundary, GridDirection};
use crate::error::{Error, Result};
use crate::grid::ScalarGrid;
use crate::kernel::BoxSplineSpec;

/// Per-pixel box widths for each grid direction, in pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthMap {
    maps: [ScalarGrid; 4],
}

impl WidthMap {
    /// Maps in [`GridDirection::ORDER`]: horizontal, vertical, diagonal-up,
    /// diagonal-down.
    pub fn new(maps: [ScalarGrid; 4]) -> Result<Self> {
        let dims = maps[0].dims();
        for m in &maps[1..] {
            if m.dims() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    found: m.dims(),
                });
            }
        }
        for m in &maps {
            if let Some(v) = m.as_slice().iter().find(|v| **v < 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "negative width {v} in width map"
                )));
            }
        }
        Ok(WidthMap { maps })
    }

    /// The same four-directional spec at every pixel.
    pub fn constant(width: usize, height: usize, spec: &BoxSplineSpec) -> Result<Self> {
        if !spec.is_four_directional() {
            return Err(Error::UnsupportedDirection(
                spec.directions().angles().to_vec(),
            ));
        }
        let grid =
            |dir: GridDirection| ScalarGrid::filled(width, height, spec.widths()[dir.spec_index()]);
        WidthMap::new([
            grid(GridDirection::Horizontal)?,
            grid(GridDirection::Vertical)?,
            grid(GridDirection::DiagonalUp)?,
            grid(GridDirection::DiagonalDown)?,
        ])
    }

    /// Isotropic widths `σ·√6` in all four directions, from a per-pixel `σ`.
    pub fn from_sigma_map(sigma: &ScalarGrid) -> Result<Self> {
        let w = sigma.map(|s| s.max(0.0) * 6f64.sqrt())?;
        WidthMap::new([w.clone(), w.clone(), w.clone(), w])
    }

    pub fn dims(&self) -> (usize, usize) {
        self.maps[0].dims()
    }

    pub fn get(&self, dir: GridDirection) -> &ScalarGrid {
        let i = GridDirection::ORDER.iter().position(|d| *d == dir).unwrap();
        &self.maps[i]
    }
}

/// Inclusive prefix sums along every line of `dir`: element `i` of a line
/// becomes the sum of elements `0..=i`, accumulated left to right in `f64`.
pub fn preintegrate(g: &ScalarGrid, dir: GridDirection) -> ScalarGrid {
    map_lines(g, dir, |_, line, out| {
        let mut s = 0.0;
        for (o, v) in out.iter_mut().zip(line) {
            s += v;
            *o = s;
        }
    })
}

/// Space-variant four-directional blur.
///
/// For each direction the image is pre-integrated once; every output pixel
/// then reads its own width from `widths`, converts it to taps, and takes
/// the box sum as the difference of two prefix values plus the two
/// fractional end taps. Work per pixel is constant whatever the widths.
pub fn variable_blur(g: &ScalarGrid, widths: &WidthMap, boundary: Boundary) -> Result<ScalarGrid> {
    if widths.dims() != g.dims() {
        return Err(Error::DimensionMismatch {
            expected: g.dims(),
            found: widths.dims(),
        });
    }
    let width = g.width();
    let mut current = g.clone();
    for dir in GridDirection::ORDER {
        let prefix = preintegrate(&current, dir);
        let wmap = widths.get(dir).as_slice();
        let prefix_data = prefix.as_slice();
        current = map_lines(&current, dir, |l, line, out| {
            let mut p = Vec::with_capacity(line.len());
            l.gather(prefix_data, width, &mut p);
            let ext = ExtendedPrefix {
                line,
                prefix: &p,
                boundary,
            };
            for (i, o) in out.iter_mut().enumerate() {
                let taps = width_to_taps(wmap[l.offset(i, width)], dir);
                if taps.radius == 0 && taps.frac == 0.0 {
                    *o = line[i];
                    continue;
                }
                let r = taps.radius as isize;
                let i = i as isize;
                let inner = ext.range(i - r, i + r);
                let ends =
                    extended(line, i - r - 1, boundary) + extended(line, i + r + 1, boundary);
                *o = (inner + taps.frac * ends) / taps.mass();
            }
        });
    }
    Ok(current)
}
