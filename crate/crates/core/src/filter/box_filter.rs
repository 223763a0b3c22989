use super::lines::{extended, map_lines, ExtendedPrefix};
use super::{width_to_taps, Boundary, FractionalBox, GridDirection};
use crate::error::{Error, Result};
use crate::grid::ScalarGrid;
use crate::kernel::BoxSplineSpec;

/// Normalized box filter along every line of `dir`.
///
/// Each line keeps a running sum of the `2r + 1` unit taps; moving one pixel
/// adds the entering sample and drops the leaving one, so the cost per pixel
/// does not depend on the radius.
pub fn run_box_filter(
    g: &ScalarGrid,
    dir: GridDirection,
    taps: &FractionalBox,
    boundary: Boundary,
) -> ScalarGrid {
    if taps.radius == 0 && taps.frac == 0.0 {
        return g.clone();
    }
    let r = taps.radius as isize;
    let frac = taps.frac;
    let inv_mass = 1.0 / taps.mass();
    map_lines(g, dir, |_, line, out| {
        let prefix: Vec<f64> = line
            .iter()
            .scan(0.0, |s, v| {
                *s += v;
                Some(*s)
            })
            .collect();
        let ext = ExtendedPrefix {
            line,
            prefix: &prefix,
            boundary,
        };
        let mut sum = ext.range(-r, r);
        for (i, o) in out.iter_mut().enumerate() {
            let i = i as isize;
            let ends = extended(line, i - r - 1, boundary) + extended(line, i + r + 1, boundary);
            *o = (sum + frac * ends) * inv_mass;
            sum += extended(line, i + r + 1, boundary) - extended(line, i - r, boundary);
        }
    })
}

/// Four-directional box-spline blur.
///
/// `spec` must use the directions `0, π/4, π/2, 3π/4`; its widths are in
/// pixels. The passes run horizontal, vertical, diagonal-up, diagonal-down.
pub fn blur(g: &ScalarGrid, spec: &BoxSplineSpec, boundary: Boundary) -> Result<ScalarGrid> {
    if !spec.is_four_directional() {
        return Err(Error::UnsupportedDirection(
            spec.directions().angles().to_vec(),
        ));
    }
    let mut out = g.clone();
    for dir in GridDirection::ORDER {
        let taps = width_to_taps(spec.widths()[dir.spec_index()], dir);
        out = run_box_filter(&out, dir, &taps, boundary);
    }
    Ok(out)
}
