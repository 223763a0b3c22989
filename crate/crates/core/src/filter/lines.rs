//! Traversal of grid lines and boundary extension along a line.

use rayon::prelude::*;

use super::{Boundary, GridDirection};
use crate::grid::ScalarGrid;

/// A maximal run of pixels `start + j·step` for `j = 0..len`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Line {
    x0: usize,
    y0: usize,
    dx: isize,
    dy: isize,
    pub len: usize,
}

impl Line {
    pub fn offset(&self, j: usize, width: usize) -> usize {
        let x = self.x0 as isize + j as isize * self.dx;
        let y = self.y0 as isize + j as isize * self.dy;
        y as usize * width + x as usize
    }

    pub fn gather(&self, data: &[f64], width: usize, out: &mut Vec<f64>) {
        out.clear();
        out.extend((0..self.len).map(|j| data[self.offset(j, width)]));
    }
}

/// All lines of `dir` covering a `width × height` grid, each pixel exactly
/// once.
pub(crate) fn lines(width: usize, height: usize, dir: GridDirection) -> Vec<Line> {
    let (dx, dy) = dir.step();
    let line = |x0: usize, y0: usize| {
        let len = match dir {
            GridDirection::Horizontal => width - x0,
            GridDirection::Vertical => height - y0,
            GridDirection::DiagonalUp => (width - x0).min(height - y0),
            GridDirection::DiagonalDown => (width - x0).min(y0 + 1),
        };
        Line {
            x0,
            y0,
            dx,
            dy,
            len,
        }
    };
    match dir {
        GridDirection::Horizontal => (0..height).map(|y| line(0, y)).collect(),
        GridDirection::Vertical => (0..width).map(|x| line(x, 0)).collect(),
        GridDirection::DiagonalUp => (0..height)
            .rev()
            .map(|y| line(0, y))
            .chain((1..width).map(|x| line(x, 0)))
            .collect(),
        GridDirection::DiagonalDown => (0..height)
            .map(|y| line(0, y))
            .chain((1..width).map(|x| line(x, height - 1)))
            .collect(),
    }
}

/// Applies `f` to every line of `dir` and assembles the outputs. Lines are
/// processed in parallel; each output depends only on its own line, so the
/// result is the same for any thread count.
pub(crate) fn map_lines<F>(g: &ScalarGrid, dir: GridDirection, f: F) -> ScalarGrid
where
    F: Fn(&Line, &[f64], &mut [f64]) + Sync,
{
    let (width, height) = g.dims();
    let all = lines(width, height, dir);
    let src = g.as_slice();
    let outputs: Vec<Vec<f64>> = all
        .par_iter()
        .map_init(Vec::new, |buf, line| {
            line.gather(src, width, buf);
            let mut out = vec![0.0; line.len];
            f(line, buf, &mut out);
            out
        })
        .collect();
    let mut data = vec![0.0; width * height];
    for (line, out) in all.iter().zip(outputs) {
        for (j, v) in out.into_iter().enumerate() {
            data[line.offset(j, width)] = v;
        }
    }
    ScalarGrid::from_raw(width, height, data)
}

/// Index into a line of length `len` for a possibly out-of-range position,
/// or `None` when the boundary supplies a zero.
#[inline]
pub(crate) fn extend_index(i: isize, len: usize, boundary: Boundary) -> Option<usize> {
    let n = len as isize;
    if (0..n).contains(&i) {
        return Some(i as usize);
    }
    match boundary {
        Boundary::Zero => None,
        Boundary::Replicate => Some(i.clamp(0, n - 1) as usize),
        Boundary::Reflect => {
            let m = i.rem_euclid(2 * n);
            Some(if m < n { m } else { 2 * n - 1 - m } as usize)
        }
    }
}

#[inline]
pub(crate) fn extended(line: &[f64], i: isize, boundary: Boundary) -> f64 {
    extend_index(i, line.len(), boundary).map_or(0.0, |k| line[k])
}

/// Sums of the boundary-extended line expressed through its inclusive prefix
/// sums `prefix[i] = Σ line[0..=i]`.
pub(crate) struct ExtendedPrefix<'a> {
    pub line: &'a [f64],
    pub prefix: &'a [f64],
    pub boundary: Boundary,
}

impl ExtendedPrefix<'_> {
    /// `Σ line[0..k]` for `0 ≤ k ≤ len`.
    #[inline]
    fn head(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.prefix[k - 1]
        }
    }

    /// Signed cumulative sum of the extended line: `Σ ext[0..k]` for
    /// `k ≥ 0` and `−Σ ext[k..0]` for `k < 0`.
    pub fn cumulative(&self, k: isize) -> f64 {
        let n = self.line.len() as isize;
        let total = self.prefix[self.line.len() - 1];
        match self.boundary {
            Boundary::Zero => self.head(k.clamp(0, n) as usize),
            Boundary::Replicate => {
                if k <= 0 {
                    k as f64 * self.line[0]
                } else if k <= n {
                    self.head(k as usize)
                } else {
                    total + (k - n) as f64 * self.line[self.line.len() - 1]
                }
            }
            Boundary::Reflect => {
                if k < 0 {
                    return -self.cumulative(-k);
                }
                let period = 2 * n;
                let (q, m) = (k / period, k % period);
                let within = if m <= n {
                    self.head(m as usize)
                } else {
                    2.0 * total - self.head((period - m) as usize)
                };
                q as f64 * 2.0 * total + within
            }
        }
    }

    /// `Σ ext[lo..=hi]`.
    #[inline]
    pub fn range(&self, lo: isize, hi: isize) -> f64 {
        self.cumulative(hi + 1) - self.cumulative(lo)
    }
}
