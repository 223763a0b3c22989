use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// Square histogram of planar samples over `[-extent, extent]²`.
///
/// Cells are half-open `[lo, hi)` except the last one on each axis, which is
/// closed, so a sample exactly on the outer edge is still counted. Samples
/// outside the window go to `overflow`. Cell `(ix, iy)` is stored at
/// `iy * bins + ix`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub extent: f64,
    pub bins: usize,
    pub counts: Vec<u64>,
    pub overflow: u64,
    /// Number of samples the histogram was built from.
    pub total: u64,
    /// `counts / total`; sums to the in-window fraction.
    pub normalized: Vec<f64>,
}

impl DensityGrid {
    pub fn cell_width(&self) -> f64 {
        2.0 * self.extent / self.bins as f64
    }

    pub fn count(&self, ix: usize, iy: usize) -> u64 {
        self.counts[iy * self.bins + ix]
    }

    /// Counts per quadrant in the order `(+,+), (-,+), (-,-), (+,-)`. With an
    /// odd bin count the cells straddling the axes are left out.
    pub fn quadrant_counts(&self) -> [u64; 4] {
        let b = self.bins;
        let half = b / 2;
        let upper = if b % 2 == 1 { half + 1 } else { half };
        let mut q = [0u64; 4];
        for iy in 0..b {
            for ix in 0..b {
                let c = self.count(ix, iy);
                let right = ix >= upper;
                let left = ix < half;
                let top = iy >= upper;
                let bottom = iy < half;
                match (right, left, top, bottom) {
                    (true, _, true, _) => q[0] += c,
                    (_, true, true, _) => q[1] += c,
                    (_, true, _, true) => q[2] += c,
                    (true, _, _, true) => q[3] += c,
                    _ => {}
                }
            }
        }
        q
    }
}

fn bin_index(v: f64, extent: f64, bins: usize) -> Option<usize> {
    if !(v >= -extent && v <= extent) {
        return None;
    }
    let cell = 2.0 * extent / bins as f64;
    let i = ((v + extent) / cell).floor() as usize;
    Some(i.min(bins - 1))
}

/// Builds a [`DensityGrid`] from samples.
pub fn empirical_density(samples: &[Vec2], extent: f64, bins: usize) -> Result<DensityGrid> {
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "extent must be positive, got {extent}"
        )));
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be at least 1".into()));
    }
    let mut counts = vec![0u64; bins * bins];
    let mut overflow = 0u64;
    for z in samples {
        match (bin_index(z.x, extent, bins), bin_index(z.y, extent, bins)) {
            (Some(ix), Some(iy)) => counts[iy * bins + ix] += 1,
            _ => overflow += 1,
        }
    }
    let total = samples.len() as u64;
    let normalized = counts
        .iter()
        .map(|&c| {
            if total == 0 {
                0.0
            } else {
                c as f64 / total as f64
            }
        })
        .collect();
    Ok(DensityGrid {
        extent,
        bins,
        counts,
        overflow,
        total,
        normalized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_samples() {
        let g = empirical_density(&[], 3.0, 8).unwrap();
        assert!(g.counts.iter().all(|&c| c == 0));
        assert!(g.normalized.iter().all(|&v| v == 0.0));
        assert_eq!(g.overflow, 0);
    }

    #[test]
    fn origin_lands_in_upper_central_cell() {
        let g = empirical_density(&[Vec2::ZERO], 1.0, 4).unwrap();
        assert_eq!(g.count(2, 2), 1);
        assert_eq!(g.counts.iter().sum::<u64>(), 1);
    }

    #[test]
    fn edges_and_overflow() {
        let s = [
            Vec2::new(1.0, 1.0),
            Vec2::new(-1.0, -1.0),
            Vec2::new(1.0 + 1e-12, 0.0),
            Vec2::new(f64::NAN, 0.0),
        ];
        let g = empirical_density(&s, 1.0, 2).unwrap();
        assert_eq!(g.count(1, 1), 1);
        assert_eq!(g.count(0, 0), 1);
        assert_eq!(g.overflow, 2);
        assert_eq!(g.total, 4);
        assert!((g.normalized.iter().sum::<f64>() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_bin_holds_in_window_fraction() {
        let s = [
            Vec2::new(0.1, 0.2),
            Vec2::new(5.0, 0.0),
            Vec2::new(-0.3, 0.9),
        ];
        let g = empirical_density(&s, 1.0, 1).unwrap();
        assert_eq!(g.counts, vec![2]);
        assert!((g.normalized[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn quadrants_skip_axis_cells_for_odd_bins() {
        let s = [
            Vec2::new(0.5, 0.5),
            Vec2::new(-0.5, 0.5),
            Vec2::new(-0.5, -0.5),
            Vec2::new(0.5, -0.5),
            Vec2::new(0.0, 0.0),
        ];
        let g = empirical_density(&s, 1.0, 3).unwrap();
        assert_eq!(g.quadrant_counts(), [1, 1, 1, 1]);
    }

    #[test]
    fn rejects_bad_window() {
        assert!(empirical_density(&[], 0.0, 4).is_err());
        assert!(empirical_density(&[], 1.0, 0).is_err());
    }
}
