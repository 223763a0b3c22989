//! Constant-time box filtering along the four grid directions.
//!
//! A four-directional box spline is realized on the pixel grid as four
//! one-dimensional box filters, run along rows, columns and both diagonals.
//! Each filter costs O(1) per pixel whatever its width:
//!
//! * [`run_box_filter`] / [`blur`] slide a running sum along every line;
//! * [`variable_blur`] pre-integrates every line once with [`preintegrate`]
//!   and reads each output pixel as a two-tap difference of the prefix sums,
//!   so the box can change size from pixel to pixel.
//!
//! Continuous widths become taps through [`width_to_taps`]: a symmetric box
//! of `2r + 1` unit taps plus two end taps of weight `frac`, where `frac` is
//! chosen so the tap variance equals `w²/12` exactly. Diagonal steps are
//! `√2` long, so a diagonal box needs half the tap variance of an axial one.
//!
//! Directions are always applied in the order horizontal, vertical,
//! diagonal-up, diagonal-down.

mod box_filter;
mod lines;
mod variable;

pub use box_filter::{blur, run_box_filter};
pub use variable::{preintegrate, variable_blur, WidthMap};

use std::f64::consts::SQRT_2;

use crate::error::Error;

/// One of the four pixel-grid directions. `y` is the row index, so
/// `DiagonalUp` steps `(1, 1)` and sits at angle `π/4` in grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridDirection {
    Horizontal,
    Vertical,
    DiagonalUp,
    DiagonalDown,
}

impl GridDirection {
    /// Application order used by [`blur`] and [`variable_blur`].
    pub const ORDER: [GridDirection; 4] = [
        GridDirection::Horizontal,
        GridDirection::Vertical,
        GridDirection::DiagonalUp,
        GridDirection::DiagonalDown,
    ];

    pub fn step(self) -> (isize, isize) {
        match self {
            GridDirection::Horizontal => (1, 0),
            GridDirection::Vertical => (0, 1),
            GridDirection::DiagonalUp => (1, 1),
            GridDirection::DiagonalDown => (1, -1),
        }
    }

    pub fn step_length(self) -> f64 {
        match self {
            GridDirection::Horizontal | GridDirection::Vertical => 1.0,
            GridDirection::DiagonalUp | GridDirection::DiagonalDown => SQRT_2,
        }
    }

    /// Position of this direction in a four-directional spec ordered by
    /// angle `0, π/4, π/2, 3π/4`.
    pub fn spec_index(self) -> usize {
        match self {
            GridDirection::Horizontal => 0,
            GridDirection::DiagonalUp => 1,
            GridDirection::Vertical => 2,
            GridDirection::DiagonalDown => 3,
        }
    }
}

/// How samples beyond the ends of a line are filled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Repeat the end sample.
    #[default]
    Replicate,
    /// Mirror about the end, repeating the edge sample: `… x1 x0 | x0 x1 …`.
    Reflect,
    /// Treat outside samples as zero.
    Zero,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "replicate" => Ok(Boundary::Replicate),
            "reflect" => Ok(Boundary::Reflect),
            "zero" => Ok(Boundary::Zero),
            other => Err(Error::InvalidArgument(format!(
                "unknown boundary {other:?} (expected replicate, reflect or zero)"
            ))),
        }
    }
}

/// A normalized symmetric box of `2·radius + 1` unit taps plus two end taps
/// of weight `frac`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalBox {
    pub radius: usize,
    pub frac: f64,
    /// Variance in squared taps that the box realizes.
    pub target_variance: f64,
}

impl FractionalBox {
    pub const IDENTITY: FractionalBox = FractionalBox {
        radius: 0,
        frac: 0.0,
        target_variance: 0.0,
    };

    /// Total tap weight before normalization, `2r + 1 + 2·frac`.
    pub fn mass(&self) -> f64 {
        2.0 * self.radius as f64 + 1.0 + 2.0 * self.frac
    }

    /// Variance of the normalized taps.
    pub fn variance(&self) -> f64 {
        let r = self.radius as f64;
        let inner = r * (r + 1.0) * (2.0 * r + 1.0) / 3.0;
        (inner + 2.0 * self.frac * (r + 1.0) * (r + 1.0)) / self.mass()
    }

    /// Tap weights from `-(r+1)` to `r+1`, normalized to unit sum.
    pub fn weights(&self) -> Vec<f64> {
        let m = self.mass();
        let r = self.radius;
        let mut w = vec![1.0 / m; 2 * r + 3];
        w[0] = self.frac / m;
        w[2 * r + 2] = self.frac / m;
        w
    }
}

/// Converts a continuous box width into taps along `dir`.
///
/// The target is `v = (w²/12) / len²` in squared taps. The radius is the
/// largest `r` with `r(r+1)/3 ≤ v`; the end weight then solves
///
/// ```text
/// (r(r+1)(2r+1)/3 + 2f(r+1)²) / (2r + 1 + 2f) = v
/// ```
///
/// which is linear in `f`.
pub fn width_to_taps(w: f64, dir: GridDirection) -> FractionalBox {
    if !(w > 0.0) {
        return FractionalBox::IDENTITY;
    }
    let len = dir.step_length();
    let v = w * w / 12.0 / (len * len);
    let discrete = |r: usize| {
        let r = r as f64;
        r * (r + 1.0) / 3.0
    };
    let mut r = ((-1.0 + (1.0 + 12.0 * v).sqrt()) / 2.0).floor().max(0.0) as usize;
    // Absorb rounding in `w²/12` so exact integer boxes get `frac = 0`.
    let slack = v * (1.0 + 1e-12);
    while discrete(r + 1) <= slack {
        r += 1;
    }
    while r > 0 && discrete(r) > slack {
        r -= 1;
    }
    let rf = r as f64;
    let inner = rf * (rf + 1.0) * (2.0 * rf + 1.0) / 3.0;
    let frac = (v * (2.0 * rf + 1.0) - inner) / (2.0 * (rf + 1.0) * (rf + 1.0) - 2.0 * v);
    FractionalBox {
        radius: r,
        frac: frac.clamp(0.0, 1.0 - f64::EPSILON),
        target_variance: v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn zero_width_is_identity() {
        assert_eq!(
            width_to_taps(0.0, GridDirection::Horizontal),
            FractionalBox::IDENTITY
        );
        assert_eq!(FractionalBox::IDENTITY.weights(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn integer_boxes() {
        let b = width_to_taps(24f64.sqrt(), GridDirection::Horizontal);
        assert_eq!(b.radius, 2);
        assert_abs_diff_eq!(b.frac, 0.0, epsilon = 1e-12);
        // Diagonal steps halve the tap variance to 1. Three unit taps only
        // reach 2/3, so the end taps carry 1/6.
        let b = width_to_taps(24f64.sqrt(), GridDirection::DiagonalUp);
        assert_eq!(b.radius, 1);
        assert_abs_diff_eq!(b.target_variance, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b.frac, 1.0 / 6.0, epsilon = 1e-12);
        // √48 on a diagonal is v = 2, five unit taps.
        let b = width_to_taps(48f64.sqrt(), GridDirection::DiagonalDown);
        assert_eq!(b.radius, 2);
        assert_abs_diff_eq!(b.frac, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn weights_match_variance() {
        let b = width_to_taps(7.3, GridDirection::Vertical);
        let w = b.weights();
        let r = b.radius as isize + 1;
        let var: f64 = w
            .iter()
            .enumerate()
            .map(|(i, wt)| wt * ((i as isize - r) as f64).powi(2))
            .sum();
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(var, b.target_variance, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn realized_variance_is_exact(w in 0.0f64..200.0, diag in any::<bool>()) {
            let dir = if diag { GridDirection::DiagonalDown } else { GridDirection::Horizontal };
            let b = width_to_taps(w, dir);
            prop_assert!((0.0..1.0).contains(&b.frac));
            prop_assert!((b.variance() - b.target_variance).abs() <= 1e-9 * b.target_variance.max(1.0));
            let len = dir.step_length();
            prop_assert!((b.target_variance * len * len - w * w / 12.0).abs() <= 1e-9 * (1.0 + w * w));
        }
    }
}
