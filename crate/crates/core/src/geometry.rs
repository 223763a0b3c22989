//! Planar geometry shared by the sampler, the kernels and the filters:
//! points, rotations, equally spaced half-circle directions, and symmetric
//! 2×2 covariance matrices.
//!
//! Grid coordinates use `x` for the column index and `y` for the row index,
//! so on images the `y` axis points down. Angles are measured from `+x`
//! towards `+y` in that frame, which makes the step `(1, 1)` the direction
//! at `π/4` both in the continuous algebra and on the pixel grid.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// A point or vector in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at angle `theta`.
    pub fn unit(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2 { x: c, y: s }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Angle in `(-π, π]`.
    pub fn arg(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;

    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;

    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

/// Rotates `v` counter-clockwise (from `+x` towards `+y`) by `theta` radians.
pub fn rotate(theta: f64, v: Vec2) -> Vec2 {
    let (s, c) = theta.sin_cos();
    Vec2::new(v.x * c - v.y * s, v.x * s + v.y * c)
}

/// The rank-one matrix `u uᵀ` for the unit vector `u` at angle `theta`.
pub fn outer_direction(theta: f64) -> Covariance2 {
    let (s, c) = theta.sin_cos();
    Covariance2 {
        cxx: c * c,
        cxy: c * s,
        cyy: s * s,
    }
}

/// `n` directions spread uniformly over the half circle, `angles[k] = kπ/n`
/// for `k = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    angles: Vec<f64>,
}

impl DirectionSet {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    /// Always false: a direction set holds at least one angle.
    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Angular gap between consecutive directions, `π/n`.
    pub fn gap(&self) -> f64 {
        PI / self.angles.len() as f64
    }

    pub fn units(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.angles.iter().map(|&t| Vec2::unit(t))
    }
}

/// Equally spaced angles over `[0, π)`; see [`DirectionSet`].
pub fn direction_angles(n: usize) -> Result<DirectionSet> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "direction count must be at least 1".into(),
        ));
    }
    let step = PI / n as f64;
    let angles = (0..n).map(|k| k as f64 * step).collect();
    Ok(DirectionSet { angles })
}

/// A symmetric positive semidefinite 2×2 matrix stored as `(cxx, cxy, cyy)`.
///
/// Construction through [`Covariance2::new`] accepts matrices whose
/// determinant is at least `-ε` with `ε = 1e-12 · max(cxx·cyy, 1)`, so that
/// rounding in user input does not reject matrices that are exactly PSD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covariance2 {
    cxx: f64,
    cxy: f64,
    cyy: f64,
}

impl Covariance2 {
    pub const ZERO: Covariance2 = Covariance2 {
        cxx: 0.0,
        cxy: 0.0,
        cyy: 0.0,
    };

    pub const IDENTITY: Covariance2 = Covariance2 {
        cxx: 1.0,
        cxy: 0.0,
        cyy: 1.0,
    };

    pub fn new(cxx: f64, cxy: f64, cyy: f64) -> Result<Self> {
        if !(cxx.is_finite() && cxy.is_finite() && cyy.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "covariance entries must be finite, got ({cxx}, {cxy}, {cyy})"
            )));
        }
        let eps = 1e-12 * (cxx * cyy).max(1.0);
        if cxx < 0.0 || cyy < 0.0 || cxx * cyy - cxy * cxy < -eps {
            return Err(Error::NotPositiveSemidefinite { cxx, cxy, cyy });
        }
        Ok(Covariance2 { cxx, cxy, cyy })
    }

    /// `s · I`.
    pub fn isotropic(variance: f64) -> Result<Self> {
        Covariance2::new(variance, 0.0, variance)
    }

    pub fn cxx(&self) -> f64 {
        self.cxx
    }

    pub fn cxy(&self) -> f64 {
        self.cxy
    }

    pub fn cyy(&self) -> f64 {
        self.cyy
    }

    pub fn trace(&self) -> f64 {
        self.cxx + self.cyy
    }

    pub fn det(&self) -> f64 {
        self.cxx * self.cyy - self.cxy * self.cxy
    }

    pub fn is_diagonal(&self) -> bool {
        self.cxy == 0.0
    }

    /// Largest eigenvalue.
    pub fn max_eigenvalue(&self) -> f64 {
        let half_tr = 0.5 * self.trace();
        let d = 0.5 * (self.cxx - self.cyy);
        half_tr + d.hypot(self.cxy)
    }

    /// `ωᵀ C ω`.
    pub fn quadratic_form(&self, w: Vec2) -> f64 {
        self.cxx * w.x * w.x + 2.0 * self.cxy * w.x * w.y + self.cyy * w.y * w.y
    }

    /// Multiplies every entry by a nonnegative factor.
    pub fn scaled(&self, factor: f64) -> Covariance2 {
        debug_assert!(factor >= 0.0);
        Covariance2 {
            cxx: self.cxx * factor,
            cxy: self.cxy * factor,
            cyy: self.cyy * factor,
        }
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Covariance2) -> f64 {
        (self.cxx - other.cxx)
            .abs()
            .max((self.cxy - other.cxy).abs())
            .max((self.cyy - other.cyy).abs())
    }

    /// Builds a matrix from raw second moments without the PSD check. Only
    /// for sums of outer products, which are PSD up to rounding.
    pub(crate) fn from_moments(cxx: f64, cxy: f64, cyy: f64) -> Covariance2 {
        Covariance2 { cxx, cxy, cyy }
    }
}

impl Add for Covariance2 {
    type Output = Covariance2;

    fn add(self, rhs: Covariance2) -> Covariance2 {
        Covariance2 {
            cxx: self.cxx + rhs.cxx,
            cxy: self.cxy + rhs.cxy,
            cyy: self.cyy + rhs.cyy,
        }
    }
}

impl std::iter::Sum for Covariance2 {
    fn sum<I: Iterator<Item = Covariance2>>(iter: I) -> Self {
        iter.fold(Covariance2::ZERO, Add::add)
    }
}
