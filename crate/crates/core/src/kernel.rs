//! Box-spline kernels in the continuous domain.
//!
//! A box spline here is the convolution of one-dimensional box densities,
//! each laid along a direction of a [`DirectionSet`]. A box of width `w`
//! has variance `w²/12`, and covariances of convolution factors add, so
//! the kernel's covariance is
//!
//! ```text
//! Σ_k (w_k² / 12) · u_k u_kᵀ
//! ```
//!
//! For the four grid directions `0, π/4, π/2, 3π/4` this system can be
//! inverted: [`widths_from_covariance`] picks widths that hit any target
//! covariance with `|cxy| ≤ min(cxx, cyy)`.
//!
//! [`build_kernel`] and [`gaussian_kernel`] rasterize kernels onto a square
//! grid so the two can be compared with [`kernel_distance`].

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::geometry::{direction_angles, outer_direction, Covariance2, DirectionSet, Vec2};
use crate::grid::ScalarGrid;

/// Directions paired with continuous box widths.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSplineSpec {
    directions: DirectionSet,
    widths: Vec<f64>,
}

impl BoxSplineSpec {
    pub fn new(directions: DirectionSet, widths: Vec<f64>) -> Result<Self> {
        if widths.len() != directions.len() {
            return Err(Error::InvalidArgument(format!(
                "{} widths for {} directions",
                widths.len(),
                directions.len()
            )));
        }
        if widths.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "widths must be finite and nonnegative: {widths:?}"
            )));
        }
        Ok(BoxSplineSpec { directions, widths })
    }

    /// The four grid-aligned directions with the given widths, in angle
    /// order `0, π/4, π/2, 3π/4`.
    pub fn four_directional(widths: [f64; 4]) -> Result<Self> {
        BoxSplineSpec::new(direction_angles(4)?, widths.to_vec())
    }

    pub fn directions(&self) -> &DirectionSet {
        &self.directions
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    /// `true` when the directions are exactly the four grid directions.
    pub fn is_four_directional(&self) -> bool {
        let expected = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4];
        self.directions.len() == 4
            && self
                .directions
                .angles()
                .iter()
                .zip(expected)
                .all(|(a, e)| (a - e).abs() < 1e-12)
    }

    fn factors(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.directions
            .angles()
            .iter()
            .copied()
            .zip(self.widths.iter().copied())
    }
}

/// Covariance of the box spline.
pub fn covariance_of_spec(spec: &BoxSplineSpec) -> Covariance2 {
    spec.factors()
        .map(|(theta, w)| outer_direction(theta).scaled(w * w / 12.0))
        .sum()
}

/// Four-directional widths whose box spline has covariance `c`.
///
/// With `s_k = w_k²` the moment equations are
///
/// ```text
/// cxx = s₀/12 + (s₄₅ + s₁₃₅)/24
/// cxy = (s₄₅ − s₁₃₅)/24
/// cyy = s₉₀/12 + (s₄₅ + s₁₃₅)/24
/// ```
///
/// which leave one free parameter `t = s₄₅ + s₁₃₅`. It is fixed at
/// `max(24|cxy|, 12·min(cxx, cyy))`, so `c = σ²·I` yields four equal widths.
pub fn widths_from_covariance(c: &Covariance2) -> Result<BoxSplineSpec> {
    let (cxx, cxy, cyy) = (c.cxx(), c.cxy(), c.cyy());
    if cxy.abs() > cxx.min(cyy) {
        return Err(Error::InfeasibleCovariance { cxx, cxy, cyy });
    }
    let t = (24.0 * cxy.abs()).max(12.0 * cxx.min(cyy));
    let s45 = 0.5 * (t + 24.0 * cxy);
    let s135 = 0.5 * (t - 24.0 * cxy);
    let s0 = 12.0 * cxx - 0.5 * t;
    let s90 = 12.0 * cyy - 0.5 * t;
    let w = |s: f64| s.max(0.0).sqrt();
    BoxSplineSpec::four_directional([w(s0), w(s45), w(s90), w(s135)])
}

/// `n` equal widths `σ·√(24/n)` giving covariance `σ²·I`.
pub fn isotropic_widths(sigma: f64, n: usize) -> Result<BoxSplineSpec> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "an isotropic box spline needs at least 2 directions, got {n}"
        )));
    }
    let w = sigma * (24.0 / n as f64).sqrt();
    BoxSplineSpec::new(direction_angles(n)?, vec![w; n])
}

/// A density sampled on a square grid with spacing `h`, centered on the
/// middle sample. Sample `(i, j)` sits at `((i − center)·h, (j − center)·h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelGrid {
    pub grid: ScalarGrid,
    pub h: f64,
    pub center: usize,
}

impl KernelGrid {
    fn zeros(h: f64, center: usize) -> KernelGrid {
        let side = 2 * center + 1;
        KernelGrid {
            grid: ScalarGrid::from_raw(side, side, vec![0.0; side * side]),
            h,
            center,
        }
    }

    pub fn side(&self) -> usize {
        2 * self.center + 1
    }

    /// Half-width of the sampled window, `center · h`.
    pub fn extent(&self) -> f64 {
        self.center as f64 * self.h
    }

    pub fn position(&self, i: usize, j: usize) -> Vec2 {
        Vec2::new(
            (i as f64 - self.center as f64) * self.h,
            (j as f64 - self.center as f64) * self.h,
        )
    }

    /// Value at the origin.
    pub fn peak(&self) -> f64 {
        self.grid.get(self.center, self.center)
    }

    /// `Σ samples · h²`.
    pub fn mass(&self) -> f64 {
        self.grid.sum() * self.h * self.h
    }

    /// Discrete second central moments.
    pub fn covariance(&self) -> Covariance2 {
        let side = self.side();
        let cell = self.h * self.h;
        let (mut m, mut mx, mut my) = (0.0, 0.0, 0.0);
        for j in 0..side {
            for i in 0..side {
                let p = self.position(i, j);
                let v = self.grid.get(i, j) * cell;
                m += v;
                mx += v * p.x;
                my += v * p.y;
            }
        }
        mx /= m;
        my /= m;
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for j in 0..side {
            for i in 0..side {
                let p = self.position(i, j);
                let v = self.grid.get(i, j) * cell;
                let (dx, dy) = (p.x - mx, p.y - my);
                sxx += v * dx * dx;
                sxy += v * dx * dy;
                syy += v * dy * dy;
            }
        }
        Covariance2::from_moments(sxx / m, sxy / m, syy / m)
    }

    fn normalize(&mut self) {
        let mass = self.mass();
        if mass > 0.0 {
            self.grid = ScalarGrid::from_raw(
                self.side(),
                self.side(),
                self.grid.as_slice().iter().map(|v| v / mass).collect(),
            );
        }
    }
}

fn check_spacing(h: f64, extent: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "spacing must be positive, got {h}"
        )));
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "extent must be positive, got {extent}"
        )));
    }
    Ok(())
}

/// Cells crossed by the segment `s·u, s ∈ [−w/2, w/2]`, with the fraction of
/// the segment's length inside each. Cells are `h`-squares centered on the
/// grid points; offsets are in cells.
fn rasterize_segment(theta: f64, w: f64, h: f64) -> Vec<(isize, isize, f64)> {
    let u = Vec2::unit(theta);
    let half = 0.5 * w;
    // Parameters where the segment crosses a cell boundary x or y = (k+½)h.
    let mut cuts = vec![-half, half];
    for comp in [u.x, u.y] {
        if comp.abs() < 1e-15 {
            continue;
        }
        let reach = half * comp.abs() / h;
        let kmax = (reach - 0.5).ceil() as isize;
        for k in -kmax - 1..=kmax {
            let s = (k as f64 + 0.5) * h / comp;
            if s > -half && s < half {
                cuts.push(s);
            }
        }
    }
    cuts.sort_unstable_by(f64::total_cmp);
    // Crossings through a cell corner show up twice, off by rounding.
    let tol = 1e-12 * w.max(h);
    cuts.dedup_by(|b, a| *b - *a <= tol);

    let mut taps: Vec<(isize, isize, f64)> = Vec::new();
    for pair in cuts.windows(2) {
        let len = pair[1] - pair[0];
        if len <= 0.0 {
            continue;
        }
        let mid = 0.5 * (pair[0] + pair[1]);
        let i = (mid * u.x / h).round() as isize;
        let j = (mid * u.y / h).round() as isize;
        match taps.last_mut() {
            Some(last) if last.0 == i && last.1 == j => last.2 += len / w,
            _ => taps.push((i, j, len / w)),
        }
    }
    taps
}

/// Rasterizes the box spline on a `(2·⌈extent/h⌉ + 1)²` grid.
///
/// Each factor is placed with exact line-integral weights: a cell receives
/// the fraction of the box's length that passes through it. The factors are
/// then convolved on the grid and the result is scaled to unit mass.
pub fn build_kernel(spec: &BoxSplineSpec, h: f64, extent: f64) -> Result<KernelGrid> {
    check_spacing(h, extent)?;
    let factors: Vec<Vec<(isize, isize, f64)>> = spec
        .factors()
        .filter(|&(_, w)| w > 0.0)
        .map(|(theta, w)| rasterize_segment(theta, w, h))
        .collect();

    let reach = |axis: fn(&(isize, isize, f64)) -> isize| -> usize {
        factors
            .iter()
            .map(|taps| {
                taps.iter()
                    .map(|t| axis(t).unsigned_abs())
                    .max()
                    .unwrap_or(0)
            })
            .sum()
    };
    let needed_cells = reach(|t| t.0).max(reach(|t| t.1));
    let half_sum: f64 = spec.widths().iter().map(|w| 0.5 * w).sum();
    let required = half_sum.max(needed_cells as f64 * h);
    let center = (extent / h).ceil() as usize;
    if extent < required || center < needed_cells {
        return Err(Error::ExtentTooSmall {
            given: extent,
            required,
        });
    }

    let side = 2 * center + 1;
    let mut current = vec![0.0; side * side];
    current[center * side + center] = 1.0;
    // Support of `current` as offsets from the center.
    let mut span: isize = 0;
    for taps in &factors {
        let mut next = vec![0.0; side * side];
        let c = center as isize;
        for y in c - span..=c + span {
            for x in c - span..=c + span {
                let v = current[y as usize * side + x as usize];
                if v == 0.0 {
                    continue;
                }
                for &(di, dj, wt) in taps {
                    next[(y + dj) as usize * side + (x + di) as usize] += v * wt;
                }
            }
        }
        span += taps
            .iter()
            .map(|t| t.0.abs().max(t.1.abs()))
            .max()
            .unwrap_or(0);
        current = next;
    }

    let mut k = KernelGrid::zeros(h, center);
    k.grid = ScalarGrid::from_raw(side, side, current);
    k.normalize();
    Ok(k)
}

/// Density of the centered Gaussian with covariance `c` at `p`.
pub fn gaussian_density(c: &Covariance2, p: Vec2) -> f64 {
    let det = c.det();
    let q = (c.cyy() * p.x * p.x - 2.0 * c.cxy() * p.x * p.y + c.cxx() * p.y * p.y) / det;
    (-0.5 * q).exp() / (2.0 * PI * det.sqrt())
}

/// Samples the Gaussian density at the grid points, then rescales to unit
/// discrete mass.
pub fn gaussian_kernel(c: &Covariance2, h: f64, extent: f64) -> Result<KernelGrid> {
    check_spacing(h, extent)?;
    if !(c.det() > 0.0) {
        return Err(Error::SingularCovariance {
            cxx: c.cxx(),
            cxy: c.cxy(),
            cyy: c.cyy(),
        });
    }
    let required = 5.0 * c.max_eigenvalue().sqrt();
    if extent < required {
        return Err(Error::ExtentTooSmall {
            given: extent,
            required,
        });
    }
    let center = (extent / h).ceil() as usize;
    let mut k = KernelGrid::zeros(h, center);
    let side = k.side();
    let data = (0..side * side)
        .map(|idx| gaussian_density(c, k.position(idx % side, idx / side)))
        .collect();
    k.grid = ScalarGrid::from_raw(side, side, data);
    k.normalize();
    Ok(k)
}

/// Elementwise differences between two kernels on the same grid. `l1` is
/// the integrated absolute difference `Σ |a − b| · h²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelDistance {
    pub max_abs: f64,
    pub rms: f64,
    pub l1: f64,
}

pub fn kernel_distance(a: &KernelGrid, b: &KernelGrid) -> Result<KernelDistance> {
    if a.center != b.center || a.h != b.h {
        return Err(Error::GeometryMismatch(format!(
            "side {} spacing {} vs side {} spacing {}",
            a.side(),
            a.h,
            b.side(),
            b.h
        )));
    }
    let (mut max_abs, mut sq, mut abs) = (0.0f64, 0.0, 0.0);
    for (x, y) in a.grid.as_slice().iter().zip(b.grid.as_slice()) {
        let d = (x - y).abs();
        max_abs = max_abs.max(d);
        sq += d * d;
        abs += d;
    }
    let count = a.grid.as_slice().len() as f64;
    Ok(KernelDistance {
        max_abs,
        rms: (sq / count).sqrt(),
        l1: abs * a.h * a.h,
    })
}
