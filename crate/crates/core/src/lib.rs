//! Gaussians from rotated boxes.
//!
//! Summing box-distributed steps laid along `n` equally spaced directions of
//! the half circle gives, after scaling, a planar random vector that tends
//! to an isotropic Gaussian. This crate works both ends of that idea:
//!
//! * [`clt`] samples the rotated sums, computes their exact covariance and
//!   characteristic function, and tests the empirical law against the
//!   Gaussian limit;
//! * [`kernel`] treats the same construction as a convolution kernel (a box
//!   spline), maps covariances to box widths, and rasterizes kernels for
//!   comparison with true Gaussians;
//! * [`filter`] blurs images with four-directional box splines at constant
//!   cost per pixel, including a space-variant variant driven by per-pixel
//!   width maps;
//! * [`io`] reads and writes PGM images and CSV grids.
//!
//! ```
//! use radial_gauss::filter::{blur, Boundary};
//! use radial_gauss::kernel::isotropic_widths;
//! use radial_gauss::ScalarGrid;
//!
//! let image = ScalarGrid::from_fn(64, 64, |x, y| ((x ^ y) & 1) as f64).unwrap();
//! let spec = isotropic_widths(2.0, 4).unwrap();
//! let smooth = blur(&image, &spec, Boundary::Replicate).unwrap();
//! assert!((smooth.get(32, 32) - 0.5).abs() < 0.05);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clt;
pub mod error;
pub mod filter;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod kernel;
pub mod measure;

pub use error::{Error, Result};
pub use geometry::{Covariance2, DirectionSet, Vec2};
pub use grid::ScalarGrid;

// Guide chapters run as doctests so their snippets track the API.
macro_rules! book_chapter {
    ($name:ident, $file:literal) => {
        #[cfg(doctest)]
        #[doc = include_str!(concat!("../../../book/src/", $file))]
        mod $name {}
    };
}

book_chapter!(book_introduction, "introduction.md");
book_chapter!(book_limit_law, "limit-law.md");
book_chapter!(book_goodness_of_fit, "goodness-of-fit.md");
book_chapter!(book_covariance_control, "covariance-control.md");
book_chapter!(book_kernels, "kernels.md");
book_chapter!(book_fast_filtering, "fast-filtering.md");
book_chapter!(book_space_variant, "space-variant.md");
book_chapter!(book_files, "files.md");
