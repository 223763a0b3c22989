use crate::error::{Error, Result};
use crate::geometry::{direction_angles, Covariance2, Vec2};
use crate::measure::RadialMeasure;

use super::Normalization;

/// Characteristic function of `Z_n` at frequency `omega`.
///
/// The summands are independent, so this is the product of the per-direction
/// factors `φ(⟨ω, u_k⟩ · scale)`.
pub fn cf_product(
    n: usize,
    measure: &RadialMeasure,
    omega: Vec2,
    normalization: Normalization,
) -> Result<f64> {
    let scale = normalization.scale(n);
    Ok(direction_angles(n)?
        .units()
        .map(|u| measure.characteristic_function(omega.dot(u) * scale))
        .product())
}

/// Characteristic function of the centered Gaussian with covariance `cov`.
pub fn gaussian_cf(omega: Vec2, cov: &Covariance2) -> f64 {
    (-0.5 * cov.quadratic_form(omega)).exp()
}

/// Gaussian probability of the square `[-a, a]²` for a diagonal covariance.
pub fn rect_probability(a: f64, cov: &Covariance2) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "half-side must be positive, got {a}"
        )));
    }
    if !cov.is_diagonal() {
        return Err(Error::Unsupported(
            "rectangle probabilities need a diagonal covariance".into(),
        ));
    }
    let axis = |var: f64| {
        if var == 0.0 {
            1.0
        } else {
            libm::erf(a / (2.0 * var).sqrt())
        }
    };
    Ok(axis(cov.cxx()) * axis(cov.cyy()))
}
