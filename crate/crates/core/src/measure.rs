//! Line-supported probability measures with zero mean and unit variance.
//!
//! A planar random vector confined to a line through the origin is fully
//! described by a law on the real line. Everything downstream (the Monte
//! Carlo engine and the characteristic-function oracle) only calls
//! [`RadialMeasure::sample`] and [`RadialMeasure::characteristic_function`].
//!
//! # Reproducibility
//!
//! Samplers take any [`rand::Rng`]; the crate itself always drives them with
//! [`rand_chacha::ChaCha8Rng`], see [`crate::clt`] for the seeding rule. A
//! uniform draw is `half_width · (2u − 1)` where `u` is `Rng::random::<f64>()`
//! in `[0, 1)`.

use rand::Rng;

/// The available shapes of measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[non_exhaustive]
pub enum MeasureKind {
    /// Uniform on `[-√3, √3]`.
    UnitBox,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMeasure {
    kind: MeasureKind,
    half_width: f64,
}

/// The centered uniform law scaled to unit variance: `√12 · U(-½, ½)`,
/// i.e. uniform on `[-√3, √3]`.
pub fn unit_box_measure() -> RadialMeasure {
    RadialMeasure {
        kind: MeasureKind::UnitBox,
        half_width: 3f64.sqrt(),
    }
}

impl RadialMeasure {
    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    /// Half of the support length.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Probability density at `t`.
    pub fn density(&self, t: f64) -> f64 {
        match self.kind {
            MeasureKind::UnitBox => {
                if t.abs() <= self.half_width {
                    0.5 / self.half_width
                } else {
                    0.0
                }
            }
        }
    }

    /// Draws one value. Deterministic given the generator state.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            MeasureKind::UnitBox => {
                let u: f64 = rng.random();
                self.half_width * (2.0 * u - 1.0)
            }
        }
    }

    /// `E[exp(i s T)]`, which is real because the measure is symmetric.
    pub fn characteristic_function(&self, s: f64) -> f64 {
        match self.kind {
            MeasureKind::UnitBox => sinc(self.half_width * s),
        }
    }
}

/// `sin(x)/x` with the removable singularity filled in.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        // Taylor series; the truncation error is below 1e-20 here.
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}
