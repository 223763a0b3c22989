//! Monte Carlo engine and analytic oracles for the radial central limit
//! theorem.
//!
//! For `n` directions `u_k` at angles `kπ/n` and i.i.d. draws `t_k` from a
//! [`RadialMeasure`], the engine samples
//!
//! ```text
//! Z_n = scale(n) · Σ_k t_k u_k
//! ```
//!
//! with `scale(n)` chosen by [`Normalization`]. Because
//! `Σ_k u_k u_kᵀ = (n/2)·I` for `n ≥ 2`, the covariance of `Z_n` is exactly
//! `½·I` under `1/√n` scaling and exactly `I` under `√(2/n)` scaling, for
//! every `n ≥ 2`.
//!
//! # Seeding rule
//!
//! Trials are cut into consecutive chunks of [`CHUNK_TRIALS`]. Chunk `c`
//! draws from a `ChaCha8Rng` seeded with `seed_from_u64(seed)` and switched to
//! stream `c`. Chunks may run on any number of threads; samples are stored
//! and statistics merged in chunk order, so results do not depend on the
//! worker count.

mod cf;
mod density;
mod fit;

pub use cf::{cf_product, gaussian_cf, rect_probability};
pub use density::{empirical_density, DensityGrid};
pub use fit::{
    angular_chi2, chi_square_uniform, ks_radius, rayleigh_cdf, rect_frequency, ChiSquare,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{direction_angles, Covariance2, Vec2};
use crate::measure::RadialMeasure;

/// Number of trials drawn from one generator stream.
pub const CHUNK_TRIALS: usize = 4096;

/// Largest number of samples [`run_monte_carlo`] keeps in memory by default.
pub const DEFAULT_SAMPLE_CAP: usize = 10_000_000;

/// How the rotated sum is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Divide by `√n`. The limit has covariance `½·I`.
    #[default]
    SqrtN,
    /// Multiply by `√(2/n)`. The limit is the standard normal.
    Standardized,
}

impl Normalization {
    pub fn scale(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            Normalization::SqrtN => 1.0 / n.sqrt(),
            Normalization::Standardized => (2.0 / n).sqrt(),
        }
    }

    /// Per-axis variance of the limiting Gaussian.
    pub fn limit_variance(self) -> f64 {
        match self {
            Normalization::SqrtN => 0.5,
            Normalization::Standardized => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Normalization::SqrtN => "sqrt-n",
            Normalization::Standardized => "standardized",
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt-n" => Ok(Normalization::SqrtN),
            "standardized" => Ok(Normalization::Standardized),
            other => Err(Error::InvalidArgument(format!(
                "unknown normalization {other:?} (expected sqrt-n or standardized)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub normalization: Normalization,
    /// Samples are only returned when `trials <= sample_cap`.
    pub sample_cap: usize,
}

impl CltConfig {
    pub fn new(n: usize, trials: usize, seed: u64, normalization: Normalization) -> Self {
        CltConfig {
            n,
            trials,
            seed,
            normalization,
            sample_cap: DEFAULT_SAMPLE_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Empirical mean and unbiased covariance of a set of planar samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub count: usize,
    pub mean: Vec2,
    pub cov: Covariance2,
}

impl SampleStats {
    pub fn from_samples(samples: &[Vec2]) -> SampleStats {
        let mut acc = Moments::default();
        for &z in samples {
            acc.push(z);
        }
        acc.finish()
    }
}

/// Streaming first and second moments, mergeable across chunks.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: usize,
    mean: Vec2,
    sxx: f64,
    sxy: f64,
    syy: f64,
}

impl Moments {
    fn push(&mut self, z: Vec2) {
        self.count += 1;
        let n = self.count as f64;
        let dx = z.x - self.mean.x;
        let dy = z.y - self.mean.y;
        self.mean.x += dx / n;
        self.mean.y += dy / n;
        self.sxx += dx * (z.x - self.mean.x);
        self.sxy += dx * (z.y - self.mean.y);
        self.syy += dy * (z.y - self.mean.y);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let dx = other.mean.x - self.mean.x;
        let dy = other.mean.y - self.mean.y;
        let w = na * nb / n;
        Moments {
            count: self.count + other.count,
            mean: Vec2::new(self.mean.x + dx * nb / n, self.mean.y + dy * nb / n),
            sxx: self.sxx + other.sxx + dx * dx * w,
            sxy: self.sxy + other.sxy + dx * dy * w,
            syy: self.syy + other.syy + dy * dy * w,
        }
    }

    fn finish(self) -> SampleStats {
        let cov = if self.count > 1 {
            let d = (self.count - 1) as f64;
            Covariance2::from_moments(self.sxx / d, self.sxy / d, self.syy / d)
        } else {
            Covariance2::ZERO
        };
        SampleStats {
            count: self.count,
            mean: self.mean,
            cov,
        }
    }
}

/// Draws one realization of `Z_n`.
pub fn sample_z<R: Rng + ?Sized>(
    n: usize,
    measure: &RadialMeasure,
    normalization: Normalization,
    rng: &mut R,
) -> Result<Vec2> {
    let units: Vec<Vec2> = direction_angles(n)?.units().collect();
    Ok(draw(&units, normalization.scale(n), measure, rng))
}

fn draw<R: Rng + ?Sized>(units: &[Vec2], scale: f64, measure: &RadialMeasure, rng: &mut R) -> Vec2 {
    let mut acc = Vec2::ZERO;
    for &u in units {
        acc = acc + u * measure.sample(rng);
    }
    acc * scale
}

/// Covariance of `Z_n`, identical for every `n ≥ 2`.
pub fn exact_covariance(n: usize, normalization: Normalization) -> Result<Covariance2> {
    match n {
        0 => Err(Error::InvalidArgument("n must be at least 1".into())),
        1 => Err(Error::DegenerateCovariance { n }),
        _ => Covariance2::isotropic(normalization.limit_variance()),
    }
}

/// Result of [`run_monte_carlo`].
#[derive(Debug, Clone)]
pub struct MonteCarloRun {
    /// All draws in trial order, or `None` when `trials` exceeds the cap.
    pub samples: Option<Vec<Vec2>>,
    pub stats: SampleStats,
}

/// Draws `cfg.trials` independent realizations of `Z_n`.
pub fn run_monte_carlo(cfg: &CltConfig, measure: &RadialMeasure) -> Result<MonteCarloRun> {
    cfg.validate()?;
    let units: Vec<Vec2> = direction_angles(cfg.n)?.units().collect();
    let scale = cfg.normalization.scale(cfg.n);
    let stream = |chunk: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(chunk as u64);
        rng
    };

    if cfg.trials <= cfg.sample_cap {
        let mut samples: Vec<Vec2> = Vec::new();
        samples
            .try_reserve_exact(cfg.trials)
            .map_err(|_| Error::Allocation(cfg.trials))?;
        samples.resize(cfg.trials, Vec2::ZERO);
        let partial: Vec<Moments> = samples
            .par_chunks_mut(CHUNK_TRIALS)
            .enumerate()
            .map(|(c, out)| {
                let mut rng = stream(c);
                let mut acc = Moments::default();
                for slot in out.iter_mut() {
                    *slot = draw(&units, scale, measure, &mut rng);
                    acc.push(*slot);
                }
                acc
            })
            .collect();
        let stats = merge_in_order(partial);
        Ok(MonteCarloRun {
            samples: Some(samples),
            stats,
        })
    } else {
        let chunks = cfg.trials.div_ceil(CHUNK_TRIALS);
        let partial: Vec<Moments> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let len = CHUNK_TRIALS.min(cfg.trials - c * CHUNK_TRIALS);
                let mut rng = stream(c);
                let mut acc = Moments::default();
                for _ in 0..len {
                    acc.push(draw(&units, scale, measure, &mut rng));
                }
                acc
            })
            .collect();
        Ok(MonteCarloRun {
            samples: None,
            stats: merge_in_order(partial),
        })
    }
}

fn merge_in_order(parts: Vec<Moments>) -> SampleStats {
    parts
        .into_iter()
        .fold(Moments::default(), Moments::merge)
        .finish()
}
