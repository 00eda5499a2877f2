//! Seeded generators for the point-process families on the unit torus.
//!
//! Every sampler is a pure function of its arguments: the pseudorandom
//! stream is [`RNG_ALGORITHM`] seeded through `SeedableRng::seed_from_u64`.

mod lloyd;
mod poisson;

pub use lloyd::{relax, sample_blue_noise_opt, RelaxationTrace};
pub use poisson::{sample_dart_throwing, sample_fast_poisson_disk, DEFAULT_MAX_ATTEMPTS, FRONTIER_ATTEMPTS};

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{coord_key, max_min_distance, Domain, Point2, PointSet2D};
use crate::scalar::{unit_interval, Scalar};

/// Identifier written into output metadata so seeds stay portable.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng/seed_from_u64 (rand_chacha 0.3)";

pub const DEFAULT_ITERATIONS: usize = 100;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    WhiteNoise,
    Jittered,
    DartThrowing,
    FastPoissonDisk,
    BlueNoiseOpt,
}

impl SamplerKind {
    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::WhiteNoise => "white",
            SamplerKind::Jittered => "jittered",
            SamplerKind::DartThrowing => "dart",
            SamplerKind::FastPoissonDisk => "poisson",
            SamplerKind::BlueNoiseOpt => "bluenoise",
        }
    }

    pub const ALL: [SamplerKind; 5] = [
        SamplerKind::WhiteNoise,
        SamplerKind::Jittered,
        SamplerKind::DartThrowing,
        SamplerKind::FastPoissonDisk,
        SamplerKind::BlueNoiseOpt,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    pub n: usize,
    pub seed: u64,
    /// Hard-core radius, required by the Poisson-disk kinds only.
    pub min_dist: Option<f64>,
    pub iterations: usize,
    /// Jittered only: round a non-square `n` up to the next square.
    pub round_to_square: bool,
    /// Dart throwing only: consecutive rejections before giving up.
    pub max_attempts: usize,
}

impl SamplerConfig {
    pub fn new(kind: SamplerKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            seed,
            min_dist: None,
            iterations: DEFAULT_ITERATIONS,
            round_to_square: false,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn with_min_dist(mut self, min_dist: f64) -> Self {
        self.min_dist = Some(min_dist);
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!("n must be at least 2, got {}", self.n)));
        }
        match self.kind {
            SamplerKind::DartThrowing | SamplerKind::FastPoissonDisk => {
                let m = self
                    .min_dist
                    .ok_or_else(|| Error::invalid("min_dist is required for Poisson-disk sampling"))?;
                check_min_dist::<f64>(self.n, m)?;
            }
            SamplerKind::BlueNoiseOpt if self.n < 16 => {
                return Err(Error::invalid(format!(
                    "blue-noise optimization needs n >= 16, got {}",
                    self.n
                )));
            }
            SamplerKind::Jittered if !self.round_to_square && perfect_sqrt(self.n).is_none() => {
                return Err(Error::invalid(format!("n = {} is not a perfect square", self.n)));
            }
            _ => {}
        }
        Ok(())
    }

    /// Runs the configured sampler.
    pub fn generate<T: Scalar>(&self) -> Result<Generated<T>> {
        self.validate()?;
        match self.kind {
            SamplerKind::WhiteNoise => Ok(Generated::complete(sample_white(self.n, self.seed)?)),
            SamplerKind::Jittered => {
                let rounding = if self.round_to_square {
                    SquareRounding::RoundUp
                } else {
                    SquareRounding::Reject
                };
                Ok(Generated::complete(sample_jittered(self.n, self.seed, rounding)?))
            }
            SamplerKind::DartThrowing => sample_dart_throwing(
                self.n,
                T::lit(self.min_dist.unwrap_or_default()),
                self.seed,
                self.max_attempts,
            ),
            SamplerKind::FastPoissonDisk => {
                sample_fast_poisson_disk(self.n, T::lit(self.min_dist.unwrap_or_default()), self.seed)
            }
            SamplerKind::BlueNoiseOpt => Ok(Generated::complete(sample_blue_noise_opt(
                self.n,
                self.seed,
                self.iterations,
            )?)),
        }
    }
}

/// A sampler result plus how it relates to the requested count.
#[derive(Debug, Clone)]
pub struct Generated<T> {
    pub points: PointSet2D<T>,
    pub requested: usize,
    /// The generator stopped before reaching `requested` points.
    pub saturated: bool,
}

impl<T: Scalar> Generated<T> {
    fn complete(points: PointSet2D<T>) -> Self {
        Self {
            requested: points.len(),
            points,
            saturated: false,
        }
    }
}

pub(crate) fn check_min_dist<T: Scalar>(n: usize, min_dist: T) -> Result<()> {
    let limit: T = max_min_distance(n)?;
    if min_dist.is_nan() || min_dist <= T::zero() || min_dist > limit {
        return Err(Error::invalid(format!(
            "min_dist {min_dist} infeasible for n = {n}: must lie in (0, {limit}]"
        )));
    }
    Ok(())
}

fn perfect_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

pub(crate) fn draw_unit<T: Scalar>(rng: &mut impl Rng) -> Point2<T> {
    let x = unit_interval(rng.gen::<f64>());
    let y = unit_interval(rng.gen::<f64>());
    Point2::new(x, y)
}

/// `n` independent uniform points on the unit torus.
pub fn sample_white<T: Scalar>(n: usize, seed: u64) -> Result<PointSet2D<T>> {
    if n < 2 {
        return Err(Error::invalid(format!("n must be at least 2, got {n}")));
    }
    let mut rng = rng_from_seed(seed);
    Ok(white_from_rng(n, &mut rng, format!("white_{n}_s{seed}")))
}

pub(crate) fn white_from_rng<T: Scalar>(n: usize, rng: &mut ChaCha8Rng, label: String) -> PointSet2D<T> {
    let mut seen = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let p = draw_unit::<T>(rng);
        // a repeated draw would be a zero-distance pair; redraw instead
        if seen.insert(coord_key(p)) {
            points.push(p);
        }
    }
    PointSet2D::new(points, Domain::unit_torus(), label).expect("uniform draws lie in the unit torus")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareRounding {
    Reject,
    RoundUp,
}

/// One uniform point in each cell of a `sqrt(n) x sqrt(n)` grid, row-major.
pub fn sample_jittered<T: Scalar>(n: usize, seed: u64, rounding: SquareRounding) -> Result<PointSet2D<T>> {
    if n < 1 {
        return Err(Error::invalid("n must be positive"));
    }
    let side = match (perfect_sqrt(n), rounding) {
        (Some(s), _) => s,
        (None, SquareRounding::RoundUp) => (n as f64).sqrt().ceil() as usize,
        (None, SquareRounding::Reject) => {
            return Err(Error::invalid(format!("n = {n} is not a perfect square")));
        }
    };
    let mut rng = rng_from_seed(seed);
    let m = T::from_usize_lossy(side);
    let mut points = Vec::with_capacity(side * side);
    for row in 0..side {
        for col in 0..side {
            let x = cell_coord(col, rng.gen::<f64>(), m);
            let y = cell_coord(row, rng.gen::<f64>(), m);
            points.push(Point2::new(x, y));
        }
    }
    PointSet2D::new(
        points,
        Domain::unit_torus(),
        format!("jittered_{}_s{seed}", side * side),
    )
}

/// `(cell + u) / m`, nudged so that `floor(v * m) == cell`.
fn cell_coord<T: Scalar>(cell: usize, u: f64, m: T) -> T {
    let c = T::from_usize_lossy(cell);
    let mut v = (c + unit_interval::<T>(u)) / m;
    while (v * m).floor() > c {
        v = v.step_down();
    }
    while (v * m).floor() < c {
        v = v + v * T::epsilon();
    }
    v
}
