use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, PointSet2D};
use crate::samplers::{check_min_dist, draw_unit, rng_from_seed, Generated};
use crate::scalar::{wrap_into, Scalar};

pub const DEFAULT_MAX_ATTEMPTS: usize = 1_000_000;

/// Candidates tried around each frontier point before it is retired.
pub const FRONTIER_ATTEMPTS: usize = 30;

/// Background grid on the unit torus with cells no smaller than the
/// hard-core radius, so conflicts can only sit in the 3x3 neighborhood.
struct HardCoreGrid<T> {
    radius: T,
    side: usize,
    cells: Vec<Vec<usize>>,
    points: Vec<Point2<T>>,
    domain: Domain<T>,
}

impl<T: Scalar> HardCoreGrid<T> {
    fn new(radius: T) -> Self {
        let side = (T::one() / radius).floor().to_usize().unwrap_or(1).clamp(1, 8192);
        Self {
            radius,
            side,
            cells: vec![Vec::new(); side * side],
            points: Vec::new(),
            domain: Domain::unit_torus(),
        }
    }

    fn cell(&self, v: T) -> usize {
        (v * T::from_usize_lossy(self.side))
            .floor()
            .to_usize()
            .unwrap_or(0)
            .min(self.side - 1)
    }

    fn offsets(&self) -> &'static [isize] {
        match self.side {
            1 => &[0],
            2 => &[0, 1],
            _ => &[-1, 0, 1],
        }
    }

    fn accepts(&self, p: Point2<T>) -> bool {
        let cx = self.cell(p.x) as isize;
        let cy = self.cell(p.y) as isize;
        let side = self.side as isize;
        for &dy in self.offsets() {
            let row = (cy + dy).rem_euclid(side) as usize;
            for &dx in self.offsets() {
                let col = (cx + dx).rem_euclid(side) as usize;
                for &j in &self.cells[row * self.side + col] {
                    if self.domain.metric(p, self.points[j]) < self.radius {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn insert(&mut self, p: Point2<T>) {
        let c = self.cell(p.y) * self.side + self.cell(p.x);
        self.cells[c].push(self.points.len());
        self.points.push(p);
    }

    fn finish(self, requested: usize, label: String) -> Result<Generated<T>> {
        let placed = self.points.len();
        if placed * 2 < requested {
            return Err(Error::GenerationFailure { placed, requested });
        }
        Ok(Generated {
            points: PointSet2D::new(self.points, Domain::unit_torus(), label)?,
            requested,
            saturated: placed < requested,
        })
    }
}

/// Classic rejection sampling: uniform darts, each kept only if no earlier
/// point lies closer than `min_dist` on the torus.
///
/// Stops after `n` points or after `max_attempts` consecutive rejections;
/// the latter marks the result saturated, or fails below `n / 2` points.
pub fn sample_dart_throwing<T: Scalar>(n: usize, min_dist: T, seed: u64, max_attempts: usize) -> Result<Generated<T>> {
    check_min_dist(n, min_dist)?;
    if max_attempts == 0 {
        return Err(Error::invalid("max_attempts must be positive"));
    }
    let mut rng = rng_from_seed(seed);
    let mut grid = HardCoreGrid::new(min_dist);
    let mut misses = 0;
    while grid.points.len() < n && misses < max_attempts {
        let p = draw_unit::<T>(&mut rng);
        if grid.accepts(p) {
            grid.insert(p);
            misses = 0;
        } else {
            misses += 1;
        }
    }
    grid.finish(n, format!("dart_{n}_s{seed}"))
}

/// Active-list Poisson-disk sampling on the torus: each frontier point
/// proposes [`FRONTIER_ATTEMPTS`] candidates in the annulus `[r, 2r)` and is
/// retired once all of them fail.
///
/// Generation stops at `n` points; an exhausted frontier below `n` marks the
/// result saturated.
pub fn sample_fast_poisson_disk<T: Scalar>(n: usize, min_dist: T, seed: u64) -> Result<Generated<T>> {
    check_min_dist(n, min_dist)?;
    let mut rng = rng_from_seed(seed);
    let mut grid = HardCoreGrid::new(min_dist);
    let tau = T::lit(std::f64::consts::TAU);
    let three = T::lit(3.0);

    let first = draw_unit::<T>(&mut rng);
    grid.insert(first);
    let mut active = vec![0usize];

    while !active.is_empty() && grid.points.len() < n {
        let slot = rng.gen_range(0..active.len());
        let origin = grid.points[active[slot]];
        let mut found = false;
        for _ in 0..FRONTIER_ATTEMPTS {
            let u = T::lit(rng.gen::<f64>());
            let angle = tau * T::lit(rng.gen::<f64>());
            // area-uniform radius in [r, 2r)
            let rho = min_dist * (T::one() + three * u).sqrt();
            let candidate = Point2::new(
                wrap_into(origin.x + rho * angle.cos(), T::one()),
                wrap_into(origin.y + rho * angle.sin(), T::one()),
            );
            if grid.accepts(candidate) {
                active.push(grid.points.len());
                grid.insert(candidate);
                found = true;
                break;
            }
        }
        if !found {
            active.swap_remove(slot);
        }
    }
    grid.finish(n, format!("poisson_{n}_s{seed}"))
}
