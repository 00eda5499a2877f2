//! Toroidal Lloyd relaxation: every generator moves to the centroid of its
//! exact Voronoi cell on the unit torus.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Domain, NeighborIndex, Point2, PointSet2D};
use crate::samplers::{rng_from_seed, white_from_rng};
use crate::scalar::{wrap_into, Scalar};

/// Relaxation stops once no generator moves farther than this.
pub const DISPLACEMENT_TOLERANCE: f64 = 1e-5;
/// Generators closer than this are treated as coincident.
pub const COINCIDENCE_RADIUS: f64 = 1e-9;
/// Magnitude of the kick applied to one of two coincident generators.
pub const COINCIDENCE_JITTER: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationTrace {
    pub iterations_run: usize,
    /// Largest generator displacement of the last iteration run.
    pub last_displacement: f64,
    pub converged: bool,
}

/// White noise from `seed`, then up to `iterations` Lloyd steps.
///
/// With `iterations == 0` the result equals `sample_white(n, seed)`.
pub fn sample_blue_noise_opt<T: Scalar>(n: usize, seed: u64, iterations: usize) -> Result<PointSet2D<T>> {
    relax(n, seed, iterations).map(|(ps, _)| ps)
}

/// Same as [`sample_blue_noise_opt`], also reporting how the loop ended.
pub fn relax<T: Scalar>(n: usize, seed: u64, iterations: usize) -> Result<(PointSet2D<T>, RelaxationTrace)> {
    if n < 16 {
        return Err(Error::invalid(format!(
            "blue-noise optimization needs n >= 16, got {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let start: PointSet2D<T> = white_from_rng(n, &mut rng, format!("white_{n}_s{seed}"));
    let mut positions = start.into_points();
    let domain = Domain::<T>::unit_torus();
    let tol = T::lit(DISPLACEMENT_TOLERANCE);

    let mut trace = RelaxationTrace {
        iterations_run: 0,
        last_displacement: 0.0,
        converged: false,
    };
    for _ in 0..iterations {
        separate_coincident(&mut positions, &domain, &mut rng);
        let index = NeighborIndex::from_parts(&positions, domain);
        let moved: Vec<(Point2<T>, T)> = (0..positions.len())
            .into_par_iter()
            .map(|i| {
                let shift = cell_centroid(i, &positions, &index);
                let p = positions[i];
                let q = Point2::new(wrap_into(p.x + shift.x, T::one()), wrap_into(p.y + shift.y, T::one()));
                (q, shift.x.hypot(shift.y))
            })
            .collect();
        let max_shift = moved.iter().fold(T::zero(), |m, &(_, d)| m.max(d));
        positions = moved.into_iter().map(|(q, _)| q).collect();
        trace.iterations_run += 1;
        trace.last_displacement = max_shift.as_f64();
        if max_shift < tol {
            trace.converged = true;
            break;
        }
    }
    separate_coincident(&mut positions, &domain, &mut rng);
    let ps = PointSet2D::new(positions, domain, format!("bluenoise_{n}_s{seed}"))?;
    Ok((ps, trace))
}

fn separate_coincident<T: Scalar>(positions: &mut [Point2<T>], domain: &Domain<T>, rng: &mut impl Rng) {
    let close = T::lit(COINCIDENCE_RADIUS);
    let kick = T::lit(COINCIDENCE_JITTER);
    let clashes: Vec<usize> = {
        let index = NeighborIndex::from_parts(positions, *domain);
        (0..positions.len())
            .filter(|&i| {
                let (j, d) = index.nearest(i);
                d < close && j < i
            })
            .collect()
    };
    for i in clashes {
        let angle = T::lit(rng.gen::<f64>() * std::f64::consts::TAU);
        let p = positions[i];
        positions[i] = Point2::new(
            wrap_into(p.x + kick * angle.cos(), T::one()),
            wrap_into(p.y + kick * angle.sin(), T::one()),
        );
    }
}

/// Offset from generator `i` to the centroid of its toroidal Voronoi cell.
fn cell_centroid<T: Scalar>(i: usize, positions: &[Point2<T>], index: &NeighborIndex<'_, T>) -> Point2<T> {
    let domain = index.domain();
    let origin = positions[i];
    let n = positions.len();
    let half = T::lit(0.5);
    let two = T::lit(2.0);

    let mut radius = T::lit(2.5) / T::from_usize_lossy(n).sqrt();
    let mut sites: Vec<(T, Point2<T>)> = Vec::new();
    loop {
        sites.clear();
        let exhaustive = radius > half;
        if exhaustive {
            // every periodic image of every other generator
            for (j, p) in positions.iter().enumerate() {
                let d = domain.delta(origin, *p);
                for oy in [-1.0, 0.0, 1.0] {
                    for ox in [-1.0, 0.0, 1.0] {
                        if j == i && ox == 0.0 && oy == 0.0 {
                            continue;
                        }
                        let v = Point2::new(d.x + T::lit(ox), d.y + T::lit(oy));
                        sites.push((v.x.hypot(v.y), v));
                    }
                }
            }
        } else {
            index.for_each_within(origin, radius, |j, dist| {
                if j != i {
                    sites.push((dist, domain.delta(origin, positions[j])));
                }
            });
        }
        sites.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

        // fundamental square: bisectors with the generator's own images
        let mut poly = vec![
            Point2::new(-half, -half),
            Point2::new(half, -half),
            Point2::new(half, half),
            Point2::new(-half, half),
        ];
        let mut scratch = Vec::with_capacity(16);
        let mut reach = max_vertex_radius(&poly);
        for &(dist, v) in &sites {
            if dist >= two * reach {
                break;
            }
            if dist <= T::zero() {
                continue;
            }
            clip_half_plane(&poly, v, &mut scratch);
            std::mem::swap(&mut poly, &mut scratch);
            if poly.len() < 3 {
                return Point2::new(T::zero(), T::zero());
            }
            reach = max_vertex_radius(&poly);
        }
        if exhaustive || two * reach <= radius {
            return polygon_centroid(&poly);
        }
        radius = radius * two;
    }
}

fn max_vertex_radius<T: Scalar>(poly: &[Point2<T>]) -> T {
    poly.iter().fold(T::zero(), |m, p| m.max(p.x.hypot(p.y)))
}

/// Keeps the part of `poly` closer to the origin than to `site`.
fn clip_half_plane<T: Scalar>(poly: &[Point2<T>], site: Point2<T>, out: &mut Vec<Point2<T>>) {
    out.clear();
    let offset = (site.x * site.x + site.y * site.y) / T::lit(2.0);
    let side = |p: &Point2<T>| p.x * site.x + p.y * site.y - offset;
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        let fa = side(&a);
        let fb = side(&b);
        if fa <= T::zero() {
            out.push(a);
        }
        if (fa <= T::zero()) != (fb <= T::zero()) {
            let t = fa / (fa - fb);
            out.push(Point2::new(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t));
        }
    }
}

fn polygon_centroid<T: Scalar>(poly: &[Point2<T>]) -> Point2<T> {
    let mut area2 = T::zero();
    let mut cx = T::zero();
    let mut cy = T::zero();
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        let cross = a.x * b.y - b.x * a.y;
        area2 = area2 + cross;
        cx = cx + (a.x + b.x) * cross;
        cy = cy + (a.y + b.y) * cross;
    }
    if area2.abs() <= T::min_positive_value() {
        return Point2::new(T::zero(), T::zero());
    }
    let scale = T::lit(3.0) * area2;
    Point2::new(cx / scale, cy / scale)
}
