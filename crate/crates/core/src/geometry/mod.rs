//! Point sets, their domains, and the distance they are measured with.

mod index;

pub use index::NeighborIndex;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Periodic boundary: opposite edges are identified.
    Toroidal,
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Normalized,
    #[serde(alias = "um")]
    Micrometers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point2<T> {
    pub const fn new(x: T, y: T) -> Self {
        Self { x, y }
    }
}

impl<T: Scalar> Point2<T> {
    pub fn cast<U: Scalar>(self) -> Point2<U> {
        Point2::new(U::lit(self.x.as_f64()), U::lit(self.y.as_f64()))
    }
}

impl<T> From<(T, T)> for Point2<T> {
    fn from((x, y): (T, T)) -> Self {
        Self { x, y }
    }
}

/// Rectangular window `[0, width) x [0, height)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain<T> {
    width: T,
    height: T,
    topology: Topology,
    unit: Unit,
}

impl<T: Scalar> Domain<T> {
    pub fn new(width: T, height: T, topology: Topology, unit: Unit) -> Result<Self> {
        if !(width > T::zero() && width.is_finite() && height > T::zero() && height.is_finite()) {
            return Err(Error::invalid(format!(
                "domain extents must be positive and finite, got {width}x{height}"
            )));
        }
        Ok(Self {
            width,
            height,
            topology,
            unit,
        })
    }

    /// The `[0,1)^2` torus every synthetic sampler writes into.
    pub fn unit_torus() -> Self {
        Self {
            width: T::one(),
            height: T::one(),
            topology: Topology::Toroidal,
            unit: Unit::Normalized,
        }
    }

    pub fn width(&self) -> T {
        self.width
    }

    pub fn height(&self) -> T {
        self.height
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn area(&self) -> T {
        self.width * self.height
    }

    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.topology = topology;
        self
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        p.x >= T::zero() && p.x < self.width && p.y >= T::zero() && p.y < self.height
    }

    pub(crate) fn check(&self, p: Point2<T>) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::DomainViolation {
                x: p.x.as_f64(),
                y: p.y.as_f64(),
                width: self.width.as_f64(),
                height: self.height.as_f64(),
            })
        }
    }

    /// Per-axis separation `b - a`, wrapped to the nearest periodic image
    /// under toroidal topology.
    #[inline]
    pub fn delta(&self, a: Point2<T>, b: Point2<T>) -> Point2<T> {
        let mut dx = b.x - a.x;
        let mut dy = b.y - a.y;
        if self.topology == Topology::Toroidal {
            dx = wrap_delta(dx, self.width);
            dy = wrap_delta(dy, self.height);
        }
        Point2::new(dx, dy)
    }

    /// Distance without the containment check.
    #[inline]
    pub(crate) fn metric(&self, a: Point2<T>, b: Point2<T>) -> T {
        let mut dx = (a.x - b.x).abs();
        let mut dy = (a.y - b.y).abs();
        if self.topology == Topology::Toroidal {
            let two = T::lit(2.0);
            if dx > self.width / two {
                dx = self.width - dx;
            }
            if dy > self.height / two {
                dy = self.height - dy;
            }
        }
        (dx * dx + dy * dy).sqrt()
    }
}

#[inline]
fn wrap_delta<T: Scalar>(d: T, extent: T) -> T {
    let half = extent / T::lit(2.0);
    if d > half {
        d - extent
    } else if d < -half {
        d + extent
    } else {
        d
    }
}

/// Euclidean distance between two points of `domain`; under toroidal
/// topology each axis difference is folded to at most half the extent.
pub fn distance<T: Scalar>(a: Point2<T>, b: Point2<T>, domain: &Domain<T>) -> Result<T> {
    domain.check(a)?;
    domain.check(b)?;
    Ok(domain.metric(a, b))
}

/// Minimal pairwise distance of `n` points on the hexagonal lattice of a
/// unit-area torus, `sqrt(2 / (sqrt(3) n))`.
pub fn max_min_distance<T: Scalar>(n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "maximal radius needs at least 2 points, got {n}"
        )));
    }
    let v = (2.0 / (3.0_f64.sqrt() * n as f64)).sqrt();
    Ok(T::lit(v))
}

/// An ordered realization of a point process inside a [`Domain`].
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet2D<T> {
    points: Vec<Point2<T>>,
    domain: Domain<T>,
    label: String,
}

impl<T: Scalar> PointSet2D<T> {
    /// Validates containment and rejects coincident points.
    pub fn new(points: Vec<Point2<T>>, domain: Domain<T>, label: impl Into<String>) -> Result<Self> {
        for p in &points {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(Error::invalid("non-finite coordinate"));
            }
            domain.check(*p)?;
        }
        if let Some((first, second)) = find_duplicate(&points) {
            return Err(Error::DuplicatePoint { first, second });
        }
        Ok(Self {
            points,
            domain,
            label: label.into(),
        })
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same points, different boundary handling.
    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.domain = self.domain.with_topology(topology);
        self
    }

    pub(crate) fn require(&self, needed: usize) -> Result<()> {
        if self.points.len() < needed {
            Err(Error::InsufficientPoints {
                needed,
                found: self.points.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn into_points(self) -> Vec<Point2<T>> {
        self.points
    }
}

/// Canonical bit key; `-0.0` and `0.0` collapse to one key.
pub(crate) fn coord_key<T: Scalar>(p: Point2<T>) -> (u64, u64) {
    ((p.x.as_f64() + 0.0).to_bits(), (p.y.as_f64() + 0.0).to_bits())
}

pub(crate) fn find_duplicate<T: Scalar>(points: &[Point2<T>]) -> Option<(usize, usize)> {
    let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if let Some(&j) = seen.get(&coord_key(*p)) {
            return Some((j, i));
        }
        seen.insert(coord_key(*p), i);
    }
    None
}

/// Distance from every point to its nearest other point, in input order.
pub fn nearest_neighbor_distances<T: Scalar>(ps: &PointSet2D<T>) -> Result<Vec<T>> {
    ps.require(2)?;
    let index = NeighborIndex::new(ps);
    Ok((0..ps.len()).map(|i| index.nearest(i).1).collect())
}
