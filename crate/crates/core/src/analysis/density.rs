use crate::error::{Error, Result};
use crate::geometry::{NeighborIndex, Point2, PointSet2D, Topology};
use crate::scalar::Scalar;

/// Points per unit area inside the disk `B(center, radius)`.
///
/// The disk area is clipped to the window under bounded topology; on the
/// torus it is the area of the wrapped disk, which saturates at the domain
/// area once the radius covers the whole window.
pub fn local_density<T: Scalar>(ps: &PointSet2D<T>, center: Point2<T>, radius: T) -> Result<T> {
    if !(radius.is_finite() && radius > T::zero()) {
        return Err(Error::invalid(format!("radius must be positive, got {radius}")));
    }
    let domain = ps.domain();
    domain.check(center)?;
    let mut count = 0usize;
    NeighborIndex::new(ps).for_each_within(center, radius, |_, _| count += 1);
    if count == 0 {
        return Ok(T::zero());
    }
    let (w, h) = (domain.width().as_f64(), domain.height().as_f64());
    let (cx, cy) = (center.x.as_f64(), center.y.as_f64());
    let r = radius.as_f64();
    let area = match domain.topology() {
        Topology::Bounded => disk_rectangle_area(r, -cx, w - cx, -cy, h - cy),
        Topology::Toroidal => disk_rectangle_area(r, -w / 2.0, w / 2.0, -h / 2.0, h / 2.0),
    };
    Ok(T::lit(count as f64 / area))
}

/// Area of the origin-centered disk of radius `r` intersected with
/// `[x0, x1] x [y0, y1]`.
pub fn disk_rectangle_area(r: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let corner = |x: f64, y: f64| x.signum() * y.signum() * quadrant_area(r, x.abs(), y.abs());
    corner(x1, y1) - corner(x0, y1) - corner(x1, y0) + corner(x0, y0)
}

/// Area of the disk inside `[0, a] x [0, b]`, `a, b >= 0`.
fn quadrant_area(r: f64, a: f64, b: f64) -> f64 {
    if a * a + b * b <= r * r {
        return a * b;
    }
    let a = a.min(r);
    let b = b.min(r);
    // below `split` the arc lies above y = b
    let split = (r * r - b * b).max(0.0).sqrt().min(a);
    let arc = |x: f64| 0.5 * (x * (r * r - x * x).max(0.0).sqrt() + r * r * (x / r).clamp(-1.0, 1.0).asin());
    b * split + arc(a) - arc(split)
}
