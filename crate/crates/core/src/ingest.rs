//! Loading digitized cone coordinates: unit conversion, window cropping and
//! normalization onto the unit domain.

use std::path::Path;

use crate::analysis::MIN_ANALYSIS_POINTS;
use crate::error::{Error, Result};
use crate::format::{parse_point_file, PointFile};
use crate::geometry::{find_duplicate, Domain, Point2, PointSet2D, Topology, Unit};
use crate::scalar::Scalar;

/// Micrometers of retina per degree of visual angle.
pub const MICROMETERS_PER_DEGREE: f64 = 288.0;

pub fn degrees_to_micrometers<T: Scalar>(deg: T) -> Result<T> {
    if !(deg.is_finite() && deg >= T::zero()) {
        return Err(Error::invalid(format!("visual angle must be nonnegative, got {deg}")));
    }
    Ok(deg * T::lit(MICROMETERS_PER_DEGREE))
}

/// Axis-aligned rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub x0: T,
    pub y0: T,
    pub x1: T,
    pub y1: T,
}

impl<T: Scalar> Rect<T> {
    pub fn new(x0: T, y0: T, x1: T, y1: T) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::invalid(format!("empty rectangle ({x0}, {y0})-({x1}, {y1})")));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    /// Half-open containment: min edges in, max edges out.
    pub fn contains(&self, p: Point2<T>) -> bool {
        p.x >= self.x0 && p.x < self.x1 && p.y >= self.y0 && p.y < self.y1
    }
}

/// A digitized mosaic in physical units with the history of how it was
/// brought there.
#[derive(Debug, Clone, PartialEq)]
pub struct MosaicRecord<T> {
    pub pointset: PointSet2D<T>,
    pub source_label: String,
    /// Physical units per raw coordinate unit.
    pub scale_factor: T,
    /// Crop window in the frame the file was loaded in.
    pub crop: Option<Rect<T>>,
}

/// Reads a point file, scales it to physical units and builds a bounded
/// domain. Missing files surface as [`Error::Io`].
pub fn load_points<T: Scalar>(path: impl AsRef<Path>, scale_factor: T, unit: Unit) -> Result<MosaicRecord<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "mosaic".to_owned());
    from_text(&text, scale_factor, unit, &stem)
}

/// [`load_points`] on in-memory text.
pub fn from_text<T: Scalar>(text: &str, scale_factor: T, unit: Unit, fallback_label: &str) -> Result<MosaicRecord<T>> {
    let file = parse_point_file(text)?;
    from_parsed(&file, scale_factor, unit, fallback_label)
}

pub fn from_parsed<T: Scalar>(
    file: &PointFile,
    scale_factor: T,
    unit: Unit,
    fallback_label: &str,
) -> Result<MosaicRecord<T>> {
    if !(scale_factor.is_finite() && scale_factor > T::zero()) {
        return Err(Error::invalid(format!(
            "scale factor must be positive, got {scale_factor}"
        )));
    }
    if file.points.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            found: file.points.len(),
        });
    }
    let mut points: Vec<Point2<T>> = file
        .points
        .iter()
        .map(|&(x, y)| Point2::new(T::lit(x) * scale_factor, T::lit(y) * scale_factor))
        .collect();
    if let Some((a, b)) = find_duplicate(&points) {
        return Err(Error::DuplicateCoordinate {
            first_line: file.lines[a],
            second_line: file.lines[b],
        });
    }

    let (mut width, mut height) = match file.header.window {
        Some([w, h]) => (T::lit(w), T::lit(h)),
        None => (T::zero(), T::zero()),
    };
    if file.header.window.is_none() {
        // tight box: shift the lower-left corner to the origin
        let min_x = points.iter().map(|p| p.x).fold(T::infinity(), T::min);
        let min_y = points.iter().map(|p| p.y).fold(T::infinity(), T::min);
        for p in &mut points {
            p.x = p.x - min_x;
            p.y = p.y - min_y;
        }
    }
    let max_x = points.iter().map(|p| p.x).fold(T::neg_infinity(), T::max);
    let max_y = points.iter().map(|p| p.y).fold(T::neg_infinity(), T::max);
    if max_x >= width {
        width = step_above(max_x);
    }
    if max_y >= height {
        height = step_above(max_y);
    }

    let domain = Domain::new(width, height, Topology::Bounded, unit)?;
    let label = file.header.label.clone().unwrap_or_else(|| fallback_label.to_owned());
    let pointset = PointSet2D::new(points, domain, label.clone()).map_err(|e| match e {
        Error::DuplicatePoint { first, second } => Error::DuplicateCoordinate {
            first_line: file.lines[first],
            second_line: file.lines[second],
        },
        other => other,
    })?;
    Ok(MosaicRecord {
        pointset,
        source_label: label,
        scale_factor,
        crop: None,
    })
}

fn step_above<T: Scalar>(v: T) -> T {
    if v <= T::zero() {
        return T::min_positive_value();
    }
    let up = v + v * T::epsilon();
    if up > v {
        up
    } else {
        v + T::min_positive_value()
    }
}

/// Keeps the points inside `rect` (in the record's current frame) and
/// rebases them so the rectangle becomes the new domain.
pub fn crop<T: Scalar>(rec: &MosaicRecord<T>, rect: Rect<T>) -> Result<MosaicRecord<T>> {
    let d = rec.pointset.domain();
    if rect.x1 <= T::zero() || rect.y1 <= T::zero() || rect.x0 >= d.width() || rect.y0 >= d.height() {
        return Err(Error::invalid("crop rectangle does not intersect the domain"));
    }
    let width = rect.x1 - rect.x0;
    let height = rect.y1 - rect.y0;
    let points: Vec<Point2<T>> = rec
        .pointset
        .points()
        .iter()
        .filter(|p| rect.contains(**p))
        .map(|p| {
            let mut x = p.x - rect.x0;
            let mut y = p.y - rect.y0;
            // rebasing may round onto the max edge
            while x >= width {
                x = x.step_down();
            }
            while y >= height {
                y = y.step_down();
            }
            Point2::new(x.max(T::zero()), y.max(T::zero()))
        })
        .collect();
    if points.len() < MIN_ANALYSIS_POINTS {
        return Err(Error::InsufficientPoints {
            needed: MIN_ANALYSIS_POINTS,
            found: points.len(),
        });
    }
    let domain = Domain::new(width, height, d.topology(), d.unit())?;
    let pointset = PointSet2D::new(points, domain, rec.pointset.label())?;
    let crop = match rec.crop {
        Some(prev) => Rect {
            x0: prev.x0 + rect.x0,
            y0: prev.y0 + rect.y0,
            x1: prev.x0 + rect.x1,
            y1: prev.y0 + rect.y1,
        },
        None => rect,
    };
    Ok(MosaicRecord {
        pointset,
        source_label: rec.source_label.clone(),
        scale_factor: rec.scale_factor,
        crop: Some(crop),
    })
}

/// A normalized point set plus the factor that maps it back.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized<T> {
    pub pointset: PointSet2D<T>,
    /// Physical length of one normalized unit (the longer window side).
    pub scale: T,
}

impl<T: Scalar> Normalized<T> {
    pub fn denormalize(&self, v: T) -> T {
        v * self.scale
    }
}

/// Maps the longer side of the window onto `[0, 1)`, keeping the aspect
/// ratio and the bounded topology.
pub fn normalize<T: Scalar>(rec: &MosaicRecord<T>) -> Result<Normalized<T>> {
    let d = rec.pointset.domain();
    let scale = d.width().max(d.height());
    let width = d.width() / scale;
    let height = d.height() / scale;
    let points = rec
        .pointset
        .points()
        .iter()
        .map(|p| {
            let mut x = p.x / scale;
            let mut y = p.y / scale;
            while x >= width {
                x = x.step_down();
            }
            while y >= height {
                y = y.step_down();
            }
            Point2::new(x, y)
        })
        .collect();
    let domain = Domain::new(width, height, Topology::Bounded, Unit::Normalized)?;
    Ok(Normalized {
        pointset: PointSet2D::new(points, domain, rec.pointset.label())?,
        scale,
    })
}
