//! Plain-text interchange: point sets (`x y` per line) and two-column
//! curve/spectrum exports, each led by a `#` line of JSON metadata.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{PcfCurve, PcfMode, RadialSpectrum};
use crate::error::{Error, Result};
use crate::geometry::{Point2, PointSet2D, Topology, Unit};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainMeta {
    pub width: f64,
    pub height: f64,
    pub topology: Topology,
    pub unit: Unit,
}

/// Metadata on the first line of a point-set file. Every field is optional
/// so hand-digitized files only need what they know.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PointFileHeader {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainMeta>,
    /// Analysis window `[width, height]` in `unit`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Unit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_dist: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub requested: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturated: Option<bool>,
}

/// Parsed file body; `lines[k]` is the 1-based source line of `points[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFile {
    pub header: PointFileHeader,
    pub points: Vec<(f64, f64)>,
    pub lines: Vec<usize>,
}

/// Parses the point-set text format. Blank lines and later `#` lines are
/// ignored; anything else must be exactly two finite decimals.
pub fn parse_point_file(text: &str) -> Result<PointFile> {
    let mut header = PointFileHeader::default();
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if let Some(meta) = line.strip_prefix('#') {
            if line_no == 1 && !meta.trim().is_empty() {
                header = serde_json::from_str(meta.trim()).map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("invalid metadata header: {e}"),
                })?;
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(xs), Some(ys), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two coordinates, got {line:?}"),
            });
        };
        let parse = |s: &str| -> Result<f64> {
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Parse {
                    line: line_no,
                    message: format!("not a finite number: {s:?}"),
                }),
            }
        };
        points.push((parse(xs)?, parse(ys)?));
        lines.push(line_no);
    }
    Ok(PointFile { header, points, lines })
}

/// Serializes a point set; the output is a pure function of the inputs.
pub fn write_point_file<T: Scalar>(ps: &PointSet2D<T>, header: &PointFileHeader) -> String {
    let mut out = String::with_capacity(32 * ps.len() + 256);
    let meta = serde_json::to_string(header).expect("header serializes");
    let _ = writeln!(out, "# {meta}");
    for p in ps.points() {
        let _ = writeln!(out, "{} {}", p.x, p.y);
    }
    out
}

impl PointFileHeader {
    /// Header describing `ps` itself: label, count and domain.
    pub fn describing<T: Scalar>(ps: &PointSet2D<T>) -> Self {
        let d = ps.domain();
        Self {
            label: Some(ps.label().to_owned()),
            n: Some(ps.len()),
            domain: Some(DomainMeta {
                width: d.width().as_f64(),
                height: d.height().as_f64(),
                topology: d.topology(),
                unit: d.unit(),
            }),
            ..Self::default()
        }
    }
}

/// Rebuilds a point set from a file that declares its full domain.
pub fn point_set_from_file<T: Scalar>(file: &PointFile, fallback_label: &str) -> Result<Option<PointSet2D<T>>> {
    let Some(meta) = file.header.domain else {
        return Ok(None);
    };
    let domain = crate::geometry::Domain::new(T::lit(meta.width), T::lit(meta.height), meta.topology, meta.unit)?;
    let points = file
        .points
        .iter()
        .map(|&(x, y)| Point2::new(T::lit(x), T::lit(y)))
        .collect();
    let label = file.header.label.clone().unwrap_or_else(|| fallback_label.to_owned());
    PointSet2D::new(points, domain, label).map(Some).map_err(|e| match e {
        Error::DuplicatePoint { first, second } => Error::DuplicateCoordinate {
            first_line: file.lines[first],
            second_line: file.lines[second],
        },
        other => other,
    })
}

#[derive(Debug, Clone, Serialize)]
struct CurveMeta<'a, T> {
    label: &'a str,
    n: usize,
    mode: PcfMode,
    params: &'a crate::analysis::PcfParams<T>,
    kernel: &'static str,
    radius_unit: &'static str,
    unreliable_bins: Vec<usize>,
}

/// Two-column `r value` export of a PCF curve.
pub fn write_pcf_curve<T: Scalar + Serialize>(curve: &PcfCurve<T>, label: &str) -> String {
    let meta = CurveMeta {
        label,
        n: curve.n,
        mode: curve.params.mode,
        params: &curve.params,
        kernel: "gaussian exp(-t^2/s^2)/(s*sqrt(pi))",
        radius_unit: "d_hex(n)",
        unreliable_bins: curve
            .unreliable
            .iter()
            .enumerate()
            .filter_map(|(k, &u)| u.then_some(k))
            .collect(),
    };
    let mut out = format!("# {}\n", serde_json::to_string(&meta).expect("metadata serializes"));
    for (r, v) in curve.radii.iter().zip(&curve.values) {
        let _ = writeln!(out, "{r} {v}");
    }
    out
}

#[derive(Debug, Clone, Serialize)]
struct SpectrumMeta<'a> {
    label: &'a str,
    n: usize,
    max_freq: usize,
    freq_unit: &'static str,
}

/// Two-column `freq power` export of a radial spectrum.
pub fn write_spectrum<T: Scalar>(spectrum: &RadialSpectrum<T>, label: &str, n: usize) -> String {
    let meta = SpectrumMeta {
        label,
        n,
        max_freq: spectrum.freqs.len(),
        freq_unit: "cycles per domain width",
    };
    let mut out = format!("# {}\n", serde_json::to_string(&meta).expect("metadata serializes"));
    for (f, p) in spectrum.freqs.iter().zip(&spectrum.power) {
        let _ = writeln!(out, "{f} {p}");
    }
    out
}

/// Reads back a two-column export, skipping `#` lines.
pub fn parse_two_column(text: &str) -> Result<Vec<(f64, f64)>> {
    parse_point_file(text).map(|f| f.points)
}
