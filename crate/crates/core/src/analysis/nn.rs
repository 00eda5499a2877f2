use serde::Serialize;

use crate::analysis::MIN_ANALYSIS_POINTS;
use crate::error::{Error, Result};
use crate::geometry::{nearest_neighbor_distances, PointSet2D, Topology};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram<T> {
    /// `counts.len() + 1` ascending edges.
    pub edges: Vec<T>,
    pub counts: Vec<usize>,
}

/// Nearest-neighbor distance distribution summarized by a normal fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NnStats<T> {
    pub distances: Vec<T>,
    /// Arithmetic mean of `distances`.
    pub mu: T,
    /// Population standard deviation of `distances`.
    pub sigma: T,
    /// `mu / sigma`.
    pub ri: T,
    pub histogram: Histogram<T>,
}

impl<T: Scalar> NnStats<T> {
    pub fn from_distances(distances: Vec<T>) -> Result<Self> {
        if distances.len() < MIN_ANALYSIS_POINTS {
            return Err(Error::InsufficientPoints {
                needed: MIN_ANALYSIS_POINTS,
                found: distances.len(),
            });
        }
        let count = distances.len() as f64;
        let mean = distances.iter().map(|d| d.as_f64()).sum::<f64>() / count;
        let var = distances
            .iter()
            .map(|d| {
                let e = d.as_f64() - mean;
                e * e
            })
            .sum::<f64>()
            / count;
        let mu = T::lit(mean);
        let sigma = T::lit(var.sqrt());
        let ri = regularity_index(mu, sigma)?;
        let histogram = histogram(&distances);
        Ok(Self {
            distances,
            mu,
            sigma,
            ri,
            histogram,
        })
    }
}

/// Ratio of mean to standard deviation; a zero deviation is degenerate.
pub fn regularity_index<T: Scalar>(mu: T, sigma: T) -> Result<T> {
    if sigma.is_nan() || sigma <= T::zero() {
        return Err(Error::DegenerateDistribution(format!(
            "standard deviation {sigma} leaves the regularity index undefined"
        )));
    }
    Ok(mu / sigma)
}

fn histogram<T: Scalar>(values: &[T]) -> Histogram<T> {
    let bins = (values.len() as f64).sqrt().ceil().max(1.0) as usize;
    let lo = values.iter().copied().fold(T::infinity(), T::min);
    let hi = values.iter().copied().fold(T::neg_infinity(), T::max);
    let width = (hi - lo) / T::from_usize_lossy(bins);
    let edges: Vec<T> = (0..=bins)
        .map(|k| {
            if k == bins {
                hi
            } else {
                lo + width * T::from_usize_lossy(k)
            }
        })
        .collect();
    let mut counts = vec![0; bins];
    for &v in values {
        let k = if width > T::zero() {
            ((v - lo) / width).floor().to_usize().unwrap_or(0).min(bins - 1)
        } else {
            0
        };
        counts[k] += 1;
    }
    Histogram { edges, counts }
}

/// Nearest-neighbor moments and regularity index of a point set.
pub fn nn_stats<T: Scalar>(ps: &PointSet2D<T>) -> Result<NnStats<T>> {
    ps.require(MIN_ANALYSIS_POINTS)?;
    NnStats::from_distances(nearest_neighbor_distances(ps)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowOutcome<T> {
    pub n: usize,
    pub mu: T,
    pub sigma: T,
    pub ri: T,
}

/// One line of a regularity table; failures are kept in place of values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityRow<T> {
    pub label: String,
    pub topology: Option<Topology>,
    pub outcome: std::result::Result<RowOutcome<T>, String>,
}

impl<T: Scalar> RegularityRow<T> {
    pub fn from_moments(label: impl Into<String>, n: usize, mu: T, sigma: T) -> Self {
        let outcome = regularity_index(mu, sigma)
            .map(|ri| RowOutcome { n, mu, sigma, ri })
            .map_err(|e| e.to_string());
        Self {
            label: label.into(),
            topology: None,
            outcome,
        }
    }

    pub fn failed(label: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            topology: None,
            outcome: Err(reason.into()),
        }
    }

    pub fn for_set(ps: &PointSet2D<T>) -> Self {
        let outcome = nn_stats(ps)
            .map(|s| RowOutcome {
                n: ps.len(),
                mu: s.mu,
                sigma: s.sigma,
                ri: s.ri,
            })
            .map_err(|e| e.to_string());
        Self {
            label: ps.label().to_owned(),
            topology: Some(ps.domain().topology()),
            outcome,
        }
    }

    pub fn ri(&self) -> Option<T> {
        self.outcome.as_ref().ok().map(|o| o.ri)
    }
}

/// Orders rows by ascending regularity index; failed rows go last in their
/// original order.
pub fn sort_rows<T: Scalar>(rows: &mut [RegularityRow<T>]) {
    rows.sort_by(|a, b| match (a.ri(), b.ri()) {
        (Some(x), Some(y)) => x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
}

/// One row per set, sorted ascending by regularity index.
pub fn regularity_report<T: Scalar>(sets: &[PointSet2D<T>]) -> Vec<RegularityRow<T>> {
    let mut rows: Vec<RegularityRow<T>> = sets.iter().map(RegularityRow::for_set).collect();
    sort_rows(&mut rows);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Domain, Point2, Unit};
    use crate::samplers::sample_white;

    #[test]
    fn lattice_patch_is_degenerate() {
        let pts: Vec<Point2<f64>> = (0..25).map(|k| Point2::new((k % 5) as f64, (k / 5) as f64)).collect();
        let dom = Domain::new(5.0, 5.0, Topology::Bounded, Unit::Micrometers).unwrap();
        let ps = PointSet2D::new(pts, dom, "lattice").unwrap();
        assert!(matches!(nn_stats(&ps), Err(Error::DegenerateDistribution(_))));
    }

    #[test]
    fn needs_ten_points() {
        let ps: PointSet2D<f64> = sample_white(9, 1).unwrap();
        assert!(matches!(
            nn_stats(&ps),
            Err(Error::InsufficientPoints { needed: 10, found: 9 })
        ));
    }

    #[test]
    fn table_row_arithmetic() {
        let ri = regularity_index(4.034_563_74_f64, 0.506_125_55).unwrap();
        assert!((ri - 7.971_468).abs() < 1e-5);
        let row = RegularityRow::from_moments("BNOT_1050", 1050, 0.029_699_81_f64, 0.001_384_43);
        assert!((row.ri().unwrap() - 21.452_712).abs() < 1e-4);
    }

    #[test]
    fn moments_match_definition() {
        let ps: PointSet2D<f64> = sample_white(500, 4).unwrap();
        let s = nn_stats(&ps).unwrap();
        let n = s.distances.len() as f64;
        let mean = s.distances.iter().sum::<f64>() / n;
        let var = s.distances.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n;
        assert!((s.mu - mean).abs() < 1e-15);
        assert!((s.sigma - var.sqrt()).abs() < 1e-15);
        assert_eq!(s.ri, s.mu / s.sigma);
        assert_eq!(s.histogram.counts.iter().sum::<usize>(), 500);
        assert_eq!(s.histogram.counts.len(), 23);
        assert_eq!(s.histogram.edges.len(), 24);
    }

    #[test]
    fn report_sorts_and_contains_failures() {
        assert!(regularity_report::<f64>(&[]).is_empty());
        let lattice_pts: Vec<Point2<f64>> = (0..16).map(|k| Point2::new((k % 4) as f64, (k / 4) as f64)).collect();
        let lattice = PointSet2D::new(
            lattice_pts,
            Domain::new(4.0, 4.0, Topology::Bounded, Unit::Micrometers).unwrap(),
            "lattice",
        )
        .unwrap();
        let white: PointSet2D<f64> = sample_white(300, 2).unwrap();
        let blue: PointSet2D<f64> = crate::samplers::sample_blue_noise_opt(300, 2, 30).unwrap();
        let rows = regularity_report(&[lattice, blue, white]);
        assert_eq!(rows.len(), 3);
        assert!(rows[0].label.starts_with("white"));
        assert!(rows[1].label.starts_with("bluenoise"));
        assert_eq!(rows[2].label, "lattice");
        assert!(rows[2].outcome.is_err());
    }
}
