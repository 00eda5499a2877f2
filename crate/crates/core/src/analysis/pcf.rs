use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::MIN_ANALYSIS_POINTS;
use crate::error::{Error, Result};
use crate::geometry::{max_min_distance, NeighborIndex, PointSet2D};
use crate::scalar::Scalar;

/// Curves closer than this in l-infinity are taken to be the same
/// distribution.
pub const SAME_DISTRIBUTION_THRESHOLD: f64 = 0.1;

/// Kernel support, in bandwidths, beyond which contributions are dropped.
const KERNEL_CUTOFF: f64 = 8.0;

/// Points handled per parallel work item; partial sums merge in order.
const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcfMode {
    /// The raw estimator with a unit-mass Gaussian kernel.
    PaperRaw,
    /// Raw estimate divided by `2 pi d_hex^2`, flat at one for Poisson.
    Calibrated,
}

/// Estimation window and smoothing; radii are in units of `d_hex(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcfParams<T> {
    pub r_min: T,
    pub r_max: T,
    pub bins: usize,
    pub sigma_smooth: T,
    pub mode: PcfMode,
}

impl<T: Scalar> Default for PcfParams<T> {
    fn default() -> Self {
        Self {
            r_min: T::zero(),
            r_max: T::lit(4.0),
            bins: 200,
            sigma_smooth: T::lit(0.1),
            mode: PcfMode::Calibrated,
        }
    }
}

impl<T: Scalar> PcfParams<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min >= T::zero() && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 <= r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.bins < 16 {
            return Err(Error::invalid(format!("need at least 16 bins, got {}", self.bins)));
        }
        if !(self.sigma_smooth > T::zero() && self.sigma_smooth.is_finite()) {
            return Err(Error::invalid("sigma_smooth must be positive"));
        }
        Ok(())
    }

    pub fn with_mode(mut self, mode: PcfMode) -> Self {
        self.mode = mode;
        self
    }

    /// Bin centers.
    pub fn radii(&self) -> Vec<T> {
        let width = (self.r_max - self.r_min) / T::from_usize_lossy(self.bins);
        (0..self.bins)
            .map(|b| self.r_min + width * (T::from_usize_lossy(b) + T::lit(0.5)))
            .collect()
    }
}

/// Sampled pair correlation function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcfCurve<T> {
    /// Bin centers in units of `d_hex(n)`.
    pub radii: Vec<T>,
    pub values: Vec<T>,
    /// Bins with `r < sigma_smooth / 2`, where the `1/r` factor dominates.
    pub unreliable: Vec<bool>,
    pub params: PcfParams<T>,
    pub n: usize,
}

/// Gaussian-smoothed pair correlation function over ordered pairs, with
/// distances expressed in units of `d_hex(n)`.
pub fn pcf<T: Scalar>(ps: &PointSet2D<T>, params: &PcfParams<T>) -> Result<PcfCurve<T>> {
    params.validate()?;
    ps.require(MIN_ANALYSIS_POINTS)?;
    let n = ps.len();
    let d_hex: f64 = max_min_distance(n)?;
    let radii = params.radii();
    let centers: Vec<f64> = radii.iter().map(|r| r.as_f64()).collect();
    let r_min = params.r_min.as_f64();
    let width = (params.r_max.as_f64() - r_min) / params.bins as f64;
    let sigma = params.sigma_smooth.as_f64();
    let support = KERNEL_CUTOFF * sigma;
    let reach = T::lit((params.r_max.as_f64() + support) * d_hex);

    let index = NeighborIndex::new(ps);
    let points = ps.points();
    let partials: Vec<Vec<f64>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let mut acc = vec![0.0; params.bins];
            let start = chunk * CHUNK;
            for (i, &p) in points.iter().enumerate().skip(start).take(CHUNK) {
                index.for_each_within(p, reach, |j, d| {
                    if j == i {
                        return;
                    }
                    let rho = d.as_f64() / d_hex;
                    let lo = ((rho - support - r_min) / width - 0.5).ceil().max(0.0) as usize;
                    let hi = ((rho + support - r_min) / width - 0.5).floor();
                    if hi < 0.0 {
                        return;
                    }
                    let hi = (hi as usize).min(params.bins - 1);
                    for b in lo..=hi {
                        let t = (centers[b] - rho) / sigma;
                        acc[b] += (-t * t).exp();
                    }
                });
            }
            acc
        })
        .collect();

    let mut sums = vec![0.0; params.bins];
    for part in &partials {
        for (s, v) in sums.iter_mut().zip(part) {
            *s += v;
        }
    }

    let kernel_norm = sigma * std::f64::consts::PI.sqrt();
    let calibration = match params.mode {
        PcfMode::PaperRaw => 1.0,
        PcfMode::Calibrated => std::f64::consts::TAU * d_hex * d_hex,
    };
    let nn = (n as f64) * (n as f64);
    let values = sums
        .iter()
        .zip(&centers)
        .map(|(s, r)| T::lit(s / kernel_norm / (nn * r) / calibration))
        .collect();
    let unreliable = centers.iter().map(|&r| r < sigma / 2.0).collect();
    Ok(PcfCurve {
        radii,
        values,
        unreliable,
        params: *params,
        n,
    })
}

/// Largest absolute bin-wise difference between two curves on one grid.
///
/// Bins flagged unreliable in exactly one of the curves are skipped.
pub fn pcf_distance<T: Scalar>(a: &PcfCurve<T>, b: &PcfCurve<T>) -> Result<T> {
    if a.params != b.params || a.radii != b.radii || a.values.len() != b.values.len() {
        return Err(Error::IncompatibleCurves(
            "curves must share radius grid and estimation parameters".into(),
        ));
    }
    let mut worst = T::zero();
    for k in 0..a.values.len() {
        if a.unreliable[k] != b.unreliable[k] {
            continue;
        }
        worst = worst.max((a.values[k] - b.values[k]).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Domain, Point2};
    use crate::samplers::{sample_fast_poisson_disk, sample_white};

    fn flat(value: f64) -> PcfCurve<f64> {
        let params = PcfParams::default();
        PcfCurve {
            radii: params.radii(),
            values: vec![value; params.bins],
            unreliable: params.radii().iter().map(|&r| r < 0.05).collect(),
            params,
            n: 100,
        }
    }

    #[test]
    fn default_grid() {
        let p = PcfParams::<f64>::default();
        let r = p.radii();
        assert_eq!(r.len(), 200);
        assert!((r[0] - 0.01).abs() < 1e-15 && (r[199] - 3.99).abs() < 1e-12);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn params_validation() {
        let p = PcfParams::<f64>::default();
        assert!(PcfParams { bins: 15, ..p }.validate().is_err());
        assert!(PcfParams { r_min: 4.0, ..p }.validate().is_err());
        assert!(PcfParams { sigma_smooth: 0.0, ..p }.validate().is_err());
        assert!(PcfParams { r_min: -1.0, ..p }.validate().is_err());
    }

    #[test]
    fn distance_examples() {
        let a = flat(1.0);
        assert_eq!(pcf_distance(&a, &a).unwrap(), 0.0);
        let b = flat(1.2);
        assert!((pcf_distance(&a, &b).unwrap() - 0.2).abs() < 1e-12);
        let mut c = flat(1.0);
        c.params.bins = 100;
        assert!(matches!(pcf_distance(&a, &c), Err(Error::IncompatibleCurves(_))));
    }

    #[test]
    fn mismatched_flags_are_skipped() {
        let a = flat(1.0);
        let mut b = flat(1.0);
        b.values[10] = 5.0;
        b.unreliable[10] = !a.unreliable[10];
        assert_eq!(pcf_distance(&a, &b).unwrap(), 0.0);
    }

    // direct O(n^2 bins) evaluation of the estimator
    fn literal_pcf(ps: &PointSet2D<f64>, params: &PcfParams<f64>) -> Vec<f64> {
        let n = ps.len();
        let d_hex: f64 = max_min_distance(n).unwrap();
        let s = params.sigma_smooth;
        let pts = ps.points();
        params
            .radii()
            .iter()
            .map(|&r| {
                let mut sum = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            let t = r - ps.domain().metric(pts[i], pts[j]) / d_hex;
                            sum += (-t * t / (s * s)).exp() / (s * std::f64::consts::PI.sqrt());
                        }
                    }
                }
                let raw = sum / ((n * n) as f64 * r);
                match params.mode {
                    PcfMode::PaperRaw => raw,
                    PcfMode::Calibrated => raw / (std::f64::consts::TAU * d_hex * d_hex),
                }
            })
            .collect()
    }

    #[test]
    fn matches_literal_double_sum() {
        let ps: PointSet2D<f64> = sample_white(150, 8).unwrap();
        for mode in [PcfMode::PaperRaw, PcfMode::Calibrated] {
            let params = PcfParams::default().with_mode(mode);
            let curve = pcf(&ps, &params).unwrap();
            let want = literal_pcf(&ps, &params);
            for (g, w) in curve.values.iter().zip(&want) {
                assert!((g - w).abs() <= 1e-10 * w.abs().max(1.0), "{g} vs {w}");
            }
        }
    }

    #[test]
    fn hard_core_gap() {
        let n = 1024;
        let m = 0.75 * max_min_distance::<f64>(n).unwrap();
        let g = sample_fast_poisson_disk(n, m, 12).unwrap();
        // narrow kernel so leakage stays below the exclusion radius
        let params = PcfParams {
            sigma_smooth: 0.02,
            bins: 400,
            ..PcfParams::default()
        };
        let curve = pcf(&g.points, &params).unwrap();
        let peak = curve.values.iter().copied().fold(0.0, f64::max);
        let cut = 0.9 * 0.75;
        for (r, v) in curve.radii.iter().zip(&curve.values) {
            if *r < cut {
                assert!(*v < 0.05 * peak, "g({r}) = {v}, peak {peak}");
            }
        }
    }

    #[test]
    fn deterministic_and_order_free() {
        let ps: PointSet2D<f64> = sample_white(700, 31).unwrap();
        let params = PcfParams::default();
        let a = pcf(&ps, &params).unwrap();
        let b = pcf(&ps, &params).unwrap();
        assert_eq!(a, b);
        let mut rev = ps.points().to_vec();
        rev.reverse();
        let swapped = PointSet2D::new(rev, Domain::unit_torus(), "rev").unwrap();
        let c = pcf(&swapped, &params).unwrap();
        for (x, y) in a.values.iter().zip(&c.values) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn small_sets_rejected() {
        let pts: Vec<Point2<f64>> = (0..9).map(|k| Point2::new(0.1 * k as f64, 0.5)).collect();
        let ps = PointSet2D::new(pts, Domain::unit_torus(), "few").unwrap();
        assert!(matches!(
            pcf(&ps, &PcfParams::default()),
            Err(Error::InsufficientPoints { .. })
        ));
    }
}
