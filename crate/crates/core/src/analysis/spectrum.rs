use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::PointSet2D;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSpectrum<T> {
    /// Annulus centers in cycles per domain width.
    pub freqs: Vec<T>,
    pub power: Vec<T>,
    /// Lattice frequencies averaged into each annulus.
    pub counts: Vec<usize>,
}

/// Radially averaged periodogram `|sum_j exp(-2 pi i f.x_j)|^2 / n` over
/// the integer lattice `[-max_freq, max_freq]^2` minus the origin.
///
/// Annulus `k` (for `k = 1..=max_freq`) collects `|f|` in `[k - 1/2, k + 1/2)`.
pub fn radial_spectrum<T: Scalar>(ps: &PointSet2D<T>, max_freq: usize) -> Result<RadialSpectrum<T>> {
    if max_freq < 2 {
        return Err(Error::invalid(format!("max_freq must be at least 2, got {max_freq}")));
    }
    ps.require(1)?;
    let d = ps.domain();
    if d.width() != T::one() || d.height() != T::one() {
        return Err(Error::invalid("periodogram needs a unit-square domain"));
    }

    let n = ps.len();
    let span = 2 * max_freq + 1;
    let fmax = max_freq as isize;
    // per-point phase factors exp(-2 pi i k x) for k in -max_freq..=max_freq
    let phases = |coord: fn(&crate::geometry::Point2<T>) -> T| -> Vec<(f64, f64)> {
        let mut table = Vec::with_capacity(n * span);
        for p in ps.points() {
            let v = coord(p).as_f64();
            for k in -fmax..=fmax {
                let (s, c) = (-std::f64::consts::TAU * k as f64 * v).sin_cos();
                table.push((c, s));
            }
        }
        table
    };
    let ex = phases(|p| p.x);
    let ey = phases(|p| p.y);

    // half-plane fy > 0, plus fy == 0 with fx > 0; the mirror has equal power
    let rows: Vec<Vec<(usize, f64)>> = (0..=max_freq)
        .into_par_iter()
        .map(|fy| {
            let mut re = vec![0.0; span];
            let mut im = vec![0.0; span];
            for j in 0..n {
                let (yc, ys) = ey[j * span + (fy + max_freq)];
                let xs = &ex[j * span..(j + 1) * span];
                for (k, &(xc, xsn)) in xs.iter().enumerate() {
                    re[k] += xc * yc - xsn * ys;
                    im[k] += xc * ys + xsn * yc;
                }
            }
            let mut out = Vec::new();
            for (k, (r, i)) in re.iter().zip(&im).enumerate() {
                let fx = k as isize - fmax;
                if fy == 0 && fx <= 0 {
                    continue;
                }
                let radius = ((fx * fx + (fy * fy) as isize) as f64).sqrt();
                let annulus = (radius + 0.5).floor() as usize;
                if annulus >= 1 && annulus <= max_freq {
                    out.push((annulus, (r * r + i * i) / n as f64));
                }
            }
            out
        })
        .collect();

    let mut sums = vec![0.0; max_freq];
    let mut counts = vec![0usize; max_freq];
    for row in rows {
        for (annulus, p) in row {
            sums[annulus - 1] += p;
            counts[annulus - 1] += 1;
        }
    }
    let freqs = (1..=max_freq).map(T::from_usize_lossy).collect();
    let power = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| T::lit(if c > 0 { s / c as f64 } else { 0.0 }))
        .collect();
    Ok(RadialSpectrum { freqs, power, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Domain, Point2};
    use crate::samplers::sample_white;

    #[test]
    fn single_point_has_unit_power() {
        let ps = PointSet2D::new(vec![Point2::new(0.3, 0.71)], Domain::unit_torus(), "one").unwrap();
        let s = radial_spectrum(&ps, 8).unwrap();
        for p in s.power {
            assert!((p - 1.0_f64).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_direct_transform() {
        let ps: PointSet2D<f64> = sample_white(40, 6).unwrap();
        let max_freq = 6;
        let s = radial_spectrum(&ps, max_freq).unwrap();
        let mut sums = vec![0.0; max_freq];
        let mut counts = vec![0usize; max_freq];
        let f = max_freq as i64;
        for fy in -f..=f {
            for fx in -f..=f {
                if fx == 0 && fy == 0 {
                    continue;
                }
                let (mut re, mut im) = (0.0, 0.0);
                for p in ps.points() {
                    let arg = -std::f64::consts::TAU * (fx as f64 * p.x + fy as f64 * p.y);
                    re += arg.cos();
                    im += arg.sin();
                }
                let r = ((fx * fx + fy * fy) as f64).sqrt();
                let k = (r + 0.5).floor() as usize;
                if k >= 1 && k <= max_freq {
                    sums[k - 1] += (re * re + im * im) / 40.0;
                    counts[k - 1] += 1;
                }
            }
        }
        for k in 0..max_freq {
            assert_eq!(s.counts[k] * 2, counts[k]);
            let want = sums[k] / counts[k] as f64;
            assert!((s.power[k] - want).abs() < 1e-9 * want.max(1.0));
        }
    }

    #[test]
    fn argument_checks() {
        let ps: PointSet2D<f64> = sample_white(20, 1).unwrap();
        assert!(radial_spectrum(&ps, 1).is_err());
        assert_eq!(radial_spectrum(&ps, 2).unwrap().freqs, vec![1.0, 2.0]);
    }
}
