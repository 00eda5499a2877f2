//! Measurement suite: nearest-neighbor regularity, local density, the
//! smoothed pair correlation function with its l-infinity distance, and the
//! radially averaged periodogram.

mod density;
mod nn;
mod pcf;
mod spectrum;

pub use density::{disk_rectangle_area, local_density};
pub use nn::{nn_stats, regularity_index, regularity_report, sort_rows, Histogram, NnStats, RegularityRow, RowOutcome};
pub use pcf::{pcf, pcf_distance, PcfCurve, PcfMode, PcfParams, SAME_DISTRIBUTION_THRESHOLD};
pub use spectrum::{radial_spectrum, RadialSpectrum};

/// Minimum points for nearest-neighbor moments and PCF estimation.
pub const MIN_ANALYSIS_POINTS: usize = 10;
