//! Stochastic 2-D point-set generation and the spatial statistics used to
//! compare synthetic samplers with digitized retinal cone mosaics.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common double-precision instantiation.

pub mod analysis;
pub mod error;
pub mod format;
pub mod geometry;
pub mod ingest;
pub mod samplers;
pub mod scalar;

pub use error::{Error, Result};
pub use geometry::{
    distance, max_min_distance, nearest_neighbor_distances, Domain, NeighborIndex, Point2, PointSet2D, Topology, Unit,
};
pub use scalar::Scalar;

pub type Point = geometry::Point2<f64>;
pub type PointSet = geometry::PointSet2D<f64>;
pub type PointSetF32 = geometry::PointSet2D<f32>;
pub type UnitDomain = geometry::Domain<f64>;
pub type NnStats = analysis::NnStats<f64>;
pub type PcfCurve = analysis::PcfCurve<f64>;
pub type PcfParams = analysis::PcfParams<f64>;
pub type RadialSpectrum = analysis::RadialSpectrum<f64>;
pub type MosaicRecord = ingest::MosaicRecord<f64>;
