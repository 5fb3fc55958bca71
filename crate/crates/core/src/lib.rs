//! Class-aware evaluation of metric monocular depth predictions.
//!
//! The crate scores a predicted depth raster against ground truth with three
//! components: a class-weighted error, the same error restricted to edge and
//! corner features of the RGB input, and the plain global MAE. Class weights
//! combine a per-image distance term with a per-use-case safety weight. The
//! classical depth metrics (RMSE, AbsRel, SILog, ...) are provided alongside
//! for comparison.
//!
//! Everything here is pure computation over in-memory rasters and only needs
//! `alloc`. Densification of sparse ground truth sits behind the default
//! `densify` feature, whose triangulation dependency needs `std` on some
//! targets. File formats, dataset traversal and reporting live in the
//! `cadepth` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod affine;
pub mod analysis;
pub mod class_metric;
pub mod classical;
mod error;
pub mod features;
mod math;
pub mod preprocess;
pub mod raster;
pub mod scene;
pub mod validate;
pub mod weights;

pub use affine::{apply_affine, fit_scale_shift, fit_scale_shift_many, AffineApplied, AffineFit};
pub use analysis::{class_share, frames_per_class, ClassFrames, DatasetCatalogEntry};
pub use class_metric::{
    class_component, intra_class_weights, ClassComponent, ClassLayout, ClassOptions, ClassSceneStats, ClassScore,
    ClassStatus, SuperClassScore,
};
pub use classical::ClassicalMetrics;
pub use error::{Error, Result};
pub use features::{extract_corners, extract_edges, extract_features, feature_component, FeatureParams};
#[cfg(feature = "densify")]
pub use preprocess::densify;
pub use preprocess::{mask_sky, DensifyMethod};
pub use raster::{ClassId, DepthMap, FeatureKind, FeatureMap, RgbImage, SegmentationMask, UNLABELED};
pub use scene::{evaluate_sample, ComponentScores, ExclusionCounters, MetricConfig, PreparedScene};
pub use validate::{validate_pair, ValidatedTriple};
pub use weights::{builtin_gidas_table, SuperClass, UnmappedPolicy, WeightTable};
