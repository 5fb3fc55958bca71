//! Edge and corner feature maps of the RGB input and the feature-restricted
//! class component.
//!
//! Edges: luma, Sobel gradients, non-maximum thinning, hysteresis, border
//! following, then dilation by a disk of `edge_thickness`. Corners: Harris
//! response, 3x3 peak selection above a fraction of the strongest response,
//! then a disk of `corner_radius` around each peak.

pub mod contour;
mod corners;
mod edges;
pub(crate) mod gradient;
pub mod morphology;

use alloc::vec::Vec;

pub use corners::{corner_seeds, harris_response};

use crate::class_metric::{ClassComponent, ClassLayout, ClassOptions};
use crate::error::{Error, Result};
use crate::raster::{FeatureKind, FeatureMap, RgbImage};
use crate::validate::ValidatedTriple;
use crate::weights::WeightTable;

/// Tuning of both extractors. Every field is echoed into reports.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct FeatureParams {
    /// Hysteresis thresholds on the Sobel gradient magnitude.
    pub edge_low: f64,
    pub edge_high: f64,
    /// Radius of the disk stamped around each contour pixel.
    pub edge_thickness: u32,
    /// Harris sensitivity.
    pub corner_k: f64,
    /// Peaks must reach this fraction of the strongest response.
    pub corner_rel_threshold: f64,
    /// Radius of the disk stamped around each corner.
    pub corner_radius: u32,
    /// Gaussian window size of the structure tensor (odd, at least 3).
    pub window: usize,
}

impl Default for FeatureParams {
    fn default() -> Self {
        Self {
            edge_low: 50.0,
            edge_high: 150.0,
            edge_thickness: 2,
            corner_k: 0.04,
            corner_rel_threshold: 0.01,
            corner_radius: 3,
            window: 5,
        }
    }
}

impl FeatureParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.edge_low.is_finite() && self.edge_high.is_finite()) || self.edge_low > self.edge_high {
            return Err(Error::InvalidParams("edge_low must not exceed edge_high"));
        }
        if self.window < 3 || self.window.is_multiple_of(2) {
            return Err(Error::InvalidParams("window must be odd and at least 3"));
        }
        if !(self.corner_rel_threshold > 0.0 && self.corner_rel_threshold <= 1.0) {
            return Err(Error::InvalidParams("corner_rel_threshold must lie in (0, 1]"));
        }
        if !self.corner_k.is_finite() {
            return Err(Error::InvalidParams("corner_k must be finite"));
        }
        Ok(())
    }

    fn check_image(&self, img: &RgbImage) -> Result<()> {
        self.validate()?;
        if img.width() < self.window || img.height() < self.window {
            return Err(Error::DegenerateImage {
                width: img.width(),
                height: img.height(),
                window: self.window,
            });
        }
        Ok(())
    }
}

/// Dilated contour pixels of the edge map.
pub fn extract_edges(img: &RgbImage, params: &FeatureParams) -> Result<FeatureMap> {
    let (w, h) = img.dims();
    let contours = edge_contours(img, params)?;
    let active = morphology::dilate_disk(&contours, w, h, params.edge_thickness);
    FeatureMap::new(w, h, active, FeatureKind::Edge)
}

/// Undilated contour pixels, i.e. [`extract_edges`] with zero thickness.
pub fn edge_contours(img: &RgbImage, params: &FeatureParams) -> Result<Vec<bool>> {
    params.check_image(img)?;
    let (w, h) = img.dims();
    let binary = edges::edge_pixels(&img.luma(), w, h, params.edge_low, params.edge_high);
    Ok(contour::contour_mask(&binary, w, h))
}

/// Harris corners stamped with a disk of `corner_radius`.
pub fn extract_corners(img: &RgbImage, params: &FeatureParams) -> Result<FeatureMap> {
    let (w, h) = img.dims();
    let seeds = corner_points(img, params)?;
    let mut active = alloc::vec![false; w * h];
    for (x, y) in seeds {
        active[y * w + x] = true;
    }
    let active = morphology::dilate_disk(&active, w, h, params.corner_radius);
    FeatureMap::new(w, h, active, FeatureKind::Corner)
}

/// Corner seed positions `(x, y)` before the disk is stamped.
pub fn corner_points(img: &RgbImage, params: &FeatureParams) -> Result<Vec<(usize, usize)>> {
    params.check_image(img)?;
    let (w, h) = img.dims();
    let response = harris_response(&img.luma(), w, h, params.window, params.corner_k);
    Ok(corner_seeds(&response, w, h, params.corner_rel_threshold))
}

pub fn extract_features(img: &RgbImage, params: &FeatureParams, kind: FeatureKind) -> Result<FeatureMap> {
    match kind {
        FeatureKind::Edge => extract_edges(img, params),
        FeatureKind::Corner => extract_corners(img, params),
        FeatureKind::Union => extract_edges(img, params)?.union(&extract_corners(img, params)?),
    }
}

/// Class component restricted to the active pixels of `features`.
///
/// Distance weights still come from the whole class, so an all-true map
/// reproduces the class component exactly.
pub fn feature_component(
    triple: &ValidatedTriple<'_>,
    features: &FeatureMap,
    weights: &WeightTable,
    options: &ClassOptions,
) -> Result<ClassComponent> {
    let seg = triple.seg().ok_or(Error::NoLabeledPixels)?;
    let sky = seg.ids_named(&options.sky_classes);
    let layout = ClassLayout::build(triple.gt(), seg, &sky)?;
    layout.score(triple.pred(), triple.gt(), weights, options, Some(features))
}
