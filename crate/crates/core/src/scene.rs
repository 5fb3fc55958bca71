//! Full per-sample evaluation: class, feature and global components.
//!
//! ```text
//! L = gamma * (e_class + e_feature + e_global)
//! ```
//!
//! `e_global` is the MAE over every pixel with valid ground truth and
//! prediction, sky excluded. Without a segmentation (or with nothing labeled)
//! the class and feature components are zero; without an RGB image the
//! feature map is empty and `e_feature` is zero.

use alloc::vec::Vec;

use crate::class_metric::{ClassComponent, ClassLayout, ClassOptions, ClassStatus};
use crate::classical::{self, ClassicalMetrics};
use crate::error::{Error, Result};
use crate::features::{extract_features, FeatureParams};
use crate::raster::{check_dims, DepthMap, FeatureKind, FeatureMap, RgbImage, SegmentationMask, UNLABELED};
use crate::weights::WeightTable;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct MetricConfig {
    pub gamma: f64,
    pub features: FeatureParams,
    pub feature_kind: FeatureKind,
    pub class: ClassOptions,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            features: FeatureParams::default(),
            feature_kind: FeatureKind::Edge,
            class: ClassOptions::default(),
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::InvalidParams("gamma must be positive and finite"));
        }
        self.features.validate()
    }
}

/// Pixels and classes left out of a sample's computation, by reason.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExclusionCounters {
    pub sky_pixels: usize,
    /// Non-sky pixels without valid ground truth.
    pub gt_missing: usize,
    /// Pixels with ground truth whose prediction is invalid.
    pub pred_invalid: usize,
    pub unlabeled_pixels: usize,
    pub classes_without_gt: usize,
    pub unmapped_classes: usize,
    pub feature_pixels: usize,
    pub feature_pixels_without_gt: usize,
    pub ratio_excluded: usize,
    pub log_excluded: usize,
    /// The segmentation was missing or labeled nothing with ground truth.
    pub no_labels: bool,
}

impl ExclusionCounters {
    /// Field-wise sum; `no_labels` counts samples.
    pub fn accumulate(&mut self, other: &ExclusionCounters) -> usize {
        self.sky_pixels += other.sky_pixels;
        self.gt_missing += other.gt_missing;
        self.pred_invalid += other.pred_invalid;
        self.unlabeled_pixels += other.unlabeled_pixels;
        self.classes_without_gt += other.classes_without_gt;
        self.unmapped_classes += other.unmapped_classes;
        self.feature_pixels += other.feature_pixels;
        self.feature_pixels_without_gt += other.feature_pixels_without_gt;
        self.ratio_excluded += other.ratio_excluded;
        self.log_excluded += other.log_excluded;
        usize::from(other.no_labels)
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComponentScores {
    pub e_class: f64,
    pub e_feature: f64,
    pub e_global: f64,
    pub combined: f64,
    pub gamma: f64,
    pub class_detail: Option<ClassComponent>,
    pub feature_detail: Option<ClassComponent>,
    pub classical: ClassicalMetrics,
    pub counters: ExclusionCounters,
    /// Pixels entering `e_global`.
    pub compared_pixels: usize,
}

/// Everything about a scene that does not depend on the prediction.
#[derive(Clone, Debug)]
pub struct PreparedScene<'a> {
    gt: &'a DepthMap,
    config: &'a MetricConfig,
    layout: Option<ClassLayout>,
    features: FeatureMap,
    sky: Vec<bool>,
    base: ExclusionCounters,
}

impl<'a> PreparedScene<'a> {
    pub fn new(
        gt: &'a DepthMap,
        seg: Option<&SegmentationMask>,
        rgb: Option<&RgbImage>,
        config: &'a MetricConfig,
    ) -> Result<Self> {
        let features = match rgb {
            Some(img) => {
                check_dims(gt.dims(), img.dims())?;
                extract_features(img, &config.features, config.feature_kind)?
            }
            None => FeatureMap::empty(gt.width(), gt.height(), config.feature_kind),
        };
        Self::with_features(gt, seg, features, config)
    }

    /// Uses a precomputed feature map instead of extracting one.
    pub fn with_features(
        gt: &'a DepthMap,
        seg: Option<&SegmentationMask>,
        features: FeatureMap,
        config: &'a MetricConfig,
    ) -> Result<Self> {
        config.validate()?;
        check_dims(gt.dims(), features.dims())?;
        if gt.valid_count() == 0 {
            return Err(Error::EmptyGroundTruth);
        }
        let mut base = ExclusionCounters::default();
        let (layout, sky) = match seg {
            Some(seg) => {
                check_dims(gt.dims(), seg.dims())?;
                let sky_ids = seg.ids_named(&config.class.sky_classes);
                let layout = ClassLayout::build(gt, seg, &sky_ids)?;
                base.unlabeled_pixels = seg.labels().iter().filter(|l| **l == UNLABELED).count();
                base.classes_without_gt = layout.classes_without_gt().len();
                (Some(layout), seg.mask_of(&sky_ids))
            }
            None => {
                base.unlabeled_pixels = gt.len();
                (None, alloc::vec![false; gt.len()])
            }
        };
        base.no_labels = layout.as_ref().is_none_or(ClassLayout::is_empty);
        base.sky_pixels = sky.iter().filter(|s| **s).count();
        base.gt_missing = (0..gt.len()).filter(|&i| !sky[i] && !gt.is_valid(i)).count();
        base.feature_pixels = features.count();
        base.feature_pixels_without_gt = (0..gt.len())
            .filter(|&i| features.is_active(i) && !gt.is_valid(i))
            .count();
        Ok(Self {
            gt,
            config,
            layout: layout.filter(|l| !l.is_empty()),
            features,
            sky,
            base,
        })
    }

    pub fn features(&self) -> &FeatureMap {
        &self.features
    }

    pub fn layout(&self) -> Option<&ClassLayout> {
        self.layout.as_ref()
    }

    /// Ground-truth pixels outside the sky.
    pub fn global_domain(&self) -> Vec<bool> {
        (0..self.gt.len())
            .map(|i| !self.sky[i] && self.gt.is_valid(i))
            .collect()
    }

    pub fn score(&self, pred: &DepthMap, weights: &WeightTable) -> Result<ComponentScores> {
        let gt = self.gt;
        check_dims(gt.dims(), pred.dims())?;
        let domain = self.global_domain();
        let classical = ClassicalMetrics::compute(pred, gt, Some(&domain))?;
        let e_global = classical::mae(pred, gt, Some(&domain))?;

        let mut counters = self.base.clone();
        counters.pred_invalid = (0..gt.len()).filter(|&i| domain[i] && !pred.is_valid(i)).count();
        counters.ratio_excluded = classical.excluded_ratio;
        counters.log_excluded = classical.excluded_log;

        let options = &self.config.class;
        let (class_detail, feature_detail) = match &self.layout {
            Some(layout) => (
                Some(layout.score(pred, gt, weights, options, None)?),
                Some(layout.score(pred, gt, weights, options, Some(&self.features))?),
            ),
            None => (None, None),
        };
        if let Some(c) = &class_detail {
            counters.unmapped_classes = c.classes.iter().filter(|s| s.status == ClassStatus::Unmapped).count();
        }
        let e_class = class_detail.as_ref().map_or(0.0, |c| c.error);
        let e_feature = feature_detail.as_ref().map_or(0.0, |c| c.error);
        let gamma = self.config.gamma;
        Ok(ComponentScores {
            e_class,
            e_feature,
            e_global,
            combined: gamma * (e_class + e_feature + e_global),
            gamma,
            class_detail,
            feature_detail,
            compared_pixels: classical.compared,
            classical,
            counters,
        })
    }
}

/// One-shot evaluation of a single prediction.
pub fn evaluate_sample(
    pred: &DepthMap,
    gt: &DepthMap,
    seg: Option<&SegmentationMask>,
    rgb: Option<&RgbImage>,
    weights: &WeightTable,
    config: &MetricConfig,
) -> Result<ComponentScores> {
    check_dims(gt.dims(), pred.dims())?;
    PreparedScene::new(gt, seg, rgb, config)?.score(pred, weights)
}
