//! Shape and validity checks for a (prediction, ground truth, segmentation)
//! triple.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::raster::{check_dims, DepthMap, SegmentationMask};

/// A triple whose rasters share one shape and whose ground truth has at least
/// one valid pixel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidatedTriple<'a> {
    pred: &'a DepthMap,
    gt: &'a DepthMap,
    seg: Option<&'a SegmentationMask>,
}

pub fn validate_pair<'a>(
    pred: &'a DepthMap,
    gt: &'a DepthMap,
    seg: Option<&'a SegmentationMask>,
) -> Result<ValidatedTriple<'a>> {
    check_dims(gt.dims(), pred.dims())?;
    if let Some(seg) = seg {
        check_dims(gt.dims(), seg.dims())?;
    }
    if gt.valid().iter().all(|v| !v) {
        return Err(Error::EmptyGroundTruth);
    }
    Ok(ValidatedTriple { pred, gt, seg })
}

impl<'a> ValidatedTriple<'a> {
    pub fn pred(&self) -> &'a DepthMap {
        self.pred
    }

    pub fn gt(&self) -> &'a DepthMap {
        self.gt
    }

    pub fn seg(&self) -> Option<&'a SegmentationMask> {
        self.seg
    }

    /// Pixels valid in both prediction and ground truth.
    pub fn domain(&self) -> Vec<bool> {
        comparison_domain(self.pred, self.gt)
    }

    pub fn revalidate(self) -> Result<Self> {
        validate_pair(self.pred, self.gt, self.seg)
    }
}

/// Pixel-wise AND of the two validity masks. Callers guarantee equal shapes.
pub fn comparison_domain(a: &DepthMap, b: &DepthMap) -> Vec<bool> {
    a.valid().iter().zip(b.valid()).map(|(x, y)| *x && *y).collect()
}
