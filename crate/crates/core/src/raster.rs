//! Row-major rasters shared by every evaluation stage.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Segmentation class identifier.
pub type ClassId = u16;

/// Label of pixels that carry no class. They take part in the global
/// component only.
pub const UNLABELED: ClassId = ClassId::MAX;

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::BufferLength { expected, found })
    }
}

pub(crate) fn check_dims(expected: (usize, usize), found: (usize, usize)) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Metric depth in meters with a per-pixel validity mask.
///
/// Values at invalid pixels are normalized to `0.0` so that two maps with the
/// same valid content compare equal.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DepthMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
    valid: Vec<bool>,
}

impl DepthMap {
    pub fn new(width: usize, height: usize, mut values: Vec<f64>, valid: Vec<bool>) -> Result<Self> {
        check_len(width * height, values.len())?;
        check_len(width * height, valid.len())?;
        for (index, (value, &ok)) in values.iter_mut().zip(&valid).enumerate() {
            if ok {
                if !value.is_finite() || *value < 0.0 {
                    return Err(Error::InvalidDepth { index, value: *value });
                }
            } else {
                *value = 0.0;
            }
        }
        Ok(Self {
            width,
            height,
            values,
            valid,
        })
    }

    /// A fully valid map.
    pub fn dense(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        let valid = vec![true; values.len()];
        Self::new(width, height, values, valid)
    }

    /// Builds a map from raw values where `0`, negatives and non-finite
    /// values mark missing measurements.
    pub fn from_sparse(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        let valid = values.iter().map(|v| v.is_finite() && *v > 0.0).collect();
        Self::new(width, height, values, valid)
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::dense(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn valid(&self) -> &[bool] {
        &self.valid
    }

    pub fn is_valid(&self, index: usize) -> bool {
        self.valid[index]
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Depth at `(x, y)` if the pixel is valid.
    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        if x >= self.width || y >= self.height {
            return None;
        }
        let i = y * self.width + x;
        self.valid[i].then(|| self.values[i])
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Copy of the map with every pixel in `drop` marked invalid.
    pub fn without(&self, drop: &[bool]) -> Result<Self> {
        check_len(self.len(), drop.len())?;
        let mut out = self.clone();
        for ((value, valid), &d) in out.values.iter_mut().zip(&mut out.valid).zip(drop) {
            if d {
                *value = 0.0;
                *valid = false;
            }
        }
        Ok(out)
    }

    pub fn into_parts(self) -> (usize, usize, Vec<f64>, Vec<bool>) {
        (self.width, self.height, self.values, self.valid)
    }
}

/// Per-pixel class labels plus the id-to-name table.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SegmentationMask {
    width: usize,
    height: usize,
    labels: Vec<ClassId>,
    id_to_name: BTreeMap<ClassId, String>,
}

impl SegmentationMask {
    pub fn new(
        width: usize,
        height: usize,
        labels: Vec<ClassId>,
        id_to_name: BTreeMap<ClassId, String>,
    ) -> Result<Self> {
        check_len(width * height, labels.len())?;
        if let Some(&bad) = labels.iter().find(|&&l| l != UNLABELED && !id_to_name.contains_key(&l)) {
            return Err(Error::UnknownLabel(bad));
        }
        Ok(Self {
            width,
            height,
            labels,
            id_to_name,
        })
    }

    /// A mask where every pixel is [`UNLABELED`].
    pub fn unlabeled(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            labels: vec![UNLABELED; width * height],
            id_to_name: BTreeMap::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn labels(&self) -> &[ClassId] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> ClassId {
        self.labels[index]
    }

    pub fn id_to_name(&self) -> &BTreeMap<ClassId, String> {
        &self.id_to_name
    }

    pub fn name(&self, id: ClassId) -> Option<&str> {
        self.id_to_name.get(&id).map(String::as_str)
    }

    /// Ids whose class name matches any of `names`, ignoring ASCII case.
    pub fn ids_named<S: AsRef<str>>(&self, names: &[S]) -> BTreeSet<ClassId> {
        self.id_to_name
            .iter()
            .filter(|(_, n)| names.iter().any(|s| s.as_ref().eq_ignore_ascii_case(n)))
            .map(|(id, _)| *id)
            .collect()
    }

    /// Pixel mask of the labels in `ids`.
    pub fn mask_of(&self, ids: &BTreeSet<ClassId>) -> Vec<bool> {
        self.labels.iter().map(|l| ids.contains(l)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FeatureKind {
    #[default]
    Edge,
    Corner,
    Union,
}

/// Binary raster of (dilated) feature pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureMap {
    width: usize,
    height: usize,
    active: Vec<bool>,
    kind: FeatureKind,
}

impl FeatureMap {
    pub fn new(width: usize, height: usize, active: Vec<bool>, kind: FeatureKind) -> Result<Self> {
        check_len(width * height, active.len())?;
        Ok(Self {
            width,
            height,
            active,
            kind,
        })
    }

    pub fn empty(width: usize, height: usize, kind: FeatureKind) -> Self {
        Self {
            width,
            height,
            active: vec![false; width * height],
            kind,
        }
    }

    pub fn full(width: usize, height: usize, kind: FeatureKind) -> Self {
        Self {
            width,
            height,
            active: vec![true; width * height],
            kind,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    pub fn is_active(&self, index: usize) -> bool {
        self.active[index]
    }

    pub fn count(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }

    pub fn is_subset_of(&self, other: &FeatureMap) -> bool {
        self.dims() == other.dims() && self.active.iter().zip(&other.active).all(|(a, b)| !a || *b)
    }

    /// Pixel-wise OR of two maps.
    pub fn union(&self, other: &FeatureMap) -> Result<FeatureMap> {
        check_dims(self.dims(), other.dims())?;
        let active = self.active.iter().zip(&other.active).map(|(a, b)| *a || *b).collect();
        Ok(FeatureMap {
            width: self.width,
            height: self.height,
            active,
            kind: FeatureKind::Union,
        })
    }
}

/// 8-bit RGB image stored interleaved, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_len(3 * width * height, data.len())?;
        Ok(Self { width, height, data })
    }

    /// Gray image replicated into all three channels.
    pub fn from_gray(width: usize, height: usize, gray: &[u8]) -> Result<Self> {
        check_len(width * height, gray.len())?;
        let data = gray.iter().flat_map(|&g| [g, g, g]).collect();
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    /// Luma `0.299 R + 0.587 G + 0.114 B` per pixel.
    pub fn luma(&self) -> Vec<f64> {
        self.data
            .chunks_exact(3)
            .map(|p| 0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64)
            .collect()
    }
}
