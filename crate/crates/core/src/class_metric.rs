//! Class-based error component.
//!
//! Each class present in the segmentation gets a distance weight from the
//! ground truth alone:
//!
//! ```text
//! d_class = d_scene_max - d_class_min
//! w_dist  = (d_class - min D) / (max D - min D)
//! ```
//!
//! where `D` holds the `d_class` of every class in the image. Classes are
//! grouped into safety super-classes; the distance-weighted MAEs of a group
//! are summed and multiplied by the group's table weight, and the component
//! is the sum over groups. When `max D == min D` (a single class, or all
//! classes equally close) every class gets `w_dist = 1`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::raster::{check_dims, ClassId, DepthMap, FeatureMap, SegmentationMask, UNLABELED};
use crate::validate::ValidatedTriple;
use crate::weights::{Resolution, WeightTable, UNMAPPED_SUPER_CLASS};

/// Per-image distance statistics of one class.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassSceneStats {
    pub class_name: String,
    /// Minimum valid ground-truth depth of the class.
    pub d_class_min: f64,
    /// `d_scene_max - d_class_min`.
    pub d_class: f64,
    pub w_dist: f64,
    /// Class pixels with valid ground truth.
    pub pixel_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ClassOptions {
    /// Class names excluded from every computation (matched ignoring case).
    pub sky_classes: Vec<String>,
    /// Evaluate only these super-classes, with their weights rescaled to sum
    /// to one.
    pub focus: Option<Vec<String>>,
    /// Rescale super-class weights over the super-classes present in each
    /// image.
    pub renormalize_per_image: bool,
}

impl Default for ClassOptions {
    fn default() -> Self {
        Self {
            sky_classes: vec!["sky".to_string()],
            focus: None,
            renormalize_per_image: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ClassStatus {
    Scored,
    /// The class is in the mask but none of its pixels has ground truth.
    NoGroundTruth,
    /// Ground truth exists but no pixel survived the prediction mask or the
    /// feature intersection.
    NoComparablePixels,
    /// Dropped by the `ignore` unmapped policy.
    Unmapped,
    OutOfFocus,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassScore {
    pub class_name: String,
    pub super_class: Option<String>,
    pub w_dist: f64,
    pub mae: Option<f64>,
    /// `w_dist * mae`, zero when the class was not scored.
    pub weighted_error: f64,
    /// Pixels that entered the MAE.
    pub pixel_count: usize,
    pub status: ClassStatus,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuperClassScore {
    pub name: String,
    /// Weight actually applied, after any focus or per-image rescaling.
    pub w_class: f64,
    /// Sum of `w_dist * mae` over member classes.
    pub intra_weighted_error: f64,
    /// `w_class * intra_weighted_error`.
    pub contribution: f64,
    /// Unweighted MAE pooled over all member pixels.
    pub raw_mae: Option<f64>,
    pub pixel_count: usize,
    pub classes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassComponent {
    pub error: f64,
    pub super_classes: Vec<SuperClassScore>,
    pub classes: Vec<ClassScore>,
}

/// Ground-truth-only part of the class computation, reusable across every
/// prediction of the same scene.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassLayout {
    scene_max: f64,
    stats: BTreeMap<String, ClassSceneStats>,
    pixels: BTreeMap<String, Vec<usize>>,
    no_gt: Vec<String>,
}

impl ClassLayout {
    /// Groups labeled pixels by class name, skipping `excluded` ids.
    ///
    /// Ids sharing a name are merged. The scene maximum covers every valid,
    /// non-excluded pixel including unlabeled ones.
    pub fn build(gt: &DepthMap, seg: &SegmentationMask, excluded: &BTreeSet<ClassId>) -> Result<Self> {
        check_dims(gt.dims(), seg.dims())?;
        let mut scene_max = f64::NEG_INFINITY;
        let mut by_id: BTreeMap<ClassId, (Vec<usize>, f64, bool)> = BTreeMap::new();
        for (i, &label) in seg.labels().iter().enumerate() {
            if excluded.contains(&label) {
                continue;
            }
            let valid = gt.is_valid(i);
            if valid {
                scene_max = scene_max.max(gt.value(i));
            }
            if label == UNLABELED {
                continue;
            }
            let entry = by_id.entry(label).or_insert_with(|| (Vec::new(), f64::INFINITY, false));
            entry.2 = true;
            if valid {
                entry.0.push(i);
                entry.1 = entry.1.min(gt.value(i));
            }
        }

        let mut pixels: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut mins: BTreeMap<String, f64> = BTreeMap::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for (id, (px, min, _)) in by_id {
            let name = seg.name(id).ok_or(Error::UnknownLabel(id))?.to_string();
            seen.insert(name.clone());
            if px.is_empty() {
                continue;
            }
            let m = mins.entry(name.clone()).or_insert(f64::INFINITY);
            *m = m.min(min);
            pixels.entry(name).or_default().extend(px);
        }
        for px in pixels.values_mut() {
            px.sort_unstable();
        }
        let no_gt = seen.into_iter().filter(|n| !pixels.contains_key(n)).collect();

        let d_class: BTreeMap<&String, f64> = mins.iter().map(|(n, m)| (n, scene_max - m)).collect();
        let lo = d_class.values().copied().fold(f64::INFINITY, f64::min);
        let hi = d_class.values().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        let stats = mins
            .iter()
            .map(|(name, &min)| {
                let d = d_class[name];
                let w_dist = if span > 0.0 { (d - lo) / span } else { 1.0 };
                let s = ClassSceneStats {
                    class_name: name.clone(),
                    d_class_min: min,
                    d_class: d,
                    w_dist,
                    pixel_count: pixels[name].len(),
                };
                (name.clone(), s)
            })
            .collect();

        Ok(Self {
            scene_max,
            stats,
            pixels,
            no_gt,
        })
    }

    /// Maximum valid ground-truth depth of the scene; `-inf` if none.
    pub fn scene_max(&self) -> f64 {
        self.scene_max
    }

    pub fn stats(&self) -> &BTreeMap<String, ClassSceneStats> {
        &self.stats
    }

    /// Classes present in the mask without any valid ground-truth pixel.
    pub fn classes_without_gt(&self) -> &[String] {
        &self.no_gt
    }

    /// Pixel indices of a class that carry valid ground truth.
    pub fn pixels(&self, class_name: &str) -> Option<&[usize]> {
        self.pixels.get(class_name).map(Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }

    /// Weighted class error of `pred`, optionally restricted to the active
    /// pixels of `features`.
    pub fn score(
        &self,
        pred: &DepthMap,
        gt: &DepthMap,
        weights: &WeightTable,
        options: &ClassOptions,
        features: Option<&FeatureMap>,
    ) -> Result<ClassComponent> {
        check_dims(gt.dims(), pred.dims())?;
        if let Some(f) = features {
            check_dims(gt.dims(), f.dims())?;
        }
        if self.stats.is_empty() {
            return Err(Error::NoLabeledPixels);
        }
        let focus = match &options.focus {
            Some(list) => {
                let mut set = BTreeSet::new();
                for name in list {
                    if weights.super_class(name).is_none() {
                        return Err(Error::UnknownSuperClass(name.clone()));
                    }
                    set.insert(name.as_str());
                }
                Some(set)
            }
            None => None,
        };

        #[derive(Default)]
        struct Group {
            intra: f64,
            abs_sum: f64,
            count: usize,
            classes: Vec<String>,
        }
        let mut groups: BTreeMap<String, Group> = BTreeMap::new();
        let mut classes = Vec::new();

        for (name, px) in &self.pixels {
            let w_dist = self.stats[name].w_dist;
            let super_name = match weights.resolve(name)? {
                Resolution::Mapped(s) => s.name.as_str(),
                Resolution::ZeroWeight => UNMAPPED_SUPER_CLASS,
                Resolution::Ignored => {
                    classes.push(ClassScore {
                        class_name: name.clone(),
                        super_class: None,
                        w_dist,
                        mae: None,
                        weighted_error: 0.0,
                        pixel_count: 0,
                        status: ClassStatus::Unmapped,
                    });
                    continue;
                }
            };
            if focus.as_ref().is_some_and(|f| !f.contains(super_name)) {
                classes.push(ClassScore {
                    class_name: name.clone(),
                    super_class: Some(super_name.to_string()),
                    w_dist,
                    mae: None,
                    weighted_error: 0.0,
                    pixel_count: 0,
                    status: ClassStatus::OutOfFocus,
                });
                continue;
            }

            let mut sum = 0.0;
            let mut n = 0usize;
            for &i in px {
                if pred.is_valid(i) && features.is_none_or(|f| f.is_active(i)) {
                    sum += (pred.value(i) - gt.value(i)).abs();
                    n += 1;
                }
            }
            let group = groups.entry(super_name.to_string()).or_default();
            group.classes.push(name.clone());
            let (mae, weighted, status) = if n == 0 {
                (None, 0.0, ClassStatus::NoComparablePixels)
            } else {
                let mae = sum / n as f64;
                (Some(mae), w_dist * mae, ClassStatus::Scored)
            };
            group.intra += weighted;
            group.abs_sum += sum;
            group.count += n;
            classes.push(ClassScore {
                class_name: name.clone(),
                super_class: Some(super_name.to_string()),
                w_dist,
                mae,
                weighted_error: weighted,
                pixel_count: n,
                status,
            });
        }

        for name in &self.no_gt {
            let super_class = match weights.resolve(name) {
                Ok(Resolution::Mapped(s)) => Some(s.name.clone()),
                Ok(Resolution::ZeroWeight) => Some(UNMAPPED_SUPER_CLASS.to_string()),
                _ => None,
            };
            classes.push(ClassScore {
                class_name: name.clone(),
                super_class,
                w_dist: 0.0,
                mae: None,
                weighted_error: 0.0,
                pixel_count: 0,
                status: ClassStatus::NoGroundTruth,
            });
        }
        classes.sort_by(|a, b| a.class_name.cmp(&b.class_name));

        // Table order, with the zero-weight bucket last.
        let mut ordered: Vec<(String, f64, Group)> = Vec::new();
        for sc in weights.super_classes() {
            if let Some(g) = groups.remove(&sc.name) {
                ordered.push((sc.name.clone(), sc.weight, g));
            }
        }
        if let Some(g) = groups.remove(UNMAPPED_SUPER_CLASS) {
            ordered.push((UNMAPPED_SUPER_CLASS.to_string(), 0.0, g));
        }

        if let Some(focus) = &focus {
            let total: f64 = focus.iter().filter_map(|n| weights.weight(n)).sum();
            for (_, w, _) in &mut ordered {
                *w = if total > 0.0 {
                    *w / total
                } else {
                    1.0 / focus.len() as f64
                };
            }
        }
        if options.renormalize_per_image {
            let total: f64 = ordered.iter().map(|(_, w, _)| *w).sum();
            if total > 0.0 {
                for (_, w, _) in &mut ordered {
                    *w /= total;
                }
            }
        }

        let mut error = 0.0;
        let super_classes = ordered
            .into_iter()
            .map(|(name, w_class, g)| {
                let contribution = w_class * g.intra;
                error += contribution;
                SuperClassScore {
                    name,
                    w_class,
                    intra_weighted_error: g.intra,
                    contribution,
                    raw_mae: (g.count > 0).then(|| g.abs_sum / g.count as f64),
                    pixel_count: g.count,
                    classes: g.classes,
                }
            })
            .collect();

        Ok(ClassComponent {
            error,
            super_classes,
            classes,
        })
    }
}

/// Distance statistics of every class with valid ground truth, sky excluded.
pub fn intra_class_weights(gt: &DepthMap, seg: &SegmentationMask) -> Result<BTreeMap<String, ClassSceneStats>> {
    let sky = seg.ids_named(&ClassOptions::default().sky_classes);
    let layout = ClassLayout::build(gt, seg, &sky)?;
    if layout.is_empty() {
        return Err(Error::NoLabeledPixels);
    }
    Ok(layout.stats)
}

/// Class-based component of a validated triple.
pub fn class_component(
    triple: &ValidatedTriple<'_>,
    weights: &WeightTable,
    options: &ClassOptions,
) -> Result<ClassComponent> {
    let seg = triple.seg().ok_or(Error::NoLabeledPixels)?;
    let sky = seg.ids_named(&options.sky_classes);
    let layout = ClassLayout::build(triple.gt(), seg, &sky)?;
    layout.score(triple.pred(), triple.gt(), weights, options, None)
}
