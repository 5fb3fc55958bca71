//! Dataset layout on disk.
//!
//! ```text
//! <root>/classes.tsv                       shared class-name table
//! <root>/<scene>/<frame>/gt.png | gt.f32   ground truth (required)
//! <root>/<scene>/<frame>/labels.png        segmentation (optional)
//! <root>/<scene>/<frame>/labels.tsv        per-frame name table (optional)
//! <root>/<scene>/<frame>/rgb.png           image (optional)
//! <root>/<scene>/<frame>/pred/<model>.png | .f32
//! ```
//!
//! A frame directory counts as a sample when it holds a ground-truth file.
//! Samples are ordered by scene then frame name.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use cadepth_core::{ClassId, DepthMap, RgbImage, SegmentationMask};

use crate::error::{Error, Result};
use crate::io;

pub const CLASS_TABLE: &str = "classes.tsv";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRef {
    /// `scene/frame`.
    pub id: String,
    pub dir: PathBuf,
}

/// One evaluation unit held in memory.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneSample {
    pub id: String,
    pub gt: DepthMap,
    pub seg: Option<SegmentationMask>,
    pub rgb: Option<RgbImage>,
    pub preds: BTreeMap<String, DepthMap>,
}

fn sorted_subdirs(dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_dir() {
            if let Some(name) = path.file_name().and_then(|n| n.to_str()) {
                out.push((name.to_string(), path));
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn gt_path(dir: &Path) -> Option<PathBuf> {
    ["gt.f32", "gt.png"].iter().map(|f| dir.join(f)).find(|p| p.is_file())
}

pub fn pred_path(dir: &Path, model: &str) -> Option<PathBuf> {
    ["f32", "png"]
        .iter()
        .map(|ext| dir.join("pred").join(format!("{model}.{ext}")))
        .find(|p| p.is_file())
}

pub fn discover(root: &Path) -> Result<Vec<SampleRef>> {
    let mut samples = Vec::new();
    for (scene, scene_dir) in sorted_subdirs(root)? {
        for (frame, frame_dir) in sorted_subdirs(&scene_dir)? {
            if gt_path(&frame_dir).is_some() {
                samples.push(SampleRef {
                    id: format!("{scene}/{frame}"),
                    dir: frame_dir,
                });
            }
        }
    }
    Ok(samples)
}

/// The root-level class table, if present.
pub fn root_names(root: &Path) -> Result<Option<BTreeMap<ClassId, String>>> {
    let path = root.join(CLASS_TABLE);
    if path.is_file() {
        io::read_name_table(&path).map(Some)
    } else {
        Ok(None)
    }
}

/// Ground truth, segmentation and image of a sample; predictions are loaded
/// separately with [`load_prediction`].
pub fn load_scene(
    sample: &SampleRef,
    shared_names: Option<&BTreeMap<ClassId, String>>,
) -> Result<(DepthMap, Option<SegmentationMask>, Option<RgbImage>)> {
    let dir = &sample.dir;
    let gt_file = gt_path(dir).ok_or_else(|| Error::format(dir, "no gt.png or gt.f32"))?;
    let gt = io::read_depth(&gt_file)?;

    let labels = dir.join("labels.png");
    let seg = if labels.is_file() {
        let local = dir.join("labels.tsv");
        let names = if local.is_file() {
            io::read_name_table(&local)?
        } else {
            shared_names
                .cloned()
                .ok_or_else(|| Error::format(&labels, "no labels.tsv or root classes.tsv"))?
        };
        Some(io::read_labels_png(&labels, &names)?)
    } else {
        None
    };

    let rgb_file = dir.join("rgb.png");
    let rgb = if rgb_file.is_file() {
        Some(io::read_rgb(&rgb_file)?)
    } else {
        None
    };
    Ok((gt, seg, rgb))
}

pub fn load_prediction(sample: &SampleRef, model: &str) -> Result<DepthMap> {
    let path = pred_path(&sample.dir, model)
        .ok_or_else(|| Error::format(sample.dir.join("pred"), format!("no prediction for model `{model}`")))?;
    io::read_depth(&path)
}

pub fn load_sample(
    sample: &SampleRef,
    shared_names: Option<&BTreeMap<ClassId, String>>,
    models: &[String],
) -> Result<SceneSample> {
    let (gt, seg, rgb) = load_scene(sample, shared_names)?;
    let mut preds = BTreeMap::new();
    for m in models {
        preds.insert(m.clone(), load_prediction(sample, m)?);
    }
    Ok(SceneSample {
        id: sample.id.clone(),
        gt,
        seg,
        rgb,
        preds,
    })
}

/// Writes a sample in the on-disk layout under `root`, with class names in a
/// per-frame `labels.tsv`. Ground truth and predictions use `.f32`.
pub fn write_sample(root: &Path, sample: &SceneSample) -> Result<SampleRef> {
    let dir = root.join(&sample.id);
    let pred_dir = dir.join("pred");
    fs::create_dir_all(&pred_dir).map_err(|e| Error::io(&pred_dir, e))?;
    io::write_depth_f32(&dir.join("gt.f32"), &sample.gt)?;
    if let Some(seg) = &sample.seg {
        io::write_labels_png(&dir.join("labels.png"), seg)?;
        io::write_name_table(&dir.join("labels.tsv"), seg.id_to_name())?;
    }
    if let Some(rgb) = &sample.rgb {
        io::write_rgb(&dir.join("rgb.png"), rgb)?;
    }
    for (model, pred) in &sample.preds {
        io::write_depth_f32(&pred_dir.join(format!("{model}.f32")), pred)?;
    }
    Ok(SampleRef {
        id: sample.id.clone(),
        dir,
    })
}
