//! Run configuration, read from TOML and overridable from the command line.

use std::fs;
use std::path::{Path, PathBuf};

use cadepth_core::{
    builtin_gidas_table, ClassOptions, DensifyMethod, FeatureKind, FeatureParams, MetricConfig, WeightTable,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights_file::read_weights;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    /// Every image counts once.
    #[default]
    PerImageMean,
    /// Images count by their number of compared pixels.
    PixelPooled,
}

impl Aggregation {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "per-image-mean" => Some(Aggregation::PerImageMean),
            "pixel-pooled" => Some(Aggregation::PixelPooled),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroundTruthFill {
    None,
    Nearest,
    #[default]
    Linear,
}

impl GroundTruthFill {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(GroundTruthFill::None),
            "nearest" => Some(GroundTruthFill::Nearest),
            "linear" => Some(GroundTruthFill::Linear),
            _ => None,
        }
    }

    pub fn method(self) -> Option<DensifyMethod> {
        match self {
            GroundTruthFill::None => None,
            GroundTruthFill::Nearest => Some(DensifyMethod::Nearest),
            GroundTruthFill::Linear => Some(DensifyMethod::Linear),
        }
    }
}

/// Models whose output is only defined up to scale and shift.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AffineConfig {
    pub models: Vec<String>,
    /// Sample ids (`scene/frame`) used for the fit. Empty means the first
    /// sample of the dataset.
    pub frames: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub root: PathBuf,
    pub models: Vec<String>,
    /// Weight file; the built-in GIDAS table when absent.
    pub weights: Option<PathBuf>,
    pub gamma: f64,
    pub aggregation: Aggregation,
    pub densify: GroundTruthFill,
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    pub feature_kind: FeatureKind,
    pub focus: Option<Vec<String>>,
    pub renormalize_per_image: bool,
    pub sky_classes: Vec<String>,
    pub features: FeatureParams,
    pub affine: AffineConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            root: PathBuf::from("."),
            models: Vec::new(),
            weights: None,
            gamma: 1.0,
            aggregation: Aggregation::default(),
            densify: GroundTruthFill::default(),
            out: None,
            workers: 0,
            feature_kind: FeatureKind::Edge,
            focus: None,
            renormalize_per_image: false,
            sky_classes: ClassOptions::default().sky_classes,
            features: FeatureParams::default(),
            affine: AffineConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| Error::format(origin, e.to_string()))?;
        // relative paths in a config file are relative to the file
        if let Some(dir) = origin.parent() {
            if cfg.root.is_relative() {
                cfg.root = dir.join(&cfg.root);
            }
            if let Some(w) = cfg.weights.as_mut().filter(|w| w.is_relative()) {
                *w = dir.join(&*w);
            }
            if let Some(o) = cfg.out.as_mut().filter(|o| o.is_relative()) {
                *o = dir.join(&*o);
            }
        }
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::Config("no models given".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for m in &self.models {
            if m.is_empty() || m.contains(['/', '\\']) || !seen.insert(m) {
                return Err(Error::Config(format!("bad or duplicate model name `{m}`")));
            }
        }
        for m in &self.affine.models {
            if !self.models.contains(m) {
                return Err(Error::Config(format!("affine model `{m}` is not evaluated")));
            }
        }
        if !self.root.is_dir() {
            return Err(Error::Config(format!(
                "dataset root {} is not a directory",
                self.root.display()
            )));
        }
        if let Some(w) = &self.weights {
            if !w.is_file() {
                return Err(Error::Config(format!("weight file {} does not exist", w.display())));
            }
        }
        self.metric_config().validate()?;
        Ok(())
    }

    pub fn metric_config(&self) -> MetricConfig {
        MetricConfig {
            gamma: self.gamma,
            features: self.features.clone(),
            feature_kind: self.feature_kind,
            class: ClassOptions {
                sky_classes: self.sky_classes.clone(),
                focus: self.focus.clone(),
                renormalize_per_image: self.renormalize_per_image,
            },
        }
    }

    pub fn weight_table(&self) -> Result<WeightTable> {
        match &self.weights {
            Some(path) => read_weights(path),
            None => Ok(builtin_gidas_table()),
        }
    }
}
